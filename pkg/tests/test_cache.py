import json
import os
import stat

import pytest

from cycleforge.cache import ResultCache, cache_get, cache_key, cache_put


def test_put_then_get(tmp_path):
    c = ResultCache(tmp_path)
    key = c.key("hurwitz", {"genus": 2})
    payload = {"orbits": [1, 2], "label": "ü"}
    cache_put(c, key, payload)
    assert cache_get(c, key) == payload


def test_key_is_canonical():
    assert cache_key("m", {"a": 1, "b": 2}) == cache_key("m", {"b": 2, "a": 1})
    assert cache_key("m", {"a": 1}) != cache_key("n", {"a": 1})


def test_version_bump_invalidates(tmp_path):
    old = ResultCache(tmp_path, version="0.0.1")
    old.put(old.key("m", {"x": 1}), {"v": 1})
    new = ResultCache(tmp_path, version="0.0.2")
    assert new.get(new.key("m", {"x": 1})) is None


def test_corrupted_entry_is_recomputed(tmp_path):
    c = ResultCache(tmp_path)
    calls = []

    def compute():
        calls.append(1)
        return {"v": 42}

    assert c.cached("m", {"x": 1}, compute) == {"v": 42}
    path = c.path(c.key("m", {"x": 1}))
    entry = json.loads(path.read_text())
    entry["payload"]["v"] = 43
    path.write_text(json.dumps(entry))
    assert c.cached("m", {"x": 1}, compute) == {"v": 42}
    assert len(calls) == 2
    path.write_text("{not json")
    assert c.get(c.key("m", {"x": 1})) is None
    assert not path.exists()


def test_env_var_sets_directory(tmp_path, monkeypatch):
    monkeypatch.setenv("CYCLEFORGE_CACHE", str(tmp_path / "here"))
    c = ResultCache()
    assert c.directory == tmp_path / "here"


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_unwritable_directory_warns(tmp_path, caplog):
    d = tmp_path / "ro"
    d.mkdir()
    d.chmod(stat.S_IRUSR | stat.S_IXUSR)
    try:
        c = ResultCache(d)
        assert not c.enabled
        assert "not writable" in caplog.text
        assert c.cached("m", {}, lambda: {"v": 1}) == {"v": 1}
    finally:
        d.chmod(stat.S_IRWXU)


def test_unusable_directory_warns(tmp_path, caplog):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    c = ResultCache(blocker / "sub")
    assert not c.enabled
    assert "not writable" in caplog.text
    assert c.cached("m", {}, lambda: {"v": 1}) == {"v": 1}
