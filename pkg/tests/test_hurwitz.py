import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cycleforge import hurwitz as hz
from cycleforge.permcore import Perm, deck_automorphisms, product, symmetric_group, transposition
from cycleforge.verify import brute_force_toy_classes


def T(*names, degree=4):
    return hz.named_tuple(list(names), degree)


@pytest.fixture(scope="module")
def h2_table():
    return hz.enumerate_classes(hz.BranchProfile.hyperelliptic_pair(2))


@pytest.fixture(scope="module")
def h2_report(h2_table):
    return hz.orbit_partition(h2_table)


def brute_force_classes(profile, connected_only=True):
    """Literal enumeration: every ordering of every member of every class, then dedupe."""
    elems = symmetric_group(profile.degree)
    by_type = {}
    for p in elems:
        by_type.setdefault(p.cycle_type(), []).append(p)
    seen = set()
    for order in set(itertools.permutations(profile.types)):
        for combo in itertools.product(*(by_type[c] for c in order)):
            if not product(combo).is_identity():
                continue
            t = hz.HurwitzTuple(combo)
            if connected_only and not t.is_connected():
                continue
            seen.add(hz.canonical_form_bruteforce(t))
    return seen


# --------------------------------------------------------------------------- tuples and moves


def test_tuple_requires_product_identity():
    with pytest.raises(ValueError):
        T("t12", "t13")
    t = T("t12", "t12")
    assert t.n == 2 and t.degree == 4
    assert t.to_json() == ["(1 2)", "(1 2)"]


def test_forward_move_formula():
    t = T("t12", "t13", "t13", "t12")
    moved = hz.hurwitz_move(t, 1)
    assert moved.entries[:2] == (transposition(2, 3, 4), transposition(1, 2, 4))
    assert hz.hurwitz_move(moved, 1, "inverse") == t


def test_move_index_errors():
    t = T("t12", "t12")
    with pytest.raises(IndexError):
        hz.hurwitz_move(t, 0)
    with pytest.raises(IndexError):
        hz.hurwitz_move(t, 2)
    with pytest.raises(ValueError):
        hz.hurwitz_move(t, 1, "sideways")


def test_empty_replay_is_identity():
    t = hz.type_iii_start(8)
    assert hz.replay_sequence(t, []) == t


@pytest.mark.parametrize("n", [8, 10])
def test_displayed_composites(n):
    assert hz.replay_sequence(hz.type_iii_start(n), hz.type_iii_moves(n)) == hz.type_iii_expected(n)
    assert hz.replay_sequence(hz.type_ii_start(n), hz.type_ii_moves(n)) == hz.type_ii_expected(n)


def test_type_iii_expected_display():
    assert hz.type_iii_expected(8) == T("t13", "t13", "t13", "t13", "t24", "t24", "v1", "v1")


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_random_word_then_reverse(data):
    n = 8
    base = hz.type_iii_start(n)
    word = data.draw(
        st.lists(st.tuples(st.integers(1, n - 1), st.sampled_from(["forward", "inverse"])), max_size=12)
    )
    out = hz.replay_sequence(base, word)
    flip = {"forward": "inverse", "inverse": "forward"}
    back = hz.replay_sequence(out, [(i, flip[d]) for i, d in reversed(word)])
    assert back == base
    assert out.cycle_types() == base.cycle_types()


# --------------------------------------------------------------------------- profiles and genus


def test_profile_validation_and_json():
    p = hz.BranchProfile.hyperelliptic_pair(2)
    assert p.n == 8 and p.genus() == 2
    assert hz.BranchProfile.from_json(p.to_json()) == p
    assert p.to_json() == {"degree": 4, "cycle_types": [[[2, 2], 2], [[2, 1, 1], 6]]}
    with pytest.raises(ValueError):
        hz.BranchProfile.from_counts(4, {(1,): 3})
    with pytest.raises(ValueError):
        hz.BranchProfile.from_counts(3, {(2,): 1})
    with pytest.raises(ValueError):
        hz.BranchProfile.hyperelliptic_pair(0)


def test_genus_examples():
    assert hz.genus_of(hz.type_iii_start(8)) == 2
    assert hz.genus_of(hz.HurwitzTuple((Perm.from_one_line([2, 1]),) * 2)) == 0
    t3 = [transposition(1, 2, 3), transposition(1, 2, 3), transposition(2, 3, 3), transposition(2, 3, 3)]
    assert hz.genus_of(hz.HurwitzTuple(tuple(t3))) == 0
    with pytest.raises(ValueError):
        hz.genus_of(T("t12", "t12"))


# --------------------------------------------------------------------------- enumeration


def test_degree_two_single_class():
    p = hz.BranchProfile.from_counts(2, {(2,): 2})
    assert len(hz.enumerate_classes(p)) == 1


def test_toy_profile_against_brute_force():
    p = hz.BranchProfile.from_counts(3, {(2,): 4})
    table = hz.enumerate_classes(p)
    assert len(table) == 4
    assert brute_force_toy_classes() == (24, 4)
    assert {c.representative for c in table} == brute_force_classes(p)
    report = hz.orbit_partition(table)
    assert len(report.orbits) == 1 and report.orbits[0].genus == 0


@pytest.mark.parametrize(
    "profile",
    [
        hz.BranchProfile.from_counts(3, {(2,): 6}),
        hz.BranchProfile.from_counts(3, {(2,): 2, (3,): 2}),
        hz.BranchProfile.hyperelliptic_pair(1),
    ],
    ids=["deg3-six-simple", "deg3-mixed", "genus1-pair"],
)
def test_enumeration_matches_literal_enumeration(profile):
    table = hz.enumerate_classes(profile)
    assert {c.representative for c in table} == brute_force_classes(profile)
    assert len(table) == hz.burnside_class_count(profile)
    for c in table:
        assert c.stabilizer_order == deck_automorphisms(c.representative.entries).order


def test_disconnected_classes_included_on_request():
    p = hz.BranchProfile.hyperelliptic_pair(1)
    full = hz.enumerate_classes(p, connected_only=False)
    assert {c.representative for c in full} == brute_force_classes(p, connected_only=False)
    assert len(full) == hz.burnside_class_count(p, connected_only=False)
    assert len(full) > len(hz.enumerate_classes(p))


def test_h2_count_matches_burnside(h2_table):
    assert len(h2_table) == 41216
    assert hz.burnside_class_count(h2_table.profile) == 41216


def test_table_order_is_sorted(h2_table):
    assert np.all(np.diff(h2_table.keys) > 0)
    assert h2_table[0].representative == hz.canonical_form(h2_table[0].representative)


def test_cap_raises_resource_limit():
    with pytest.raises(hz.ResourceLimit, match="cap"):
        hz.enumerate_classes(hz.BranchProfile.hyperelliptic_pair(2), cap=1000)
    assert hz.estimate_tuples(hz.BranchProfile.hyperelliptic_pair(4)) > hz.DEFAULT_CAP


# --------------------------------------------------------------------------- canonical forms



@settings(max_examples=150, deadline=None)
@given(st.integers(0, 41215), st.integers(0, 23))
def test_canonical_form_invariant_and_idempotent(h2_table, k, g):
    rep = h2_table.tuple_at(k)
    moved = rep.conjugated(symmetric_group(4)[g])
    assert hz.canonical_form(moved) == rep
    assert hz.canonical_form(rep) == rep
    assert hz.canonical_form_bruteforce(moved) == rep


def test_canonical_invariance_exhaustive_on_h2(h2_table):
    from cycleforge.verify import property_canonical_invariance

    checked, failures = property_canonical_invariance(h2_table)
    assert checked == 41216 and failures == 0


def test_moves_preserve_invariants_exhaustively_on_h2(h2_table):
    t = hz._tables(4)
    digits = h2_table.digits(np.arange(len(h2_table)))
    prod0 = np.zeros(len(digits), dtype=np.int32)
    for i in range(7):
        for direction in ("forward", "inverse"):
            moved = hz._move_digits(t, digits, i, direction)
            prod = prod0
            for j in range(8):
                prod = t.mult[prod, moved[:, j]]
            assert np.all(prod == 0)
            assert np.all(np.sort(t.class_id[moved], axis=1) == np.sort(t.class_id[digits], axis=1))
            assert np.all(hz._connected_mask(t, moved))
            keys, stab = hz._canonical(t, moved)
            idx = h2_table.index_of(keys)
            assert np.all(h2_table.stabilizers[idx] == stab)
            assert np.all(stab == h2_table.stabilizers)


# --------------------------------------------------------------------------- orbits


def test_h2_two_components(h2_report):
    assert h2_report.class_count == 41216
    assert sorted(o.size for o in h2_report.orbits) == [896, 40320]
    assert sorted(o.deck_order for o in h2_report.orbits) == [1, 2]
    assert all(o.genus == 2 for o in h2_report.orbits)
    doc = h2_report.to_json()
    assert set(doc) == {"profile", "class_count", "orbits"}
    assert set(doc["orbits"][0]) == {"size", "representative", "deck_order", "genus"}


def test_type_iii_tuple_lies_in_order_two_orbit(h2_table, h2_report):
    labels = hz.orbit_labels(h2_table)
    rep = hz.canonical_form(hz.type_iii_start(8))
    key, _ = hz._canonical(hz._tables(4), np.array([[hz._tables(4).index[p] for p in rep.entries]]))
    orbit = h2_report.orbits[labels[h2_table.index_of(key)[0]]]
    assert orbit.deck_order == 2


def test_forward_moves_alone_give_same_partition(h2_table):
    both = hz.orbit_labels(h2_table)
    fwd = hz.orbit_labels(h2_table, directions=("forward",))
    assert np.array_equal(both, fwd)


def test_partition_independent_of_input_order():
    table = hz.enumerate_classes(hz.BranchProfile.from_counts(3, {(2,): 6}))
    classes = list(table)
    random.Random(5).shuffle(classes)
    a = hz.orbit_partition(table).to_json()
    b = hz.orbit_partition(classes).to_json()
    assert a == b


def test_checkpoint_resume_matches_cold_run(h2_table, tmp_path):
    ck = str(tmp_path / "orbits.npz")
    with pytest.raises(hz.SearchInterrupted):
        hz.orbit_labels(h2_table, ck, checkpoint_every=5000, stop_after=20000)
    assert (tmp_path / "orbits.npz").exists()
    resumed = hz.orbit_labels(h2_table, ck, checkpoint_every=5000)
    assert np.array_equal(resumed, hz.orbit_labels(h2_table))
    assert not (tmp_path / "orbits.npz").exists()


def test_foreign_checkpoint_is_ignored(h2_table, tmp_path):
    toy = hz.enumerate_classes(hz.BranchProfile.from_counts(3, {(2,): 6}))
    ck = str(tmp_path / "orbits.npz")
    with pytest.raises(hz.SearchInterrupted):
        hz.orbit_labels(toy, ck, checkpoint_every=1, stop_after=1)
    labels = hz.orbit_labels(h2_table, ck)
    assert labels.max() == 1


def test_sextic_outline_runs():
    table = hz.enumerate_classes(hz.BranchProfile.sextic_outline(4))
    report = hz.orbit_partition(table)
    assert report.class_count == len(table) == hz.burnside_class_count(table.profile)
    assert len(report.orbits) >= 1


@pytest.mark.slow
def test_h3_two_components_with_resume(tmp_path):
    table = hz.enumerate_classes(hz.BranchProfile.hyperelliptic_pair(3))
    assert len(table) == 2364480 == hz.burnside_class_count(table.profile)
    ck = str(tmp_path / "h3.npz")
    with pytest.raises(hz.SearchInterrupted):
        hz.orbit_labels(table, ck, checkpoint_every=200000, stop_after=600000)
    report = hz.orbit_partition(table, checkpoint=ck)
    assert sorted((o.size, o.deck_order) for o in report.orbits) == [(5760, 2), (2358720, 1)]
    assert report.to_json() == hz.orbit_partition(table).to_json()


# --------------------------------------------------------------------------- degeneration


@pytest.mark.parametrize("n", [8, 10, 12])
def test_bad_fibre_splits(n):
    comps = hz.degenerate_merge(hz.bad_fibre_tuple(n), 1)
    assert len(comps) == 2
    big, small = sorted(comps, key=lambda c: -c.genus)
    assert (big.genus, len(big.points), big.branch_positions) == ((n - 4) // 2, 2, tuple(range(1, n - 1)))
    assert (small.genus, len(small.points), small.branch_positions) == (0, 2, (n - 3, n - 2))
    assert {big.points, small.points} == {(1, 2), (3, 4)}


def test_degree_two_merge_drops_genus():
    s = Perm.from_one_line([2, 1])
    t = hz.HurwitzTuple((s,) * 4)
    assert hz.genus_of(t) == 1
    comps = hz.degenerate_merge(t, 2)
    assert len(comps) == 1 and comps[0].genus == 0


def test_three_cycle_merge_keeps_genus(h2_table):
    rng = random.Random(11)
    checked = 0
    for k in rng.sample(range(len(h2_table)), 400):
        t = h2_table.tuple_at(k)
        for i in range(1, t.n):
            a, b = t.entries[i - 1], t.entries[i]
            if a.cycle_type().parts == (2, 1, 1) == b.cycle_type().parts and product([a, b]).cycle_type().parts == (3, 1):
                comps = hz.degenerate_merge(t, i)
                assert len(comps) == 1 and comps[0].genus == hz.genus_of(t)
                checked += 1
    assert checked > 50


def test_merge_index_error():
    with pytest.raises(IndexError):
        hz.degenerate_merge(hz.bad_fibre_tuple(8), 8)
