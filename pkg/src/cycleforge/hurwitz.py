"""Monodromy tuples of branched covers of the line, Hurwitz moves and their orbits.

A tuple ``(s_1, ..., s_n)`` of permutations of degree ``d`` with
``s_1 s_2 ... s_n = 1`` describes a degree-``d`` cover branched over ``n``
ordered points.  Simultaneous conjugation relabels the fibre, so covers
correspond to conjugation classes of tuples.  Moving branch points around
each other acts on classes through the Hurwitz moves

    G_i : (..., s_i, s_{i+1}, ...) -> (..., s_i s_{i+1} s_i^-1, s_i, ...)

and the components of the Hurwitz space are the orbits of this action.

For enumeration every permutation of degree ``d`` is replaced by its index
in lexicographic one-line order, so a tuple becomes a base-``d!`` integer
whose numeric order is the lexicographic order of tuples.  The canonical
representative of a class is its lexicographic minimum: its first entry is
the smallest member ``r`` of the conjugacy class of ``s_1``, and the rest is
minimised over conjugation by the centraliser of ``r``.
"""

from __future__ import annotations

import hashlib
import logging
import math
import os
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .permcore import (
    CycleType,
    Perm,
    centralizer,
    compose,
    conjugate,
    deck_automorphisms,
    is_transitive,
    orbits,
    product,
    symmetric_group,
)

log = logging.getLogger(__name__)

DEFAULT_CAP = 10**8
CHECKPOINT_EVERY = 10**6
_CHUNK = 1 << 17


class ResourceLimit(RuntimeError):
    pass


class SearchInterrupted(RuntimeError):
    """Raised by ``orbit_labels(stop_after=...)`` after its checkpoint is written."""


# ---------------------------------------------------------------------------
# tuples and profiles


@dataclass(frozen=True)
class HurwitzTuple:
    entries: tuple[Perm, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("empty tuple")
        d = self.entries[0].degree
        if any(p.degree != d for p in self.entries):
            raise ValueError("entries have different degrees")
        if not product(self.entries).is_identity():
            raise ValueError("product of entries is not the identity")

    @classmethod
    def parse(cls, items: Sequence[str], degree: int) -> HurwitzTuple:
        return cls(tuple(Perm.parse(s, degree) for s in items))

    @property
    def degree(self) -> int:
        return self.entries[0].degree

    @property
    def n(self) -> int:
        return len(self.entries)

    def cycle_types(self) -> Counter:
        return Counter(p.cycle_type() for p in self.entries)

    def is_connected(self) -> bool:
        return is_transitive(self.entries)

    def conjugated(self, g: Perm) -> HurwitzTuple:
        return HurwitzTuple(tuple(conjugate(p, g) for p in self.entries))

    def to_json(self) -> list[str]:
        return [str(p) for p in self.entries]

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.entries)) + ")"


@dataclass(frozen=True)
class BranchProfile:
    """Degree plus the multiset of cycle types of the local monodromies."""

    degree: int
    types: tuple[CycleType, ...]

    def __post_init__(self) -> None:
        if len(self.types) < 2:
            raise ValueError("need at least 2 branch points")
        for t in self.types:
            if t.degree != self.degree:
                raise ValueError(f"cycle type {t} does not have degree {self.degree}")
            if t.parts == (1,) * self.degree:
                raise ValueError("identity cycle type is not a branch point")
        object.__setattr__(self, "types", tuple(sorted(self.types, reverse=True)))

    @property
    def n(self) -> int:
        return len(self.types)

    @classmethod
    def from_counts(cls, degree: int, counts: dict[tuple[int, ...], int]) -> BranchProfile:
        types = []
        for parts, k in counts.items():
            parts = tuple(sorted(parts, reverse=True))
            parts = parts + (1,) * (degree - sum(parts))
            types += [CycleType(parts)] * k
        return cls(degree, tuple(types))

    @classmethod
    def hyperelliptic_pair(cls, genus: int) -> BranchProfile:
        """Degree 4, ``2g+2`` transpositions and two double transpositions."""
        if genus < 1:
            raise ValueError("genus must be >= 1")
        n = 2 * genus + 4
        return cls.from_counts(4, {(2,): n - 2, (2, 2): 2})

    @classmethod
    def sextic_outline(cls, transpositions: int = 4) -> BranchProfile:
        """Degree 6 with ``transpositions`` simple points and two of type (2,2,2)."""
        return cls.from_counts(6, {(2,): transpositions, (2, 2, 2): 2})

    def counts(self) -> list[tuple[CycleType, int]]:
        return sorted(Counter(self.types).items(), reverse=True)

    def genus(self) -> int:
        """Riemann-Hurwitz genus of a connected cover with this profile."""
        ram = sum(self.degree - len(t.parts) for t in self.types)
        two_g = ram - 2 * self.degree + 2
        if two_g < 0 or two_g % 2:
            raise ValueError("profile gives no connected cover")
        return two_g // 2

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "cycle_types": [[list(t.parts), k] for t, k in self.counts()],
        }

    @classmethod
    def from_json(cls, data: dict) -> BranchProfile:
        types = []
        for parts, k in data["cycle_types"]:
            types += [CycleType(tuple(parts))] * int(k)
        return cls(int(data["degree"]), tuple(types))

    def digest(self) -> str:
        text = repr((self.degree, [t.parts for t in self.types]))
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def genus_of(t: HurwitzTuple) -> int:
    """Riemann-Hurwitz: ``2 - 2g = 2d - sum(d - #cycles(s_i))``."""
    if not t.is_connected():
        raise ValueError("genus_of needs a connected tuple; use degenerate_merge for components")
    return _genus(t.degree, t.entries)


def _genus(degree: int, entries: Iterable[Perm]) -> int:
    ram = sum(degree - p.num_cycles() for p in entries)
    two_g = ram - 2 * degree + 2
    assert two_g % 2 == 0 and two_g >= 0
    return two_g // 2


# ---------------------------------------------------------------------------
# moves


def hurwitz_move(t: HurwitzTuple, i: int, direction: str = "forward") -> HurwitzTuple:
    """Apply ``G_i`` (1-based ``i``) or its inverse."""
    if not 1 <= i <= t.n - 1:
        raise IndexError(f"move index {i} outside 1..{t.n - 1}")
    e = list(t.entries)
    a, b = e[i - 1], e[i]
    if direction == "forward":
        e[i - 1], e[i] = conjugate(b, a), a
    elif direction == "inverse":
        e[i - 1], e[i] = b, conjugate(a, b.inverse())
    else:
        raise ValueError(f"direction must be 'forward' or 'inverse', not {direction!r}")
    return HurwitzTuple(tuple(e))


def replay_sequence(t: HurwitzTuple, moves: Iterable[int | tuple[int, str]]) -> HurwitzTuple:
    """Apply moves left to right; a bare int means a forward move."""
    for mv in moves:
        i, direction = (mv, "forward") if isinstance(mv, int) else mv
        t = hurwitz_move(t, i, direction)
    return t


# ---------------------------------------------------------------------------
# degeneration


@dataclass(frozen=True)
class Component:
    points: tuple[int, ...]  # fibre points of the original cover, 1-based
    tuple: HurwitzTuple  # restricted monodromy, relabelled 1..len(points)
    branch_positions: tuple[int, ...]  # 1-based positions in the merged tuple
    genus: int


def degenerate_merge(t: HurwitzTuple, i: int) -> list[Component]:
    """Let branch points ``i`` and ``i+1`` collide and split into components."""
    if not 1 <= i <= t.n - 1:
        raise IndexError(f"merge index {i} outside 1..{t.n - 1}")
    e = list(t.entries)
    merged = compose(e[i - 1], e[i])
    new = e[: i - 1] + ([] if merged.is_identity() else [merged]) + e[i + 1 :]
    if not new:
        return [
            Component((x,), HurwitzTuple((Perm.identity(1),) * 2), (), 0)
            for x in range(1, t.degree + 1)
        ]
    out = []
    for orb in orbits(new):
        pts = tuple(sorted(orb))
        relabel = {p: k for k, p in enumerate(pts)}
        restricted, positions = [], []
        for pos, p in enumerate(new, start=1):
            r = Perm(tuple(relabel[p(x)] for x in pts))
            if not r.is_identity():
                restricted.append(r)
                positions.append(pos)
        if not restricted:
            # unbranched degree-1 piece
            ident = Perm.identity(len(pts))
            comp = Component(pts, HurwitzTuple((ident, ident)), (), 0)
        else:
            ht = HurwitzTuple(tuple(restricted))
            comp = Component(pts, ht, tuple(positions), _genus(len(pts), restricted))
        out.append(comp)
    return out


# ---------------------------------------------------------------------------
# integer tables for the symmetric group


class _Tables:
    def __init__(self, d: int):
        self.d = d
        self.elems = symmetric_group(d)
        self.size = len(self.elems)
        index = {p: k for k, p in enumerate(self.elems)}
        self.index = index
        s = self.size
        self.mult = np.array(
            [[index[compose(a, b)] for b in self.elems] for a in self.elems], dtype=np.int32
        )
        self.inv = np.array([index[a.inverse()] for a in self.elems], dtype=np.int32)
        # conj[g, x] = g x g^-1
        self.conj = np.array(
            [[index[conjugate(x, g)] for x in self.elems] for g in self.elems], dtype=np.int32
        )
        cls_of: dict[CycleType, int] = {}
        self.class_id = np.zeros(s, dtype=np.int32)
        self.class_rep: list[int] = []
        self.class_type: list[CycleType] = []
        for k, p in enumerate(self.elems):
            ct = p.cycle_type()
            if ct not in cls_of:
                cls_of[ct] = len(self.class_rep)
                self.class_rep.append(k)  # first in lex order = minimum
                self.class_type.append(ct)
            self.class_id[k] = cls_of[ct]
        self.type_class = cls_of
        self.members = [np.flatnonzero(self.class_id == c).astype(np.int32) for c in range(len(self.class_rep))]
        self.to_rep = np.zeros(s, dtype=np.int32)
        for x in range(s):
            rep = self.class_rep[self.class_id[x]]
            self.to_rep[x] = int(np.flatnonzero(self.conj[:, x] == rep)[0])
        self.cent = [
            np.array([index[g] for g in centralizer([self.elems[r]])], dtype=np.int32)
            for r in self.class_rep
        ]
        full = (1 << d) - 1
        self.img_mask = np.zeros((s, full + 1), dtype=np.int32)
        for k, p in enumerate(self.elems):
            for m in range(full + 1):
                self.img_mask[k, m] = sum(1 << p.images[j] for j in range(d) if m >> j & 1)


@lru_cache(maxsize=None)
def _tables(d: int) -> _Tables:
    return _Tables(d)


def _check_key_width(t: _Tables, n: int) -> None:
    if n * math.log2(t.size) >= 63:
        raise ResourceLimit(f"tuples of length {n} in degree {t.d} do not fit a 64-bit key")


def _encode(digits: np.ndarray, base: int) -> np.ndarray:
    key = np.zeros(digits.shape[0], dtype=np.int64)
    for j in range(digits.shape[1]):
        key = key * base + digits[:, j]
    return key


def _decode(keys: np.ndarray, n: int, base: int) -> np.ndarray:
    out = np.empty((keys.shape[0], n), dtype=np.int32)
    k = keys.copy()
    for j in range(n - 1, -1, -1):
        out[:, j] = k % base
        k //= base
    return out


def _connected_mask(t: _Tables, digits: np.ndarray) -> np.ndarray:
    full = (1 << t.d) - 1
    mask = np.ones(digits.shape[0], dtype=np.int32)
    for _ in range(t.d - 1):
        for j in range(digits.shape[1]):
            mask |= t.img_mask[digits[:, j], mask]
    return mask == full


def _canonical(t: _Tables, digits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Canonical keys and stabiliser orders for rows of element indices."""
    base = t.size
    g = t.to_rep[digits[:, 0]]
    moved = t.conj[g[:, None], digits]
    cls = t.class_id[moved[:, 0]]
    keys = np.empty(digits.shape[0], dtype=np.int64)
    stab = np.empty(digits.shape[0], dtype=np.int32)
    for c in np.unique(cls):
        rows = np.flatnonzero(cls == c)
        sub = moved[rows]
        cand = np.stack([_encode(t.conj[h][sub], base) for h in t.cent[c]])
        best = cand.min(axis=0)
        keys[rows] = best
        stab[rows] = (cand == best).sum(axis=0)
    return keys, stab


def _move_digits(t: _Tables, digits: np.ndarray, i: int, direction: str) -> np.ndarray:
    """Vectorised ``G_i`` on rows; ``i`` is 0-based here (acts on i, i+1)."""
    out = digits.copy()
    a, b = digits[:, i], digits[:, i + 1]
    if direction == "forward":
        out[:, i] = t.conj[a, b]
        out[:, i + 1] = a
    else:
        out[:, i] = b
        out[:, i + 1] = t.conj[t.inv[b], a]
    return out


# ---------------------------------------------------------------------------
# enumeration


@dataclass(frozen=True)
class TupleClass:
    representative: HurwitzTuple
    stabilizer_order: int


class ClassTable:
    """All classes of a profile as sorted canonical keys plus stabiliser orders.

    Behaves as a read-only sequence of :class:`TupleClass`.
    """

    def __init__(self, profile: BranchProfile, keys: np.ndarray, stabilizers: np.ndarray, connected_only: bool):
        order = np.argsort(keys, kind="stable")
        self.profile = profile
        self.keys = keys[order]
        self.stabilizers = stabilizers[order]
        self.connected_only = connected_only
        if len(self.keys) > 1 and np.any(self.keys[1:] == self.keys[:-1]):
            raise AssertionError("duplicate canonical keys")

    def __len__(self) -> int:
        return len(self.keys)

    def digits(self, idx) -> np.ndarray:
        t = _tables(self.profile.degree)
        return _decode(np.atleast_1d(self.keys[idx]), self.profile.n, t.size)

    def tuple_at(self, k: int) -> HurwitzTuple:
        t = _tables(self.profile.degree)
        row = self.digits(k)[0]
        return HurwitzTuple(tuple(t.elems[x] for x in row))

    def __getitem__(self, k: int) -> TupleClass:
        if not -len(self) <= k < len(self):
            raise IndexError(k)
        return TupleClass(self.tuple_at(k), int(self.stabilizers[k]))

    def __iter__(self) -> Iterator[TupleClass]:
        for k in range(len(self)):
            yield self[k]

    def index_of(self, keys: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.keys, keys)
        idx = np.minimum(idx, len(self.keys) - 1)
        if not np.all(self.keys[idx] == keys):
            raise AssertionError("a move left the class set (profile not closed under moves)")
        return idx

    def digest(self) -> str:
        return hashlib.sha256(self.keys.tobytes()).hexdigest()[:16]


def canonical_form(t: HurwitzTuple) -> HurwitzTuple:
    """Lexicographic minimum over simultaneous conjugation (via the tables)."""
    tab = _tables(t.degree)
    row = np.array([[tab.index[p] for p in t.entries]], dtype=np.int32)
    key, _ = _canonical(tab, row)
    digits = _decode(key, t.n, tab.size)[0]
    return HurwitzTuple(tuple(tab.elems[x] for x in digits))


def canonical_form_bruteforce(t: HurwitzTuple) -> HurwitzTuple:
    """Same minimum by trying every conjugation (slow reference)."""
    best = min(
        tuple(conjugate(p, g).images for p in t.entries) for g in symmetric_group(t.degree)
    )
    return HurwitzTuple(tuple(Perm(x) for x in best))


def _arrangements(class_seq: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Distinct orderings of a multiset, in lexicographic order."""
    items = sorted(class_seq)
    counts = Counter(items)
    keys = sorted(counts)
    n = len(items)

    def rec(prefix: list[int]) -> Iterator[tuple[int, ...]]:
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                prefix.append(k)
                yield from rec(prefix)
                prefix.pop()
                counts[k] += 1

    yield from rec([])


def estimate_tuples(profile: BranchProfile) -> int:
    """Expected number of product-one tuples: raw tuple count over ``d!``."""
    t = _tables(profile.degree)
    raw = math.factorial(profile.n)
    for ct, k in profile.counts():
        raw //= math.factorial(k)
        raw *= len(t.members[t.type_class[ct]]) ** k
    return raw // t.size


def _products(t: _Tables, start: np.ndarray, classes: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """All digit rows over ``classes`` and their running products times ``start``."""
    digits = np.zeros((len(start), 0), dtype=np.int32)
    prod = start.astype(np.int32)
    for c in classes:
        mem = t.members[c]
        prod = t.mult[prod[:, None], mem[None, :]].ravel()
        digits = np.concatenate(
            [np.repeat(digits, len(mem), axis=0), np.tile(mem, len(digits))[:, None]], axis=1
        )
    return digits, prod


def _enumerate_arrangement(t: _Tables, arr: tuple[int, ...], connected_only: bool):
    n = len(arr)
    r = t.class_rep[arr[0]]
    h = (n + 1) // 2
    pre_digits, pre_prod = _products(t, np.array([r]), arr[1:h])
    # the identity is index 0 in lexicographic order
    suf_digits, suf_prod = _products(t, np.array([0]), arr[h:])
    order = np.argsort(suf_prod, kind="stable")
    suf_digits, suf_prod = suf_digits[order], suf_prod[order]
    need = t.inv[pre_prod]
    lo = np.searchsorted(suf_prod, need, side="left")
    hi = np.searchsorted(suf_prod, need, side="right")
    keys_out, stab_out = [], []
    counts = hi - lo
    step = max(1, _CHUNK // max(1, int(counts.mean()) if len(counts) else 1))
    for s in range(0, len(pre_prod), step):
        c = counts[s : s + step]
        total = int(c.sum())
        if not total:
            continue
        pidx = np.repeat(np.arange(s, s + len(c)), c)
        offs = np.repeat(np.cumsum(c) - c, c)
        sidx = np.repeat(lo[s : s + step], c) + (np.arange(total) - offs)
        rows = np.concatenate(
            [np.full((total, 1), r, dtype=np.int32), pre_digits[pidx], suf_digits[sidx]], axis=1
        )
        if connected_only:
            rows = rows[_connected_mask(t, rows)]
            if not len(rows):
                continue
        own = _encode(rows, t.size)
        canon, stab = _canonical(t, rows)
        keep = own == canon
        keys_out.append(own[keep])
        stab_out.append(stab[keep])
    return keys_out, stab_out


def enumerate_classes(
    profile: BranchProfile, connected_only: bool = True, cap: int = DEFAULT_CAP
) -> ClassTable:
    """Every conjugation class of product-one tuples with the given profile."""
    t = _tables(profile.degree)
    _check_key_width(t, profile.n)
    est = estimate_tuples(profile)
    if est > cap:
        raise ResourceLimit(f"about {est} product-one tuples to enumerate, above the cap of {cap}")
    class_seq = [t.type_class[ct] for ct in profile.types]
    keys, stabs = [], []
    for arr in _arrangements(class_seq):
        k, s = _enumerate_arrangement(t, arr, connected_only)
        keys += k
        stabs += s
    if keys:
        allk, alls = np.concatenate(keys), np.concatenate(stabs)
    else:
        allk, alls = np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int32)
    return ClassTable(profile, allk, alls, connected_only)


def _partition_join(p: tuple[int, ...], gen: Perm) -> tuple[int, ...]:
    """Orbit partition (as a block label per point) after adding ``gen``."""
    lab = list(p)
    changed = True
    while changed:
        changed = False
        for x, y in enumerate(gen.images):
            a, b = lab[x], lab[y]
            if a != b:
                lo_, hi_ = min(a, b), max(a, b)
                lab = [lo_ if v == hi_ else v for v in lab]
                changed = True
    return tuple(lab)


def burnside_class_count(profile: BranchProfile, connected_only: bool = True) -> int:
    """Class count by Burnside's lemma, independent of the enumeration code.

    For each ``g`` the number of tuples fixed by conjugation with ``g`` is the
    number of product-one tuples with entries in the centraliser of ``g``; it
    is counted by dynamic programming over (partial product, orbit partition,
    cycle types still to place).
    """
    d = profile.degree
    group = symmetric_group(d)
    by_type: dict[CycleType, list[Perm]] = {}
    for p in group:
        by_type.setdefault(p.cycle_type(), []).append(p)
    need = profile.counts()
    type_list = [ct for ct, _ in need]
    total = 0
    for g in group:
        allowed = [[p for p in by_type.get(ct, []) if compose(p, g) == compose(g, p)] for ct in type_list]
        start = (Perm.identity(d), tuple(range(d)), tuple(k for _, k in need))
        states: Counter = Counter({start: 1})
        for _ in range(profile.n):
            nxt: Counter = Counter()
            for (prod, part, rest), w in states.items():
                for j, k in enumerate(rest):
                    if not k:
                        continue
                    r2 = rest[:j] + (k - 1,) + rest[j + 1 :]
                    for p in allowed[j]:
                        nxt[(compose(prod, p), _partition_join(part, p), r2)] += w
            states = nxt
        for (prod, part, _), w in states.items():
            if prod.is_identity() and (not connected_only or len(set(part)) == 1):
                total += w
    assert total % len(group) == 0
    return total // len(group)


# ---------------------------------------------------------------------------
# orbits


@dataclass
class Orbit:
    size: int
    representative: HurwitzTuple
    deck_order: int
    genus: int | None

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "representative": self.representative.to_json(),
            "deck_order": self.deck_order,
            "genus": self.genus,
        }


@dataclass
class OrbitReport:
    profile: BranchProfile
    class_count: int
    orbits: list[Orbit]

    def __post_init__(self) -> None:
        assert sum(o.size for o in self.orbits) == self.class_count

    def to_json(self) -> dict:
        return {
            "profile": self.profile.to_json(),
            "class_count": self.class_count,
            "orbits": [o.to_json() for o in self.orbits],
        }


def _save_checkpoint(path: str, digest: str, labels, frontier, next_orbit: int) -> None:
    tmp = path + ".tmp.npz"
    np.savez(tmp, digest=np.array(digest), labels=labels, frontier=frontier, next_orbit=np.array(next_orbit))
    os.replace(tmp, path)


def _load_checkpoint(path: str, digest: str, size: int):
    if not os.path.exists(path):
        return None
    try:
        with np.load(path) as data:
            if str(data["digest"]) != digest or len(data["labels"]) != size:
                log.warning("checkpoint %s belongs to a different run, ignoring it", path)
                return None
            return data["labels"].copy(), data["frontier"].copy(), int(data["next_orbit"])
    except (OSError, ValueError, KeyError) as exc:
        log.warning("unreadable checkpoint %s (%s), starting over", path, exc)
        return None


def orbit_labels(
    table: ClassTable,
    checkpoint: str | None = None,
    checkpoint_every: int = CHECKPOINT_EVERY,
    directions: Sequence[str] = ("forward", "inverse"),
    stop_after: int | None = None,
) -> np.ndarray:
    """Orbit index of every class under all moves, by frontier search.

    Orbits are numbered in order of their smallest canonical key.  With
    ``checkpoint`` set, the labels and frontier are written to that file
    whenever another ``checkpoint_every`` classes have been labelled, and a
    matching file is resumed from.  ``stop_after`` aborts (for tests) once
    that many classes are labelled, after writing a checkpoint.
    """
    t = _tables(table.profile.degree)
    size = len(table)
    n = table.profile.n
    digest = table.digest() + ":" + ",".join(directions)
    state = _load_checkpoint(checkpoint, digest, size) if checkpoint else None
    if state is None:
        labels = np.full(size, -1, dtype=np.int32)
        frontier = np.zeros(0, dtype=np.int64)
        next_orbit = 0
    else:
        labels, frontier, next_orbit = state
    labelled = int((labels >= 0).sum())
    last_saved = labelled
    while True:
        if not len(frontier):
            free = np.flatnonzero(labels < 0)
            if not len(free):
                break
            start = free[0]
            labels[start] = next_orbit
            next_orbit += 1
            labelled += 1
            frontier = np.array([start], dtype=np.int64)
        orbit = labels[frontier[0]]
        found = []
        step = max(1, _CHUNK // n)
        for s in range(0, len(frontier), step):
            rows = table.digits(frontier[s : s + step])
            for i in range(n - 1):
                for direction in directions:
                    keys, _ = _canonical(t, _move_digits(t, rows, i, direction))
                    idx = table.index_of(keys)
                    found.append(idx[labels[idx] < 0])
        new = np.unique(np.concatenate(found)) if found else np.zeros(0, dtype=np.int64)
        new = new[labels[new] < 0]
        labels[new] = orbit
        labelled += len(new)
        frontier = new.astype(np.int64)
        if checkpoint and labelled - last_saved >= checkpoint_every:
            _save_checkpoint(checkpoint, digest, labels, frontier, next_orbit)
            last_saved = labelled
            log.info("checkpoint: %d of %d classes labelled", labelled, size)
        if stop_after is not None and labelled >= stop_after:
            if checkpoint:
                _save_checkpoint(checkpoint, digest, labels, frontier, next_orbit)
            raise SearchInterrupted(f"stopped after {labelled} classes")
    if checkpoint and os.path.exists(checkpoint):
        os.remove(checkpoint)
    return labels


def orbit_partition(
    classes: ClassTable | Sequence[TupleClass],
    checkpoint: str | None = None,
    checkpoint_every: int = CHECKPOINT_EVERY,
    directions: Sequence[str] = ("forward", "inverse"),
) -> OrbitReport:
    if not isinstance(classes, ClassTable):
        classes = _table_from_classes(classes)
    labels = orbit_labels(classes, checkpoint, checkpoint_every, directions)
    out = []
    for o in range(int(labels.max()) + 1 if len(labels) else 0):
        members = np.flatnonzero(labels == o)
        stabs = np.unique(classes.stabilizers[members])
        if len(stabs) != 1:
            raise AssertionError(f"stabiliser order not constant on orbit {o}: {stabs.tolist()}")
        rep = classes.tuple_at(int(members[0]))
        if rep.is_connected():
            deck = deck_automorphisms(rep.entries).order
            if deck != int(stabs[0]):
                raise AssertionError("deck group order disagrees with the conjugation stabiliser")
            genus = genus_of(rep)
        else:
            deck, genus = int(stabs[0]), None
        out.append(Orbit(len(members), rep, deck, genus))
    return OrbitReport(classes.profile, len(classes), out)


def _table_from_classes(classes: Sequence[TupleClass]) -> ClassTable:
    if not classes:
        raise ValueError("no classes given")
    first = classes[0].representative
    d, n = first.degree, first.n
    t = _tables(d)
    profile = BranchProfile(d, tuple(p.cycle_type() for p in first.entries))
    rows = np.array([[t.index[p] for p in c.representative.entries] for c in classes], dtype=np.int32)
    if rows.shape[1] != n or any(Counter(c.representative.cycle_types()) != Counter(first.cycle_types()) for c in classes):
        raise ValueError("classes do not share one profile")
    keys, stab = _canonical(t, rows)
    return ClassTable(profile, keys, stab, all(c.representative.is_connected() for c in classes))


def hurwitz_components(genus: int, cap: int = DEFAULT_CAP, checkpoint: str | None = None) -> OrbitReport:
    """Orbit report for the degree-4 profile with two double transpositions."""
    profile = BranchProfile.hyperelliptic_pair(genus)
    return orbit_partition(enumerate_classes(profile, True, cap), checkpoint=checkpoint)


# ---------------------------------------------------------------------------
# named tuples used in the component argument


def named_perm(name: str, degree: int = 4) -> Perm:
    """``t12``-style transpositions and ``v1, v2, v3`` (double transpositions of 1..4)."""
    fixed = {"v1": [(1, 2), (3, 4)], "v2": [(1, 3), (2, 4)], "v3": [(1, 4), (2, 3)]}
    if name in fixed:
        return Perm.from_cycles(fixed[name], degree)
    if len(name) == 3 and name[0] == "t":
        return Perm.from_cycles([(int(name[1]), int(name[2]))], degree)
    raise ValueError(f"unknown name {name!r}")


def named_tuple(names: Sequence[str], degree: int = 4) -> HurwitzTuple:
    return HurwitzTuple(tuple(named_perm(x, degree) for x in names))


def type_iii_start(n: int) -> HurwitzTuple:
    """``(t13, ..., t13, v1, v1)`` of length ``n``."""
    return named_tuple(["t13"] * (n - 2) + ["v1", "v1"])


def type_iii_moves(n: int) -> list[int]:
    return [n - 2, n - 3, n - 3, n - 2]


def type_iii_expected(n: int) -> HurwitzTuple:
    return named_tuple(["t13"] * (n - 4) + ["t24", "t24", "v1", "v1"])


def type_ii_start(n: int) -> HurwitzTuple:
    return named_tuple(["t13"] * (n - 6) + ["t12", "t12", "t13", "t13", "v1", "v1"])


def type_ii_moves(n: int) -> list[int]:
    return [n - 4, n - 2, n - 3, n - 4, n - 5, n - 4, n - 5, n - 4, n - 3, n - 2]


def type_ii_expected(n: int) -> HurwitzTuple:
    return named_tuple(["t13"] * (n - 6) + ["t24", "t12", "t12", "t24", "v1", "v1"])


def bad_fibre_tuple(n: int) -> HurwitzTuple:
    """``(t23, t23, t12, ..., t12, v1, v1)`` of length ``n``."""
    return named_tuple(["t23", "t23"] + ["t12"] * (n - 4) + ["v1", "v1"])
