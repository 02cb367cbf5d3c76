"""Invariant cycles on self-products C^(n+1): orbit classes, boundary system, kernel.

Letters.  A point of C^(n+1) whose coordinates are among a_1..a_n, b_1..b_n is
a tuple of nonzero ints, ``+i`` for ``a_i`` and ``-i`` for ``b_i``.  A raw
embedding C -> C^(n+1) is the same kind of tuple where ``0`` marks an identity
coordinate.  The boundary of ``e(C) (x) f`` is ``sum_i 2 e(a_i) - 2 e(b_i)``
because ``div f = 2D``.

Classes.  An embedding class (element of the set usually written E) is an
unordered pair of partitions ``{alpha, beta}``: ``alpha`` lists how often each
a-letter occurs among the constant coordinates, ``beta`` the same for
b-letters; ``k = n + 1 - |alpha| - |beta| >= 1`` coordinates are the
identity.  Point classes (the set P) are unordered pairs of total weight
``n + 1`` except ``{(1,..,1), ()}``.

Row normalisation.  Each relation is read off at one fixed representative
point of its point class (``rep_point``); since the boundary of an orbit sum
is invariant under coordinate/letter permutations and anti-invariant under the
a<->b swap, any other point of the class only rescales the row by +-1, which
does not change the kernel.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .qlinalg import QMatrix, ZERO, kernel_basis, kernel_dimension

Partition = tuple[int, ...]

DEFAULT_MAX_N = 12
BRUTE_FORCE_MAX_N = 5


class ResourceLimit(RuntimeError):
    pass


# --------------------------------------------------------------------------- partitions


@lru_cache(maxsize=None)
def partitions_of(m: int, largest: int | None = None) -> tuple[Partition, ...]:
    """Partitions of ``m`` with parts ``<= largest``, largest first part first.

    >>> partitions_of(4)
    ((4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1))
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    if largest is None:
        largest = m
    if m == 0:
        return ((),)
    out = []
    for first in range(min(m, largest), 0, -1):
        for rest in partitions_of(m - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partition_count(m: int) -> int:
    return len(partitions_of(m))


def partition_count_pentagonal(limit: int) -> list[int]:
    """p(0..limit) from Euler's pentagonal-number recurrence."""
    p = [1] + [0] * limit
    for m in range(1, limit + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p


def add_part(alpha: Partition, m: int) -> Partition:
    """``alpha + m``: append a part and re-sort."""
    return tuple(sorted(alpha + (m,), reverse=True))


def _pkey(p: Partition) -> tuple[int, Partition]:
    return (sum(p), p)


def _orient(alpha: Partition, beta: Partition) -> tuple[Partition, Partition]:
    return (alpha, beta) if _pkey(alpha) >= _pkey(beta) else (beta, alpha)


def pstr(p: Partition) -> str:
    return "(" + ",".join(map(str, p)) + ")"


# --------------------------------------------------------------------------- classes


@dataclass(frozen=True, order=True)
class PairClass:
    """Unordered pair ``{alpha, beta}`` stored with the heavier member first."""

    alpha: Partition
    beta: Partition

    @classmethod
    def of(cls, alpha: Partition, beta: Partition) -> PairClass:
        return cls(*_orient(tuple(alpha), tuple(beta)))

    @property
    def weight(self) -> int:
        return sum(self.alpha) + sum(self.beta)

    def orientations(self) -> list[tuple[Partition, Partition]]:
        if self.alpha == self.beta:
            return [(self.alpha, self.beta)]
        return [(self.alpha, self.beta), (self.beta, self.alpha)]

    @property
    def label(self) -> str:
        return "{" + pstr(self.alpha) + "|" + pstr(self.beta) + "}"

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True, order=True)
class EmbeddingClass(PairClass):
    n: int = field(default=0, compare=True)

    @classmethod
    def make(cls, alpha: Partition, beta: Partition, n: int) -> EmbeddingClass:
        a, b = _orient(tuple(alpha), tuple(beta))
        if sum(a) + sum(b) > n:
            raise ValueError(f"|alpha|+|beta| must be <= n for {pstr(a)},{pstr(b)}")
        return cls(a, b, n)

    @property
    def k(self) -> int:
        return self.n + 1 - self.weight

    @property
    def is_small_diagonal(self) -> bool:
        return not self.alpha and not self.beta


@dataclass(frozen=True, order=True)
class PointClass(PairClass):
    n: int = field(default=0, compare=True)

    @classmethod
    def make(cls, alpha: Partition, beta: Partition, n: int) -> PointClass:
        a, b = _orient(tuple(alpha), tuple(beta))
        if sum(a) + sum(b) != n + 1:
            raise ValueError("point classes have total weight n+1")
        if (a, b) == ((1,) * (n + 1), ()):
            raise ValueError("{(1,...,1),()} needs n+1 distinct letters of one kind")
        return cls(a, b, n)

    def rep_point(self) -> tuple[int, ...]:
        """Fixed representative: a_1 repeated alpha_1 times, a_2 alpha_2 times, ..., then b's."""
        coords: list[int] = []
        for i, m in enumerate(self.alpha, start=1):
            coords += [i] * m
        for j, m in enumerate(self.beta, start=1):
            coords += [-j] * m
        return tuple(coords)


def _unordered_pairs(total: int) -> list[tuple[Partition, Partition]]:
    seen = set()
    out = []
    for i in range(total + 1):
        for a in partitions_of(i):
            for b in partitions_of(total - i):
                key = _orient(a, b)
                if key not in seen:
                    seen.add(key)
                    out.append(key)
    return out


@lru_cache(maxsize=None)
def enumerate_E(n: int) -> tuple[EmbeddingClass, ...]:
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    for total in range(n + 1):
        out += [EmbeddingClass(a, b, n) for a, b in _unordered_pairs(total)]
    return tuple(sorted(out, key=lambda x: (x.weight, _pkey(x.alpha), _pkey(x.beta))))


@lru_cache(maxsize=None)
def enumerate_P(n: int) -> tuple[PointClass, ...]:
    if n < 1:
        raise ValueError("n must be >= 1")
    excluded = ((1,) * (n + 1), ())
    out = [PointClass(a, b, n) for a, b in _unordered_pairs(n + 1) if (a, b) != excluded]
    return tuple(sorted(out, key=lambda x: (_pkey(x.alpha), _pkey(x.beta))))


def letter_multiplicities(point: tuple[int, ...]) -> tuple[Partition, Partition]:
    """Ordered (a-partition, b-partition) of a point or of the constants of an embedding."""
    counts: dict[int, int] = {}
    for c in point:
        if c:
            counts[c] = counts.get(c, 0) + 1
    a = tuple(sorted((m for c, m in counts.items() if c > 0), reverse=True))
    b = tuple(sorted((m for c, m in counts.items() if c < 0), reverse=True))
    return a, b


# --------------------------------------------------------------------------- fiber counts


@dataclass
class FiberReport:
    n: int
    R: frozenset[tuple[EmbeddingClass, PointClass]]
    p2_fiber: dict[PointClass, int]
    p1_fiber: dict[EmbeddingClass, int]
    singleton_p2: list[PointClass]
    singleton_p1: list[EmbeddingClass]
    singleton_p1_formula: int

    @property
    def singleton_p2_count(self) -> int:
        return len(self.singleton_p2)


def relation_set(n: int) -> frozenset[tuple[EmbeddingClass, PointClass]]:
    """The set R: each class paired with the point classes obtained by adding a fresh part k."""
    points = set(enumerate_P(n))
    out = set()
    for x in enumerate_E(n):
        for alpha, beta in ((x.alpha, x.beta), (x.beta, x.alpha)):
            cand = (alpha, add_part(beta, x.k))
            a, b = _orient(*cand)
            pc = PointClass(a, b, n)
            if pc in points:
                out.add((x, pc))
    return frozenset(out)


def exceptional_singleton_family(n: int) -> set[PointClass]:
    """Type (i): alpha=(d,..,d), beta=(), d>1 | n+1; type (ii): alpha=beta=(d,..,d), n odd, d | (n+1)/2."""
    fam = set()
    for d in range(2, n + 2):
        if (n + 1) % d == 0:
            fam.add(PointClass.make((d,) * ((n + 1) // d), (), n))
    if n % 2 == 1:
        half = (n + 1) // 2
        for d in range(1, half + 1):
            if half % d == 0:
                part = (d,) * (half // d)
                fam.add(PointClass.make(part, part, n))
    return fam


def fiber_counts(n: int) -> FiberReport:
    R = relation_set(n)
    p2 = {p: 0 for p in enumerate_P(n)}
    p1 = {x: 0 for x in enumerate_E(n)}
    for x, p in R:
        p2[p] += 1
        p1[x] += 1
    return FiberReport(
        n=n,
        R=R,
        p2_fiber=p2,
        p1_fiber=p1,
        singleton_p2=sorted(p for p, c in p2.items() if c == 1),
        singleton_p1=sorted(x for x, c in p1.items() if c == 1),
        singleton_p1_formula=1 + sum(partition_count(i) for i in range(n // 2 + 1)),
    )


# --------------------------------------------------------------------------- boundary matrix


def _reduce_part(parts: Partition, idx: int, k: int) -> Partition:
    rest = list(parts)
    rest[idx] -= k
    return tuple(sorted((p for p in rest if p), reverse=True))


def boundary_entry(point: PointClass, col: EmbeddingClass) -> int:
    """Coefficient of ``point.rep_point()`` in the boundary of the orbit sum of ``col``.

    An embedding ``e`` with ``e(a_i) = P`` is fixed by choosing which ``k`` of
    the ``p_i`` coordinates of ``P`` equal to ``a_i`` are identity coordinates:
    ``C(p_i, k)`` ways; its constants are ``P`` with that part lowered by ``k``
    (a fresh letter when the part drops to 0, a part increment otherwise).
    """
    k = col.k
    ap, bp = point.alpha, point.beta
    total = 0
    for alpha, beta in col.orientations():
        if bp == beta:
            for i, m in enumerate(ap):
                if m >= k and _reduce_part(ap, i, k) == alpha:
                    total += 2 * math.comb(m, k)
        if ap == alpha:
            for j, m in enumerate(bp):
                if m >= k and _reduce_part(bp, j, k) == beta:
                    total -= 2 * math.comb(m, k)
    return total


def _check_n(n: int, allow_large: bool) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > DEFAULT_MAX_N and not allow_large:
        raise ResourceLimit(f"n={n} exceeds the default cap {DEFAULT_MAX_N}; pass allow_large")


def boundary_matrix(n: int, allow_large: bool = False) -> QMatrix:
    _check_n(n, allow_large)
    rows, cols = enumerate_P(n), enumerate_E(n)
    m = QMatrix.zeros([p.label for p in rows], [x.label for x in cols])
    for i, p in enumerate(rows):
        for j, x in enumerate(cols):
            v = boundary_entry(p, x)
            if v:
                m.entries[i][j] = Fraction(v)
    return m


@dataclass
class IncidenceStructure:
    """Non-cancelled incidences split by kind: fresh letter vs part increment."""

    fresh: set[tuple[EmbeddingClass, PointClass]]
    increment: set[tuple[EmbeddingClass, PointClass]]

    @property
    def increment_only(self) -> set[tuple[EmbeddingClass, PointClass]]:
        return self.increment - self.fresh


def incidence_structure(n: int) -> IncidenceStructure:
    fresh, inc = set(), set()
    for x in enumerate_E(n):
        for alpha, beta in x.orientations():
            for side, other in ((alpha, beta), (beta, alpha)):
                # fresh letter: a new part k on ``side``
                fresh.add((x, PointClass.of(add_part(side, x.k), other)))
                for i in range(len(side)):
                    bumped = list(side)
                    bumped[i] += x.k
                    inc.add((x, PointClass.of(tuple(sorted(bumped, reverse=True)), other)))
    points = set(enumerate_P(n))
    fresh = {(x, PointClass(p.alpha, p.beta, n)) for x, p in fresh}
    inc = {(x, PointClass(p.alpha, p.beta, n)) for x, p in inc}
    return IncidenceStructure({t for t in fresh if t[1] in points}, {t for t in inc if t[1] in points})


# --------------------------------------------------------------------------- brute-force oracle


def iter_raw_embeddings(n: int) -> Iterator[tuple[int, ...]]:
    """Every map C -> C^(n+1) with coordinates identity (0) or a letter, >= 1 identity."""
    letters = [0] + list(range(1, n + 1)) + [-i for i in range(1, n + 1)]
    for coords in itertools.product(letters, repeat=n + 1):
        if 0 in coords:
            yield coords


def raw_class(coords: tuple[int, ...], n: int) -> EmbeddingClass:
    a, b = letter_multiplicities(coords)
    x = EmbeddingClass.make(a, b, n)
    return x


def brute_force_matrix(n: int) -> QMatrix:
    """Boundary system computed literally from every raw embedding (independent oracle)."""
    if n > BRUTE_FORCE_MAX_N:
        raise ResourceLimit(
            f"brute force needs (2n+1)^(n+1) = {(2 * n + 1) ** (n + 1)} maps; capped at n <= {BRUTE_FORCE_MAX_N}"
        )
    rows, cols = enumerate_P(n), enumerate_E(n)
    row_of = {p.rep_point(): i for i, p in enumerate(rows)}
    col_of = {(x.alpha, x.beta): j for j, x in enumerate(cols)}
    acc: dict[tuple[int, int], int] = {}
    for coords in iter_raw_embeddings(n):
        j = col_of[_orient(*letter_multiplicities(coords))]
        for letter in range(1, n + 1):
            for sign, lt in ((2, letter), (-2, -letter)):
                pt = tuple(lt if c == 0 else c for c in coords)
                i = row_of.get(pt)
                if i is not None:
                    acc[i, j] = acc.get((i, j), 0) + sign
    m = QMatrix.zeros([p.label for p in rows], [x.label for x in cols])
    for (i, j), v in acc.items():
        if v:
            m.entries[i][j] = Fraction(v)
    return m


# --------------------------------------------------------------------------- kernel


@dataclass
class CycleSpace:
    n: int
    classes: tuple[EmbeddingClass, ...]
    matrix: QMatrix
    basis: list[list[Fraction]]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def diagonal_index(self) -> int:
        return next(i for i, x in enumerate(self.classes) if x.is_small_diagonal)


def invariant_cycle_space(n: int, allow_large: bool = False) -> CycleSpace:
    m = boundary_matrix(n, allow_large)
    return CycleSpace(n, enumerate_E(n), m, kernel_basis(m))


def cycle_space_dimension(n: int, allow_large: bool = False) -> int:
    return kernel_dimension(boundary_matrix(n, allow_large))


def trivial_rows(n: int) -> list[PointClass]:
    """Rows {alpha, alpha} (n odd) whose relation vanishes by the a<->b symmetry."""
    if n % 2 == 0:
        return []
    half = (n + 1) // 2
    return [PointClass.make(a, a, n) for a in partitions_of(half)]


def is_in_kernel(m: QMatrix, vec: list[Fraction]) -> bool:
    return all(x == ZERO for x in m.apply(vec))
