"""Permutations of {1..k} and the few group-theoretic queries monodromy needs.

Composition convention (fixed for the whole package): ``compose(p, q)`` is
"first q, then p", i.e. ``compose(p, q)(x) == p(q(x))``.  A product
``s_1 s_2 ... s_n`` is therefore the map ``x -> s_1(s_2(...s_n(x)))``.
Under this convention ``compose(t12, t13)`` is the 3-cycle 1->3->2->1.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence


class DegreeMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Perm:
    """A permutation in one-line notation, stored 0-based.

    ``images[i]`` is the image of ``i + 1`` minus one.  Ordering of Perm values
    is lexicographic on the one-line notation, which is the ordering used for
    canonical forms in :mod:`cycleforge.hurwitz`.
    """

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.images) < 1:
            raise ValueError("degree must be >= 1")
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"not a bijection of 1..{len(self.images)}: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> Perm:
        return cls(tuple(range(degree)))

    @classmethod
    def from_one_line(cls, images: Sequence[int]) -> Perm:
        """Build from 1-based one-line notation, e.g. ``[2, 1, 3]``."""
        return cls(tuple(i - 1 for i in images))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Perm:
        """Build from 1-based cycles, e.g. ``[(1, 2), (3, 4)]``."""
        img = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            for x in cyc:
                if not 1 <= x <= degree or x in seen:
                    raise ValueError(f"bad cycle {tuple(cyc)} for degree {degree}")
                seen.add(x)
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                img[a - 1] = b - 1
        return cls(tuple(img))

    @classmethod
    def parse(cls, text: str, degree: int) -> Perm:
        """Parse cycle notation such as ``"(1 2)(3 4)"``; ``"()"`` is the identity."""
        cycles = [
            [int(tok) for tok in body.replace(",", " ").split()]
            for body in re.findall(r"\(([^()]*)\)", text)
        ]
        return cls.from_cycles([c for c in cycles if c], degree)

    def __call__(self, x: int) -> int:
        """Image of the 1-based point ``x``."""
        return self.images[x - 1] + 1

    def inverse(self) -> Perm:
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """All cycles (1-based), fixed points included, each starting at its minimum."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x + 1)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    def num_cycles(self) -> int:
        return len(self.cycles())

    def cycle_type(self) -> CycleType:
        return CycleType(tuple(sorted((len(c) for c in self.cycles()), reverse=True)))

    def __str__(self) -> str:
        nontrivial = [c for c in self.cycles() if len(c) > 1]
        if not nontrivial:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in nontrivial)


@dataclass(frozen=True, order=True)
class CycleType:
    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(p <= 0 for p in self.parts) or list(self.parts) != sorted(self.parts, reverse=True):
            raise ValueError(f"cycle type must be non-increasing positive parts: {self.parts}")

    @property
    def degree(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def _check(p: Perm, q: Perm) -> None:
    if p.degree != q.degree:
        raise DegreeMismatch(f"degrees differ: {p.degree} vs {q.degree}")


def compose(p: Perm, q: Perm) -> Perm:
    """First ``q``, then ``p``."""
    _check(p, q)
    return Perm(tuple(p.images[i] for i in q.images))


def product(perms: Sequence[Perm]) -> Perm:
    if not perms:
        raise ValueError("empty product has no degree")
    out = perms[0]
    for p in perms[1:]:
        out = compose(out, p)
    return out


def conjugate(p: Perm, g: Perm) -> Perm:
    """``g p g^-1``: relabel every point ``x`` of ``p`` as ``g(x)``."""
    _check(p, g)
    img = [0] * p.degree
    for x, y in enumerate(p.images):
        img[g.images[x]] = g.images[y]
    return Perm(tuple(img))


def transposition(i: int, j: int, degree: int) -> Perm:
    return Perm.from_cycles([(i, j)], degree)


def orbits(gens: Iterable[Perm]) -> list[frozenset[int]]:
    """Orbits (1-based) of the group generated by ``gens``, via union-find."""
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    degree = gens[0].degree
    for g in gens[1:]:
        _check(gens[0], g)
    parent = list(range(degree))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x, y in enumerate(g.images):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)
    groups: dict[int, set[int]] = {}
    for x in range(degree):
        groups.setdefault(find(x), set()).add(x + 1)
    return [frozenset(groups[r]) for r in sorted(groups)]


def is_transitive(gens: Iterable[Perm]) -> bool:
    return len(orbits(gens)) == 1


@lru_cache(maxsize=None)
def symmetric_group(degree: int) -> tuple[Perm, ...]:
    """All elements of the symmetric group, in lexicographic one-line order."""
    return tuple(Perm(p) for p in itertools.permutations(range(degree)))


@dataclass(frozen=True)
class DeckGroup:
    order: int
    elements: tuple[Perm, ...]


def centralizer(gens: Iterable[Perm]) -> tuple[Perm, ...]:
    gens = list(gens)
    degree = gens[0].degree
    return tuple(
        g for g in symmetric_group(degree) if all(compose(g, s) == compose(s, g) for s in gens)
    )


def deck_automorphisms(gens: Iterable[Perm]) -> DeckGroup:
    """Centralizer of the generated subgroup in the full symmetric group.

    For a connected cover this is its group of deck transformations acting on
    the fibre; an intransitive generating set is rejected.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    if not is_transitive(gens):
        raise ValueError("deck group is only defined here for transitive monodromy")
    elems = centralizer(gens)
    return DeckGroup(len(elems), elems)
