import itertools

import pytest
from hypothesis import given, strategies as st

from cycleforge.permcore import (
    CycleType,
    DegreeMismatch,
    Perm,
    compose,
    conjugate,
    deck_automorphisms,
    is_transitive,
    orbits,
    product,
    symmetric_group,
    transposition,
)

S4 = symmetric_group(4)


def t(i, j):
    return transposition(i, j, 4)


V1 = Perm.from_cycles([(1, 2), (3, 4)], 4)


def perms(degree):
    return st.permutations(range(degree)).map(lambda p: Perm(tuple(p)))


def test_one_line_and_cycles_agree():
    p = Perm.from_one_line([2, 3, 1, 4])
    assert p == Perm.from_cycles([(1, 2, 3)], 4)
    assert p(1) == 2 and p(3) == 1
    assert str(p) == "(1 2 3)"
    assert str(Perm.identity(3)) == "()"
    assert Perm.parse("(1 2)(3 4)", 4) == V1
    assert Perm.parse(str(V1), 4) == V1


def test_invalid_inputs():
    with pytest.raises(ValueError):
        Perm((0, 0, 1))
    with pytest.raises(ValueError):
        Perm.from_cycles([(1, 5)], 4)
    with pytest.raises(DegreeMismatch):
        compose(Perm.identity(3), Perm.identity(4))
    with pytest.raises(ValueError):
        CycleType((1, 2))


def test_composition_convention_right_first():
    # compose(p, q) applies q first
    p, q = t(1, 2), t(2, 3)
    assert compose(p, q)(3) == p(q(3)) == 1
    assert product([p, q]) == compose(p, q)


def test_conjugate_relabels():
    assert conjugate(t(1, 3), t(1, 2)) == t(2, 3)
    assert conjugate(t(1, 3), V1) == t(2, 4)


def test_cycle_type_preserved_exhaustive():
    for p, g in itertools.product(S4, S4):
        assert conjugate(p, g).cycle_type() == p.cycle_type()


@given(perms(5), perms(5), perms(5))
def test_associative_and_inverse(a, b, c):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    assert compose(a.inverse(), a).is_identity()
    assert conjugate(a, b) == compose(compose(b, a), b.inverse())


def test_transitivity_examples():
    assert not is_transitive([t(1, 2)])
    assert is_transitive([t(1, 2), t(1, 3), t(1, 4)])
    assert orbits([t(1, 2), V1]) == [frozenset({1, 2}), frozenset({3, 4})]
    with pytest.raises(ValueError):
        orbits([])


def _brute_orbits(gens):
    seen, out = set(), []
    for x in range(1, 5):
        if x in seen:
            continue
        orb, stack = {x}, [x]
        while stack:
            y = stack.pop()
            for g in gens:
                for z in (g(y), g.inverse()(y)):
                    if z not in orb:
                        orb.add(z)
                        stack.append(z)
        seen |= orb
        out.append(frozenset(orb))
    return out


def test_transitivity_matches_brute_force_on_small_subsets():
    for k in (1, 2, 3):
        for gens in itertools.combinations(S4, k):
            assert orbits(gens) == _brute_orbits(gens)
            assert is_transitive(gens) == (len(_brute_orbits(gens)) == 1)


def test_deck_automorphisms():
    assert deck_automorphisms([t(1, 2), t(2, 3), t(3, 4)]).order == 1
    deck = deck_automorphisms([t(1, 3), t(2, 4), V1])
    assert any(g.cycle_type().parts == (2, 2) for g in deck.elements)
    gens = [t(1, 3), t(2, 4), V1]
    listed = set(deck.elements)
    for g in S4:
        assert (g in listed) == all(compose(g, s) == compose(s, g) for s in gens)
    with pytest.raises(ValueError):
        deck_automorphisms([t(1, 2)])


def test_symmetric_group_lex_order():
    assert len(S4) == 24
    assert list(S4) == sorted(S4, key=lambda p: p.images)
    assert S4[0].is_identity()
