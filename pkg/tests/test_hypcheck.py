from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cycleforge import cyclespace as cs
from cycleforge import hypcheck as hc

ZERO = ((0,), 0)


def K(free, bit=0):
    return ("K", (tuple(free), bit))


def G(k, free, bit=0):
    return ("G", k, (tuple(free), bit))


def test_small_diagonal_specialises_to_single_symbol():
    for n in range(2, 6):
        x = cs.EmbeddingClass((), (), n)
        v = hc.specialize_class(x)
        assert v == hc.KSymbolVector.single(G(n + 1, (0,) * (n - 1)))


def test_n2_pair_class_assignment_grid():
    x = cs.EmbeddingClass.make((1,), (1,), 2)
    v = hc.specialize_class(x)
    mult = hc.placement_multiplicity(x)
    # a in {a1, a2} x b in {b1, b2}; a1 -> 0, b1 -> eps, a2, b2 -> tau1 (alpha = beta, so one orientation)
    expected = hc.KSymbolVector()
    for ga in (((0,), 0), ((1,), 0)):
        for gb in (((0,), 1), ((1,), 0)):
            expected.add(("G", 1, hc.add_translations(ga, gb)), Fraction(mult))
    assert v == expected


@pytest.mark.parametrize("n", [2, 3, 4])
def test_specialisation_matches_raw_embeddings(n):
    brute = hc.brute_force_specialize(n)
    for x in cs.enumerate_E(n):
        assert hc.specialize_class(x) == brute[x], x.label


def test_reduce_rules():
    c = (1, 0)
    assert hc.reduce(hc.KSymbolVector.single(G(2, c))) == hc.KSymbolVector.single(K(c), 2)
    pair = hc.KSymbolVector.single(G(1, c)) + hc.KSymbolVector.single(G(1, c, 1))
    assert hc.reduce(pair) == hc.KSymbolVector.single(K(c))
    three = hc.KSymbolVector.single(G(3, (0, 0))) + hc.KSymbolVector.single(G(3, (0, 0), 1))
    assert hc.reduce(three) == hc.KSymbolVector.single(K((0, 0)), 9)
    odd = hc.reduce(hc.KSymbolVector.single(G(3, (0, 0))))
    assert odd.part("A") == hc.KSymbolVector.single(("A", 3, ((0, 0), 0)), Fraction(1, 2))
    assert not hc.reduce(hc.KSymbolVector.single(G(3, (0, 0))), torsion_trivial=True).part("A")


def test_eps_antisymmetric_normal_form():
    v = hc.KSymbolVector()
    v.add(("A", 1, ((2,), 1)), Fraction(3))
    assert v.terms == {("A", 1, ((2,), 0)): Fraction(-3)}
    v.add(("A", 1, ((2,), 0)), Fraction(3))
    assert not v
    with pytest.raises(ValueError):
        v.add(("A", 2, ((0,), 0)), 1)


symbols = st.one_of(
    st.tuples(st.just("G"), st.integers(1, 6), st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.integers(0, 1)),
    st.tuples(st.just("K"), st.just(0), st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.integers(0, 1)),
    st.tuples(st.just("A"), st.sampled_from([1, 3, 5]), st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.integers(0, 1)),
)
coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=7)


def vectors():
    def build(items):
        v = hc.KSymbolVector()
        for (kind, k, free, bit), c in items:
            sym = ("K", (free, bit)) if kind == "K" else (kind, k, (free, bit))
            v.add(sym, c)
        return v

    return st.lists(st.tuples(symbols, coeffs), max_size=8).map(build)


@settings(max_examples=500, deadline=None)
@given(vectors(), vectors(), coeffs, st.booleans())
def test_reduce_linear_and_idempotent(v, w, a, tt):
    r = hc.reduce(v, tt)
    assert hc.reduce(r, tt) == r
    assert hc.reduce(v.scale(a) + w, tt) == r.scale(a) + hc.reduce(w, tt)
    assert not r.part("G")
    stored = {(s[1], s[2][0]) for s in r.terms if s[0] == "A"}
    assert all(s[2][1] == 0 for s in r.terms if s[0] == "A") and len(stored) == len(r.part("A").terms)


def test_target_vector():
    assert hc.target_vector(2) == hc.KSymbolVector({K((1,)): Fraction(1), K((0,)): Fraction(-1)})
    t3 = hc.target_vector(3)
    assert t3.terms == {
        K((1, 1)): Fraction(1),
        K((1, 0)): Fraction(-1),
        K((0, 1)): Fraction(-1),
        K((0, 0)): Fraction(1),
    }
    for n in range(2, 7):
        assert hc.target_vector(n).mass() == 0


def test_non_kernel_vector_rejected():
    space = cs.invariant_cycle_space(2)
    bad = [Fraction(0)] * len(space.classes)
    bad[space.diagonal_index] = Fraction(1)
    with pytest.raises(ValueError):
        hc.image_of(space, bad)


def test_image_linear_in_kernel_vector():
    space = cs.invariant_cycle_space(3)
    v = space.basis[0]
    a = hc.image_of(space, v, torsion_trivial=True)
    b = hc.image_of(space, [7 * x for x in v], torsion_trivial=True)
    assert b == a.scale(7)
    assert hc.proportionality(b.part("K"), hc.target_vector(3)) == 7 * hc.proportionality(
        a.part("K"), hc.target_vector(3)
    )


def test_minimal_calculus_leaves_diagonal_residual_at_n2():
    space = cs.invariant_cycle_space(2)
    (v,) = space.basis
    img = hc.image_of(space, v)
    diag = v[space.diagonal_index]
    assert diag != 0
    # the only k = 3 class is the small diagonal, so A(3, 0) survives with coefficient diag / 2
    assert img.terms[("A", 3, ((0,), 0))] == diag / 2


@pytest.mark.parametrize("n", range(2, 7))
def test_check_without_torsion_relation_reports_residuals(n):
    rep = hc.hypothesis_check(n)
    assert not rep.residuals_zero and not rep.passed
    assert rep.proportional and rep.kernel_characterization
    doc = rep.to_json()
    for key in ("n", "kernel_dim", "image_dim", "residuals_zero", "kernel_characterization", "pass"):
        assert key in doc


@pytest.mark.parametrize("n", range(2, 7))
def test_check_with_torsion_relation(n):
    rep = hc.hypothesis_check(n, torsion_trivial=True)
    assert rep.passed
    assert rep.image_dim == 1
    expected = Fraction((-1) ** (n + 1) * (n + 1), 2)
    for c in rep.checks:
        if c.diagonal_coeff:
            assert c.scalar / c.diagonal_coeff == expected
        else:
            assert c.scalar == 0


def test_check_bounds():
    with pytest.raises(ValueError):
        hc.hypothesis_check(1)
    with pytest.raises(ValueError):
        hc.hypothesis_check(7)
