import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import ellipk

from cycleforge import ellreg as er

FE_LAMBDAS = [2, 4, 10, 3 + 1j]


def test_rejects_degenerate_lambda():
    for lam in (0, 1):
        with pytest.raises(ValueError):
            er.uniformize(lam)
    with pytest.raises(ValueError):
        er.regulator_integral(2, tol=1e-8)


def test_agm_matches_library():
    for m in (0.0, 0.1, 0.5, 0.9, 0.999):
        assert er.complete_elliptic_k(m) == pytest.approx(float(ellipk(m)), rel=1e-14)


def test_symmetric_lambda_periods():
    p = er.uniformize(0.5)
    p1, p2 = p.periods
    assert abs(p1) == pytest.approx(2 * er.complete_elliptic_k(0.5), rel=1e-12)
    # one period real, the other purely imaginary
    assert abs(p1.imag) < 1e-12 and abs(p2.real) < 1e-12
    assert p.tau == pytest.approx(1j, abs=1e-12)


def test_half_periods_hit_branch_values_for_random_lambda():
    rng = random.Random(7)
    for _ in range(20):
        lam = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        p = er.uniformize(lam)
        assert p.half_period_error < 1e-10
        assert abs(p.tau) >= 1 - 1e-12 and abs(p.tau.real) <= 0.5 + 1e-12 and p.tau.imag > 0


@pytest.mark.parametrize("lam", [2, 3 + 1j, -0.7, 0.3 + 2j])
def test_lambda_and_inverse_share_j_invariant(lam):
    a, b = er.uniformize(lam), er.uniformize(1 / complex(lam))
    ja, jb = er.j_invariant_from_tau(a.tau), er.j_invariant_from_tau(b.tau)
    assert ja == pytest.approx(jb, rel=1e-8)
    assert ja == pytest.approx(er.j_invariant_from_lambda(complex(lam)), rel=1e-8)


def test_theta_formula_matches_weierstrass_at_sample_points():
    p = er.uniformize(3 + 1j)
    rng = np.random.default_rng(0)
    v = rng.random(50) * math.pi + rng.random(50) * math.pi * p.tau
    x = p.x_at(v)
    # y^2 = x(x-1)(x-lam) has three simple zeros and x has a double pole; check log|x| agrees
    assert np.allclose(np.log(np.abs(x)), p.log_abs_x(v), atol=1e-9)


def test_grid_closed_form_and_symmetry_agree():
    for lam in FE_LAMBDAS + [0.5, -1, 1j, 2 + 5j]:
        r = er.regulator_integral(lam)
        assert r.error <= 1e-3
        assert abs(r.value - er.regulator_closed_form(lam)) <= r.error
        assert abs(r.value - er.regulator_from_symmetry(lam)) < 1e-9


def test_monte_carlo_agrees_with_grid():
    grid = er.regulator_integral(2)
    mc = er.regulator_monte_carlo(2, samples=1_000_000)
    assert abs(grid.value - mc.value) < 3e-3
    assert abs(grid.value - mc.value) < 5 * mc.error


def test_halving_mesh_within_reported_error():
    for lam in FE_LAMBDAS:
        r = er.regulator_integral(lam)
        f = er._Integrand(er.uniformize(lam))
        assert abs(f.grid_mean(2 * r.grid) - r.value) <= r.error


@settings(max_examples=25, deadline=None)
@given(
    st.floats(-6, 6).filter(lambda x: abs(x) > 0.05),
    st.floats(-6, 6),
)
def test_two_resolution_bound_random_lambda(re, im):
    lam = complex(re, im)
    if abs(lam - 1) < 0.05:
        return
    r = er.regulator_integral(lam)
    assert abs(r.value - er.regulator_closed_form(lam)) <= r.error <= 1e-3


@pytest.mark.parametrize("lam", FE_LAMBDAS)
def test_functional_equation(lam):
    chk = er.functional_equation_check(lam, 1e-3)
    assert chk.passed and chk.residual < 5e-3
    doc = chk.to_json()
    assert set(doc) >= {"lambda", "I", "err", "residual", "pass"}


def test_unit_modulus_lambda():
    lam = cmath.exp(0.7j)
    chk = er.functional_equation_check(lam)
    assert chk.residual < 5e-3
    assert abs(chk.forward.value - chk.inverse.value) < 5e-3


def test_nonconstancy():
    vals = {lam: er.regulator_integral(lam).value for lam in (2, 4, 10)}
    assert max(vals.values()) - min(vals.values()) > 10e-3
    gap = abs(er.regulator_integral(2).value - er.regulator_integral(0.5).value)
    assert gap > 0.69 - 5e-3
    assert gap == pytest.approx(math.log(2), abs=1e-9)


def test_convergence_error_carries_estimate(monkeypatch):
    real = er._Integrand.grid_mean
    # a slowly converging estimator: error 1/n on top of the true value
    monkeypatch.setattr(er._Integrand, "grid_mean", lambda self, n: real(self, n) + 1.0 / n)
    with pytest.raises(er.ConvergenceError) as info:
        er.regulator_integral(2, tol=1e-6, max_grid=256)
    assert info.value.estimate == pytest.approx(math.log(2) / 2, abs=1e-2)
    assert info.value.error > 1e-6
