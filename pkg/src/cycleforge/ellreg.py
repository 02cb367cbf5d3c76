"""The integral of log|x| over the elliptic curve y^2 = x(x-1)(x-lam).

The curve is uniformised by ``x = P(z) + (1+lam)/3`` where ``P`` is the
Weierstrass function whose half-period values are ``e_i = r_i - (1+lam)/3``
for the roots ``r_i`` of ``x(x-1)(x-lam)``.  Periods come from integrals of
``dX / sqrt(prod(X - e_i))`` between pairs of roots, and ``P`` is evaluated
through Jacobi theta functions with nome ``q = exp(i pi tau)``, ``tau`` reduced
to the standard fundamental domain.

The invariant form of volume one is ``ds dt`` in lattice coordinates
``z = s P1 + t P2``, so ``I(lam)`` is the mean of ``log|x|`` over the unit
square.  ``log|x|`` has a ``-2 log`` singularity at the pole and a ``+2 log``
singularity at the half-period where ``x`` vanishes.  Both are subtracted
with a smooth radial cutoff; the remainder is smooth and periodic, so the
midpoint rule converges fast, and the subtracted pieces are one-dimensional
radial integrals.

Since ``h(v) = log|theta_1(v)| - (Im v)^2 / (pi Im tau)`` is doubly periodic,
each ``log|theta_c|`` has the same cell average as ``log|theta_1|``; this gives
the closed form ``I = 2 log|pi theta_a(0) theta_b(0) / P1|`` used as an
independent check of the quadrature.  A second check: ``(x, y) -> (lam/x,
lam y/x^2)`` is translation by the 2-torsion point ``(0, 0)``, which preserves
the invariant form, so ``I(lam) = log|lam| - I(lam)``, i.e. ``I = log|lam|/2``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

HALF_PERIOD_TOL = 1e-10
MIN_TOL = 1e-6
_THETA_TERMS = 12


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


# ---------------------------------------------------------------------------
# theta functions


def _q_powers(tau: complex):
    n = np.arange(_THETA_TERMS)
    half = np.exp(1j * np.pi * tau * (n + 0.5) ** 2)
    whole = np.exp(1j * np.pi * tau * (n[1:] ** 2))
    return n, half, whole


def theta(kind: int, v, tau: complex):
    """Jacobi theta ``theta_kind(v | tau)`` (kinds 1..4), vectorised over ``v``."""
    v = np.asarray(v, dtype=complex)
    n, half, whole = _q_powers(tau)
    vv = v[..., None]
    if kind == 1:
        return 2 * np.sum(((-1) ** n) * half * np.sin((2 * n + 1) * vv), axis=-1)
    if kind == 2:
        return 2 * np.sum(half * np.cos((2 * n + 1) * vv), axis=-1)
    m = n[1:]
    if kind == 3:
        return 1 + 2 * np.sum(whole * np.cos(2 * m * vv), axis=-1)
    if kind == 4:
        return 1 + 2 * np.sum(((-1) ** m) * whole * np.cos(2 * m * vv), axis=-1)
    raise ValueError("theta kind must be 1..4")


def theta_constants(tau: complex) -> tuple[complex, complex, complex]:
    return tuple(complex(theta(k, 0.0, tau)) for k in (2, 3, 4))


def j_invariant_from_tau(tau: complex) -> complex:
    t2, t3, t4 = theta_constants(tau)
    return 32 * (t2**8 + t3**8 + t4**8) ** 3 / (t2 * t3 * t4) ** 8


def j_invariant_from_lambda(lam: complex) -> complex:
    return 256 * (1 - lam + lam * lam) ** 3 / (lam * lam * (1 - lam) ** 2)


# ---------------------------------------------------------------------------
# uniformisation


def _pair_period(ei: complex, ej: complex, ek: complex) -> complex:
    """``int_{e_i}^{e_j} dX / sqrt(prod (X - e))`` via ``X = e_i + (e_j - e_i) sin^2``.

    The square root is taken relative to the midpoint of the segment swept by
    ``X - e_k``, which keeps it continuous as long as ``e_k`` is not between
    ``e_i`` and ``e_j`` on a line.
    """
    a, d = ei - ek, ej - ei
    mid = a + d / 2
    root_mid = cmath.sqrt(mid)
    prev = None
    for nodes in (32, 64, 128, 256, 512):
        x, w = np.polynomial.legendre.leggauss(nodes)
        phi = (x + 1) * math.pi / 4
        w = w * math.pi / 4
        val = np.sqrt((a + d * np.sin(phi) ** 2) / mid) * root_mid
        total = 2 * np.sum(w / val) / 1j
        if prev is not None and abs(total - prev) <= 1e-14 * abs(total):
            return complex(total)
        prev = total
    return complex(total)


def _reduce_basis(p1: complex, p2: complex) -> tuple[complex, complex]:
    if (p2 / p1).imag < 0:
        p2 = -p2
    for _ in range(200):
        tau = p2 / p1
        m = round(tau.real)
        if m:
            p2 -= m * p1
            tau = p2 / p1
        if abs(tau) < 1 - 1e-15:
            p1, p2 = p2, -p1
            continue
        break
    else:
        raise ValueError("lattice reduction did not terminate")
    return p1, p2


@dataclass(frozen=True)
class EllipticParams:
    lam: complex
    roots: tuple[complex, complex, complex]  # 0, 1, lam sorted lexicographically
    shift: complex  # x = P(z) + shift
    periods: tuple[complex, complex]  # reduced basis, Im(P2/P1) > 0
    tau: complex
    zero_kind: int  # theta kind vanishing at the half-period where x = 0
    half_period_error: float

    @property
    def e(self) -> tuple[complex, ...]:
        return tuple(r - self.shift for r in self.roots)

    def x_at(self, v) -> np.ndarray:
        """``x`` at scaled points ``v = pi z / P1`` via the full P-formula."""
        t2, t3, _ = theta_constants(self.tau)
        scale = (math.pi / self.periods[0]) ** 2
        v = np.asarray(v, dtype=complex)
        p = scale * (
            t2**2 * t3**2 * theta(4, v, self.tau) ** 2 / theta(1, v, self.tau) ** 2
            - (t2**4 + t3**4) / 3
        )
        return p + self.shift

    def log_abs_x(self, v) -> np.ndarray:
        """``log|x|`` at scaled points, as a ratio of theta functions."""
        others = [k for k in (2, 3, 4) if k != self.zero_kind]
        consts = theta_constants(self.tau)
        c = 2 * math.log(math.pi / abs(self.periods[0]))
        c += 2 * sum(math.log(abs(consts[k - 2])) for k in others)
        return (
            c
            + 2 * np.log(np.abs(theta(self.zero_kind, v, self.tau)))
            - 2 * np.log(np.abs(theta(1, v, self.tau)))
        )

    def zero_point(self) -> complex:
        """Scaled coordinate of the half-period where ``x`` vanishes."""
        return {2: math.pi / 2, 4: math.pi * self.tau / 2, 3: math.pi * (1 + self.tau) / 2}[self.zero_kind]


def uniformize(lam: complex) -> EllipticParams:
    lam = complex(lam)
    if abs(lam) < 1e-14 or abs(lam - 1) < 1e-14:
        raise ValueError("lambda must not be 0 or 1")
    roots = tuple(sorted((0j, 1 + 0j, lam), key=lambda c: (c.real, c.imag)))
    shift = (1 + lam) / 3
    e = [r - shift for r in roots]
    p1 = _pair_period(e[0], e[1], e[2])
    p2 = _pair_period(e[1], e[2], e[0])
    if abs(p1) == 0 or abs((p2 / p1).imag) < 1e-12:
        raise ValueError(f"degenerate lattice for lambda={lam}")
    p1, p2 = _reduce_basis(p1, p2)
    tau = p2 / p1
    half = {2: math.pi / 2, 4: math.pi * tau / 2, 3: math.pi * (1 + tau) / 2}
    params = EllipticParams(lam, roots, shift, (p1, p2), tau, 0, 0.0)
    xs = {k: complex(params.x_at(v)) for k, v in half.items()}
    zero_kind = min(xs, key=lambda k: abs(xs[k]))
    # the three half-period values must be exactly {0, 1, lam}
    err = min(
        max(abs(xs[k] - r) for k, r in zip(order, (0j, 1 + 0j, lam)))
        for order in ((2, 3, 4), (2, 4, 3), (3, 2, 4), (3, 4, 2), (4, 2, 3), (4, 3, 2))
    )
    if err > HALF_PERIOD_TOL:
        raise ValueError(f"half-period self-check failed for lambda={lam}: mismatch {err:.3e}")
    return EllipticParams(lam, roots, shift, (p1, p2), tau, zero_kind, err)


def complete_elliptic_k(m: float) -> float:
    """``K(m) = pi / (2 AGM(1, sqrt(1-m)))`` for real ``0 <= m < 1``."""
    a, b = 1.0, math.sqrt(1 - m)
    for _ in range(64):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = (a + b) / 2, math.sqrt(a * b)
    return math.pi / (2 * a)


# ---------------------------------------------------------------------------
# the integral


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error: float
    grid: int
    method: str = "grid"

    def to_json(self) -> dict:
        return {"value": self.value, "error": self.error, "grid": self.grid, "method": self.method}


def _cutoff(r: np.ndarray, radius: float) -> np.ndarray:
    """Smooth radial step: 1 for r <= radius/2, 0 for r >= radius."""
    x = np.clip((radius - r) / (radius / 2), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(x > 0, np.exp(-1 / np.where(x > 0, x, 1)), 0.0)
        b = np.where(x < 1, np.exp(-1 / np.where(x < 1, 1 - x, 1)), 0.0)
    return a / (a + b)


def _nearest(w: np.ndarray, tau: complex) -> np.ndarray:
    """Shift scaled points by lattice vectors ``pi (m + n tau)`` to the nearest image."""
    s = (w / math.pi).real - (w / math.pi).imag * tau.real / tau.imag
    t = (w / math.pi).imag / tau.imag
    base = w - math.pi * (np.round(s) + np.round(t) * tau)
    best = base
    for ds in (-1, 0, 1):
        for dt in (-1, 0, 1):
            cand = base + math.pi * (ds + dt * tau)
            best = np.where(np.abs(cand) < np.abs(best), cand, best)
    return best


class _Integrand:
    def __init__(self, params: EllipticParams):
        self.params = params
        tau = params.tau
        self.tau = tau
        self.sing = [(0j, -2.0), (params.zero_point(), 2.0)]
        shortest = math.pi * min(1.0, abs(tau))
        gap = abs(_nearest(np.array([params.zero_point()]), tau)[0])
        self.radius = 0.45 * min(gap, shortest)
        # integral of cutoff(r) * log r over the plane, in unit-square measure
        radial, _ = integrate.quad(
            lambda r: float(_cutoff(np.array([r]), self.radius)[0]) * r * math.log(r),
            0.0,
            self.radius,
            points=[self.radius / 2],
            limit=200,
            epsabs=1e-15,
        )
        self.radial = 2 * math.pi * radial / (math.pi**2 * tau.imag)

    def smooth_part(self, s: np.ndarray, t: np.ndarray) -> np.ndarray:
        v = math.pi * (s + t * self.tau)
        f = self.params.log_abs_x(v)
        for p, c in self.sing:
            w = _nearest(v - p, self.tau)
            r = np.abs(w)
            f = f - c * _cutoff(r, self.radius) * np.log(r)
        return f

    def singular_part(self) -> float:
        return sum(c for _, c in self.sing) * self.radial

    def grid_mean(self, n: int) -> float:
        pts = -0.5 + (np.arange(n) + 0.5) / n
        total = 0.0
        rows = max(1, 2**16 // n)
        for k in range(0, n, rows):
            s, t = np.meshgrid(pts, pts[k : k + rows], indexing="xy")
            total += float(np.sum(self.smooth_part(s, t)))
        return total / (n * n) + self.singular_part()


def regulator_integral(lam: complex, tol: float = 1e-3, max_grid: int = 2048) -> IntegralResult:
    """Mean of ``log|x|`` over the curve, with a two-resolution error estimate."""
    if tol < MIN_TOL:
        raise ValueError(f"tol must be >= {MIN_TOL}")
    params = uniformize(lam)
    f = _Integrand(params)
    n = 32
    prev = f.grid_mean(n)
    while True:
        n *= 2
        cur = f.grid_mean(n)
        err = abs(cur - prev)
        if err <= tol:
            return IntegralResult(cur, max(err, 1e-12), n)
        if n >= max_grid:
            raise ConvergenceError(
                f"grid {n} reached with error estimate {err:.3e} above tol {tol:.1e}", cur, err
            )
        prev = cur


def regulator_monte_carlo(lam: complex, samples: int = 4_000_000, seed: int = 12345) -> IntegralResult:
    """Plain Monte Carlo over the unit square using the P-formula for ``x``."""
    params = uniformize(lam)
    rng = np.random.default_rng(seed)
    total, total_sq, done = 0.0, 0.0, 0
    while done < samples:
        m = min(1 << 18, samples - done)
        s, t = rng.random(m) - 0.5, rng.random(m) - 0.5
        vals = np.log(np.abs(params.x_at(math.pi * (s + t * params.tau))))
        total += float(vals.sum())
        total_sq += float((vals * vals).sum())
        done += m
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    return IntegralResult(mean, math.sqrt(var / samples), samples, "monte-carlo")


def regulator_closed_form(lam: complex) -> float:
    """``2 log|pi theta_a(0) theta_b(0) / P1|`` with ``theta_a, theta_b`` nonvanishing at the zero of x."""
    p = uniformize(lam)
    consts = theta_constants(p.tau)
    others = [k for k in (2, 3, 4) if k != p.zero_kind]
    return 2 * math.log(math.pi * abs(consts[others[0] - 2] * consts[others[1] - 2]) / abs(p.periods[0]))


def regulator_from_symmetry(lam: complex) -> float:
    """``log|lam| / 2``, forced by the 2-torsion translation ``x -> lam/x``."""
    return math.log(abs(complex(lam))) / 2


@dataclass(frozen=True)
class FunctionalEquationCheck:
    lam: complex
    forward: IntegralResult
    inverse: IntegralResult
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.residual < 5 * self.tol

    def to_json(self) -> dict:
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "I": self.forward.value,
            "I_inverse": self.inverse.value,
            "err": max(self.forward.error, self.inverse.error),
            "residual": self.residual,
            "pass": self.passed,
        }


def functional_equation_check(lam: complex, tol: float = 1e-3) -> FunctionalEquationCheck:
    """``|I(lam) - I(1/lam) - log|lam||`` against ``5 tol``."""
    lam = complex(lam)
    a = regulator_integral(lam, tol)
    b = regulator_integral(1 / lam, tol)
    return FunctionalEquationCheck(lam, a, b, abs(a.value - b.value - math.log(abs(lam))), tol)
