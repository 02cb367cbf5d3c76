"""Exact checks for the genus-0 higher 4-configuration over Q(i).

Data: ``a1, a2, b1, b2`` with ``a1 a2 = -b1 b2``, the function
``f = (x-a1)^2 (x-a2)^2 / ((x-b1)^2 (x-b2)^2)`` and
``h1 = c1 ((x-u)/(x+u))^2``, ``h2 = c2 ((x-iu)/(x+iu))^2`` (``u = 1`` unless the
whole configuration is rescaled).  The constants ``c_k`` stay formal: they
only enter through ``c_k^4 (r_k(a1) r_k(a2))^2 = 1`` where ``h_k = c_k r_k``, and
every quantity is kept as ``q * c1^e1 * c2^e2`` with ``0 <= e_k < 4``.

The four curves are ``x -> (alpha_i(x), f^s, h1^(2s), h2^(2s))`` with
``alpha_1 = x/a1``, ``alpha_2 = a2/x``, ``alpha_3 = -x/a1``, ``alpha_4 = -a2/x``
and ``s = -1`` for odd ``i``, ``+1`` for even ``i``.  The boundary uses faces
``j = 2, 3, 4`` (the three cube coordinates) with sign ``(-1)^j`` for the
zero face and ``-(-1)^j`` for the infinity face, each point weighted by the
order of the zero or pole.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator


class ConfigError(ValueError):
    pass


class DegenerateFace(ValueError):
    pass


# ---------------------------------------------------------------------------
# Gaussian rationals


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, x) -> GaussianRational:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real).limit_denominator(10**12), Fraction(x.imag).limit_denominator(10**12))
        if isinstance(x, str):
            return cls.parse(x)
        return cls(Fraction(x))

    @classmethod
    def parse(cls, text: str) -> GaussianRational:
        """Accepts forms like ``3``, ``-1/2``, ``2i``, ``1/3-2/5i``, ``i``."""
        t = text.replace(" ", "").replace("*", "").replace("j", "i")
        if not t:
            raise ValueError("empty number")
        if not t.endswith("i"):
            return cls(Fraction(t))
        body = t[:-1]
        # split at the last sign that is not at the start
        cut = max(body.rfind("+", 1), body.rfind("-", 1))
        if cut > 0 and body[cut - 1] not in "/":
            real, imag = body[:cut], body[cut:]
        else:
            real, imag = "0", body
        if imag in ("", "+"):
            imag = "1"
        elif imag == "-":
            imag = "-1"
        return cls(Fraction(real), Fraction(imag))

    def __add__(self, o) -> GaussianRational:
        o = GaussianRational.of(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o) -> GaussianRational:
        return self + (-GaussianRational.of(o))

    def __rsub__(self, o) -> GaussianRational:
        return GaussianRational.of(o) - self

    def __mul__(self, o) -> GaussianRational:
        o = GaussianRational.of(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> GaussianRational:
        n = self.norm()
        if not n:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, o) -> GaussianRational:
        return self * GaussianRational.of(o).inverse()

    def __rtruediv__(self, o) -> GaussianRational:
        return GaussianRational.of(o) * self.inverse()

    def __pow__(self, k: int) -> GaussianRational:
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o) -> bool:
        try:
            o = GaussianRational.of(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def height(self) -> int:
        return max(abs(self.re.numerator), self.re.denominator, abs(self.im.numerator), self.im.denominator)

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        im = "" if self.im == 1 else "-" if self.im == -1 else str(self.im)
        if not self.re:
            return f"{im}i"
        sign = "" if self.im < 0 else "+"
        return f"{self.re}{sign}{im}i"

    def __repr__(self) -> str:
        return f"GaussianRational({self})"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def gaussian_sqrt(z: GaussianRational) -> GaussianRational | None:
    """An exact square root in Q(i), or None."""
    if not z:
        return ZERO
    r = _rational_sqrt(z.norm())
    if r is None:
        return None
    for u2 in ((z.re + r) / 2, (z.re - r) / 2):
        u = _rational_sqrt(u2) if u2 > 0 else None
        if u:
            w = GaussianRational(u, z.im / (2 * u))
            if w * w == z:
                return w
    v = _rational_sqrt((r - z.re) / 2)
    if v is not None:
        w = GaussianRational(0, v)
        if w * w == z:
            return w
    return None


# ---------------------------------------------------------------------------
# values carrying formal constants


@dataclass(frozen=True)
class CValue:
    """``coeff * c1^e[0] * c2^e[1]`` reduced with ``c_k^4 = 1/v_k`` (``0 <= e_k < 4``)."""

    coeff: GaussianRational
    e: tuple[int, int] = (0, 0)

    def is_one(self) -> bool:
        return self.e == (0, 0) and self.coeff == ONE

    def to_json(self) -> str:
        parts = [f"({self.coeff})"]
        for k, e in enumerate(self.e, start=1):
            if e:
                parts.append(f"c{k}^{e}")
        return "*".join(parts)


@dataclass(frozen=True)
class CRing:
    v: tuple[GaussianRational, GaussianRational]  # c_k^4 * v_k = 1

    def make(self, coeff: GaussianRational, e1: int = 0, e2: int = 0) -> CValue:
        for k, e in enumerate((e1, e2)):
            q, r = divmod(e, 4)
            coeff = coeff * self.v[k] ** (-q)
        return CValue(coeff, (e1 % 4, e2 % 4))

    def mul(self, a: CValue, b: CValue) -> CValue:
        return self.make(a.coeff * b.coeff, a.e[0] + b.e[0], a.e[1] + b.e[1])

    def power(self, a: CValue, k: int) -> CValue:
        return self.make(a.coeff**k, a.e[0] * k, a.e[1] * k)


# ---------------------------------------------------------------------------
# rational maps with factored numerator and denominator


@dataclass(frozen=True)
class RationalMap:
    """``const * prod (x - root)^mult``; mult < 0 for poles."""

    const: CValue
    factors: tuple[tuple[GaussianRational, int], ...]

    @classmethod
    def make(cls, const: CValue, factors) -> RationalMap:
        acc: dict[GaussianRational, int] = defaultdict(int)
        for root, m in factors:
            acc[GaussianRational.of(root)] += m
        items = tuple(sorted(((r, m) for r, m in acc.items() if m), key=lambda rm: (rm[0].re, rm[0].im)))
        return cls(const, items)

    def order_at_infinity(self) -> int:
        return -sum(m for _, m in self.factors)

    def power(self, ring: CRing, k: int) -> RationalMap:
        return RationalMap(ring.power(self.const, k), tuple((r, m * k) for r, m in self.factors))

    def is_constant(self) -> bool:
        return not self.factors

    def __call__(self, ring: CRing, x: GaussianRational) -> CValue:
        val = ONE
        for r, m in self.factors:
            d = x - r
            if not d:
                raise ZeroDivisionError(f"map has a zero or pole at {x}")
            val = val * d**m
        return ring.make(self.const.coeff * val, *self.const.e)

    def value_at_infinity(self, ring: CRing) -> CValue:
        if self.order_at_infinity():
            raise ZeroDivisionError("map has a zero or pole at infinity")
        return self.const

    def degree(self) -> int:
        return sum(m for _, m in self.factors if m > 0)


# ---------------------------------------------------------------------------
# the configuration


@dataclass(frozen=True)
class FourConfig:
    a1: GaussianRational
    a2: GaussianRational
    b1: GaussianRational
    b2: GaussianRational
    u: GaussianRational
    ring: CRing
    f: RationalMap
    h1: RationalMap
    h2: RationalMap

    def curves(self) -> list[list[RationalMap]]:
        """Coordinate maps ``[alpha_i, f^s, h1^(2s), h2^(2s)]`` for i = 1..4."""
        a1, a2 = self.a1, self.a2
        one = self.ring.make(ONE)
        alphas = [
            RationalMap.make(self.ring.make(a1.inverse()), [(ZERO, 1)]),
            RationalMap.make(self.ring.make(a2), [(ZERO, -1)]),
            RationalMap.make(self.ring.make(-a1.inverse()), [(ZERO, 1)]),
            RationalMap.make(self.ring.make(-a2), [(ZERO, -1)]),
        ]
        out = []
        for i in range(1, 5):
            s = -1 if i % 2 else 1
            out.append(
                [
                    alphas[i - 1],
                    self.f.power(self.ring, s),
                    self.h1.power(self.ring, 2 * s),
                    self.h2.power(self.ring, 2 * s),
                ]
            )
        del one
        return out

    def to_json(self) -> dict:
        return {
            "a1": str(self.a1),
            "a2": str(self.a2),
            "b1": str(self.b1),
            "b2": str(self.b2),
            "u": str(self.u),
            "c1^4": str(self.ring.v[0].inverse()),
            "c2^4": str(self.ring.v[1].inverse()),
        }


def _r(x: GaussianRational, p: GaussianRational) -> GaussianRational:
    return ((x - p) / (x + p)) ** 2


def build_config(a1, a2, b1, b2, u=1) -> FourConfig:
    a1, a2, b1, b2, u = (GaussianRational.of(z) for z in (a1, a2, b1, b2, u))
    if not u:
        raise ConfigError("scale u must be nonzero")
    pts = [a1, a2, b1, b2]
    if len(set(pts)) < 4:
        raise ConfigError("a1, a2, b1, b2 must be distinct")
    special = {u, -u, I * u, -I * u}
    for name, z in zip(("a1", "a2", "b1", "b2"), pts):
        if not z:
            raise ConfigError(f"{name} must be nonzero")
        if z in special:
            raise ConfigError(f"{name} must avoid the zeros and poles of h1, h2")
    if a1 * a2 != -(b1 * b2):
        raise ConfigError("divisor class condition a1*a2 = -b1*b2 fails")
    iu = I * u
    v1 = (_r(a1, u) * _r(a2, u)) ** 2
    v2 = (_r(a1, iu) * _r(a2, iu)) ** 2
    ring = CRing((v1, v2))
    one = ring.make(ONE)
    f = RationalMap.make(one, [(a1, 2), (a2, 2), (b1, -2), (b2, -2)])
    h1 = RationalMap.make(ring.make(ONE, 1, 0), [(u, 2), (-u, -2)])
    h2 = RationalMap.make(ring.make(ONE, 0, 1), [(iu, 2), (-iu, -2)])
    return FourConfig(a1, a2, b1, b2, u, ring, f, h1, h2)


@dataclass
class ConditionReport:
    plus_real: bool
    plus_imag: bool
    star: tuple[bool, bool]
    f_zero_infinity: bool
    normalization: tuple[str, str]
    details: dict = field(default_factory=dict)

    @property
    def plus(self) -> bool:
        return self.plus_real and self.plus_imag

    def to_json(self) -> dict:
        return {
            "plus": self.plus,
            "f(u)=f(-u)": self.plus_real,
            "f(iu)=f(-iu)": self.plus_imag,
            "star": list(self.star),
            "f(0)=f(inf)=1": self.f_zero_infinity,
            "c^4": list(self.normalization),
        }


def check_conditions(cfg: FourConfig) -> ConditionReport:
    """Conditions (+), (*) exactly, and the value of ``c_k^4`` fixed by (**)."""
    ring, u, iu = cfg.ring, cfg.u, I * cfg.u

    def fv(x):
        return cfg.f(ring, x).coeff

    plus_real = fv(u) == fv(-u)
    plus_imag = fv(iu) == fv(-iu)
    star = tuple(
        (_r(cfg.a1, p) * _r(cfg.a2, p)) ** 2 == (_r(cfg.b1, p) * _r(cfg.b2, p)) ** 2 for p in (u, iu)
    )
    f0 = fv(ZERO)
    finf = cfg.f.value_at_infinity(ring).coeff
    return ConditionReport(
        plus_real,
        plus_imag,
        star,
        f0 == ONE and finf == ONE,
        tuple(str(v.inverse()) for v in ring.v),
    )


@dataclass(frozen=True)
class BoundaryTerm:
    """A point on face ``j``; the zero and infinity ends land on the same face."""

    face: int  # cube coordinate 2, 3 or 4
    point: tuple[CValue, ...]  # alpha value followed by the two other cube coordinates

    def to_json(self) -> dict:
        return {"face": self.face, "point": [c.to_json() for c in self.point]}


@dataclass(frozen=True)
class Incidence:
    curve: int
    face: int
    end: str  # "0" or "inf"
    x: GaussianRational
    point: tuple[CValue, ...]
    weight: int  # signed: (-1)^j for the zero end, -(-1)^j for infinity, times the order

    def to_json(self) -> dict:
        return {
            "curve": self.curve,
            "face": self.face,
            "end": self.end,
            "x": str(self.x),
            "point": [c.to_json() for c in self.point],
            "weight": self.weight,
        }


def curve_incidences(cfg: FourConfig, i: int) -> list[Incidence]:
    """Every meeting of the i-th curve (1-based) with a face, with its signed weight."""
    coords = cfg.curves()[i - 1]
    out: list[Incidence] = []
    for j in (2, 3, 4):
        cmap = coords[j - 1]
        if cmap.is_constant():
            if cmap.const.is_one():
                raise DegenerateFace(f"curve {i}: coordinate {j} is identically 1")
            continue
        if cmap.order_at_infinity():
            raise DegenerateFace(f"curve {i}: coordinate {j} has a zero or pole at infinity")
        for root, m in cmap.factors:
            others = []
            for k, other in enumerate(coords, start=1):
                if k == j:
                    continue
                try:
                    val = other(cfg.ring, root)
                except ZeroDivisionError:
                    raise DegenerateFace(
                        f"curve {i}: coordinates {j} and {k} both degenerate at x = {root}"
                    ) from None
                if k > 1 and val.is_one():
                    raise DegenerateFace(f"curve {i}: face point at x = {root} has coordinate {k} equal to 1")
                others.append(val)
            end = "0" if m > 0 else "inf"
            sign = (-1) ** j * (1 if m > 0 else -1)
            out.append(Incidence(i, j, end, root, tuple(others), sign * abs(m)))
    return out


def curve_boundary(cfg: FourConfig, i: int) -> dict[BoundaryTerm, int]:
    """Signed boundary of the i-th curve (1-based)."""
    out: dict[BoundaryTerm, int] = defaultdict(int)
    for inc in curve_incidences(cfg, i):
        out[BoundaryTerm(inc.face, inc.point)] += inc.weight
    return {t: c for t, c in out.items() if c}


def cubical_boundary(cfg: FourConfig, curves: Iterator[int] | None = None) -> dict[BoundaryTerm, int]:
    """Aggregate signed boundary of the chosen curves (all four by default)."""
    total: dict[BoundaryTerm, int] = defaultdict(int)
    for i in curves if curves is not None else range(1, 5):
        for t, c in curve_boundary(cfg, i).items():
            total[t] += c
    return {t: c for t, c in total.items() if c}


def boundary_incidences(cfg: FourConfig) -> list[Incidence]:
    return [inc for i in range(1, 5) for inc in curve_incidences(cfg, i)]


# ---------------------------------------------------------------------------
# search


def small_gaussians(height: int) -> Iterator[GaussianRational]:
    """Nonzero Gaussian rationals ``(p + q i)/d`` with ``|p|, |q| <= height``, ``1 <= d <= height``."""
    seen = set()
    for d in range(1, height + 1):
        for p in range(-height, height + 1):
            for q in range(-height, height + 1):
                if p == q == 0:
                    continue
                z = GaussianRational(Fraction(p, d), Fraction(q, d))
                if z not in seen:
                    seen.add(z)
                    yield z


def _roots(s: GaussianRational, p: GaussianRational) -> tuple[GaussianRational, GaussianRational] | None:
    """Roots of ``x^2 - s x + p`` in Q(i)."""
    r = gaussian_sqrt(s * s - 4 * p)
    if r is None:
        return None
    return (s + r) / 2, (s - r) / 2


def _candidates(pi: GaussianRational) -> Iterator[tuple[GaussianRational, ...]]:
    """Data with ``a1 a2 = pi``, ``b1 b2 = -pi`` solving both halves of (+).

    Each half of (+) is linear in ``b1 + b2`` once ``a1 + a2`` is fixed, up to a
    sign; the non-symmetric branches force ``a1 + a2`` as below.
    """
    one = ONE
    for sa, sb in (
        (I * (one + pi), I * (one - pi)),
        (-I * (one + pi), -I * (one - pi)),
        (one - pi, one + pi),
        (pi - one, -(one + pi)),
    ):
        ra, rb = _roots(sa, pi), _roots(sb, -pi)
        if ra and rb:
            yield ra + rb


def search_configs(height: int = 8, limit: int = 1, symmetric_fallback: bool = True) -> list[FourConfig]:
    """Find configurations satisfying ``a1 a2 = -b1 b2`` and (+), smallest height first.

    Non-symmetric solutions need ``1 + 6p + p^2`` and ``1 - 6p + p^2`` to be
    squares in Q(i) for ``p = a1 a2``; that is a genus-1 curve, and when no
    point of it within the height bound gives valid data the symmetric family
    is returned instead.
    """
    found: list[FourConfig] = []
    keys = set()
    pis = sorted(small_gaussians(height), key=lambda z: (z.height(), z.re, z.im))
    for pi in pis:
        for data in _candidates(pi):
            try:
                cfg = build_config(*data)
            except ConfigError:
                continue
            rep = check_conditions(cfg)
            if not rep.plus:
                continue
            key = tuple(sorted((str(cfg.a1), str(cfg.a2)))) + tuple(sorted((str(cfg.b1), str(cfg.b2))))
            if key in keys:
                continue
            keys.add(key)
            found.append(cfg)
            if len(found) >= limit:
                return found
    if not found and symmetric_fallback:
        # a2 = -a1, b = (i a1, -i a1): both halves of (+) hold since f is even
        for a in sorted(small_gaussians(height), key=lambda z: (z.height(), z.re, z.im)):
            try:
                cfg = build_config(a, -a, I * a, -I * a)
            except ConfigError:
                continue
            if check_conditions(cfg).plus:
                found.append(cfg)
                if len(found) >= limit:
                    break
    return found


def search_violating(height: int = 3) -> FourConfig:
    """A configuration with ``a1 a2 = -b1 b2`` on which (+) fails (negative control)."""
    for a1, a2, b1 in itertools.product(list(small_gaussians(height))[:40], repeat=3):
        b2 = -(a1 * a2) / b1
        try:
            cfg = build_config(a1, a2, b1, b2)
        except ConfigError:
            continue
        rep = check_conditions(cfg)
        if not rep.plus and not all(rep.star):
            return cfg
    raise RuntimeError("no violating configuration found")
