"""Claim-by-claim verification runs behind ``cycleforge verify``.

Each claim has a stable id and checks one computable assertion end to end.
``fast=True`` shrinks the ranges (n <= 4, genus 2) so the whole suite runs in
seconds; the full ranges are the default.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import __version__
from . import cyclespace as cs
from . import ellreg, fourconfig, hurwitz, hypcheck
from .permcore import Perm, symmetric_group

SUITE_VERSION = "1"
PROPERTY_SEED = 20240611


@dataclass
class ClaimResult:
    claim_id: str
    criterion: int
    anchor: str
    status: str  # "pass" | "fail" | "skipped"
    artifacts: dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "claim_id": self.claim_id,
            "criterion": self.criterion,
            "anchor": self.anchor,
            "status": self.status,
            "artifacts": self.artifacts,
        }
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class VerificationReport:
    fast: bool
    claims: list[ClaimResult]
    suite_version: str = SUITE_VERSION
    code_version: str = __version__

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.claims)

    def to_json(self, timing: bool = True) -> dict:
        return {
            "suite_version": self.suite_version,
            "code_version": self.code_version,
            "fast": self.fast,
            "claims": [c.to_json(timing) for c in self.claims],
            "pass": self.passed,
        }


# ---------------------------------------------------------------------------
# claims


def claim_hurwitz_components(fast: bool, cap: int = hurwitz.DEFAULT_CAP) -> tuple[bool, dict]:
    genera = (2,) if fast else (2, 3)
    ok, out = True, {}
    for g in genera:
        report = hurwitz.hurwitz_components(g, cap)
        decks = sorted(o.deck_order for o in report.orbits)
        good = len(report.orbits) == 2 and decks == [1, 2] and all(o.genus == g for o in report.orbits)
        ok &= good
        out[f"genus_{g}"] = {
            "class_count": report.class_count,
            "orbit_sizes": [o.size for o in report.orbits],
            "deck_orders": [o.deck_order for o in report.orbits],
            "burnside_count": hurwitz.burnside_class_count(report.profile),
            "ok": good,
        }
        ok &= out[f"genus_{g}"]["burnside_count"] == report.class_count
    return ok, out


def claim_move_replay(fast: bool) -> tuple[bool, dict]:
    ok, out = True, {}
    for n in (8, 10):
        for name, start, moves, expected in (
            ("type_iii", hurwitz.type_iii_start, hurwitz.type_iii_moves, hurwitz.type_iii_expected),
            ("type_ii", hurwitz.type_ii_start, hurwitz.type_ii_moves, hurwitz.type_ii_expected),
        ):
            got = hurwitz.replay_sequence(start(n), moves(n))
            good = got == expected(n)
            ok &= good
            out[f"{name}_n{n}"] = {"result": got.to_json(), "ok": good}
    return ok, out


def claim_degeneration(fast: bool) -> tuple[bool, dict]:
    ok, out = True, {}
    for n in (8, 10, 12):
        comps = hurwitz.degenerate_merge(hurwitz.bad_fibre_tuple(n), 1)
        summary = sorted(
            ((c.genus, len(c.points), c.branch_positions) for c in comps),
            key=lambda x: (-x[0], x[2]),
        )
        expected = [
            ((n - 4) // 2, 2, tuple(range(1, n - 1))),
            (0, 2, (n - 3, n - 2)),
        ]
        good = summary == expected
        ok &= good
        out[f"n{n}"] = {
            "components": [
                {"genus": g, "degree": d, "branch_positions": list(b)} for g, d, b in summary
            ],
            "ok": good,
        }
    return ok, out


def brute_force_toy_classes() -> tuple[int, int]:
    """(raw connected product-one tuples, conjugation classes) over all 3^4 transposition tuples."""
    transpositions = [p for p in symmetric_group(3) if p.cycle_type().parts == (2, 1)]
    raw = []
    for combo in itertools.product(transpositions, repeat=4):
        try:
            t = hurwitz.HurwitzTuple(combo)
        except ValueError:
            continue
        if t.is_connected():
            raw.append(t)
    classes = {hurwitz.canonical_form_bruteforce(t) for t in raw}
    return len(raw), len(classes)


def claim_toy_oracle(fast: bool) -> tuple[bool, dict]:
    profile = hurwitz.BranchProfile.from_counts(3, {(2, 1): 4})
    table = hurwitz.enumerate_classes(profile)
    report = hurwitz.orbit_partition(table)
    raw, brute = brute_force_toy_classes()
    ok = len(table) == 4 and brute == 4 and len(report.orbits) == 1
    ok &= hurwitz.burnside_class_count(profile) == 4
    return ok, {
        "classes": len(table),
        "brute_force_classes": brute,
        "raw_tuples_checked": 3**4,
        "raw_connected_product_one": raw,
        "orbits": len(report.orbits),
    }


def claim_cycle_space(fast: bool) -> tuple[bool, dict]:
    top = 4 if fast else 12
    dims = {n: cs.cycle_space_dimension(n) for n in range(1, top + 1)}
    ok = all(d >= 1 for d in dims.values())
    ok &= all(dims[n] == 1 for n in (1, 2) if n in dims)
    ok &= all(dims[n] >= 2 for n in range(3, 7) if n in dims)
    oracle = {}
    for n in range(1, 5):
        same = cs.boundary_matrix(n).entries == cs.brute_force_matrix(n).entries
        oracle[n] = same
        ok &= same
    return ok, {
        "kernel_dims": {str(n): d for n, d in dims.items()},
        "matches_brute_force": {str(n): v for n, v in oracle.items()},
    }


def claim_proof_counts(fast: bool) -> tuple[bool, dict]:
    top = 4 if fast else 12
    ok, out = True, {}
    for n in range(4, top + 1):
        fr = cs.fiber_counts(n)
        matches = set(fr.singleton_p2) == cs.exceptional_singleton_family(n)
        good = matches and fr.singleton_p2_count <= n
        ok &= good
        out[f"n{n}"] = {"singleton_p2": fr.singleton_p2_count, "families_match": matches}
    bounds = {}
    for n in range(6, 13):
        value = 1 + sum(cs.partition_count(i) for i in range(n // 2 + 1))
        bounds[str(n)] = value
        ok &= value > n
    out["singleton_p1_bound"] = bounds
    return ok, out


def claim_hypothesis(fast: bool) -> tuple[bool, dict]:
    top = 4 if fast else 6
    ok, out = True, {}
    for n in range(2, top + 1):
        rep = hypcheck.hypothesis_check(n)
        ok &= rep.passed
        out[f"n{n}"] = rep.to_json()
    return ok, out


FE_LAMBDAS = (2, 4, 10, 3 + 1j)


def claim_regulator(fast: bool, tol: float = 1e-3) -> tuple[bool, dict]:
    ok, out = True, {}
    for lam in FE_LAMBDAS:
        chk = ellreg.functional_equation_check(lam, tol)
        ok &= chk.passed
        out[_lam_label(lam)] = {"residual": _round(chk.residual), "pass": chk.passed}
    i2 = ellreg.regulator_integral(2, tol).value
    ih = ellreg.regulator_integral(0.5, tol).value
    gap = abs(i2 - ih)
    ok &= gap > 0.69 - 5 * tol
    out["nonconstancy_gap"] = _round(gap)
    return ok, out


def claim_four_config(fast: bool) -> tuple[bool, dict]:
    found = fourconfig.search_configs()
    if not found:
        return False, {"found": False}
    cfg = found[0]
    cond = fourconfig.check_conditions(cfg)
    total = fourconfig.cubical_boundary(cfg)
    singles = [len(fourconfig.curve_boundary(cfg, i)) for i in range(1, 5)]
    ok = (
        cfg.a1 * cfg.a2 == -(cfg.b1 * cfg.b2)
        and cond.plus
        and cond.f_zero_infinity
        and all(cond.star)
        and not total
        and all(s > 0 for s in singles)
    )
    return ok, {
        "config": cfg.to_json(),
        "conditions": cond.to_json(),
        "boundary_terms": len(total),
        "single_curve_terms": singles,
    }


# ---------------------------------------------------------------------------
# property suites


def _random_tuple(rng: np.random.Generator, table: hurwitz.ClassTable) -> hurwitz.HurwitzTuple:
    t = table.tuple_at(int(rng.integers(len(table))))
    g = symmetric_group(t.degree)[int(rng.integers(math.factorial(t.degree)))]
    return t.conjugated(g)


def property_moves(cases: int = 1000, seed: int = PROPERTY_SEED) -> int:
    """Failures among random move/inverse checks on genus-2 and sextic-outline tuples."""
    rng = np.random.default_rng(seed)
    tables = [
        hurwitz.enumerate_classes(hurwitz.BranchProfile.hyperelliptic_pair(2)),
        hurwitz.enumerate_classes(hurwitz.BranchProfile.from_counts(3, {(2, 1): 6})),
    ]
    failures = 0
    for case in range(cases):
        t = _random_tuple(rng, tables[case % 2])
        i = int(rng.integers(1, t.n))
        fwd = hurwitz.hurwitz_move(t, i, "forward")
        back = hurwitz.hurwitz_move(t, i, "inverse")
        good = (
            hurwitz.hurwitz_move(fwd, i, "inverse") == t
            and hurwitz.hurwitz_move(back, i, "forward") == t
            and fwd.cycle_types() == t.cycle_types()
            and fwd.is_connected() == t.is_connected()
            and hurwitz.genus_of(fwd) == hurwitz.genus_of(t)
            and hurwitz.canonical_form(fwd.conjugated(Perm.from_cycles([(1, 2)], t.degree)))
            == hurwitz.canonical_form(fwd)
        )
        failures += not good
    return failures


def _random_symbol_vector(rng: np.random.Generator, n: int) -> hypcheck.KSymbolVector:
    v = hypcheck.KSymbolVector()
    for _ in range(int(rng.integers(0, 6))):
        kind = ("G", "K", "A")[int(rng.integers(3))]
        c = (tuple(int(x) for x in rng.integers(-2, 3, n - 1)), int(rng.integers(2)))
        coeff = Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))
        if kind == "K":
            v.add(("K", c), coeff)
        elif kind == "A":
            v.add(("A", 2 * int(rng.integers(0, 3)) + 1, c), coeff)
        else:
            v.add(("G", int(rng.integers(1, 6)), c), coeff)
    return v


def property_reduce(cases: int = 500, seed: int = PROPERTY_SEED) -> int:
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(cases):
        v, w = _random_symbol_vector(rng, 4), _random_symbol_vector(rng, 4)
        a = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
        for tt in (False, True):
            r = hypcheck.reduce(v, tt)
            good = hypcheck.reduce(r, tt) == r
            good &= hypcheck.reduce(v.scale(a) + w, tt) == r.scale(a) + hypcheck.reduce(w, tt)
            good &= not r.part("G")
            failures += not good
    return failures


def property_canonical_invariance(table: hurwitz.ClassTable | None = None) -> tuple[int, int]:
    """(classes checked, failures): every conjugate of every class canonicalises back to it."""
    if table is None:
        table = hurwitz.enumerate_classes(hurwitz.BranchProfile.hyperelliptic_pair(2))
    tb = hurwitz._tables(table.profile.degree)
    digits = table.digits(np.arange(len(table)))
    failures = np.zeros(len(table), dtype=bool)
    for g in range(tb.size):
        keys, stab = hurwitz._canonical(tb, tb.conj[g][digits])
        failures |= (keys != table.keys) | (stab != table.stabilizers)
    return len(table), int(failures.sum())


def property_quadrature(tol: float = 1e-3) -> tuple[int, int]:
    """(runs, failures): the reported two-resolution error bounds the closed-form discrepancy."""
    lams = list(FE_LAMBDAS) + [1 / complex(x) for x in FE_LAMBDAS] + [-1, 1j, 2 + 5j]
    failures = 0
    for lam in lams:
        r = ellreg.regulator_integral(lam, tol)
        failures += not (abs(r.value - ellreg.regulator_closed_form(lam)) <= r.error and r.error <= tol)
    return len(lams), failures


def claim_properties(fast: bool) -> tuple[bool, dict]:
    moves = property_moves()
    red = property_reduce()
    checked, canon = property_canonical_invariance()
    runs, quad = property_quadrature()
    ok = moves == 0 and red == 0 and canon == 0 and quad == 0
    return ok, {
        "move_cases": 1000,
        "move_failures": moves,
        "reduce_cases": 500,
        "reduce_failures": red,
        "canonical_classes": checked,
        "canonical_failures": canon,
        "quadrature_runs": runs,
        "quadrature_failures": quad,
    }


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Claim:
    claim_id: str
    criterion: int
    anchor: str
    run: Callable[[bool], tuple[bool, dict]]


CLAIMS = (
    Claim("hurwitz-two-components", 1, "hurwitz space of the hyperelliptic pair profile has two components", claim_hurwitz_components),
    Claim("hurwitz-move-replay", 2, "explicit move composites reproduce their output tuples", claim_move_replay),
    Claim("hurwitz-degeneration", 3, "colliding two branch points splits the cover into genus (n-4)/2 and 0", claim_degeneration),
    Claim("hurwitz-toy-oracle", 4, "degree-3 cover with four simple branch points", claim_toy_oracle),
    Claim("cycle-space-rank", 5, "invariant cycle space rank and boundary matrix oracle", claim_cycle_space),
    Claim("fiber-counts", 6, "singleton fibre classification and counting bound", claim_proof_counts),
    Claim("specialization-check", 7, "specialised cycles are proportional to the basic cycle", claim_hypothesis),
    Claim("regulator-functional-equation", 8, "I(lam) - I(1/lam) = log|lam|", claim_regulator),
    Claim("genus0-four-configuration", 9, "gaussian-rational four-configuration with vanishing boundary", claim_four_config),
    Claim("property-suites", 10, "moves, reduction, canonical forms and quadrature properties", claim_properties),
)

CLAIM_IDS = tuple(c.claim_id for c in CLAIMS)


def resolve_claims(selected: list[str] | None) -> list[Claim]:
    if not selected:
        return list(CLAIMS)
    by_key = {c.claim_id: c for c in CLAIMS}
    by_key.update({str(c.criterion): c for c in CLAIMS})
    out = []
    for s in selected:
        if s not in by_key:
            raise KeyError(f"unknown claim {s!r}; known: {', '.join(CLAIM_IDS)}")
        if by_key[s] not in out:
            out.append(by_key[s])
    return sorted(out, key=lambda c: c.criterion)


def run_claims(selected: list[str] | None = None, fast: bool = False, cache=None) -> VerificationReport:
    results = []
    for claim in resolve_claims(selected):
        start = time.perf_counter()

        def compute(claim=claim):
            ok, artifacts = claim.run(fast)
            return {"ok": bool(ok), "artifacts": artifacts}

        if cache is not None:
            payload = cache.cached("verify", {"claim": claim.claim_id, "fast": fast}, compute)
        else:
            payload = _jsonable(compute())
        results.append(
            ClaimResult(
                claim.claim_id,
                claim.criterion,
                claim.anchor,
                "pass" if payload["ok"] else "fail",
                payload["artifacts"],
                time.perf_counter() - start,
            )
        )
    return VerificationReport(fast, results)


def _jsonable(obj):
    import json

    return json.loads(json.dumps(obj, sort_keys=True))


def _round(x: float) -> float:
    # keep reports byte-stable across platforms
    return float(f"{x:.6e}")


def _lam_label(lam) -> str:
    z = complex(lam)
    return f"{z.real:g}" if not z.imag else f"{z.real:g}{z.imag:+g}i"
