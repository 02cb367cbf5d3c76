"""``cycleforge`` command line: one binary, one subcommand per module, plus ``verify``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import __version__
from .cache import ResultCache

log = logging.getLogger("cycleforge")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    params: dict[str, Any] = field(default_factory=dict)
    cache_dir: str | None = None
    use_cache: bool = True
    threads: int = 1
    seed: int = 20240611

    def validate(self) -> None:
        p = self.params
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")
        if "genus" in p and p["genus"] is not None:
            if p["genus"] < 1:
                raise UsageError("--genus must be >= 1")
            if p["genus"] >= 4 and not p.get("extended"):
                raise UsageError("genus >= 4 needs --extended (and a larger --cap)")
        if "n" in p:
            lo = 2 if self.subcommand == "hypcheck" else 1
            if p["n"] < lo:
                raise UsageError(f"--n must be >= {lo}")
        if p.get("cap") is not None and p["cap"] < 1:
            raise UsageError("--cap must be positive")
        if p.get("tol") is not None and not (1e-6 <= p["tol"] < 1):
            raise UsageError("--tol must lie in [1e-6, 1)")


# ---------------------------------------------------------------------------
# output helpers


def dump_json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def emit(obj: Any, out: str | None) -> None:
    text = dump_json(obj)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cache(cfg: RunConfig) -> ResultCache | None:
    return ResultCache(cfg.cache_dir) if cfg.use_cache else None


def parse_lambda(text: str) -> complex:
    parts = [s.strip() for s in text.split(",")]
    if len(parts) > 2 or not parts[0]:
        raise UsageError(f"--lambda expects RE or RE,IM, got {text!r}")
    try:
        vals = [float(s) for s in parts]
    except ValueError as exc:
        raise UsageError(f"--lambda: {exc}") from None
    return complex(vals[0], vals[1] if len(vals) == 2 else 0.0)


def parse_moves(text: str) -> list[tuple[int, str]]:
    """``"3,2,-4"``: positive for a forward move at that position, negative for an inverse one."""
    out = []
    for tok in text.replace(" ", "").split(","):
        if not tok:
            continue
        try:
            k = int(tok)
        except ValueError:
            raise UsageError(f"bad move {tok!r}") from None
        if k == 0:
            raise UsageError("move positions are 1-based")
        out.append((abs(k), "forward" if k > 0 else "inverse"))
    return out


def parse_tuple(text: str, degree: int | None):
    from .hurwitz import HurwitzTuple, named_perm
    from .permcore import Perm

    items = [s.strip() for s in text.split(";") if s.strip()]
    if len(items) == 1 and "(" not in items[0]:
        items = [s.strip() for s in items[0].split(",") if s.strip()]
    if not items:
        raise UsageError("empty --tuple")
    named = all("(" not in s for s in items)
    if degree is None:
        if named:
            degree = 4
        else:
            nums = [int(x) for s in items for x in s.replace("(", " ").replace(")", " ").replace(",", " ").split()]
            degree = max(nums, default=1)
    try:
        if named:
            return HurwitzTuple(tuple(named_perm(s, degree) for s in items))
        return HurwitzTuple(tuple(Perm.parse(s, degree) for s in items))
    except ValueError as exc:
        raise UsageError(f"--tuple: {exc}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_hurwitz_components(cfg: RunConfig) -> int:
    from .hurwitz import BranchProfile, enumerate_classes, orbit_partition

    p = cfg.params
    if p["profile"]:
        with open(p["profile"], encoding="utf-8") as fh:
            profile = BranchProfile.from_json(json.load(fh))
    elif p["genus"] is not None:
        profile = BranchProfile.hyperelliptic_pair(p["genus"])
    else:
        raise UsageError("give --genus or --profile")

    def compute():
        table = enumerate_classes(profile, True, p["cap"])
        return orbit_partition(table, checkpoint=p["checkpoint"]).to_json()

    cache = _cache(cfg)
    params = {"profile": profile.digest(), "cap": p["cap"]}
    report = cache.cached("hurwitz.components", params, compute) if cache else compute()
    emit(report, p["out"])
    return EXIT_OK


def cmd_hurwitz_replay(cfg: RunConfig) -> int:
    from .hurwitz import replay_sequence

    p = cfg.params
    t = parse_tuple(p["tuple"], p["degree"])
    moves = parse_moves(p["moves"])
    for i, _ in moves:
        if not 1 <= i < t.n:
            raise UsageError(f"move position {i} outside 1..{t.n - 1}")
    out = replay_sequence(t, moves)
    emit(
        {
            "input": t.to_json(),
            "moves": [i if d == "forward" else -i for i, d in moves],
            "result": out.to_json(),
        },
        p["out"],
    )
    return EXIT_OK


def cmd_cyclespace(cfg: RunConfig) -> int:
    from . import cyclespace as cs
    from .qlinalg import fraction_str

    p = cfg.params
    n = p["n"]
    m = cs.brute_force_matrix(n) if p["oracle"] else cs.boundary_matrix(n, p["allow_large"])
    basis = cs.kernel_basis(m)
    if p["out"]:
        with open(p["out"], "w", encoding="utf-8", newline="") as fh:
            csv.writer(fh, lineterminator="\n").writerows(m.to_csv_rows())
    doc = {
        "n": n,
        "method": "brute-force" if p["oracle"] else "class-formula",
        "columns": m.col_labels,
        "dimension": len(basis),
        "basis": [[fraction_str(x) for x in vec] for vec in basis],
    }
    if p["kernel"]:
        emit(doc, p["kernel"])
    if not p["out"] and not p["kernel"]:
        emit(doc, None)
    return EXIT_OK


def cmd_hypcheck(cfg: RunConfig) -> int:
    from .hypcheck import hypothesis_check

    p = cfg.params

    def compute():
        return hypothesis_check(p["n"], allow_large=p["allow_large"], torsion_trivial=p["torsion_trivial"]).to_json()

    cache = _cache(cfg)
    params = {"n": p["n"], "torsion_trivial": p["torsion_trivial"]}
    report = cache.cached("hypcheck", params, compute) if cache else compute()
    emit(report, p["out"])
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_ellreg(cfg: RunConfig) -> int:
    from . import ellreg

    p = cfg.params
    lam = parse_lambda(p["lambda"])
    if lam in (0, 1):
        raise UsageError("lambda must avoid 0 and 1")
    if p["check_functional_equation"]:
        chk = ellreg.functional_equation_check(lam, p["tol"])
        doc = chk.to_json()
    else:
        r = ellreg.regulator_integral(lam, p["tol"])
        doc = {"lambda": [lam.real, lam.imag], "I": r.value, "err": r.error, "residual": None, "pass": True}
    emit(doc, p["out"])
    return EXIT_OK if doc["pass"] else EXIT_FAIL


def cmd_fourconfig(cfg: RunConfig) -> int:
    from . import fourconfig as fc

    p = cfg.params
    if p["search"]:
        found = fc.search_configs(p["height"])
        if not found:
            emit({"found": False, "height": p["height"]}, p["out"])
            return EXIT_FAIL
        config = found[0]
    else:
        missing = [k for k in ("a1", "a2", "b1", "b2") if p[k] is None]
        if missing:
            raise UsageError("give --search or all of --a1 --a2 --b1 --b2")
        try:
            config = fc.build_config(*(fc.GaussianRational.parse(p[k]) for k in ("a1", "a2", "b1", "b2")))
        except (fc.ConfigError, ValueError) as exc:
            raise UsageError(str(exc)) from None
    cond = fc.check_conditions(config)
    doc = {"config": config.to_json(), "conditions": cond.to_json()}
    ok = cond.plus and cond.f_zero_infinity and all(cond.star)
    if cond.plus:
        boundary = fc.cubical_boundary(config)
        doc["boundary"] = [
            {"term": t.to_json(), "coefficient": c} for t, c in sorted(boundary.items(), key=lambda kv: repr(kv[0]))
        ]
        ok &= not boundary
    else:
        doc["boundary"] = None
    doc["pass"] = ok
    emit(doc, p["out"])
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    from .verify import CLAIM_IDS, run_claims

    p = cfg.params
    selected: list[str] = []
    for s in p["claims"] or []:
        selected += [x for x in s.split(",") if x]
    if p["list"]:
        sys.stdout.write("\n".join(CLAIM_IDS) + "\n")
        return EXIT_OK
    if not p["all"] and not selected:
        raise UsageError("give --all or --claims")
    try:
        report = run_claims(None if p["all"] else selected, p["fast"], _cache(cfg))
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    doc = report.to_json(timing=not p["no_timing"])
    emit(doc, p["out"])
    for c in report.claims:
        sys.stderr.write(f"[{c.status.upper():4}] {c.criterion:2d} {c.claim_id}\n")
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cycleforge", description="Monodromy, cycle-space, regulator and configuration checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--cache-dir", help="cache directory (default: $CYCLEFORGE_CACHE or ~/.cache/cycleforge)")
    parser.add_argument("--no-cache", action="store_true", help="neither read nor write cached results")
    parser.add_argument("--threads", type=int, default=1, help="thread cap (accepted; all work is single-threaded)")
    parser.add_argument("--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    hz = sub.add_parser("hurwitz", help="monodromy tuples and Hurwitz move orbits")
    hsub = hz.add_subparsers(dest="action", metavar="ACTION")
    hsub.required = True
    comp = hsub.add_parser("components", help="orbit report for a branch profile")
    comp.add_argument("--genus", type=int)
    comp.add_argument("--profile", help="JSON file {degree, cycle_types: [[parts], count]}")
    comp.add_argument("--cap", type=int, default=10**8, help="refuse profiles with more estimated tuples")
    comp.add_argument("--extended", action="store_true", help="allow genus >= 4")
    comp.add_argument("--checkpoint", help="checkpoint file for the orbit search")
    comp.add_argument("--out")
    comp.set_defaults(handler=cmd_hurwitz_components)
    rep = hsub.add_parser("replay", help="apply a sequence of Hurwitz moves")
    rep.add_argument("--tuple", required=True, help='"t13,t13,v1,v1" or "(1 3);(1 3);(1 2)(3 4);(1 2)(3 4)"')
    rep.add_argument("--moves", required=True, help="comma-separated 1-based positions, negative for inverse moves")
    rep.add_argument("--degree", type=int)
    rep.add_argument("--out")
    rep.set_defaults(handler=cmd_hurwitz_replay)

    cy = sub.add_parser("cyclespace", help="boundary matrix and invariant cycle space")
    cy.add_argument("--n", type=int, required=True)
    cy.add_argument("--oracle", action="store_true", help="build the matrix by brute force (n <= 5)")
    cy.add_argument("--allow-large", action="store_true")
    cy.add_argument("--out", help="matrix CSV")
    cy.add_argument("--kernel", help="kernel basis JSON")
    cy.set_defaults(handler=cmd_cyclespace)

    hy = sub.add_parser("hypcheck", help="specialisation image of the invariant cycle space")
    hy.add_argument("--n", type=int, required=True)
    hy.add_argument("--torsion-trivial", action="store_true", help="also use [eps] = [e] in the reduction")
    hy.add_argument("--allow-large", action="store_true")
    hy.add_argument("--out")
    hy.set_defaults(handler=cmd_hypcheck)

    el = sub.add_parser("ellreg", help="regulator integral on the Legendre curve")
    el.add_argument("--lambda", dest="lambda_", required=True, metavar="RE[,IM]")
    el.add_argument("--tol", type=float, default=1e-3)
    el.add_argument("--check-functional-equation", action="store_true")
    el.add_argument("--out")
    el.set_defaults(handler=cmd_ellreg)

    fo = sub.add_parser("fourconfig", help="genus-0 four-configuration conditions and boundary")
    for name in ("a1", "a2", "b1", "b2"):
        fo.add_argument(f"--{name}", help="Gaussian rational such as 1/2-3i")
    fo.add_argument("--search", action="store_true")
    fo.add_argument("--height", type=int, default=8)
    fo.add_argument("--out")
    fo.set_defaults(handler=cmd_fourconfig)

    ve = sub.add_parser("verify", help="run the claim suite")
    ve.add_argument("--all", action="store_true")
    ve.add_argument("--fast", action="store_true", help="small ranges: n <= 4, genus 2")
    ve.add_argument("--claims", action="append", help="claim ids or criterion numbers, comma-separated")
    ve.add_argument("--list", action="store_true", help="print claim ids and exit")
    ve.add_argument("--no-timing", action="store_true", help="omit timing fields")
    ve.add_argument("--out")
    ve.set_defaults(handler=cmd_verify)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    skip = {"command", "action", "handler", "cache_dir", "no_cache", "threads", "log_level"}
    params = {k: v for k, v in vars(args).items() if k not in skip}
    if "lambda_" in params:
        params["lambda"] = params.pop("lambda_")
    name = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    return RunConfig(name, params, args.cache_dir, not args.no_cache, args.threads)


def run(cfg: RunConfig, handler) -> int:
    cfg.validate()
    return handler(cfg)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING))
    cfg = config_from_args(args)
    from .cyclespace import ResourceLimit as CycleLimit
    from .ellreg import ConvergenceError
    from .hurwitz import ResourceLimit as HurwitzLimit

    try:
        return run(cfg, args.handler)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"cycleforge: error: {exc}\n")
        return EXIT_USAGE
    except (CycleLimit, HurwitzLimit) as exc:
        sys.stderr.write(f"cycleforge: resource limit: {exc}\n")
        return EXIT_RESOURCE
    except ConvergenceError as exc:
        sys.stderr.write(f"cycleforge: {exc}\n")
        return EXIT_FAIL
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"cycleforge: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
