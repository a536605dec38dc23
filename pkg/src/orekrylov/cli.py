"""``ore-krylov`` command line.

Exit codes: 0 success, 1 input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass, field

from .bivariate import BivarPoly, parse_bivariate
from .bounds import FAMILIES as BOUND_FAMILIES, BoundError, BoundQuery, evaluate_bound, order_degree_curve
from .closure import parse_closure
from .instances import (InstanceError, InstanceReport, associate, compose_annihilator, differential_resolvent,
                        lclm, polynomial_closure, sym_power, symmetric_product, telescoper,
                        wronskian_annihilator)
from .oracle import OracleError, verify_instance
from .ore import DX, EX, SX, OrePoly, format_operator, parse_operator
from .parsing import ParseError, parse_ratfunc
from .pseudokrylov import RelationError
from .ratmat import RatMatrix, mcmillan_degree, mcmillan_degree_via_mobius, smith_mcmillan

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2

KINDS = {"diff": DX, "euler": EX, "shift": SX}


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    order: int | None = None
    verify: bool = False
    precision: int = 60
    seed: int = 0
    fmt: str = "text"
    kind: str = "diff"
    out: str | None = None

    def __post_init__(self):
        if self.order is not None and self.order < 0:
            raise InputError("--order must be non-negative")
        if self.precision < 1:
            raise InputError("--precision must be positive")


def _default_seed() -> int:
    v = os.environ.get("ORE_KRYLOV_SEED")
    if v is None:
        return 0
    try:
        return int(v)
    except ValueError:
        raise InputError(f"ORE_KRYLOV_SEED must be an integer, got {v!r}") from None


# -- parsing helpers ----------------------------------------------------------

def _operators(texts: list[str], kind: str) -> list[OrePoly]:
    default = KINDS[kind]
    ops = []
    for t in texts:
        L = parse_operator(t, default)
        if L.kind != default:
            raise InputError(f"operator {t!r} is not of kind {kind} (use --kind)")
        ops.append(L)
    return ops


def _bivariate(text: str) -> BivarPoly:
    P = parse_bivariate(text)
    if not P.is_polynomial():
        raise InputError(f"{text!r} must be a polynomial in x and y")
    return P


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_matrix(text: str) -> RatMatrix:
    """``[[1/x, 0], [0, x]]`` or ``1/x, 0; 0, x``."""
    t = text.strip()
    if t.startswith("["):
        if not t.endswith("]"):
            raise InputError("unbalanced brackets in matrix")
        rows = [r.strip() for r in _split_top(t[1:-1], ",")]
        if not all(r.startswith("[") and r.endswith("]") for r in rows):
            raise InputError("matrix rows must be bracketed")
        rows = [r[1:-1] for r in rows]
    else:
        rows = _split_top(t, ";")
    entries = [[parse_ratfunc(e) for e in _split_top(r, ",")] for r in rows]
    if len({len(r) for r in entries}) != 1:
        raise InputError("matrix rows have different lengths")
    return RatMatrix(entries)


def _bound_params(items: list[str]) -> dict:
    params = {}
    for it in items:
        k, sep, v = it.partition("=")
        if not sep:
            raise InputError(f"bound parameter {it!r} is not key=value")
        try:
            params[k.strip()] = [int(p) for p in v.split(",")] if "," in v else int(v)
        except ValueError:
            raise InputError(f"bound parameter {it!r} is not an integer (list)") from None
    for k in ("r_i", "d_i", "k_i"):
        if k in params and isinstance(params[k], int):
            params[k] = [params[k]]
    return params


# -- commands -----------------------------------------------------------------

def _solve(cfg: RunConfig) -> InstanceReport:
    c, args, m = cfg.command, cfg.inputs, cfg.order
    if c == "lclm":
        return lclm(_operators(args, cfg.kind), m)
    if c == "symprod":
        return symmetric_product(_operators(args, cfg.kind), m)
    if c == "closure":
        if len(args) < 2:
            raise InputError("closure needs J followed by the operators")
        return polynomial_closure(parse_closure(args[0]), _operators(args[1:], cfg.kind), m)
    if c == "sympower":
        if len(args) != 2:
            raise InputError("sympower needs an operator and a power")
        try:
            ell = int(args[1])
        except ValueError:
            raise InputError(f"power must be an integer, got {args[1]!r}") from None
        return sym_power(_operators(args[:1], cfg.kind)[0], ell, m)
    if c == "associate":
        if len(args) != 2:
            raise InputError("associate needs L and A")
        L, A = _operators(args, cfg.kind)
        return associate(L, A, m)
    if c == "wronskian":
        return wronskian_annihilator(_operators(args, cfg.kind), m)
    if cfg.kind != "diff":
        raise InputError(f"{c} is only available for differential operators")
    if c == "resolvent":
        if len(args) != 1:
            raise InputError("resolvent needs one polynomial P(x, y)")
        return differential_resolvent(_bivariate(args[0]), m)
    if c == "compose":
        if len(args) != 2:
            raise InputError("compose needs P(x, y) and L")
        return compose_annihilator(_bivariate(args[0]), _operators(args[1:], "diff")[0], m)
    if c == "telescope":
        if len(args) != 2:
            raise InputError("telescope needs the numerator p and the denominator q")
        return telescoper(_bivariate(args[0]), _bivariate(args[1]), m)
    raise InputError(f"unknown command {c!r}")


def _instance_payload(cfg: RunConfig, rep: InstanceReport, verified) -> dict:
    op = rep.operator
    return {
        "command": cfg.command,
        "operator": format_operator(op),
        "order": rep.order,
        "degree": rep.degree,
        "coefficients": [str(c) for c in op.coeffs],
        "bound": rep.bound,
        "degmm_T": rep.degmm_T,
        "verified": verified,
        "elapsed_ms": round(rep.elapsed * 1000, 3),
        "seed": cfg.seed,
    }


def _print_instance(rep: InstanceReport, verified, detail: str, out):
    print(f"operator: {format_operator(rep.operator)}", file=out)
    print(f"order:    {rep.order}", file=out)
    print(f"degree:   {rep.degree}", file=out)
    print(f"bound:    {rep.bound}", file=out)
    mm = "-" if rep.degmm_T is None else str(rep.degmm_T)
    if rep.degmm_bound is not None:
        mm += f" (closed form {rep.degmm_bound})"
    print(f"degMM(T): {mm}", file=out)
    if rep.tightness is not None:
        print(f"tightness: {rep.tightness:.3f}", file=out)
    print(f"elapsed:  {rep.elapsed * 1000:.1f} ms", file=out)
    for n in rep.notes:
        print(f"note:     {n}", file=out)
    if verified is not None:
        print(f"verified: {'yes' if verified else 'NO'}{' (' + detail + ')' if detail else ''}", file=out)


def run_instance(cfg: RunConfig, out=sys.stdout) -> int:
    rep = _solve(cfg)
    verified, detail = None, ""
    if cfg.verify:
        v = verify_instance(rep, precision=cfg.precision, rng=random.Random(cfg.seed))
        verified = v.ok
        detail = v.method + (f", {v.detail}" if v.detail else "")
    payload = _instance_payload(cfg, rep, verified)
    _emit(cfg, payload, lambda: _print_instance(rep, verified, detail, out), out)
    return EXIT_VERIFY if verified is False else EXIT_OK


def run_mcmillan(cfg: RunConfig, out=sys.stdout) -> int:
    if len(cfg.inputs) != 1:
        raise InputError("mcmillan needs one matrix")
    R = parse_matrix(cfg.inputs[0])
    d = mcmillan_degree(R)
    dm = mcmillan_degree_via_mobius(R, rng=random.Random(cfg.seed))
    smf = smith_mcmillan(R)
    payload = {"command": "mcmillan", "degmm": d, "degmm_mobius": dm, "rank": smf.rank,
               "eps": [str(e) for e in smf.eps], "psi": [str(p) for p in smf.psi], "seed": cfg.seed}

    def text():
        print(f"degMM:        {d}", file=out)
        print(f"via Mobius:   {dm}", file=out)
        print(f"rank:         {smf.rank}", file=out)
        for e, p in zip(smf.eps, smf.psi):
            print(f"  ({e})/({p})", file=out)

    _emit(cfg, payload, text, out)
    return EXIT_OK if d == dm else EXIT_VERIFY


def run_bound(cfg: RunConfig, out=sys.stdout, curve: int | None = None) -> int:
    if not cfg.inputs:
        raise InputError(f"bound needs a family: {', '.join(BOUND_FAMILIES)}")
    q = BoundQuery(cfg.inputs[0], _bound_params(cfg.inputs[1:]), cfg.order)
    value = evaluate_bound(q)
    payload = {"command": "bound", "family": q.family, "order": q.m, "bound": value, "seed": cfg.seed}
    if curve is not None:
        rho = int(q.params.get("rho", 0))
        payload["curve"] = [[m, b] for m, b in order_degree_curve(q, range(rho, rho + curve + 1))]

    def text():
        print(f"{q.family} bound: {value}", file=out)
        for m, b in payload.get("curve", []):
            print(f"  m = {m}: {b}", file=out)

    _emit(cfg, payload, text, out)
    return EXIT_OK


def run_check(cfg: RunConfig, families: str, trials: int, out=sys.stdout) -> int:
    from .sweeps import FAMILIES, run_family

    names = list(FAMILIES) if families == "all" else [f.strip() for f in families.split(",")]
    unknown = [n for n in names if n not in FAMILIES]
    if unknown:
        raise InputError(f"unknown families {', '.join(unknown)}; choose from {', '.join(FAMILIES)}")
    summary = {}
    all_ok = True
    for name in names:
        res = run_family(name, cfg.seed, trials)
        failures: dict[str, int] = {}
        for t in res:
            for k, ok in t.checks.items():
                failures.setdefault(k, 0)
                failures[k] += 0 if ok else 1
        ratios = [t.stats["tightness"] for t in res if t.stats.get("tightness") is not None]
        passed = sum(t.ok for t in res)
        all_ok &= passed == len(res)
        summary[name] = {"trials": len(res), "passed": passed, "failures": failures,
                         "max_tightness": max(ratios) if ratios else None}
    payload = {"command": "check", "seed": cfg.seed, "trials": trials, "families": summary,
               "ok": all_ok}

    def text():
        print(f"{'family':<11} {'passed':>8}  {'max deg/bound':>13}  failing checks", file=out)
        for name, s in summary.items():
            bad = ", ".join(f"{k} x{v}" for k, v in s["failures"].items() if v) or "-"
            mt = "-" if s["max_tightness"] is None else f"{s['max_tightness']:.3f}"
            print(f"{name:<11} {s['passed']:>4}/{s['trials']:<3}  {mt:>13}  {bad}", file=out)
        print("all checks passed" if all_ok else "SOME CHECKS FAILED", file=out)

    _emit(cfg, payload, text, out)
    return EXIT_OK if all_ok else EXIT_VERIFY


def _emit(cfg: RunConfig, payload: dict, text, out):
    blob = json.dumps(payload, indent=2, sort_keys=True)
    if cfg.fmt == "json":
        print(blob, file=out)
    else:
        text()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(blob + "\n")


# -- argument parsing ---------------------------------------------------------

_HELP = {
    "lclm": "least common left multiple of operators",
    "symprod": "symmetric product of operators",
    "closure": "annihilator of J(x, y1_0, ...) for solutions of the operators",
    "sympower": "annihilator of the ell-th power of solutions",
    "associate": "annihilator of A(alpha) for solutions alpha of L",
    "wronskian": "annihilator of the Wronskian of solutions",
    "resolvent": "differential resolvent of P(x, y)",
    "compose": "annihilator of f(g) with P(x, g) = 0 and L(f) = 0",
    "telescope": "minimal telescoper for p/q (integration in y)",
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ore-krylov", description="Minimal operators from pseudo-linear maps.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="print JSON instead of text")
        p.add_argument("--out", metavar="FILE", help="also write the JSON report to FILE")
        p.add_argument("--seed", type=int, default=None, help="random seed (default $ORE_KRYLOV_SEED or 0)")

    for name, help_ in _HELP.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("inputs", nargs="+")
        p.add_argument("--order", type=int, default=None, metavar="M", help="relation of order M")
        p.add_argument("--kind", choices=sorted(KINDS), default="diff", help="operator kind")
        p.add_argument("--verify", action="store_true", help="check the output with an independent oracle")
        p.add_argument("--precision", type=int, default=60, metavar="N", help="series/sequence length")
        common(p)

    p = sub.add_parser("mcmillan", help="McMillan degree of a rational matrix")
    p.add_argument("inputs", nargs=1, metavar="MATRIX")
    common(p)

    p = sub.add_parser("bound", help="evaluate a closed-form degree bound")
    p.add_argument("inputs", nargs="+", metavar="FAMILY key=value")
    p.add_argument("--order", type=int, default=None, metavar="M")
    p.add_argument("--curve", type=int, default=None, metavar="K", help="print the curve for m = rho..rho+K")
    common(p)

    p = sub.add_parser("check", help="randomized property sweep")
    p.add_argument("--families", default="all")
    p.add_argument("--trials", type=int, default=5)
    common(p)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        seed = ns.seed if ns.seed is not None else _default_seed()
        cfg = RunConfig(ns.command, list(getattr(ns, "inputs", []) or []), getattr(ns, "order", None),
                        getattr(ns, "verify", False), getattr(ns, "precision", 60), seed,
                        "json" if ns.json else "text", getattr(ns, "kind", "diff"), ns.out)
        if ns.command == "mcmillan":
            return run_mcmillan(cfg, sys.stdout)
        if ns.command == "bound":
            return run_bound(cfg, sys.stdout, curve=ns.curve)
        if ns.command == "check":
            if ns.trials < 1:
                raise InputError("--trials must be positive")
            return run_check(cfg, ns.families, ns.trials, sys.stdout)
        return run_instance(cfg, sys.stdout)
    except (InputError, ParseError, InstanceError, BoundError, RelationError, OracleError,
            ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
