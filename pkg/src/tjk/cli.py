"""Command-line interface: ``tjk <verb> ...``.

Exit codes: 0 success, 1 bad input, 2 window budget exhausted,
3 internal cross-check disagreement, 4 selftest failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from .homology import FormulaError, PresentationError, ext_dim_general, ext_oracle, hom_R_dim
from .ideals import canonical_form, member
from .parser import ParseError, format_element, parse
from .reps import (GammaRep, RepError, build_Lp, build_S1_power, find_isomorphism, hom_dim_D, lf_dim,
                   rep_from_json, stats, xi_extract)
from .scalars import FieldCtx, FieldMismatchError
from .selftest import run_selftest
from .windows import StabilizationError, TruncationWindow, WindowConfig

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_MISMATCH, EXIT_SELFTEST = 0, 1, 2, 3, 4


class UsageError(Exception):
    """Bad command-line input (exit 1)."""


@dataclass(frozen=True)
class SessionConfig:
    field: FieldCtx
    field_explicit: bool
    window: WindowConfig
    json: bool
    verify: bool

    @classmethod
    def from_args(cls, args) -> "SessionConfig":
        explicit = args.field is not None or "TJK_FIELD" in os.environ
        text = args.field or os.environ.get("TJK_FIELD", "Q")
        try:
            ctx = FieldCtx.parse(text)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        initial = None
        height = WindowConfig.rep_height
        if args.window:
            try:
                initial = TruncationWindow.parse(args.window)
            except ValueError:
                raise UsageError(f"bad window {args.window!r}; expected Y,X") from None
            height = max(1, initial.max_y)
        if args.budget < 0:
            raise UsageError("budget must be non-negative")
        window = WindowConfig(initial=initial, budget=args.budget, rep_height=height)
        return cls(ctx, explicit, window, args.json, args.verify)


def _emit(cfg: SessionConfig, payload: dict, text: str) -> None:
    if cfg.json:
        print(json.dumps(payload))
    else:
        print(text)


def _parse_expr(text: str, ctx: FieldCtx):
    try:
        return parse(text, ctx)
    except ParseError as exc:
        raise UsageError(f"{text!r}: {exc}") from None


# -- module specs -------------------------------------------------------------


def load_module(spec: str, cfg: SessionConfig) -> GammaRep:
    """``Lp:<poly>``, ``S1^k`` or a path to a representation JSON file."""
    ctx = cfg.field
    if spec.startswith("Lp:"):
        e = _parse_expr(spec[3:], ctx)
        if not e.is_x_polynomial():
            raise UsageError(f"{spec!r}: L_p needs a polynomial in x")
        p = e.to_x_polynomial()
        if p.is_zero():
            raise UsageError(f"{spec!r}: zero polynomial")
        return build_Lp(p)
    if spec.startswith("S1^"):
        try:
            k = int(spec[3:])
        except ValueError:
            raise UsageError(f"{spec!r}: expected S1^<k>") from None
        if k < 0:
            raise UsageError(f"{spec!r}: negative power")
        return build_S1_power(ctx, k)
    if spec == "S1":
        return build_S1_power(ctx, 1)
    try:
        with open(spec, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"{spec!r}: no such file and not a module shorthand") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{spec}: invalid JSON ({exc})") from None
    try:
        rep = rep_from_json(data, ctx if cfg.field_explicit else None)
    except (RepError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{spec}: {exc}") from None
    return rep


def _same_field(a: GammaRep, b: GammaRep) -> None:
    if a.ctx != b.ctx:
        raise UsageError(f"modules live over different fields ({a.ctx} and {b.ctx})")


# -- verbs --------------------------------------------------------------------


def cmd_normalize(args, cfg: SessionConfig) -> int:
    e = _parse_expr(args.expr, cfg.field)
    fmt = cfg.field.format
    payload = {
        "element": format_element(e),
        "terms": [[i, j, fmt(c)] for (i, j), c in e.sorted_terms()],
    }
    _emit(cfg, payload, payload["element"])
    return EXIT_OK


def _ideal_text(icf) -> str:
    lines = [f"p(x) = {icf.p.to_text() if not icf.p.is_zero() else '0'}"]
    if icf.L.cols:
        lines.append(f"L ({icf.L.cols} vector(s) over x^(k-1) f_k, k = 1..{icf.L.rows}):")
        fmt = icf.ctx.format
        for col in icf.L.columns():
            lines.append("  [" + ", ".join(fmt(v) for v in col) + "]")
    else:
        lines.append("L = 0")
    lines.append(f"unit: {'yes' if icf.unit else 'no'}")
    lines.append(f"semisimple: {'yes' if icf.semisimple else 'no'}")
    return "\n".join(lines)


def cmd_ideal(args, cfg: SessionConfig) -> int:
    gens = [_parse_expr(t, cfg.field) for t in args.gens]
    icf = canonical_form(gens, cfg.window, cfg.field)
    _emit(cfg, icf.to_json(), _ideal_text(icf))
    return EXIT_OK


def cmd_member(args, cfg: SessionConfig) -> int:
    e = _parse_expr(args.element, cfg.field)
    gens = [_parse_expr(t, cfg.field) for t in args.gens]
    ok = member(e, gens, cfg.window, cfg.field)
    _emit(cfg, {"member": ok}, "true" if ok else "false")
    return EXIT_OK


def cmd_ext(args, cfg: SessionConfig) -> int:
    M = load_module(args.M, cfg)
    N = load_module(args.N, cfg)
    _same_field(M, N)
    formula = args.formula
    try:
        if formula == "oracle":
            value = ext_oracle(M, N, cfg.window)
        else:
            value = ext_dim_general(M, N, formula, cfg.window)
    except FormulaError as exc:
        raise UsageError(str(exc)) from None
    payload = {"ext1": value, "formula": formula}
    text = f"dim Ext^1 = {value}"
    if cfg.verify:
        oracle = value if formula == "oracle" else ext_oracle(M, N, cfg.window)
        payload.update(oracle=oracle, agree=oracle == value)
        text += f"\noracle = {oracle} ({'agree' if oracle == value else 'DISAGREE'})"
        _emit(cfg, payload, text)
        if oracle != value:
            return EXIT_MISMATCH
        return EXIT_OK
    _emit(cfg, payload, text)
    return EXIT_OK


def cmd_hom(args, cfg: SessionConfig) -> int:
    M = load_module(args.M, cfg)
    N = load_module(args.N, cfg)
    _same_field(M, N)
    hr = hom_R_dim(M, N, cfg.window)
    hd = hom_dim_D(M, N)
    payload = {"hom_R": hr, "hom_D": hd}
    text = f"dim Hom_R = {hr}\ndim Hom_D = {hd}"
    _emit(cfg, payload, text)
    if cfg.verify and hr < hd:
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_functor(args, cfg: SessionConfig) -> int:
    rep = load_module(args.rep, cfg)
    ell, dq, d = stats(rep)
    payload = {"dim_u": rep.dim_u, "dim_v": rep.dim_v, "ell_IM": ell, "dim_M_mod_IM": dq, "d_M": d,
               "lf_dim": lf_dim(rep, cfg.window)}
    text = (f"length of IM = {ell}\ndim M/IM = {dq}\nd(M) = {d}\n"
            f"dim lf(M) = {payload['lf_dim']}")
    status = EXIT_OK
    if args.roundtrip:
        back = xi_extract(rep)
        phi = find_isomorphism(rep, back)
        fmt = rep.ctx.format
        payload["roundtrip"] = {
            "iso": phi is not None,
            "witness": None if phi is None else {
                "phi_u": [[fmt(v) for v in row] for row in phi[0].tolist()],
                "phi_v": [[fmt(v) for v in row] for row in phi[1].tolist()],
            },
        }
        text += "\nround trip: " + ("isomorphism found" if phi is not None else "NO isomorphism found")
        if phi is not None:
            text += f"\n  phi_u = {payload['roundtrip']['witness']['phi_u']}"
            text += f"\n  phi_v = {payload['roundtrip']['witness']['phi_v']}"
        else:
            status = EXIT_MISMATCH
    _emit(cfg, payload, text)
    return status


def cmd_selftest(args, cfg: SessionConfig) -> int:
    results = run_selftest(cfg.field, cfg.window, seed=args.seed)
    failed = [r for r in results if not r.ok]
    if cfg.json:
        print(json.dumps({"field": str(cfg.field),
                          "results": [{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results]}))
    else:
        for r in results:
            print(f"{'PASS' if r.ok else 'FAIL'}  {r.name}" + (f": {r.detail}" if r.detail else ""))
    return EXIT_SELFTEST if failed else EXIT_OK


# -- argument parsing -----------------------------------------------------------


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--field", default=d(None), help="Q or Fp:<prime> (default: $TJK_FIELD or Q)")
    parser.add_argument("--window", default=d(None), metavar="Y,X", help="initial truncation window")
    parser.add_argument("--budget", type=int, default=d(3), help="number of window doublings allowed")
    parser.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    parser.add_argument("--verify", action="store_true", default=d(False), help="cross-check against the oracle")


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with code 1; code 2 is reserved for window budgets."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tjk", description="Exact computations in K<x,y>/(xy - 1).")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        _common(p, suppress=True)
        p.set_defaults(func=fn)
        return p

    p = verb("normalize", cmd_normalize, "print the normal form of an expression")
    p.add_argument("expr")
    p = verb("ideal", cmd_ideal, "canonical form (p, L) of a left ideal")
    p.add_argument("gens", nargs="+")
    p = verb("member", cmd_member, "decide membership in a left ideal")
    p.add_argument("element")
    p.add_argument("gens", nargs="+")
    p = verb("ext", cmd_ext, "dim Ext^1(M, N)")
    p.add_argument("M")
    p.add_argument("N")
    p.add_argument("--formula", choices=["auto", "i", "ii", "iii", "iv", "oracle"], default="auto")
    p = verb("hom", cmd_hom, "dim Hom(M, N)")
    p.add_argument("M")
    p.add_argument("N")
    p = verb("functor", cmd_functor, "invariants and the Xi/Psi round trip of a representation")
    p.add_argument("rep")
    p.add_argument("--roundtrip", action="store_true")
    p = verb("selftest", cmd_selftest, "run the reduced invariant suite")
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = SessionConfig.from_args(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RepError, FieldMismatchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StabilizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except PresentationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
