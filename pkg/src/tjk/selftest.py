"""Reduced-size invariant suite behind ``tjk selftest``."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .algebra import AlgebraElement, XPolynomial, idempotent_f, p_star, x_power
from .homology import applicable_formulas, ext_dim_general, ext_M_S1k_dim, ext_oracle
from .ideals import canonical_form
from .parser import format_element, parse
from .reps import (ModuleVector, act_x, act_y, build_S1_power, find_isomorphism, random_rep, xi_extract)
from .scalars import FieldCtx
from .windows import WindowConfig


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _check(cond: bool, what: str) -> None:
    if not cond:
        raise AssertionError(what)


def _algebra(ctx, rng, config):
    x, y = AlgebraElement.x(ctx), AlgebraElement.y(ctx)
    one = AlgebraElement.one(ctx)
    _check(x * y == one and y * x != one, "xy = 1, yx != 1")
    fs = [idempotent_f(ctx, n) for n in range(1, 6)]
    for m, fm in enumerate(fs):
        for n, fn in enumerate(fs):
            _check(fm * fn == (fm if m == n else AlgebraElement.zero(ctx)), f"f_{m + 1} f_{n + 1}")
    for i in range(5):
        _check(fs[0] * x_power(ctx, i) == x_power(ctx, i) * idempotent_f(ctx, i + 1), f"f_1 x^{i}")
    for _ in range(10):
        p = XPolynomial.random(ctx, rng, rng.randint(1, 4))
        ps = p_star(p)
        _check(x_power(ctx, p.degree) * ps == p.to_element(), "x^deg p p* = p")
        _check(fs[0] * ps == fs[0].scale(p.leading), "f_1 p* = alpha_n f_1")


def _split(ctx, rng, config):
    f1, x, y = idempotent_f(ctx, 1), AlgebraElement.x(ctx), AlgebraElement.y(ctx)
    for _ in range(20):
        r = AlgebraElement.random(ctx, rng)
        _check((r * f1) + (r * y) * x == r, "R -> S_1 + R -> R")
        s, t = AlgebraElement.random(ctx, rng) * f1, AlgebraElement.random(ctx, rng)
        m = s + t * x
        _check(m * f1 == s and m * y == t, "S_1 + R -> R -> S_1 + R")


def _parser(ctx, rng, config):
    for _ in range(50):
        a = AlgebraElement.random(ctx, rng)
        _check(parse(format_element(a), ctx) == a, f"round trip of {a}")


def _ideals(ctx, rng, config):
    for _ in range(4):
        gens = [AlgebraElement.random(ctx, rng, max_deg=2, max_terms=3) for _ in range(rng.randint(1, 3))]
        icf = canonical_form(gens, config)
        shuffled = list(reversed(gens))
        _check(canonical_form(shuffled, config) == icf, "generator order")
        _check(canonical_form(icf.generators(), config, ctx) == icf, "fixpoint")
        if not icf.p.is_zero():
            _check(icf.L.cols <= icf.p.degree, "L bounded by deg p")


def _functors(ctx, rng, config):
    for _ in range(10):
        rep = random_rep(ctx, rng, max_dim=3)
        _check(find_isomorphism(rep, xi_extract(rep), rng) is not None, f"Xi Psi {rep}")
        m = ModuleVector.random(rep, rng)
        _check(act_x(rep, act_y(rep, m)) == m, "x(ym) = m")


def _ext(ctx, rng, config):
    for _ in range(5):
        rep = random_rep(ctx, rng, max_dim=3, e_density=0.5)
        _check(ext_M_S1k_dim(rep, 1) == ext_oracle(rep, build_S1_power(ctx, 1), config), f"Ext(M, S_1) {rep}")
    for _ in range(4):
        M = random_rep(ctx, rng, max_dim=2)
        N = random_rep(ctx, rng, max_dim=2)
        vals = {w: ext_dim_general(M, N, w, config) for w in applicable_formulas(M, N)}
        vals["oracle"] = ext_oracle(M, N, config)
        _check(len(set(vals.values())) == 1, f"formulas disagree: {vals}")


CHECKS: list[tuple[str, Callable]] = [
    ("algebra identities", _algebra),
    ("R = S_1 + R splitting", _split),
    ("parser round trip", _parser),
    ("ideal canonical form", _ideals),
    ("functor round trip", _functors),
    ("ext formulas vs oracle", _ext),
]


def run_selftest(ctx: FieldCtx, config: WindowConfig = WindowConfig(), seed: int = 0) -> list[CheckResult]:
    """Run every check; assertion failures are captured, other errors
    (notably StabilizationError) propagate to the caller."""
    out = []
    for name, fn in CHECKS:
        rng = random.Random(f"{seed}:{name}")
        try:
            fn(ctx, rng, config)
        except AssertionError as exc:
            out.append(CheckResult(name, False, str(exc)))
        else:
            out.append(CheckResult(name, True))
    return out


__all__ = ["CheckResult", "CHECKS", "run_selftest"]
