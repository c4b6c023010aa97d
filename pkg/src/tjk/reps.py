"""Finite-dimensional representations of the graph u <-e- v (loop f at v).

A :class:`GammaRep` with invertible loop matrix ``F`` describes an R-module
of finite length through the realization

    M = (S_1 (x) M_u) + M_v,
    x (r f_1 (x) a, v) = (x r f_1 (x) a, F v),
    y (r f_1 (x) a, v) = (y r f_1 (x) a + f_1 (x) E v, F^-1 v).

Elements of the realized module are :class:`ModuleVector` objects; the
S_1 (x) M_u part uses the basis y^h f_1 (x) u_k, keyed by (h, k).
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .algebra import AlgebraElement, XPolynomial
from .scalars import (ExactMatrix, FieldCtx, inverse, is_invertible, kernel_basis, rank, solve)
from .windows import WindowConfig, certify

__all__ = [
    "RepError",
    "GammaRep",
    "ModuleVector",
    "validate",
    "build_Lp",
    "build_S1_power",
    "direct_sum",
    "random_rep",
    "act_x",
    "act_y",
    "act_element",
    "psi_morphism",
    "xi_extract",
    "hom_dim_D",
    "hom_basis_D",
    "find_isomorphism",
    "stats",
    "lf_dim",
    "lf_dim_closed",
    "rep_to_json",
    "rep_from_json",
]


class RepError(ValueError):
    """Invalid representation data."""


@dataclass(frozen=True, eq=False)
class GammaRep:
    ctx: FieldCtx
    dim_u: int
    dim_v: int
    E: ExactMatrix
    F: ExactMatrix

    def __post_init__(self):
        if self.dim_u < 0 or self.dim_v < 0:
            raise RepError("dimensions must be non-negative")
        if self.E.shape != (self.dim_u, self.dim_v):
            raise RepError(f"E has shape {self.E.shape}, expected {(self.dim_u, self.dim_v)}")
        if self.F.shape != (self.dim_v, self.dim_v):
            raise RepError(f"F has shape {self.F.shape}, expected {(self.dim_v, self.dim_v)}")
        self.ctx.check(self.E.ctx)
        self.ctx.check(self.F.ctx)

    @classmethod
    def make(cls, ctx: FieldCtx, dim_u: int, dim_v: int, E=None, F=None) -> "GammaRep":
        """Build and validate from nested lists (or matrices)."""
        if E is None:
            E = ExactMatrix(ctx, dim_u, dim_v)
        elif not isinstance(E, ExactMatrix):
            E = ExactMatrix(ctx, dim_u, dim_v, E) if dim_u and dim_v else ExactMatrix(ctx, dim_u, dim_v)
        if F is None:
            F = ExactMatrix.identity(ctx, dim_v)
        elif not isinstance(F, ExactMatrix):
            F = ExactMatrix(ctx, dim_v, dim_v, F) if dim_v else ExactMatrix(ctx, 0, 0)
        return validate(cls(ctx, dim_u, dim_v, E, F))

    @property
    def F_inv(self) -> ExactMatrix:
        cached = self.__dict__.get("_F_inv")
        if cached is None:
            cached = inverse(self.F)
            object.__setattr__(self, "_F_inv", cached)
        return cached

    def __eq__(self, other):
        return (isinstance(other, GammaRep) and self.ctx == other.ctx and self.E == other.E
                and self.F == other.F and self.dim_u == other.dim_u and self.dim_v == other.dim_v)

    def __hash__(self):
        return hash((self.dim_u, self.dim_v, self.E, self.F))

    def __repr__(self):
        return f"GammaRep({self.ctx}, u={self.dim_u}, v={self.dim_v}, E={self.E.tolist()}, F={self.F.tolist()})"


def validate(rep: GammaRep) -> GammaRep:
    """Return ``rep`` after checking that the loop matrix is invertible."""
    if not is_invertible(rep.F):
        raise RepError("loop matrix F is singular")
    return rep


def build_S1_power(ctx: FieldCtx, k: int) -> GammaRep:
    if k < 0:
        raise RepError("k must be non-negative")
    return GammaRep(ctx, k, 0, ExactMatrix(ctx, k, 0), ExactMatrix(ctx, 0, 0))


def build_Lp(p: XPolynomial) -> GammaRep:
    """K[X, X^-1]/(p) as the rep (0, deg q, -, companion(q)) where q strips the
    powers of x from p (x is a unit, so L_{x^a q} = L_q)."""
    if p.is_zero():
        raise RepError("L_p needs a nonzero polynomial")
    q = p.strip_x().monic()
    ctx = p.ctx
    d = q.degree
    return GammaRep(ctx, 0, d, ExactMatrix(ctx, 0, d), q.companion() if d else ExactMatrix(ctx, 0, 0))


def direct_sum(a: GammaRep, b: GammaRep) -> GammaRep:
    a.ctx.check(b.ctx)
    return GammaRep(a.ctx, a.dim_u + b.dim_u, a.dim_v + b.dim_v, a.E.block_diag(b.E), a.F.block_diag(b.F))


def random_invertible(ctx: FieldCtx, rng: random.Random, n: int, height: int = 3) -> ExactMatrix:
    while True:
        m = ExactMatrix(ctx, n, n, [[ctx.random(rng, height) for _ in range(n)] for _ in range(n)])
        if is_invertible(m):
            return m


def random_rep(ctx: FieldCtx, rng: random.Random, max_dim: int = 4, height: int = 3,
               dim_u: Optional[int] = None, dim_v: Optional[int] = None, e_density: float = 1.0) -> GammaRep:
    """Random rep with dims <= max_dim.  ``e_density`` < 1 zeroes entries of E
    to make d(M) > 0 more likely."""
    du = rng.randint(0, max_dim) if dim_u is None else dim_u
    dv = rng.randint(0, max_dim) if dim_v is None else dim_v
    E = [[ctx.random(rng, height) if rng.random() < e_density else ctx.zero for _ in range(dv)] for _ in range(du)]
    return GammaRep(ctx, du, dv, ExactMatrix(ctx, du, dv, E), random_invertible(ctx, rng, dv, height))


# ---------------------------------------------------------------------------
# realized modules


@dataclass(frozen=True)
class ModuleVector:
    """An element of Psi(rep): sparse S_1-part {(height, u-index): c} plus v-part."""

    s_part: Mapping = field(default_factory=dict)
    v_part: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "s_part", {k: c for k, c in dict(self.s_part).items() if c})
        object.__setattr__(self, "v_part", tuple(self.v_part))

    def __eq__(self, other):
        return isinstance(other, ModuleVector) and self.s_part == other.s_part and self.v_part == other.v_part

    def __hash__(self):
        return hash((frozenset(self.s_part.items()), self.v_part))

    @classmethod
    def zero(cls, rep: GammaRep) -> "ModuleVector":
        return cls({}, (rep.ctx.zero,) * rep.dim_v)

    @classmethod
    def random(cls, rep: GammaRep, rng: random.Random, max_height: int = 4, terms: int = 4) -> "ModuleVector":
        ctx = rep.ctx
        s = {}
        if rep.dim_u:
            for _ in range(rng.randint(0, terms)):
                s[(rng.randint(0, max_height), rng.randrange(rep.dim_u))] = ctx.random(rng)
        return cls(s, tuple(ctx.random(rng) for _ in range(rep.dim_v)))

    def is_zero(self) -> bool:
        return not self.s_part and not any(self.v_part)

    def max_height(self) -> int:
        return max((h for h, _ in self.s_part), default=-1)


def _check_vector(rep: GammaRep, m: ModuleVector) -> None:
    if len(m.v_part) != rep.dim_v:
        raise IndexError(f"v-part has length {len(m.v_part)}, expected {rep.dim_v}")
    for h, k in m.s_part:
        if h < 0 or not 0 <= k < rep.dim_u:
            raise IndexError(f"s-part index {(h, k)} out of range")


def _add(ctx: FieldCtx, a: ModuleVector, b: ModuleVector, c=1) -> ModuleVector:
    s = dict(a.s_part)
    for key, v in b.s_part.items():
        s[key] = ctx.add(s.get(key, ctx.zero), ctx.mul(c, v))
    return ModuleVector(s, tuple(ctx.add(p, ctx.mul(c, q)) for p, q in zip(a.v_part, b.v_part)))


def vec_add(rep: GammaRep, a: ModuleVector, b: ModuleVector) -> ModuleVector:
    return _add(rep.ctx, a, b)


def vec_sub(rep: GammaRep, a: ModuleVector, b: ModuleVector) -> ModuleVector:
    return _add(rep.ctx, a, b, rep.ctx.neg(rep.ctx.one))


def vec_scale(rep: GammaRep, c, a: ModuleVector) -> ModuleVector:
    ctx = rep.ctx
    return ModuleVector({k: ctx.mul(c, v) for k, v in a.s_part.items()}, tuple(ctx.mul(c, v) for v in a.v_part))


def act_x(rep: GammaRep, m: ModuleVector) -> ModuleVector:
    _check_vector(rep, m)
    s = {(h - 1, k): c for (h, k), c in m.s_part.items() if h > 0}
    return ModuleVector(s, tuple(rep.F.apply(m.v_part)) if rep.dim_v else ())


def act_y(rep: GammaRep, m: ModuleVector) -> ModuleVector:
    _check_vector(rep, m)
    s = {(h + 1, k): c for (h, k), c in m.s_part.items()}
    if rep.dim_v:
        for k, c in enumerate(rep.E.apply(m.v_part)):
            if c:
                s[(0, k)] = c
        v = tuple(rep.F_inv.apply(m.v_part))
    else:
        v = ()
    return ModuleVector(s, v)


def act_element(rep: GammaRep, a: AlgebraElement, m: ModuleVector) -> ModuleVector:
    """a . m for a in R, evaluating each y^i x^j through act_x and act_y."""
    rep.ctx.check(a.ctx)
    out = ModuleVector.zero(rep)
    xs = {0: m}
    for (i, j), c in a.sorted_terms():
        for t in range(1, j + 1):
            if t not in xs:
                xs[t] = act_x(rep, xs[t - 1])
        w = xs[j]
        for _ in range(i):
            w = act_y(rep, w)
        out = _add(rep.ctx, out, w, c)
    return out


def psi_morphism(phi: tuple, m: ModuleVector) -> ModuleVector:
    """Apply Psi(phi) = (id (x) phi_u) + phi_v to a vector of the domain."""
    phi_u, phi_v = phi
    ctx = phi_u.ctx
    s: dict = {}
    for (h, k), c in m.s_part.items():
        for r in range(phi_u.rows):
            e = phi_u[r, k]
            if e:
                s[(h, r)] = ctx.add(s.get((h, r), ctx.zero), ctx.mul(e, c))
    v = tuple(phi_v.apply(m.v_part)) if phi_v.rows else ()
    return ModuleVector(s, v)


# -- windowed coordinates -------------------------------------------------


def window_dim(rep: GammaRep, height: int) -> int:
    return (height + 1) * rep.dim_u + rep.dim_v


def to_coords(rep: GammaRep, m: ModuleVector, height: int) -> list:
    """Coordinates in the window of heights <= height (s-part first, then v)."""
    ctx = rep.ctx
    out = [ctx.zero] * window_dim(rep, height)
    for (h, k), c in m.s_part.items():
        if h > height:
            raise ValueError(f"vector has height {h} outside window {height}")
        out[h * rep.dim_u + k] = c
    base = (height + 1) * rep.dim_u
    for i, c in enumerate(m.v_part):
        out[base + i] = c
    return out


def from_coords(rep: GammaRep, coords: Sequence, height: int) -> ModuleVector:
    du = rep.dim_u
    s = {}
    for idx in range((height + 1) * du):
        if coords[idx]:
            s[(idx // du, idx % du)] = coords[idx]
    return ModuleVector(s, tuple(coords[(height + 1) * du:]))


def window_basis(rep: GammaRep, height: int) -> list[ModuleVector]:
    ctx = rep.ctx
    n = window_dim(rep, height)
    out = []
    for i in range(n):
        c = [ctx.zero] * n
        c[i] = ctx.one
        out.append(from_coords(rep, c, height))
    return out


def operator_matrix(rep: GammaRep, op, height: int, target_height: int) -> ExactMatrix:
    """Matrix of a linear operator from the height-``height`` window into the
    height-``target_height`` window."""
    cols = [to_coords(rep, op(b), target_height) for b in window_basis(rep, height)]
    return ExactMatrix.from_columns(rep.ctx, cols, window_dim(rep, target_height))


# ---------------------------------------------------------------------------
# functor round trip


def xi_extract(rep: GammaRep, height: int = 2) -> GammaRep:
    """Read Xi(Psi(rep)) back off a window of the realized module.

    M_0 is computed as the kernel of x on the window, the splitting image is
    the v-coordinate block, psi_e is the M_0-component of y on that block and
    psi_f is x restricted to it.
    """
    ctx = rep.ctx
    n = window_dim(rep, height)
    X = operator_matrix(rep, lambda m: act_x(rep, m), height, height)
    K = kernel_basis(X)
    # kernel vectors carrying a v-component would contradict x invertible on M/IM
    base = (height + 1) * rep.dim_u
    M0 = [c for c in K.columns()]
    if any(any(c[base:]) for c in M0):
        raise RepError("kernel of x meets the splitting image")
    du2 = len(M0)
    dv = rep.dim_v
    V = [[ctx.one if i == base + j else ctx.zero for i in range(n)] for j in range(dv)]
    Y = operator_matrix(rep, lambda m: act_y(rep, m), height, height + 1)
    # express y b = m1 + m2 with m1 in M_0 and m2 in the splitting image
    target_n = window_dim(rep, height + 1)
    lift = lambda c: to_coords(rep, from_coords(rep, c, height), height + 1)
    basis = ExactMatrix.from_columns(ctx, [lift(c) for c in M0] + [lift(c) for c in V], target_n)
    E_cols, F_cols = [], []
    for j in range(dv):
        yb = Y.column(base + j)
        sol = solve(basis, yb)
        if sol is None:
            raise RepError("y does not preserve IM + image(alpha)")
        E_cols.append(sol[:du2])
        xb = X.column(base + j)
        F_cols.append(list(xb[base:]))
    E = ExactMatrix.from_columns(ctx, E_cols, du2) if dv else ExactMatrix(ctx, du2, 0)
    F = ExactMatrix.from_columns(ctx, F_cols, dv) if dv else ExactMatrix(ctx, 0, 0)
    return validate(GammaRep(ctx, du2, dv, E, F))


# ---------------------------------------------------------------------------
# morphisms


def _hom_system(a: GammaRep, b: GammaRep) -> ExactMatrix:
    """Linear conditions on (phi_u, phi_v) flattened row-major, phi_u first:
    phi_u E_a = E_b phi_v and phi_v F_a = F_b phi_v."""
    ctx = a.ctx
    nu = b.dim_u * a.dim_u
    nv = b.dim_v * a.dim_v
    U = lambda r, c: r * a.dim_u + c
    V = lambda r, c: nu + r * a.dim_v + c
    rows = []
    for r in range(b.dim_u):
        for c in range(a.dim_v):
            row = [ctx.zero] * (nu + nv)
            for k in range(a.dim_u):
                row[U(r, k)] = ctx.add(row[U(r, k)], a.E[k, c])
            for k in range(b.dim_v):
                row[V(k, c)] = ctx.sub(row[V(k, c)], b.E[r, k])
            rows.append(row)
    for r in range(b.dim_v):
        for c in range(a.dim_v):
            row = [ctx.zero] * (nu + nv)
            for k in range(a.dim_v):
                row[V(r, k)] = ctx.add(row[V(r, k)], a.F[k, c])
            for k in range(b.dim_v):
                row[V(k, c)] = ctx.sub(row[V(k, c)], b.F[r, k])
            rows.append(row)
    return ExactMatrix(ctx, len(rows), nu + nv, rows)


def _unflatten(a: GammaRep, b: GammaRep, vec: Sequence) -> tuple:
    ctx = a.ctx
    nu = b.dim_u * a.dim_u
    phi_u = ExactMatrix(ctx, b.dim_u, a.dim_u,
                        [vec[r * a.dim_u:(r + 1) * a.dim_u] for r in range(b.dim_u)])
    phi_v = ExactMatrix(ctx, b.dim_v, a.dim_v,
                        [vec[nu + r * a.dim_v: nu + (r + 1) * a.dim_v] for r in range(b.dim_v)])
    return phi_u, phi_v


def hom_basis_D(a: GammaRep, b: GammaRep) -> list[tuple]:
    """Basis of Hom(a, b) in the representation category, as (phi_u, phi_v)."""
    a.ctx.check(b.ctx)
    n = a.dim_u * b.dim_u + a.dim_v * b.dim_v
    if n == 0:
        return []
    sys = _hom_system(a, b)
    K = kernel_basis(sys) if sys.rows else ExactMatrix.identity(a.ctx, n)
    return [_unflatten(a, b, col) for col in K.columns()]


def hom_dim_D(a: GammaRep, b: GammaRep) -> int:
    a.ctx.check(b.ctx)
    n = a.dim_u * b.dim_u + a.dim_v * b.dim_v
    if n == 0:
        return 0
    sys = _hom_system(a, b)
    return n - (rank(sys) if sys.rows else 0)


def _combine(ctx: FieldCtx, basis: list[tuple], coeffs: Sequence) -> tuple:
    u, v = basis[0][0].scale(0), basis[0][1].scale(0)
    for (bu, bv), c in zip(basis, coeffs):
        if c:
            u = u + bu.scale(c)
            v = v + bv.scale(c)
    return u, v


def _is_iso(phi: tuple) -> bool:
    return is_invertible(phi[0]) and is_invertible(phi[1])


def find_isomorphism(a: GammaRep, b: GammaRep, rng: Optional[random.Random] = None,
                     attempts: int = 200, exhaustive_limit: int = 5000) -> Optional[tuple]:
    """An invertible (phi_u, phi_v) : a -> b, or ``None``.

    ``None`` is definitive when the necessary invariants differ or the hom
    space was enumerated exhaustively; otherwise it means the random search
    found no witness.
    """
    a.ctx.check(b.ctx)
    ctx = a.ctx
    if (a.dim_u, a.dim_v) != (b.dim_u, b.dim_v) or rank(a.E) != rank(b.E):
        return None
    if a.dim_u == 0 and a.dim_v == 0:
        return ExactMatrix(ctx, 0, 0), ExactMatrix(ctx, 0, 0)
    if hom_dim_D(a, b) != hom_dim_D(a, a) or hom_dim_D(b, a) != hom_dim_D(b, b):
        return None
    basis = hom_basis_D(a, b)
    if not basis:
        return None
    r = len(basis)
    if ctx.characteristic and ctx.characteristic ** r <= exhaustive_limit:
        for coeffs in itertools.product(range(ctx.characteristic), repeat=r):
            phi = _combine(ctx, basis, coeffs)
            if _is_iso(phi):
                return phi
        return None
    rng = rng or random.Random(0)
    for _ in range(attempts):
        if ctx.characteristic:
            coeffs = [rng.randrange(ctx.characteristic) for _ in range(r)]
        else:
            coeffs = [rng.randint(-3, 3) for _ in range(r)]
        phi = _combine(ctx, basis, coeffs)
        if _is_iso(phi):
            return phi
    return None


# ---------------------------------------------------------------------------
# invariants


def stats(rep: GammaRep) -> tuple[int, int, int]:
    """(length of IM, dim M/IM, d(M))."""
    return rep.dim_u, rep.dim_v, rep.dim_u - rank(rep.E)


def lf_dim_closed(rep: GammaRep) -> int:
    """dim lf(M) = dim of the intersection of ker(E F^h), h < dim_v."""
    if rep.dim_v == 0:
        return 0
    if rep.dim_u == 0:
        return rep.dim_v
    blocks = []
    P = rep.E
    for _ in range(rep.dim_v):
        blocks.extend(P.tolist())
        P = P @ rep.F
    return rep.dim_v - rank(ExactMatrix(rep.ctx, len(blocks), rep.dim_v, blocks))


def _lf_window(rep: GammaRep, height: int) -> int:
    from .algebra import idempotent_f
    ctx = rep.ctx
    K = rep.dim_v + height + 1
    reach = height + K + 1
    rows = []
    for k in range(1, K + 1):
        fk = idempotent_f(ctx, k)
        M = operator_matrix(rep, lambda m: act_element(rep, fk, m), height, reach)
        rows.extend(M.tolist())
    n = window_dim(rep, height)
    if n == 0:
        return 0
    return n - rank(ExactMatrix(ctx, len(rows), n, rows))


def lf_dim(rep: GammaRep, config: WindowConfig = WindowConfig()) -> int:
    """Dimension of the largest locally finite submodule, the common kernel of
    f_1, ..., f_K on a window of the realized module, certified by doubling
    the window height."""
    return certify(lambda h: _lf_window(rep, h), config.rep_height, config.budget,
                   grow=lambda h: 2 * max(1, h), what="lf dimension")


# ---------------------------------------------------------------------------
# exchange format


def rep_to_json(rep: GammaRep) -> dict:
    fmt = rep.ctx.format
    return {
        "field": str(rep.ctx),
        "dim_u": rep.dim_u,
        "dim_v": rep.dim_v,
        "E": [fmt(v) for v in rep.E.flat()],
        "F": [fmt(v) for v in rep.F.flat()],
    }


def rep_from_json(data, ctx: Optional[FieldCtx] = None) -> GammaRep:
    """Parse the exchange format; ``data`` may be a dict or JSON text.

    E and F are row-major, either flat or nested, with scalars as text.
    """
    if isinstance(data, str):
        data = json.loads(data)
    try:
        fctx = FieldCtx.parse(data["field"]) if "field" in data else ctx
        if fctx is None:
            raise RepError("representation has no field marker")
        if ctx is not None and fctx != ctx:
            raise RepError(f"representation is over {fctx}, expected {ctx}")
        du, dv = int(data["dim_u"]), int(data["dim_v"])

        def grid(key, r, c):
            raw = data.get(key, [])
            flat = [x for row in raw for x in row] if raw and isinstance(raw[0], list) else list(raw)
            if len(flat) != r * c:
                raise RepError(f"{key} has {len(flat)} entries, expected {r * c}")
            vals = [fctx.parse_scalar(str(x)) for x in flat]
            return ExactMatrix(fctx, r, c, [vals[i * c:(i + 1) * c] for i in range(r)])

        E = grid("E", du, dv)
        F = grid("F", dv, dv)
    except (KeyError, TypeError) as exc:
        raise RepError(f"malformed representation: {exc}") from None
    return validate(GammaRep(fctx, du, dv, E, F))
