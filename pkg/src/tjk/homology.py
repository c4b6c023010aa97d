"""Hom and Ext^1 dimensions for finite-length R-modules given as GammaReps.

Closed formulas reduce everything to finite-dimensional modules over the
Laurent ring K[X, X^-1] (a square invertible matrix A describes the module
where X acts by A).  ``ext_oracle`` and ``hom_R_dim`` instead work on a
concrete projective presentation of the realized module and truncate to
finite windows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import AlgebraElement, XPolynomial
from .reps import (GammaRep, ModuleVector, act_element, act_y, stats, to_coords, vec_add, window_basis,
                   window_dim)
from .scalars import ExactMatrix, is_invertible, kernel_basis, rank, solve
from .windows import WindowConfig, certify

__all__ = [
    "FormulaError",
    "PresentationError",
    "laurent_hom_dim",
    "laurent_ext_dim",
    "ext_Lp_S1k_dim",
    "ExtClassVector",
    "build_extension",
    "ext_M_S1k_dim",
    "lf_submodule",
    "hom_R_dim",
    "ext_oracle",
    "ext_dim_general",
    "applicable_formulas",
    "Presentation",
]

DEFAULT_CONFIG = WindowConfig()


class FormulaError(ValueError):
    """The selected formula does not apply to the given modules."""


class PresentationError(RuntimeError):
    """The projective presentation failed its window-scale exactness check."""


# ---------------------------------------------------------------------------
# Laurent side


def _check_laurent(*mats: ExactMatrix) -> None:
    for m in mats:
        if not is_invertible(m):
            raise ValueError("Laurent module matrix must be square and invertible")


def laurent_hom_dim(A: ExactMatrix, B: ExactMatrix) -> int:
    """dim {Z : Z A = B Z}, i.e. Hom(M_A, M_B) over K[X, X^-1]."""
    _check_laurent(A, B)
    A.ctx.check(B.ctx)
    ctx = A.ctx
    a, b = A.rows, B.rows
    if a == 0 or b == 0:
        return 0
    rows = []
    # equation (r, c) of Z A - B Z, unknown Z[i, j] at index i * a + j
    for r in range(b):
        for c in range(a):
            row = [ctx.zero] * (a * b)
            for k in range(a):
                row[r * a + k] = ctx.add(row[r * a + k], A[k, c])
            for k in range(b):
                row[k * a + c] = ctx.sub(row[k * a + c], B[r, k])
            rows.append(row)
    return len(kernel_basis(ExactMatrix(ctx, len(rows), a * b, rows)).columns())


def laurent_ext_dim(A: ExactMatrix, B: ExactMatrix) -> int:
    """dim Ext^1(M_A, M_B) over K[X, X^-1].

    From the free presentation 0 -> L^a --(X - A)--> L^a -> M_A -> 0, Ext^1 is
    the cokernel of Z -> B Z - Z A on Hom_K(K^a, K^b).  The matrix of that map
    is I (x) B - A^T (x) I in column-stacked coordinates.
    """
    _check_laurent(A, B)
    A.ctx.check(B.ctx)
    ctx = A.ctx
    a, b = A.rows, B.rows
    n = a * b
    if n == 0:
        return 0
    # vec(Z) stacks columns: Z[i, j] -> j * b + i
    data = [[ctx.zero] * n for _ in range(n)]
    for j in range(a):
        for i in range(b):
            col = j * b + i
            # (B Z)[r, j] picks B[r, i]
            for r in range(b):
                data[j * b + r][col] = ctx.add(data[j * b + r][col], B[r, i])
            # (Z A)[i, c] picks A[j, c]
            for c in range(a):
                data[c * b + i][col] = ctx.sub(data[c * b + i][col], A[j, c])
    return n - rank(ExactMatrix(ctx, n, n, data))


def ext_Lp_S1k_dim(p: XPolynomial, k: int) -> int:
    """dim Ext^1(L_p, S_1^k) = k deg p after removing powers of x."""
    if p.is_zero():
        raise ValueError("L_p needs a nonzero polynomial")
    if k < 0:
        raise ValueError("k must be non-negative")
    return k * p.strip_x().degree


# ---------------------------------------------------------------------------
# extensions of L_p by S_1^k


@dataclass(frozen=True)
class ExtClassVector:
    """k residue classes in K[T]/(p*(T)), each reduced (degree < deg p)."""

    p: XPolynomial
    classes: tuple

    def __post_init__(self):
        q = self.p.strip_x()
        if q.is_zero():
            raise ValueError("zero polynomial")
        object.__setattr__(self, "p", q.monic())
        object.__setattr__(self, "classes", tuple(self.classes))
        d = self.p.degree
        for c in self.classes:
            if not c.is_zero() and c.degree >= d:
                raise ValueError(f"class {c.coeffs} is not reduced modulo a degree-{d} polynomial")

    @property
    def k(self) -> int:
        return len(self.classes)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.classes)


def build_extension(p: XPolynomial, cls) -> GammaRep:
    """Middle term of the extension of L_p by S_1^k with class ``cls``.

    Row i of E lists the coefficients of the i-th class polynomial (degree
    < deg p) against the ordered companion basis of L_p.
    """
    if not isinstance(cls, ExtClassVector):
        cls = ExtClassVector(p, tuple(cls))
    q = cls.p
    ctx = q.ctx
    d, k = q.degree, cls.k
    E = [[c.coeffs[j] if j < len(c.coeffs) else ctx.zero for j in range(d)] for c in cls.classes]
    Emat = ExactMatrix(ctx, k, d, E) if k and d else ExactMatrix(ctx, k, d)
    F = q.companion() if d else ExactMatrix(ctx, 0, 0)
    return GammaRep(ctx, k, d, Emat, F)


def ext_M_S1k_dim(rep: GammaRep, k: int) -> int:
    """k (dim M/IM - length of IM) after splitting off the d(M) copies of S_1."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return k * (rep.dim_v - rank(rep.E))


# ---------------------------------------------------------------------------
# locally finite part


def lf_submodule(rep: GammaRep) -> ExactMatrix:
    """Matrix of X on lf(M) = {(0, v) : E F^h v = 0 for all h} (a basis of
    that subspace is chosen by kernel computation)."""
    ctx = rep.ctx
    dv = rep.dim_v
    if dv == 0:
        return ExactMatrix(ctx, 0, 0)
    blocks = []
    P = rep.E
    for _ in range(dv):
        blocks.extend(P.tolist())
        P = P @ rep.F
    if blocks:
        W = kernel_basis(ExactMatrix(ctx, len(blocks), dv, blocks))
    else:
        W = ExactMatrix.identity(ctx, dv)
    if W.cols == 0:
        return ExactMatrix(ctx, 0, 0)
    cols = []
    for w in W.columns():
        sol = solve(W, rep.F.apply(w))
        if sol is None:  # pragma: no cover - the subspace is F-invariant
            raise ArithmeticError("lf subspace is not F-invariant")
        cols.append(sol)
    return ExactMatrix.from_columns(ctx, cols, W.cols)


# ---------------------------------------------------------------------------
# presentation and windowed Hom / Ext


@dataclass(frozen=True)
class Presentation:
    """0 -> R^{m_v} --delta--> S_1^{m_u} + R^{m_v} --eps--> M -> 0 with

        delta(e_j) = y e_j - iota(E v_j) - sum_k (F^-1)[k, j] e_k,
        eps(f_1 in copy k) = f_1 (x) u_k,   eps(e_j) = v_j.
    """

    rep: GammaRep

    @property
    def m_u(self) -> int:
        return self.rep.dim_u

    @property
    def m_v(self) -> int:
        return self.rep.dim_v

    def delta(self, r: AlgebraElement, j: int) -> tuple[list, list]:
        """delta(r e_j) as (S_1 parts as {height: c} per u-copy, R parts per v-copy)."""
        rep = self.rep
        ctx = rep.ctx
        s_parts = [dict() for _ in range(rep.dim_u)]
        # r f_1 lies in S_1 = span{y^h f_1}: its x-free terms give the heights
        rf1_heights = {i: c for (i, jj), c in r.terms.items() if jj == 0}
        for k in range(rep.dim_u):
            e = rep.E[k, j]
            if e:
                s_parts[k] = {h: ctx.neg(ctx.mul(e, c)) for h, c in rf1_heights.items()}
        r_parts = [AlgebraElement.zero(ctx) for _ in range(rep.dim_v)]
        r_parts[j] = r * AlgebraElement.y(ctx)
        for k in range(rep.dim_v):
            c = rep.F_inv[k, j]
            if c:
                r_parts[k] = r_parts[k] - r.scale(c)
        return s_parts, r_parts

    def epsilon(self, s_parts: Sequence[dict], r_parts: Sequence[AlgebraElement]) -> ModuleVector:
        rep = self.rep
        ctx = rep.ctx
        s = {}
        for k, part in enumerate(s_parts):
            for h, c in part.items():
                s[(h, k)] = c
        out = ModuleVector(s, (ctx.zero,) * rep.dim_v)
        for j, r in enumerate(r_parts):
            if r:
                unit = ModuleVector({}, tuple(ctx.one if t == j else ctx.zero for t in range(rep.dim_v)))
                img = act_element(rep, r, unit)
                out = vec_add(rep, out, img)
        return out

    def validate(self, max_y: int = 3, max_x: int = 3) -> None:
        """Check exactness on a window: delta injective, eps o delta = 0 and
        ker eps = im delta.  Raises :class:`PresentationError`."""
        rep = self.rep
        ctx = rep.ctx
        if rep.dim_v == 0:
            return  # P_0 = S_1^{m_u} = M, nothing to check
        Y, X = max_y, max_x
        p1 = [(i, b) for i in range(Y + 1) for b in range(X + 1) if (i, b) != (Y, 0)]
        r_mon = [(i, b) for i in range(Y + 1) for b in range(X + 1)]
        r_pos = {m: t for t, m in enumerate(r_mon)}
        Hs = Y
        n_s = (Hs + 1) * rep.dim_u
        n0 = n_s + len(r_mon) * rep.dim_v

        def p0_coords(s_parts, r_parts):
            v = [ctx.zero] * n0
            for k, part in enumerate(s_parts):
                for h, c in part.items():
                    v[h * rep.dim_u + k] = c
            for j, r in enumerate(r_parts):
                for m, c in r.terms.items():
                    v[n_s + j * len(r_mon) + r_pos[m]] = c
            return v

        # delta on the P_1 window
        cols = []
        for j in range(rep.dim_v):
            for (i, b) in p1:
                s_parts, r_parts = self.delta(AlgebraElement.monomial(ctx, i, b), j)
                cols.append(p0_coords(s_parts, r_parts))
                img = self.epsilon(s_parts, r_parts)
                if not img.is_zero():
                    raise PresentationError(f"eps(delta(y^{i} x^{b} e_{j})) != 0")
        D = ExactMatrix.from_columns(ctx, cols, n0)
        rk = rank(D)
        if rk != len(cols):
            raise PresentationError("delta is not injective on the window")
        # eps on the P_0 window, landing in heights <= Y + X + 1
        height = Y + X + 1
        ecols = []
        for k in range(rep.dim_u):
            for h in range(Hs + 1):
                ecols.append(to_coords(rep, ModuleVector({(h, k): ctx.one}, (ctx.zero,) * rep.dim_v), height))
        for j in range(rep.dim_v):
            for (i, b) in r_mon:
                parts = [AlgebraElement.zero(ctx)] * rep.dim_v
                parts[j] = AlgebraElement.monomial(ctx, i, b)
                ecols.append(to_coords(rep, self.epsilon([{}] * rep.dim_u, parts), height))
        Emat = ExactMatrix.from_columns(ctx, ecols, window_dim(rep, height))
        ker = n0 - rank(Emat)
        if ker != rk:
            raise PresentationError(f"ker eps has dimension {ker} on the window but im delta has {rk}")


def _hom_ext_window(M: GammaRep, N: GammaRep, H: int) -> tuple[int, int]:
    """(dim ker D, dim coker D) for D : Hom(P_0, N) -> Hom(P_1, N) restricted to
    the window of N of heights <= H (domain) and <= H + 1 (codomain)."""
    ctx = M.ctx
    du_M, dv_M = M.dim_u, M.dim_v
    nN = window_dim(N, H)
    nN1 = window_dim(N, H + 1)
    # Hom(S_1, N) = f_1 N = the height-0 slice of the S_1-part of N
    n_a = du_M * N.dim_u
    n_b = dv_M * nN
    n_dom = n_a + n_b
    n_cod = dv_M * nN1
    if n_dom == 0:
        return 0, n_cod
    if n_cod == 0:
        return n_dom, 0
    Finv = M.F_inv
    # y on the N window, and the inclusion of heights <= H into <= H + 1
    basis = window_basis(N, H)
    y_cols = [to_coords(N, act_y(N, b), H + 1) for b in basis]
    inc_cols = [to_coords(N, b, H + 1) for b in basis]
    cols = []
    # a-unknowns: a_k = height-0 basis vector (0, t) of N
    for k in range(du_M):
        for t in range(N.dim_u):
            col = [ctx.zero] * n_cod
            idx = t  # height 0, index t, same in both windows
            for j in range(dv_M):
                e = M.E[k, j]
                if e:
                    col[j * nN1 + idx] = ctx.sub(col[j * nN1 + idx], e)
            cols.append(col)
    for j0 in range(dv_M):
        for t in range(nN):
            col = [ctx.zero] * n_cod
            yc = y_cols[t]
            for r in range(nN1):
                if yc[r]:
                    col[j0 * nN1 + r] = ctx.add(col[j0 * nN1 + r], yc[r])
            ic = inc_cols[t]
            for j in range(dv_M):
                c = Finv[j0, j]
                if c:
                    for r in range(nN1):
                        if ic[r]:
                            col[j * nN1 + r] = ctx.sub(col[j * nN1 + r], ctx.mul(c, ic[r]))
            cols.append(col)
    D = ExactMatrix.from_columns(ctx, cols, n_cod)
    rk = rank(D)
    return n_dom - rk, n_cod - rk


def hom_R_dim(M: GammaRep, N: GammaRep, config: WindowConfig = DEFAULT_CONFIG) -> int:
    """dim Hom_R(Psi M, Psi N), the kernel of Hom(P_0, N) -> Hom(P_1, N),
    certified by doubling the window height on N."""
    M.ctx.check(N.ctx)
    return certify(lambda h: _hom_ext_window(M, N, h)[0], config.rep_height, config.budget,
                   grow=lambda h: 2 * max(1, h), what="Hom_R dimension")


def ext_oracle(M: GammaRep, N: GammaRep, config: WindowConfig = DEFAULT_CONFIG, validate: bool = True) -> int:
    """dim Ext^1(Psi M, Psi N) as the cokernel of Hom(P_0, N) -> Hom(P_1, N).

    The presentation is checked for exactness on a window first.
    """
    M.ctx.check(N.ctx)
    if validate:
        Presentation(M).validate()
    return certify(lambda h: _hom_ext_window(M, N, h)[1], config.rep_height, config.budget,
                   grow=lambda h: 2 * max(1, h), what="Ext oracle")


# ---------------------------------------------------------------------------
# closed formulas


def _v_matrix(rep: GammaRep) -> ExactMatrix:
    return rep.F


def _formula_i(F: GammaRep, N: GammaRep) -> int:
    A = _v_matrix(F)
    return (laurent_ext_dim(A, N.F) + N.dim_u * F.dim_v
            + laurent_hom_dim(A, lf_submodule(N)) - laurent_hom_dim(A, N.F))


def applicable_formulas(M: GammaRep, N: GammaRep) -> list[str]:
    out = []
    if M.dim_u == 0:
        out.append("i")
    out.append("ii")
    if N.dim_u == 0:
        out.append("iii")
    out.append("iv")
    return out


def ext_dim_general(M: GammaRep, N: GammaRep, which: str = "auto",
                    config: WindowConfig = DEFAULT_CONFIG) -> int:
    """dim Ext^1(M, N) by one of the closed formulas (i)-(iv).

    ``auto`` picks (i) when M is finite-dimensional, else (iii) when N is,
    else (iv).  Formulas (ii) and (iv) need dim Hom_R(M, N), which is taken
    from the windowed :func:`hom_R_dim`.
    """
    M.ctx.check(N.ctx)
    if which == "auto":
        which = "i" if M.dim_u == 0 else ("iii" if N.dim_u == 0 else "iv")
    if which == "i":
        if M.dim_u:
            raise FormulaError("formula (i) needs a finite-dimensional first argument (IM = 0)")
        return _formula_i(M, N)
    if which == "ii":
        Mq = GammaRep(M.ctx, 0, M.dim_v, ExactMatrix(M.ctx, 0, M.dim_v), M.F)
        return (_formula_i(Mq, N) + hom_R_dim(M, N, config)
                - laurent_hom_dim(M.F, lf_submodule(N)) - M.dim_u * N.dim_u)
    if which == "iii":
        if N.dim_u:
            raise FormulaError("formula (iii) needs a finite-dimensional second argument (IN = 0)")
        return laurent_ext_dim(M.F, N.F)
    if which == "iv":
        d_M = stats(M)[2]
        return (laurent_ext_dim(M.F, N.F) + ext_M_S1k_dim(M, N.dim_u) + hom_R_dim(M, N, config)
                - laurent_hom_dim(M.F, N.F) - d_M * N.dim_u)
    raise FormulaError(f"unknown formula {which!r}")
