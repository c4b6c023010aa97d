"""Left ideals of R: canonical decomposition H = K[y]L + Rp(x) and membership.

Two independent routes compute the pair (p, L):

* a windowed route (``window_span``, ``minimal_polynomial``,
  ``socle_component``) that works with finite snapshots of H and certifies
  each answer by doubling the window until two consecutive answers agree;
* an exact structural route (``exact_canonical_form``) that projects the
  generators onto S_1 + ... + S_D along R P for a polynomial P known to lie
  in H, and reads L off the K[x]-socle of the projection.

``canonical_form`` runs the windowed route and refuses to answer unless the
structural route agrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import (AlgebraElement, LaurentPoly, XPolynomial, quotient_to_laurent, socle_coord_basis,
                      socle_element, x_power)
from .scalars import (ExactMatrix, FieldCtx, column_echelon, flint_row, flint_sparse, kernel_basis, rank,
                      rref_sparse)
from .windows import StabilizationError, TruncationWindow, WindowConfig, certify

__all__ = [
    "IdealCanonicalForm",
    "window_span",
    "minimal_polynomial",
    "socle_component",
    "canonical_form",
    "exact_canonical_form",
    "member",
    "is_semisimple",
    "IdealStructure",
]

DEFAULT_CONFIG = WindowConfig()


def _trim_rows(m: ExactMatrix) -> ExactMatrix:
    """Drop trailing all-zero rows (fixes the socle-coordinate length d_L)."""
    data = m.tolist()
    while data and not any(data[-1]):
        data.pop()
    return ExactMatrix._raw(m.ctx, len(data), m.cols if data else 0, data if m.cols else [])


def _canonical_L(ctx: FieldCtx, vectors: Sequence[Sequence], length: int) -> ExactMatrix:
    if not vectors or length == 0:
        return ExactMatrix(ctx, 0, 0)
    m = ExactMatrix.from_columns(ctx, vectors, length)
    return _trim_rows(column_echelon(m))


@dataclass(frozen=True)
class IdealCanonicalForm:
    """The pair (p, L) determining a left ideal H = K[y]L + Rp(x).

    ``p`` is monic of minimal degree in H (zero when H is semisimple, the
    constant 1 for the unit ideal).  Columns of ``L`` are coordinates over
    x^(k-1) f_k, k = 1..L.rows, in column-echelon form.
    """

    p: XPolynomial
    L: ExactMatrix

    @property
    def ctx(self) -> FieldCtx:
        return self.p.ctx

    @property
    def unit(self) -> bool:
        return self.p.degree == 0

    @property
    def semisimple(self) -> bool:
        return self.p.is_zero()

    def socle_elements(self) -> list[AlgebraElement]:
        return [socle_element(self.ctx, col) for col in self.L.columns()]

    def generators(self) -> list[AlgebraElement]:
        """Generators of the ideal the pair describes."""
        gens = self.socle_elements()
        if not self.p.is_zero():
            gens.append(self.p.to_element())
        return gens

    def to_json(self) -> dict:
        fmt = self.ctx.format
        return {
            "p": [fmt(c) for c in self.p.coeffs],
            "L": [[fmt(v) for v in col] for col in self.L.columns()],
            "unit": self.unit,
            "semisimple": self.semisimple,
        }


def is_semisimple(icf: IdealCanonicalForm) -> bool:
    return icf.p.is_zero()


# ---------------------------------------------------------------------------
# exact structural route


def _socle_decompose(e: AlgebraElement) -> dict:
    """Coordinates of e in I over the basis B(h, k) = y^h x^(k-1) f_k.

    Returns ``{k: {h: c}}``.  Each diagonal j - i = const of an element of I
    has vanishing coefficient sum, so it telescopes into consecutive
    differences y^a x^(a+d) - y^(a+1) x^(a+d+1) = B(a, a+d+1).
    """
    ctx = e.ctx
    diagonals: dict = {}
    for (i, j), c in e.terms.items():
        diagonals.setdefault(j - i, []).append((i, c))
    out: dict = {}
    for d, entries in diagonals.items():
        entries.sort()
        acc = ctx.zero
        prev = None
        for i, c in entries:
            if prev is not None and acc:
                for a in range(prev, i):
                    out.setdefault(a + d + 1, {})[a] = acc
            acc = ctx.add(acc, c)
            prev = i
        if acc:
            raise ValueError("element is not in the socle I")
    return out


def _reduce_indices(decomp: dict, P: XPolynomial) -> dict:
    """Reduce S_k components with k > deg P using y^h x^(m-1-D) f_(m-D) P in IP.

    In index space this is reduction of sum_k c_k(T) Z^k modulo Z P(Z).
    """
    ctx = P.ctx
    D = P.degree
    alpha = P.monic().coeffs
    out = {k: dict(v) for k, v in decomp.items() if v}
    for m in sorted((k for k in out if k > D), reverse=True):
        top = out.pop(m, None)
        if not top:
            continue
        for i in range(D):
            a = alpha[i]
            if not a:
                continue
            slot = out.setdefault(m - D + i, {})
            for h, c in top.items():
                v = ctx.sub(slot.get(h, 0), ctx.mul(a, c))
                if v:
                    slot[h] = v
                else:
                    slot.pop(h, None)
    return {k: v for k, v in out.items() if v}


def _slices(decomp: dict, length: int, ctx: FieldCtx) -> list[list]:
    """One coefficient vector over the indices 1..length per power of T."""
    heights = sorted({h for comp in decomp.values() for h in comp})
    vecs = []
    for h in heights:
        v = [decomp.get(k, {}).get(h, ctx.zero) for k in range(1, length + 1)]
        if any(v):
            vecs.append(v)
    return vecs


@dataclass(frozen=True)
class IdealStructure:
    """H = (K[T] (x) W) + R P, with P in H and W a subspace of K^D.

    ``P`` is ``None`` when H is contained in I; ``W`` then lives in K^D with
    D the largest socle index that occurs.
    """

    ctx: FieldCtx
    P: Optional[XPolynomial]
    W: ExactMatrix
    q: Optional[XPolynomial] = None

    @property
    def D(self) -> int:
        return self.W.rows if self.P is None else self.P.degree

    def _residual(self, e: AlgebraElement) -> Optional[dict]:
        """Projection of e to the socle part along R P, or None if e lies
        outside I + R P."""
        img = quotient_to_laurent(e)
        if self.P is None:
            if img:
                return None
            return _socle_decompose(e)
        if img:
            v, g0 = img.split()
            nP, q = self.P.valuation(), self.P.strip_x()
            quo, rem = g0.divmod(q)
            if rem:
                return None
            t = LaurentPoly.from_poly(quo, v - nP).lift()
            e = e - t * self.P.to_element()
        return _reduce_indices(_socle_decompose(e), self.P)

    def contains(self, e: AlgebraElement) -> bool:
        decomp = self._residual(e)
        if decomp is None:
            return False
        if self.P is None and decomp and max(decomp) > self.W.rows:
            return False
        vecs = _slices(decomp, self.D, self.ctx)
        if not vecs:
            return True
        if self.W.cols == 0:
            return False
        base = rank(self.W)
        return rank(self.W.hstack(ExactMatrix.from_columns(self.ctx, vecs, self.D))) == base


def structure(gens: Sequence[AlgebraElement], ctx: Optional[FieldCtx] = None,
              P: Optional[XPolynomial] = None) -> IdealStructure:
    """Exact decomposition of H = sum R g.  If ``P`` is given it must lie in H."""
    gens = [g for g in gens if g]
    if ctx is None:
        if not gens:
            raise ValueError("field context required for an empty generator list")
        ctx = gens[0].ctx
    for g in gens:
        ctx.check(g.ctx)
    if P is None:
        polys = []
        for g in gens:
            if quotient_to_laurent(g):
                polys.append((x_power(ctx, g.max_y) * g).to_x_polynomial())
        if polys:
            P = polys[0]
            for f in polys[1:]:
                P = P.gcd(f)
            P = P.monic()
    if P is None:
        decomps = [_socle_decompose(g) for g in gens]
        D = max((k for d in decomps for k in d), default=0)
        vecs = [v for d in decomps for v in _slices(d, D, ctx)]
        W = _canonical_L(ctx, vecs, D)
        return IdealStructure(ctx, None, W, None)
    P = P.monic()
    shell = IdealStructure(ctx, P, ExactMatrix(ctx, P.degree, 0), P.strip_x())
    vecs = []
    for g in gens:
        decomp = shell._residual(g)
        if decomp is None:
            raise ValueError("generator lies outside I + RP; P is not in the ideal")
        vecs.extend(_slices(decomp, P.degree, ctx))
    if vecs:
        W = column_echelon(ExactMatrix.from_columns(ctx, vecs, P.degree))
    else:
        W = ExactMatrix(ctx, P.degree, 0)
    return IdealStructure(ctx, P, W, P.strip_x())


def exact_canonical_form(gens: Sequence[AlgebraElement], ctx: Optional[FieldCtx] = None) -> IdealCanonicalForm:
    """Canonical (p, L) by projection onto the socle; no windows involved."""
    st = structure(gens, ctx)
    ctx = st.ctx
    if st.P is None:
        return IdealCanonicalForm(XPolynomial(ctx), _trim_rows(st.W) if st.W.cols else ExactMatrix(ctx, 0, 0))
    q = st.q
    n = st.P.valuation()
    p = st.P
    for a in range(n + 1):
        cand = q.shift(a)
        if st.contains(cand.to_element()):
            p = cand
            break
    final = structure(gens, ctx, P=p)
    L = _trim_rows(final.W) if final.W.cols else ExactMatrix(ctx, 0, 0)
    return IdealCanonicalForm(p, L)


# ---------------------------------------------------------------------------
# windowed route


def _check_window(gens: Sequence[AlgebraElement], w: TruncationWindow) -> None:
    for g in gens:
        if g and not (g.max_y <= w.max_y and g.max_x <= w.max_x):
            raise ValueError(f"window {w} too small for generator support ({g.max_y}, {g.max_x})")


def _window_multiples(gens: Sequence[AlgebraElement], w: TruncationWindow) -> list[dict]:
    """Sparse rows y^i x^j g for every product that stays inside the window."""
    _check_window(gens, w)
    ctx = gens[0].ctx
    Y, X = w.max_y, w.max_x
    rows = []
    for g in gens:
        if not g:
            continue
        items = list(g.terms.items())
        A = g.max_y
        for j in range(X + A + 1):
            shifted = {}
            ok = True
            for (a, b), c in items:
                key = (a - j, b) if a >= j else (0, j - a + b)
                if key[1] > X:
                    ok = False
                    break
                v = ctx.add(shifted.get(key, ctx.zero), c)
                if v:
                    shifted[key] = v
                else:
                    shifted.pop(key, None)
            if not ok or not shifted:
                continue
            top = max(k[0] for k in shifted)
            for i in range(Y - top + 1):
                rows.append({(a + i, b): c for (a, b), c in shifted.items()})
    return rows


def _rref_sparse(ctx: FieldCtx, rows: list[dict], order: list):
    """RREF (flint form, pivots) of sparse rows with columns arranged by
    ``order`` (a list of monomials)."""
    pos = {m: k for k, m in enumerate(order)}
    return rref_sparse(ctx, [{pos[m]: c for m, c in r.items()} for r in rows], len(order))


def window_span(gens: Sequence[AlgebraElement], w: TruncationWindow, ctx: Optional[FieldCtx] = None) -> ExactMatrix:
    """Column-echelon basis (over window coordinates, row index i*(max_x+1)+j)
    of the span of the multiples y^i x^j g that fit in ``w``."""
    ctx = ctx or next(g.ctx for g in gens)
    m, pivots = _rref_sparse(ctx, _window_multiples(gens, w), w.monomials())
    if not pivots:
        return ExactMatrix(ctx, w.dim, 0)
    basis = [flint_row(ctx, m, i) for i in range(len(pivots))]
    return ExactMatrix._raw(ctx, w.dim, len(basis), [[b[k] for b in basis] for k in range(w.dim)])


def _window_min_poly(gens, ctx: FieldCtx, w: TruncationWindow) -> XPolynomial:
    # pure-x coordinates last, descending degree: the last pivot row inside
    # that block is the monic element of least degree
    X = w.max_x
    order = [(i, j) for i in range(1, w.max_y + 1) for j in range(X + 1)] + [(0, j) for j in range(X, -1, -1)]
    m, pivots = _rref_sparse(ctx, _window_multiples(gens, w), order)
    first_x = w.max_y * (X + 1)
    if not pivots or pivots[-1] < first_x:
        return XPolynomial(ctx)
    return XPolynomial(ctx, flint_row(ctx, m, len(pivots) - 1, [first_x + (X - j) for j in range(X + 1)]))


def _default_start(gens, config: WindowConfig) -> TruncationWindow:
    my = max((g.max_y for g in gens if g), default=0)
    mx = max((g.max_x for g in gens if g), default=0)
    return config.start_for(my, mx)


def _ctx_of(gens, ctx):
    if ctx is not None:
        return ctx
    for g in gens:
        return g.ctx
    raise ValueError("field context required for an empty generator list")


def minimal_polynomial(gens: Sequence[AlgebraElement], config: WindowConfig = DEFAULT_CONFIG,
                       ctx: Optional[FieldCtx] = None) -> XPolynomial:
    """Monic generator of H ∩ K[x] (zero if H is semisimple), window-certified."""
    ctx = _ctx_of(gens, ctx)
    gens = [g for g in gens if g]
    if not gens:
        return XPolynomial(ctx)
    return certify(lambda w: _window_min_poly(gens, ctx, w), _default_start(gens, config),
                   config.budget, what="minimal polynomial")


def _window_socle(gens, ctx: FieldCtx, d: Optional[int], w: TruncationWindow) -> ExactMatrix:
    X = w.max_x
    if w.max_y < 1:
        raise ValueError("socle coordinates need max_y >= 1")
    top = X if d is None else min(d, X)
    if d is not None and d > X:
        raise ValueError(f"window {w} cannot hold x^(k-1) f_k for k = {d}")
    if top == 0:
        return ExactMatrix(ctx, 0, 0)
    order = w.monomials()
    m, pivots = _rref_sparse(ctx, _window_multiples(gens, w), order)
    sock = socle_coord_basis(ctx, top)
    pos = {mono: k for k, mono in enumerate(order)}
    S = [{pos[mono]: c for mono, c in s.terms.items()} for s in sock]
    if pivots:
        # reduce each socle vector against the echelon basis; combinations
        # with zero residue lie in the span
        coeffs = [{i: s[pc] for i, pc in enumerate(pivots) if pc in s} for s in S]
        R = flint_sparse(ctx, S, w.dim) - flint_sparse(ctx, coeffs, m.nrows()) * m
        residues = [flint_row(ctx, R, k) for k in range(len(S))]
    else:
        residues = [[s.get(k, ctx.zero) for k in range(w.dim)] for s in S]
    res = ExactMatrix.from_columns(ctx, residues, w.dim)
    coeffs = kernel_basis(res)
    return _canonical_L(ctx, coeffs.columns(), top)


def socle_component(gens: Sequence[AlgebraElement], p: XPolynomial, config: WindowConfig = DEFAULT_CONFIG,
                    ctx: Optional[FieldCtx] = None) -> ExactMatrix:
    """Basis of H ∩ span{x^(k-1) f_k : k <= deg p} in socle coordinates
    (all k inside the window when p = 0), window-certified."""
    ctx = _ctx_of(gens, ctx)
    gens = [g for g in gens if g]
    if not gens:
        return ExactMatrix(ctx, 0, 0)
    d = None if p.is_zero() else p.degree
    start = _default_start(gens, config)
    if d is not None and start.max_x < d:
        start = TruncationWindow(max(start.max_y, 1), d + config.pad[1])
    return certify(lambda w: _window_socle(gens, ctx, d, w), start, config.budget, what="socle component")


def canonical_form(gens: Sequence[AlgebraElement], config: WindowConfig = DEFAULT_CONFIG,
                   ctx: Optional[FieldCtx] = None) -> IdealCanonicalForm:
    """Canonical (p, L) of the left ideal generated by ``gens``.

    The windowed answer is accepted only if it matches the exact structural
    decomposition; otherwise :class:`StabilizationError` is raised.
    """
    ctx = _ctx_of(gens, ctx)
    gens = [g for g in gens if g]
    if not gens:
        return IdealCanonicalForm(XPolynomial(ctx), ExactMatrix(ctx, 0, 0))
    p = minimal_polynomial(gens, config, ctx)
    L = socle_component(gens, p, config, ctx)
    windowed = IdealCanonicalForm(p, L)
    exact = exact_canonical_form(gens, ctx)
    if windowed != exact:
        raise StabilizationError(
            f"windowed form (p={p.coeffs}, dim L={L.cols}) disagrees with the structural decomposition"
            f" (p={exact.p.coeffs}, dim L={exact.L.cols}); enlarge the window or budget")
    return windowed


def member(e: AlgebraElement, gens: Sequence[AlgebraElement], config: WindowConfig = DEFAULT_CONFIG,
           ctx: Optional[FieldCtx] = None) -> bool:
    """Whether e lies in the left ideal generated by ``gens``."""
    ctx = _ctx_of([e, *gens], ctx)
    if not e:
        return True
    return canonical_form([*gens, e], config, ctx) == canonical_form(gens, config, ctx)
