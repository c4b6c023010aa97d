"""Elements of R = K<x,y>/(xy - 1) in the normal form basis {y^i x^j}.

Because xy = 1 is the only relation, every word in x and y reduces to a
unique monomial y^i x^j, and the sparse table of coefficients over these
monomials *is* the element.
"""

from __future__ import annotations

from random import Random
from typing import Iterable, Mapping, Optional, Sequence

from .scalars import FieldCtx

__all__ = [
    "Monomial",
    "mono_mul",
    "AlgebraElement",
    "XPolynomial",
    "LaurentPoly",
    "idempotent_f",
    "quotient_to_laurent",
    "socle_test",
    "p_star",
    "socle_coord_basis",
    "x_power",
    "y_power",
]

Monomial = tuple  # (i, j) standing for y^i x^j


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    """Product of y^i x^j and y^k x^l: cancel min(j, k) copies of xy."""
    i, j = a
    k, l = b
    m = j if j < k else k
    return (i + k - m, l + j - m)


class AlgebraElement:
    """A finite K-linear combination of monomials y^i x^j.

    ``terms`` maps ``(i, j)`` to a nonzero scalar of ``ctx``.  Instances are
    treated as immutable.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: FieldCtx, terms: Optional[Mapping[Monomial, object]] = None):
        self.ctx = ctx
        clean = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise ValueError(f"negative exponent in monomial {(i, j)}")
                c = ctx(c)
                if c:
                    clean[(int(i), int(j))] = c
        self.terms = clean

    @classmethod
    def _raw(cls, ctx, terms):
        e = cls.__new__(cls)
        e.ctx = ctx
        e.terms = terms
        return e

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "AlgebraElement":
        return cls._raw(ctx, {})

    @classmethod
    def one(cls, ctx: FieldCtx) -> "AlgebraElement":
        return cls._raw(ctx, {(0, 0): ctx.one})

    @classmethod
    def scalar(cls, ctx: FieldCtx, c) -> "AlgebraElement":
        return cls(ctx, {(0, 0): c})

    @classmethod
    def monomial(cls, ctx: FieldCtx, i: int, j: int, c=1) -> "AlgebraElement":
        return cls(ctx, {(i, j): c})

    @classmethod
    def x(cls, ctx: FieldCtx) -> "AlgebraElement":
        return cls._raw(ctx, {(0, 1): ctx.one})

    @classmethod
    def y(cls, ctx: FieldCtx) -> "AlgebraElement":
        return cls._raw(ctx, {(1, 0): ctx.one})

    @classmethod
    def random(cls, ctx: FieldCtx, rng: Random, max_deg: int = 3, max_terms: int = 5,
               height: int = 3) -> "AlgebraElement":
        """Random element whose monomials satisfy i + j <= max_deg."""
        terms = {}
        for _ in range(rng.randint(0, max_terms)):
            i = rng.randint(0, max_deg)
            j = rng.randint(0, max_deg - i)
            terms[(i, j)] = ctx.random(rng, height)
        return cls(ctx, terms)

    # -- basic protocol ----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, int):
            return self == AlgebraElement.scalar(self.ctx, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def __repr__(self):
        from .parser import format_element
        return f"AlgebraElement({format_element(self)!r} over {self.ctx})"

    def __str__(self):
        from .parser import format_element
        return format_element(self)

    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        """Terms in display order: ascending y-exponent, then ascending x-exponent."""
        return sorted(self.terms.items())

    @property
    def max_y(self) -> int:
        return max((i for i, _ in self.terms), default=0)

    @property
    def max_x(self) -> int:
        return max((j for _, j in self.terms), default=0)

    def coeff(self, i: int, j: int):
        return self.terms.get((i, j), self.ctx.zero)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            self.ctx.check(other.ctx)
            return other
        return AlgebraElement.scalar(self.ctx, other)

    def __add__(self, other):
        other = self._coerce(other)
        add = self.ctx.add
        t = dict(self.terms)
        for k, c in other.terms.items():
            v = add(t.get(k, 0), c)
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return AlgebraElement._raw(self.ctx, t)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ctx.neg
        return AlgebraElement._raw(self.ctx, {k: neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "AlgebraElement":
        c = self.ctx(c)
        if not c:
            return AlgebraElement.zero(self.ctx)
        mul = self.ctx.mul
        return AlgebraElement._raw(self.ctx, {k: mul(c, v) for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        self.ctx.check(other.ctx)
        p = self.ctx.characteristic
        out: dict = {}
        for (i, j), a in self.terms.items():
            for (k, l), b in other.terms.items():
                m = j if j < k else k
                key = (i + k - m, l + j - m)
                out[key] = out.get(key, 0) + a * b
        if p:
            out = {k: v % p for k, v in out.items() if v % p}
        else:
            out = {k: v for k, v in out.items() if v}
        return AlgebraElement._raw(self.ctx, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers do not exist in R")
        result = AlgebraElement.one(self.ctx)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- structure ---------------------------------------------------------

    def is_x_polynomial(self) -> bool:
        return all(i == 0 for i, _ in self.terms)

    def to_x_polynomial(self) -> "XPolynomial":
        if not self.is_x_polynomial():
            raise ValueError("element involves y")
        deg = self.max_x if self.terms else -1
        return XPolynomial(self.ctx, [self.coeff(0, j) for j in range(deg + 1)])


def x_power(ctx: FieldCtx, n: int) -> AlgebraElement:
    return AlgebraElement.monomial(ctx, 0, n)


def y_power(ctx: FieldCtx, n: int) -> AlgebraElement:
    return AlgebraElement.monomial(ctx, n, 0)


class XPolynomial:
    """Univariate polynomial with coefficients ``coeffs[0] + coeffs[1] t + ...``.

    Used both for polynomials in x (p(x)) and, after :func:`p_star`, in y.
    """

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Iterable = ()):
        self.ctx = ctx
        c = [ctx(v) for v in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, ctx: FieldCtx, n: int, c=1) -> "XPolynomial":
        return cls(ctx, [0] * n + [c])

    @classmethod
    def random(cls, ctx: FieldCtx, rng: Random, degree: int, monic: bool = False,
               height: int = 3) -> "XPolynomial":
        cs = [ctx.random(rng, height) for _ in range(degree)]
        lead = ctx.one if monic else ctx.random(rng, height, nonzero=True)
        return cls(ctx, cs + [lead])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.ctx.zero

    def __eq__(self, other):
        return isinstance(other, XPolynomial) and self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def __repr__(self):
        return f"XPolynomial({self.to_text()!r})"

    def to_text(self, var: str = "x") -> str:
        from .parser import format_element
        return format_element(self.to_element()).replace("x", var)

    def to_element(self) -> AlgebraElement:
        """The polynomial as an element p(x) of R."""
        return AlgebraElement(self.ctx, {(0, j): c for j, c in enumerate(self.coeffs)})

    def to_y_element(self) -> AlgebraElement:
        """The polynomial evaluated at y."""
        return AlgebraElement(self.ctx, {(j, 0): c for j, c in enumerate(self.coeffs)})

    def valuation(self) -> int:
        """Largest power of t dividing the polynomial (-1 for zero)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    def strip_x(self) -> "XPolynomial":
        """Remove the largest power of t dividing the polynomial."""
        v = self.valuation()
        return self if v <= 0 else XPolynomial(self.ctx, self.coeffs[v:])

    def monic(self) -> "XPolynomial":
        if not self.coeffs:
            return self
        inv = self.ctx.inv(self.leading)
        return XPolynomial(self.ctx, [self.ctx.mul(inv, c) for c in self.coeffs])

    def __add__(self, other: "XPolynomial") -> "XPolynomial":
        self.ctx.check(other.ctx)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return XPolynomial(self.ctx, [self.ctx.add(u, v) for u, v in zip(a, b)])

    def __neg__(self):
        return XPolynomial(self.ctx, [self.ctx.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "XPolynomial":
        return XPolynomial(self.ctx, [self.ctx.mul(c, v) for v in self.coeffs])

    def __mul__(self, other: "XPolynomial") -> "XPolynomial":
        if not isinstance(other, XPolynomial):
            return self.scale(other)
        self.ctx.check(other.ctx)
        if not self.coeffs or not other.coeffs:
            return XPolynomial(self.ctx)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return XPolynomial(self.ctx, out)

    def shift(self, n: int) -> "XPolynomial":
        """Multiply by t^n."""
        return XPolynomial(self.ctx, (0,) * n + self.coeffs) if self.coeffs else self

    def divmod(self, other: "XPolynomial") -> tuple["XPolynomial", "XPolynomial"]:
        self.ctx.check(other.ctx)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        ctx = self.ctx
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return XPolynomial(ctx), self
        q = [ctx.zero] * (dq + 1)
        inv = ctx.inv(other.leading)
        for k in range(dq, -1, -1):
            c = ctx.mul(r[k + other.degree], inv)
            q[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    r[k + i] = ctx.sub(r[k + i], ctx.mul(c, b))
        return XPolynomial(ctx, q), XPolynomial(ctx, r)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def gcd(self, other: "XPolynomial") -> "XPolynomial":
        """Monic greatest common divisor (zero only if both are zero)."""
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def __call__(self, t):
        acc = self.ctx.zero
        for c in reversed(self.coeffs):
            acc = self.ctx.add(self.ctx.mul(acc, t), c)
        return acc

    def companion(self):
        """Companion matrix of the monic normalization: ones below the diagonal,
        last column the negated lower coefficients."""
        from .scalars import ExactMatrix
        q = self.monic()
        n = q.degree
        ctx = self.ctx
        data = [[ctx.zero] * n for _ in range(n)]
        for i in range(1, n):
            data[i][i - 1] = ctx.one
        for i in range(n):
            data[i][n - 1] = ctx.neg(q.coeffs[i])
        return ExactMatrix(ctx, n, n, data)


class LaurentPoly:
    """Finite sparse combination of X^k, k an integer (possibly negative)."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: Optional[Mapping[int, object]] = None):
        self.ctx = ctx
        self.coeffs = {}
        for k, c in (coeffs or {}).items():
            c = ctx(c)
            if c:
                self.coeffs[int(k)] = c

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx, frozenset(self.coeffs.items())))

    def __repr__(self):
        body = " + ".join(f"{self.ctx.format(c)}*X^{k}" for k, c in sorted(self.coeffs.items()))
        return f"LaurentPoly({body or '0'})"

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self.ctx.check(other.ctx)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = self.ctx.add(out.get(k, 0), c)
        return LaurentPoly(self.ctx, out)

    def __neg__(self):
        return LaurentPoly(self.ctx, {k: self.ctx.neg(c) for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self.ctx.check(other.ctx)
        out: dict = {}
        for a, c in self.coeffs.items():
            for b, d in other.coeffs.items():
                out[a + b] = out.get(a + b, 0) + c * d
        return LaurentPoly(self.ctx, out)

    @property
    def low(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    def split(self) -> tuple[int, XPolynomial]:
        """Write as X^v * q(X) with q a polynomial, q(0) != 0."""
        if not self.coeffs:
            return 0, XPolynomial(self.ctx)
        v = self.low
        top = max(self.coeffs)
        return v, XPolynomial(self.ctx, [self.coeffs.get(v + i, 0) for i in range(top - v + 1)])

    @classmethod
    def from_poly(cls, poly: XPolynomial, shift: int = 0) -> "LaurentPoly":
        return cls(poly.ctx, {i + shift: c for i, c in enumerate(poly.coeffs)})

    def lift(self) -> AlgebraElement:
        """A preimage in R under the quotient map: X^k -> x^k, X^-k -> y^k."""
        return AlgebraElement(self.ctx, {((-k, 0) if k < 0 else (0, k)): c for k, c in self.coeffs.items()})


def idempotent_f(ctx: FieldCtx, n: int) -> AlgebraElement:
    """f_n = y^(n-1) x^(n-1) - y^n x^n."""
    if n < 1:
        raise ValueError("f_n is defined for n >= 1")
    return AlgebraElement(ctx, {(n - 1, n - 1): 1, (n, n): -1})


def quotient_to_laurent(a: AlgebraElement) -> LaurentPoly:
    """Image under R -> R/I = K[X, X^-1], y^i x^j -> X^(j - i)."""
    out: dict = {}
    for (i, j), c in a.terms.items():
        out[j - i] = out.get(j - i, 0) + c
    return LaurentPoly(a.ctx, out)


def socle_test(a: AlgebraElement) -> bool:
    """True iff ``a`` lies in the socle I = <1 - yx>."""
    return quotient_to_laurent(a).is_zero()


def p_star(p: XPolynomial) -> AlgebraElement:
    """p*(y) = p(x) y^deg(p) rewritten in y: sum of a_i y^(n - i)."""
    if p.is_zero():
        raise ValueError("p* is undefined for the zero polynomial")
    n = p.degree
    return AlgebraElement(p.ctx, {(n - i, 0): c for i, c in enumerate(p.coeffs)})


def socle_coord_basis(ctx: FieldCtx, d: int) -> list[AlgebraElement]:
    """The elements x^(k-1) f_k for k = 1..d, spanning part of the K[x]-socle of I."""
    return [AlgebraElement(ctx, {(0, k - 1): 1, (1, k): -1}) for k in range(1, d + 1)]


def socle_element(ctx: FieldCtx, coords: Sequence) -> AlgebraElement:
    """sum_k coords[k-1] * x^(k-1) f_k."""
    out = AlgebraElement.zero(ctx)
    for k, c in enumerate(coords, start=1):
        if c:
            out = out + AlgebraElement(ctx, {(0, k - 1): c, (1, k): ctx.neg(ctx(c))})
    return out
