"""Exact field arithmetic over Q and F_p, and dense exact linear algebra.

Scalars are plain Python values: :class:`fractions.Fraction` over Q and
``int`` residues in ``[0, p)`` over F_p.  A :class:`FieldCtx` knows how to
coerce, combine and print them.  Row reduction is delegated to FLINT
(``python-flint``), everything else is ordinary Python.
"""

from __future__ import annotations

from random import Random
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import flint

__all__ = [
    "FieldCtx",
    "FieldMismatchError",
    "ExactMatrix",
    "rank",
    "kernel_basis",
    "solve",
    "subspace_intersect",
    "column_echelon",
    "inverse",
]


class FieldMismatchError(ValueError):
    """Raised when objects over different fields are combined."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


_SCALAR_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?$")


class FieldCtx:
    """The base field: rationals (characteristic 0) or a prime field."""

    __slots__ = ("characteristic",)

    def __init__(self, characteristic: int = 0):
        if characteristic != 0 and not _is_prime(characteristic):
            raise ValueError(f"characteristic must be 0 or prime, got {characteristic}")
        self.characteristic = characteristic

    @classmethod
    def rationals(cls) -> "FieldCtx":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldCtx":
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "FieldCtx":
        """Parse ``"Q"`` or ``"Fp:<prime>"`` (also accepts ``"F5"``, ``"GF(5)"``)."""
        t = text.strip()
        if t.upper() in ("Q", "QQ"):
            return cls(0)
        m = re.fullmatch(r"(?i)(?:fp:|f|gf\(?)(\d+)\)?", t)
        if not m:
            raise ValueError(f"unknown field {text!r}; use 'Q' or 'Fp:<prime>'")
        return cls(int(m.group(1)))

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime field"

    @property
    def is_prime_field(self) -> bool:
        return self.characteristic != 0

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("FieldCtx", self.characteristic))

    def __repr__(self):
        return "Q" if self.characteristic == 0 else f"Fp:{self.characteristic}"

    __str__ = __repr__

    def check(self, other: "FieldCtx") -> None:
        if other != self:
            raise FieldMismatchError(f"field mismatch: {self} vs {other}")

    # -- scalars -----------------------------------------------------------

    @property
    def zero(self):
        return 0 if self.characteristic else Fraction(0)

    @property
    def one(self):
        return 1 if self.characteristic else Fraction(1)

    def __call__(self, value):
        """Coerce an int, Fraction or text literal into this field."""
        if isinstance(value, str):
            return self.parse_scalar(value)
        p = self.characteristic
        if p:
            if isinstance(value, Fraction):
                if value.denominator % p == 0:
                    raise ZeroDivisionError(f"denominator {value.denominator} vanishes mod {p}")
                return value.numerator * pow(value.denominator, -1, p) % p
            return int(value) % p
        return Fraction(value)

    def parse_scalar(self, text: str):
        m = _SCALAR_RE.match(text)
        if not m:
            raise ValueError(f"not an exact scalar: {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0 or (self.characteristic and den % self.characteristic == 0):
            raise ZeroDivisionError(f"zero denominator in {text!r}")
        return self(Fraction(num, den)) if den != 1 else self(num)

    def format(self, a) -> str:
        if self.characteristic:
            return str(a)
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def add(self, a, b):
        return (a + b) % self.characteristic if self.characteristic else a + b

    def sub(self, a, b):
        return (a - b) % self.characteristic if self.characteristic else a - b

    def mul(self, a, b):
        return (a * b) % self.characteristic if self.characteristic else a * b

    def neg(self, a):
        return (-a) % self.characteristic if self.characteristic else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.characteristic) if self.characteristic else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def random(self, rng: Random, height: int = 3, nonzero: bool = False):
        """A random scalar; over Q a small fraction with numerator/denominator <= height."""
        while True:
            if self.characteristic:
                v = rng.randrange(self.characteristic)
            else:
                den = rng.randint(1, max(1, height // 2))
                v = Fraction(rng.randint(-height, height), den)
            if v or not nonzero:
                return v

    def elements(self) -> Iterator:
        """All elements of a prime field, in order."""
        if not self.characteristic:
            raise ValueError("Q is infinite")
        return iter(range(self.characteristic))

    # -- flint bridge ------------------------------------------------------

    def _flint_matrix(self, nrows: int, ncols: int, flat: Sequence):
        if self.characteristic:
            return flint.nmod_mat(nrows, ncols, list(flat), self.characteristic)
        return flint.fmpq_mat(nrows, ncols, [_to_fmpq(v) for v in flat])

    def _from_flint(self, v):
        if self.characteristic:
            return int(v)
        return Fraction(int(v.p), int(v.q))


def _to_fmpq(v):
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return v.numerator
        return flint.fmpq(v.numerator, v.denominator)
    return v


def rref_rows(ctx: FieldCtx, rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and their pivot columns."""
    nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return [], []
    flat = [v for row in rows for v in row]
    if not any(flat):
        return [], []
    m, r = ctx._flint_matrix(nrows, ncols, flat).rref()
    entries = m.entries()
    out, pivots = [], []
    conv = ctx._from_flint
    for i in range(r):
        row = [conv(v) for v in entries[i * ncols:(i + 1) * ncols]]
        out.append(row)
        pivots.append(next(j for j, v in enumerate(row) if v))
    return out, pivots


def flint_sparse(ctx: FieldCtx, rows: Sequence[Mapping[int, object]], ncols: int):
    """Flint matrix with the given sparse rows ({column: value})."""
    if ctx.characteristic:
        m = flint.nmod_mat(len(rows), ncols, ctx.characteristic)
        for i, r in enumerate(rows):
            for j, v in r.items():
                m[i, j] = v
    else:
        m = flint.fmpq_mat(len(rows), ncols)
        for i, r in enumerate(rows):
            for j, v in r.items():
                m[i, j] = _to_fmpq(v)
    return m


def rref_sparse(ctx: FieldCtx, rows: Sequence[Mapping[int, object]], ncols: int):
    """RREF of rows given as {column: value}, kept in flint form.

    Returns the flint matrix (its first ``len(pivots)`` rows are the nonzero
    ones) and the pivot columns.  Use :func:`flint_row` to read rows back.
    """
    if not rows or ncols == 0:
        return None, []
    m, rank_ = flint_sparse(ctx, rows, ncols).rref()
    pivots = []
    j = 0
    for i in range(rank_):
        while m[i, j] == 0:
            j += 1
        pivots.append(j)
    return m, pivots


def flint_row(ctx: FieldCtx, m, i: int, cols: Optional[Sequence[int]] = None) -> list:
    """Row ``i`` of a flint matrix as native scalars (optionally only ``cols``)."""
    conv = ctx._from_flint
    return [conv(m[i, j]) for j in (range(m.ncols()) if cols is None else cols)]


class ExactMatrix:
    """Immutable dense matrix of exact scalars."""

    __slots__ = ("ctx", "rows", "cols", "_data")

    def __init__(self, ctx: FieldCtx, rows: int, cols: int, data: Optional[Iterable[Iterable]] = None):
        self.ctx = ctx
        self.rows = rows
        self.cols = cols
        if data is None:
            self._data = tuple(tuple(ctx.zero for _ in range(cols)) for _ in range(rows))
        else:
            d = tuple(tuple(ctx(v) for v in row) for row in data)
            if len(d) != rows or any(len(r) != cols for r in d):
                raise ValueError(f"entry grid does not match shape {rows}x{cols}")
            self._data = d

    @classmethod
    def _raw(cls, ctx, rows, cols, data):
        m = cls.__new__(cls)
        m.ctx, m.rows, m.cols = ctx, rows, cols
        m._data = tuple(tuple(r) for r in data)
        return m

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows: Sequence[Sequence], cols: Optional[int] = None) -> "ExactMatrix":
        rows = list(rows)
        ncols = len(rows[0]) if rows else (cols or 0)
        return cls(ctx, len(rows), ncols, rows)

    @classmethod
    def from_columns(cls, ctx: FieldCtx, columns: Sequence[Sequence], rows: int) -> "ExactMatrix":
        columns = [list(c) for c in columns]
        data = [[columns[j][i] for j in range(len(columns))] for i in range(rows)]
        return cls(ctx, rows, len(columns), data)

    @classmethod
    def zeros(cls, ctx: FieldCtx, rows: int, cols: int) -> "ExactMatrix":
        return cls(ctx, rows, cols)

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "ExactMatrix":
        return cls._raw(ctx, n, n, [[ctx.one if i == j else ctx.zero for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple:
        return self._data[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list]:
        return [list(r) for r in self._data]

    def flat(self) -> list:
        return [v for r in self._data for v in r]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix._raw(self.ctx, self.cols, self.rows,
                                [[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    T = property(transpose)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.ctx == other.ctx
                and self.shape == other.shape and self._data == other._data)

    def __hash__(self):
        return hash((self.ctx, self.rows, self.cols, self._data))

    def __repr__(self):
        body = "; ".join(" ".join(self.ctx.format(v) for v in r) for r in self._data)
        return f"ExactMatrix({self.rows}x{self.cols} over {self.ctx}: [{body}])"

    def _check(self, other: "ExactMatrix"):
        self.ctx.check(other.ctx)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        add = self.ctx.add
        return ExactMatrix._raw(self.ctx, self.rows, self.cols,
                                [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self._data, other._data)])

    def __neg__(self) -> "ExactMatrix":
        return self.scale(self.ctx.neg(self.ctx.one))

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        return self + (-other)

    def scale(self, c) -> "ExactMatrix":
        mul = self.ctx.mul
        return ExactMatrix._raw(self.ctx, self.rows, self.cols, [[mul(c, a) for a in r] for r in self._data])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        p = self.ctx.characteristic
        ocols = other.columns()
        out = []
        for r in self._data:
            row = []
            for c in ocols:
                s = sum(a * b for a, b in zip(r, c) if a and b)
                row.append(s % p if p else Fraction(s))
            out.append(row)
        return ExactMatrix._raw(self.ctx, self.rows, other.cols, out)

    def apply(self, vec: Sequence) -> list:
        """Matrix-vector product."""
        if len(vec) != self.cols:
            raise ValueError("vector length does not match matrix columns")
        p = self.ctx.characteristic
        out = []
        for r in self._data:
            s = sum(a * b for a, b in zip(r, vec) if a and b)
            out.append(s % p if p else Fraction(s))
        return out

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        if self.rows != other.rows:
            raise ValueError("row count mismatch in hstack")
        return ExactMatrix._raw(self.ctx, self.rows, self.cols + other.cols,
                                [r + s for r, s in zip(self._data, other._data)])

    def block_diag(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check(other)
        z = self.ctx.zero
        data = [list(r) + [z] * other.cols for r in self._data]
        data += [[z] * self.cols + list(r) for r in other._data]
        return ExactMatrix._raw(self.ctx, self.rows + other.rows, self.cols + other.cols, data)

    def rref(self) -> tuple[list[list], list[int]]:
        return rref_rows(self.ctx, self._data, self.cols)


def rank(m: ExactMatrix) -> int:
    return len(m.rref()[1])


def kernel_basis(m: ExactMatrix) -> ExactMatrix:
    """Columns form a basis of the right null space of ``m``."""
    ctx = m.ctx
    rows, pivots = m.rref()
    free = [j for j in range(m.cols) if j not in set(pivots)]
    neg = ctx.neg
    cols = []
    for f in free:
        v = [ctx.zero] * m.cols
        v[f] = ctx.one
        for r, pc in zip(rows, pivots):
            if r[f]:
                v[pc] = neg(r[f])
        cols.append(v)
    return ExactMatrix._raw(ctx, m.cols, len(cols), [[c[i] for c in cols] for i in range(m.cols)])


def solve(m: ExactMatrix, b: Sequence) -> Optional[list]:
    """One solution of ``m @ s = b``, or ``None`` if the system is inconsistent."""
    if len(b) != m.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m.rows}")
    ctx = m.ctx
    b = [ctx(v) for v in b]
    aug = [list(r) + [bi] for r, bi in zip(m.tolist(), b)]
    rows, pivots = rref_rows(ctx, aug, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    s = [ctx.zero] * m.cols
    for r, pc in zip(rows, pivots):
        s[pc] = r[m.cols]
    return s


def column_echelon(m: ExactMatrix) -> ExactMatrix:
    """Canonical basis of the column span: leading entries 1, pivots sorted.

    Two matrices span the same column space iff their column-echelon forms
    are equal entry for entry.
    """
    rows, _ = rref_rows(m.ctx, m.transpose()._data, m.rows)
    return ExactMatrix._raw(m.ctx, m.rows, len(rows), [[r[i] for r in rows] for i in range(m.rows)])


def subspace_intersect(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Column-echelon basis of ``colspan(a) ∩ colspan(b)``.

    Reduces the columns of ``b`` against an echelon basis of ``a``; the
    combinations of ``b`` with vanishing residue are exactly the intersection.
    """
    a.ctx.check(b.ctx)
    if a.rows != b.rows:
        raise ValueError(f"ambient dimensions differ: {a.rows} vs {b.rows}")
    ctx = a.ctx
    n = a.rows
    if b.cols == 0 or a.cols == 0:
        return ExactMatrix(ctx, n, 0)
    basis, pivots = rref_rows(ctx, a.transpose()._data, n)
    residues = []
    for col in b.columns():
        r = list(col)
        for brow, pc in zip(basis, pivots):
            c = r[pc]
            if c:
                r = [ctx.sub(x, ctx.mul(c, y)) for x, y in zip(r, brow)]
        residues.append(r)
    res = ExactMatrix._raw(ctx, n, b.cols, [[residues[j][i] for j in range(b.cols)] for i in range(n)])
    coeffs = kernel_basis(res)
    return column_echelon(b @ coeffs)


def inverse(m: ExactMatrix) -> ExactMatrix:
    """Inverse of a square matrix; raises ``ZeroDivisionError`` if singular."""
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    if n == 0:
        return m
    ctx = m.ctx
    aug = [list(r) + [ctx.one if i == j else ctx.zero for j in range(n)] for i, r in enumerate(m.tolist())]
    rows, pivots = rref_rows(ctx, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return ExactMatrix._raw(ctx, n, n, [r[n:] for r in rows])


def is_invertible(m: ExactMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows
