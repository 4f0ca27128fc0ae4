"""Exact linear algebra over the rationals and prime fields.

Scalars over Q are ``fractions.Fraction``; scalars over F_p are canonical
residues ``0 .. p-1`` stored as plain ints.  Vectors are tuples of scalars and
matrices are immutable row-major tuples of tuples, so every object here is
hashable and safe to share.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence


class LinAlgError(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: ``FieldSpec("Q")`` or ``FieldSpec("Fp", p)``."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise LinAlgError("the rational field takes no modulus")
        elif self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise LinAlgError(f"modulus {self.p} is not prime")
        else:
            raise LinAlgError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("Q")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("Fp", p)

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "Fp"

    def __str__(self):
        return "Q" if self.kind == "Q" else f"Fp {self.p}"

    # scalar arithmetic

    def __call__(self, a) -> Fraction | int:
        """Coerce an int, Fraction or ``"a/b"`` string into the field."""
        if isinstance(a, str):
            return self.parse(a)
        if self.kind == "Q":
            return Fraction(a)
        if isinstance(a, Fraction):
            return a.numerator * pow(a.denominator, -1, self.p) % self.p
        return int(a) % self.p

    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def reduce(self, a):
        return a if self.kind == "Q" else a % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "Q":
            return 1 / a
        return pow(a, -1, self.p)

    def parse(self, text: str):
        text = text.strip()
        try:
            if self.kind == "Q":
                return Fraction(text)
            value = int(text)
        except (ValueError, ZeroDivisionError):
            raise LinAlgError(f"bad scalar {text!r} for field {self}") from None
        if not 0 <= value < self.p:
            raise LinAlgError(f"residue {value} is not canonical modulo {self.p}")
        return value

    def format(self, a) -> str:
        return str(a)

    def random_element(self, rng: random.Random, spread: int = 3):
        if self.kind == "Q":
            return Fraction(rng.randint(-spread, spread))
        return rng.randrange(self.p)


QQ = FieldSpec.rationals()


def GF(p: int) -> FieldSpec:
    return FieldSpec.prime(p)


Vector = tuple


# ---------------------------------------------------------------------------
# Row reduction kernel shared by everything below.


def _rref(F: FieldSpec, rows: Sequence[Sequence], ncols: int):
    """Return (nonzero RREF rows, pivot columns).  Leftmost pivot, first nonzero row."""
    work = [list(r) for r in rows]
    red = F.reduce
    pivots: list[int] = []
    r = 0
    nrows = len(work)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = F.inv(work[r][c])
        prow = [red(inv * a) for a in work[r]]
        work[r] = prow
        for i in range(nrows):
            if i != r:
                f = work[i][c]
                if f:
                    work[i] = [red(a - f * b) for a, b in zip(work[i], prow)]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in work[:r]], pivots


@dataclass(frozen=True)
class Matrix:
    """Dense exact matrix; ``data`` holds ``rows`` tuples of length ``cols``."""

    field: FieldSpec
    rows: int
    cols: int
    data: tuple = dc_field(repr=False)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise LinAlgError("negative matrix shape")
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise LinAlgError(f"entries do not match shape {self.rows}x{self.cols}")

    # constructors

    @classmethod
    def from_rows(cls, F: FieldSpec, rows: Iterable[Iterable], cols: int | None = None) -> "Matrix":
        data = tuple(tuple(F(a) for a in row) for row in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(F, len(data), cols, data)

    @classmethod
    def zeros(cls, F: FieldSpec, rows: int, cols: int) -> "Matrix":
        z = F.zero()
        return cls(F, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, F: FieldSpec, d: int) -> "Matrix":
        z, o = F.zero(), F.one()
        return cls(F, d, d, tuple(tuple(o if i == j else z for j in range(d)) for i in range(d)))

    @classmethod
    def from_columns(cls, F: FieldSpec, columns: Sequence[Sequence], rows: int) -> "Matrix":
        return cls(F, rows, len(columns), tuple(tuple(col[i] for col in columns) for i in range(rows)))

    @classmethod
    def random(cls, F: FieldSpec, rows: int, cols: int, rng: random.Random) -> "Matrix":
        return cls(F, rows, cols, tuple(tuple(F.random_element(rng) for _ in range(cols)) for _ in range(rows)))

    @classmethod
    def random_invertible(cls, F: FieldSpec, d: int, rng: random.Random) -> "Matrix":
        while True:
            m = cls.random(F, d, d, rng)
            if m.rank() == d:
                return m

    @classmethod
    def block_diag(cls, F: FieldSpec, blocks: Sequence["Matrix"]) -> "Matrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        z = F.zero()
        out = []
        c0 = 0
        for b in blocks:
            for row in b.data:
                out.append((z,) * c0 + row + (z,) * (cols - c0 - b.cols))
            c0 += b.cols
        return cls(F, rows, cols, tuple(out))

    # basic algebra

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    def apply(self, x: Sequence) -> Vector:
        if len(x) != self.cols:
            raise LinAlgError(f"vector of length {len(x)} applied to {self.rows}x{self.cols} matrix")
        red = self.field.reduce
        z = self.field.zero()
        return tuple(red(sum((a * b for a, b in zip(row, x) if a and b), z)) for row in self.data)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise LinAlgError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        red = self.field.reduce
        z = self.field.zero()
        data = tuple(
            tuple(red(sum((a * b for a, b in zip(row, col) if a and b), z)) for col in cols)
            for row in self.data
        )
        return Matrix(self.field, self.rows, other.cols, data)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise LinAlgError("shape mismatch in addition")
        red = self.field.reduce
        return Matrix(self.field, self.rows, self.cols,
                      tuple(tuple(red(a + b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        red = self.field.reduce
        return Matrix(self.field, self.rows, self.cols, tuple(tuple(red(c * a) for a in r) for r in self.data))

    def __pow__(self, e: int) -> "Matrix":
        if self.rows != self.cols:
            raise LinAlgError("power of a non-square matrix")
        result = Matrix.identity(self.field, self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.data)

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise LinAlgError("row count mismatch in hstack")
        return Matrix(self.field, self.rows, self.cols + other.cols,
                      tuple(a + b for a, b in zip(self.data, other.data)))

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise LinAlgError("column count mismatch in vstack")
        return Matrix(self.field, self.rows + other.rows, self.cols, self.data + other.data)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, len(rows), len(cols), tuple(tuple(self.data[i][j] for j in cols) for i in rows))

    # elimination-based queries

    def rank(self) -> int:
        return len(_rref(self.field, self.data, self.cols)[1])

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise LinAlgError("inverse of a non-square matrix")
        d = self.rows
        aug = self.hstack(Matrix.identity(self.field, d))
        rows, pivots = _rref(self.field, aug.data, 2 * d)
        if pivots[:d] != list(range(d)) or len(rows) < d:
            raise LinAlgError("matrix is singular")
        return Matrix(self.field, d, d, tuple(r[d:] for r in rows))

    def solve(self, b: Sequence) -> Vector | None:
        """One solution of ``self @ x = b`` with all free variables zero, or None."""
        return solve(self, b)

    def __str__(self):
        return format_matrix(self)


def rref(M: Matrix) -> tuple[Matrix, list[int], int]:
    """Reduced row echelon form.  Zero rows are kept so that R has M's shape."""
    rows, pivots = _rref(M.field, M.data, M.cols)
    z = M.field.zero()
    padded = tuple(rows) + tuple((z,) * M.cols for _ in range(M.rows - len(rows)))
    return Matrix(M.field, M.rows, M.cols, padded), pivots, len(pivots)


def solve(M: Matrix, b: Sequence) -> Vector | None:
    """Particular solution of M x = b with free coordinates set to zero."""
    if len(b) != M.rows:
        raise LinAlgError("right-hand side has wrong length")
    aug = tuple(row + (bi,) for row, bi in zip(M.data, b))
    rows, pivots = _rref(M.field, aug, M.cols + 1)
    if pivots and pivots[-1] == M.cols:
        return None
    x = [M.field.zero()] * M.cols
    for row, c in zip(rows, pivots):
        x[c] = row[-1]
    return tuple(x)


def kernel_basis(M: Matrix) -> "Subspace":
    """Null space {x : M x = 0} as a canonical subspace of F^cols."""
    F = M.field
    rows, pivots = _rref(F, M.data, M.cols)
    pivset = set(pivots)
    vecs = []
    for free in range(M.cols):
        if free in pivset:
            continue
        v = [F.zero()] * M.cols
        v[free] = F.one()
        for row, c in zip(rows, pivots):
            v[c] = F.reduce(-row[free])
        vecs.append(tuple(v))
    return Subspace.span(F, M.cols, vecs)


# ---------------------------------------------------------------------------
# Subspaces held as RREF bases.


@dataclass(frozen=True)
class Subspace:
    """Subspace of F^dim stored by its RREF basis, so equality is structural."""

    field: FieldSpec
    dim: int
    basis: tuple = ()
    pivots: tuple = dc_field(default=(), compare=False, repr=False)

    @classmethod
    def span(cls, F: FieldSpec, dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [tuple(v) for v in vectors]
        for v in vecs:
            if len(v) != dim:
                raise LinAlgError(f"vector of length {len(v)} in ambient dimension {dim}")
        rows, pivots = _rref(F, vecs, dim)
        return cls(F, dim, tuple(rows), tuple(pivots))

    @classmethod
    def zero(cls, F: FieldSpec, dim: int) -> "Subspace":
        return cls(F, dim, (), ())

    @classmethod
    def full(cls, F: FieldSpec, dim: int) -> "Subspace":
        I = Matrix.identity(F, dim)
        return cls(F, dim, I.data, tuple(range(dim)))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def matrix(self) -> Matrix:
        return Matrix(self.field, len(self.basis), self.dim, self.basis)

    def _check(self, other: "Subspace"):
        if self.dim != other.dim:
            raise LinAlgError(f"ambient dimension mismatch: {self.dim} vs {other.dim}")

    def reduce_vector(self, x: Sequence) -> Vector:
        """Remainder of x after clearing the pivot coordinates of the basis."""
        red = self.field.reduce
        x = list(x)
        for row, c in zip(self.basis, self.pivots):
            f = x[c]
            if f:
                x = [red(a - f * b) for a, b in zip(x, row)]
        return tuple(x)

    def __contains__(self, x: Sequence) -> bool:
        if len(x) != self.dim:
            raise LinAlgError("vector does not live in the ambient space")
        return not any(self.reduce_vector(x))

    def member(self, x: Sequence) -> bool:
        return x in self

    def coordinates(self, x: Sequence) -> Vector | None:
        """Coefficients of x on the stored basis, or None if x is outside."""
        if x not in self:
            return None
        return tuple(x[c] for c in self.pivots)

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check(other)
        return all(v in self for v in other.basis)

    def __le__(self, other: "Subspace") -> bool:
        return other.contains_subspace(self)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, self.dim, self.basis + other.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return self.sum(other)

    def annihilator(self) -> "Subspace":
        """Rows w with w . x = 0 for every x in self."""
        return kernel_basis(Matrix(self.field, len(self.basis), self.dim, self.basis))

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.field, self.dim)
        if self.dimension == self.dim:
            return other
        if other.dimension == other.dim:
            return self
        eqs = self.annihilator().basis + other.annihilator().basis
        return kernel_basis(Matrix(self.field, len(eqs), self.dim, eqs))

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersect(other)

    def image(self, M: Matrix) -> "Subspace":
        if M.cols != self.dim:
            raise LinAlgError("map does not start from this ambient space")
        return Subspace.span(self.field, M.rows, [M.apply(v) for v in self.basis])

    def preimage(self, M: Matrix) -> "Subspace":
        """{x : M x in self}."""
        if M.rows != self.dim:
            raise LinAlgError("map does not land in this ambient space")
        eqs = self.annihilator()
        if eqs.is_zero():
            return Subspace.full(self.field, M.cols)
        return kernel_basis(eqs.matrix() @ M)

    def __str__(self):
        return f"Subspace(dim={self.dimension} in F^{self.dim})"


def intersect(A: Subspace, B: Subspace) -> Subspace:
    return A.intersect(B)


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    return A.sum(B)


def member(A: Subspace, x: Sequence) -> bool:
    return A.member(x)


def quotient_dim(A: Subspace, B: Subspace) -> int:
    """dim A/B for B contained in A."""
    A._check(B)
    if not A.contains_subspace(B):
        raise LinAlgError("quotient_dim needs B to be a subspace of A")
    return A.dimension - B.dimension


def coset_solve(F: FieldSpec, x: Sequence, A: Subspace, W: Subspace) -> Vector | None:
    """Find x' in (x + A) ∩ W, or None.

    Solves x = sum c_i a_i + sum d_j w_j with free variables zero and returns
    sum d_j w_j.  The particular solution makes the choice deterministic.
    """
    gens = list(A.basis) + list(W.basis)
    if not gens:
        return tuple(x) if not any(x) else None
    M = Matrix.from_columns(F, gens, len(x))
    sol = solve(M, x)
    if sol is None:
        return None
    d = sol[len(A.basis):]
    red = F.reduce
    out = [F.zero()] * len(x)
    for coef, w in zip(d, W.basis):
        if coef:
            out = [red(o + coef * b) for o, b in zip(out, w)]
    return tuple(out)


# ---------------------------------------------------------------------------
# Polynomials and invariant factors.


@dataclass(frozen=True)
class Poly:
    """Polynomial in t; ``coeffs`` runs from the constant term upwards."""

    field: FieldSpec
    coeffs: tuple = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and not c[-1]:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def const(cls, F: FieldSpec, a) -> "Poly":
        return cls(F, (F(a),))

    @classmethod
    def t(cls, F: FieldSpec) -> "Poly":
        return cls(F, (F.zero(), F.one()))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        z = self.field.zero()
        red = self.field.reduce
        return Poly(self.field, tuple(red((a[i] if i < len(a) else z) + (b[i] if i < len(b) else z)) for i in range(n)))

    def __neg__(self) -> "Poly":
        red = self.field.reduce
        return Poly(self.field, tuple(red(-a) for a in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if not self or not other:
            return Poly(self.field)
        out = [self.field.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        red = self.field.reduce
        return Poly(self.field, tuple(red(c) for c in out))

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return Poly(F), self
        q = [F.zero()] * (dq + 1)
        lead_inv = F.inv(other.coeffs[-1])
        for i in range(dq, -1, -1):
            c = F.reduce(r[i + len(other.coeffs) - 1] * lead_inv)
            q[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    r[i + j] = F.reduce(r[i + j] - c * b)
        return Poly(F, tuple(q)), Poly(F, tuple(r))

    def monic(self) -> "Poly":
        if not self:
            return self
        inv = self.field.inv(self.coeffs[-1])
        return Poly(self.field, tuple(self.field.reduce(inv * a) for a in self.coeffs))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


def invariant_factors(M: Matrix) -> list[Poly]:
    """Non-unit invariant factors of tI - M, each dividing the next.

    Computed by a Smith normal form of the polynomial matrix with exact
    Euclidean division.  Two square matrices are similar iff the lists agree.
    """
    if M.rows != M.cols:
        raise LinAlgError("invariant factors need a square matrix")
    F = M.field
    d = M.rows
    t = Poly.t(F)
    A = [[(t if i == j else Poly(F)) - Poly.const(F, M.data[i][j]) for j in range(d)] for i in range(d)]

    for s in range(d):
        while True:
            best = None
            for i in range(s, d):
                for j in range(s, d):
                    if A[i][j] and (best is None or A[i][j].degree < A[best[0]][best[1]].degree):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            A[s], A[i] = A[i], A[s]
            for row in A:
                row[s], row[j] = row[j], row[s]
            p = A[s][s]
            clean = True
            for i in range(s + 1, d):
                if A[i][s]:
                    q, r = divmod(A[i][s], p)
                    A[i] = [a - q * b for a, b in zip(A[i], A[s])]
                    clean = clean and not r
            for j in range(s + 1, d):
                if A[s][j]:
                    q, r = divmod(A[s][j], p)
                    for row in A:
                        row[j] = row[j] - q * row[s]
                    clean = clean and not r
            if not clean:
                continue
            bad = next(((i, j) for i in range(s + 1, d) for j in range(s + 1, d)
                        if divmod(A[i][j], p)[1]), None)
            if bad is None:
                break
            A[s] = [a + b for a, b in zip(A[s], A[bad[0]])]
    diag = [A[i][i].monic() for i in range(d)]
    return [f for f in diag if f.degree >= 1]


def similarity_transform(A: Matrix, B: Matrix, seed: int = 0, tries: int = 400) -> Matrix | None:
    """Invertible H with H A = B H, or None when A and B are not similar.

    The solution space of the linear equation H A = B H is computed exactly;
    an invertible member is then found by seeded random combinations of its
    basis, which terminates quickly because invertible members are dense once
    similarity is certified by the invariant factors.
    """
    if A.shape != B.shape or A.rows != A.cols:
        return None
    if invariant_factors(A) != invariant_factors(B):
        return None
    F = A.field
    d = A.rows
    if d == 0:
        return Matrix.identity(F, 0)
    # unknown H[i][j] at index i*d+j; equation (H A - B H)[i][j] = 0
    eqs = []
    for i in range(d):
        for j in range(d):
            row = [F.zero()] * (d * d)
            for l in range(d):
                row[i * d + l] = F.reduce(row[i * d + l] + A.data[l][j])
                row[l * d + j] = F.reduce(row[l * d + j] - B.data[i][l])
            eqs.append(tuple(row))
    sols = kernel_basis(Matrix(F, d * d, d * d, tuple(eqs))).basis
    rng = random.Random(seed)
    for attempt in range(tries):
        if attempt == 0:
            coefs = [F.one()] * len(sols)
        else:
            coefs = [F.random_element(rng, spread=5) for _ in sols]
        flat = [F.zero()] * (d * d)
        for c, s in zip(coefs, sols):
            if c:
                flat = [F.reduce(a + c * b) for a, b in zip(flat, s)]
        H = Matrix(F, d, d, tuple(tuple(flat[i * d:(i + 1) * d]) for i in range(d)))
        if H.is_invertible():
            return H
    raise LinAlgError("failed to find an invertible intertwiner for similar matrices")


# ---------------------------------------------------------------------------
# Text form.


def format_matrix(M: Matrix) -> str:
    return "\n".join(" ".join(M.field.format(a) for a in row) for row in M.data)


def parse_matrix(F: FieldSpec, text: str, cols: int | None = None) -> Matrix:
    rows = [line.split() for line in text.strip().splitlines() if line.strip()]
    return Matrix.from_rows(F, [[F.parse(a) for a in r] for r in rows], cols)
