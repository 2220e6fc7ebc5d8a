"""
Exact integer and rational linear algebra.

Matrices are immutable and row-major.  Vectors are rows and linear maps act
on the right, so a lattice is always described by a matrix whose rows form a
basis.  Nothing in this module touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Sequence

Scalar = int | Fraction


class LatticeError(ValueError):
    """Raised when an exact linear-algebra precondition fails."""


class _Matrix:
    _coerce = staticmethod(lambda x: x)

    def __init__(self, entries: Iterable[Iterable[Scalar]], cols: int | None = None):
        data = tuple(tuple(self._coerce(x) for x in row) for row in entries)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise LatticeError("ragged matrix rows")
        else:
            width = 0 if cols is None else cols
        self.rows = len(data)
        self.cols = width
        self.entries = data

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int):
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def scalar(cls, n: int, c: Scalar):
        return cls([[c if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def vstack(cls, blocks: Sequence[_Matrix], cols: int | None = None):
        width = blocks[0].cols if blocks else (cols or 0)
        out: list[tuple] = []
        for b in blocks:
            if b.cols != width:
                raise LatticeError("vstack width mismatch")
            out.extend(b.entries)
        return cls(out, cols=width)

    @classmethod
    def hstack(cls, blocks: Sequence[_Matrix]):
        height = blocks[0].rows
        if any(b.rows != height for b in blocks):
            raise LatticeError("hstack height mismatch")
        return cls(
            [sum((b.entries[i] for b in blocks), ()) for i in range(height)],
            cols=sum(b.cols for b in blocks),
        )

    @classmethod
    def block_diag(cls, blocks: Sequence[_Matrix]):
        total = sum(b.cols for b in blocks)
        out = []
        offset = 0
        for b in blocks:
            for row in b.entries:
                out.append([0] * offset + list(row) + [0] * (total - offset - b.cols))
            offset += b.cols
        return cls(out, cols=total)

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key):
        if isinstance(key, tuple):
            i, j = key
            return self.entries[i][j]
        return self.entries[key]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return self.rows

    def tolist(self) -> list[list[Scalar]]:
        return [list(r) for r in self.entries]

    def submatrix(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None):
        rows = range(self.rows) if rows is None else rows
        cols = range(self.cols) if cols is None else cols
        return type(self)([[self.entries[i][j] for j in cols] for i in rows], cols=len(cols))

    def block(self, i: int, j: int, size: int):
        """The (i, j) square block of side ``size``."""
        return self.submatrix(range(i * size, (i + 1) * size), range(j * size, (j + 1) * size))

    # arithmetic ---------------------------------------------------------
    def _result_type(self, other):
        if isinstance(self, RatMatrix) or isinstance(other, RatMatrix):
            return RatMatrix
        return type(self)

    def __matmul__(self, other: _Matrix):
        if self.cols != other.rows:
            raise LatticeError(f"shape mismatch {self.shape} @ {other.shape}")
        cols_t = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = [[sum(a * b for a, b in zip(row, col)) for col in cols_t] for row in self.entries]
        return self._result_type(other)(out, cols=other.cols)

    def __add__(self, other: _Matrix):
        if self.shape != other.shape:
            raise LatticeError("shape mismatch in addition")
        return self._result_type(other)(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)],
            cols=self.cols,
        )

    def __sub__(self, other: _Matrix):
        return self + (-other)

    def __neg__(self):
        return type(self)([[-a for a in r] for r in self.entries], cols=self.cols)

    def scale(self, c: Scalar):
        cls = RatMatrix if isinstance(c, Fraction) else type(self)
        return cls([[c * a for a in r] for r in self.entries], cols=self.cols)

    @property
    def T(self):
        if not self.rows:
            return type(self)([[] for _ in range(self.cols)], cols=0)
        return type(self)([list(c) for c in zip(*self.entries)], cols=self.rows)

    def __pow__(self, k: int):
        if self.rows != self.cols:
            raise LatticeError("power of a non-square matrix")
        if k < 0:
            inv = self.inverse()
            base_inv = inv.to_int() if isinstance(self, IntMatrix) and inv.is_integral() else inv
            return base_inv ** (-k)
        result = type(self).identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, _Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({[list(map(str, r)) for r in self.entries]})"

    # invariants -----------------------------------------------------------
    def trace(self) -> Scalar:
        return sum(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def det(self) -> Scalar:
        if self.rows != self.cols:
            raise LatticeError("determinant of a non-square matrix")
        return _det(self.entries)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.entries for a in r)

    def rank(self) -> int:
        return len(_rref(self.entries)[1])

    def to_rational(self) -> RatMatrix:
        return RatMatrix(self.entries, cols=self.cols)

    def inverse(self) -> RatMatrix:
        """Exact inverse over Q."""
        if self.rows != self.cols:
            raise LatticeError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(self.entries)]
        red, pivots = _rref(aug)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise LatticeError("matrix is singular")
        return RatMatrix([row[n:] for row in red[:n]], cols=n)


class IntMatrix(_Matrix):
    """Matrix with arbitrary-precision integer entries."""

    @staticmethod
    def _coerce(x):
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return int(x.numerator)
        if isinstance(x, str):
            return int(x)
        raise LatticeError(f"non-integer entry {x!r}")

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and self.det() in (1, -1)

    def inverse_int(self) -> IntMatrix:
        """Inverse of a unimodular matrix, as an integer matrix."""
        return IntMatrix(self.inverse().entries, cols=self.cols)

    def content(self) -> int:
        g = 0
        for r in self.entries:
            for a in r:
                g = gcd(g, a)
        return g

    def to_json(self) -> list[list[str]]:
        return [[str(a) for a in r] for r in self.entries]

    @classmethod
    def from_json(cls, data) -> IntMatrix:
        if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
            raise LatticeError("matrix must be an array of arrays")
        rows = []
        for r in data:
            row = []
            for a in r:
                if isinstance(a, bool) or not isinstance(a, (str, int)):
                    raise LatticeError(f"matrix entry {a!r} is not an integer string")
                try:
                    row.append(int(a))
                except ValueError as exc:
                    raise LatticeError(f"matrix entry {a!r} is not an integer string") from exc
            rows.append(row)
        return cls(rows)


class RatMatrix(_Matrix):
    """Matrix with exact rational entries (denominators positive, reduced)."""

    _coerce = staticmethod(Fraction)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for r in self.entries for a in r)

    def to_int(self) -> IntMatrix:
        if not self.is_integral():
            raise LatticeError("matrix has non-integral entries")
        return IntMatrix(self.entries, cols=self.cols)

    def common_denominator(self) -> int:
        d = 1
        for r in self.entries:
            for a in r:
                d = lcm(d, a.denominator)
        return d


# ---------------------------------------------------------------------------
# Rational elimination


def _det(rows: Sequence[Sequence[Scalar]]) -> Scalar:
    """Bareiss fraction-free determinant (exact for integer input)."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    integral = all(isinstance(x, int) for r in a for x in r)
    sign = 1
    prev: Scalar = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num // prev if integral else num / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _rref(rows: Sequence[Sequence[Scalar]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (matrix, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a, pivots


def rational_left_kernel(M: _Matrix) -> RatMatrix:
    """Basis (rows) of {x in Q^m : x M = 0}."""
    return rational_right_kernel(M.T).T if M.rows else RatMatrix([], cols=0)


def rational_right_kernel(M: _Matrix) -> RatMatrix:
    """Columns of the returned matrix span {y in Q^n : M y = 0}."""
    n = M.cols
    red, pivots = _rref(M.entries) if M.rows else ([], [])
    free = [c for c in range(n) if c not in pivots]
    cols = []
    for f in free:
        y = [Fraction(0)] * n
        y[f] = Fraction(1)
        for row, p in zip(red, pivots):
            y[p] = -row[f]
        cols.append(y)
    if not cols:
        return RatMatrix([[] for _ in range(n)], cols=0)
    return RatMatrix([list(r) for r in zip(*cols)], cols=len(cols))


def solve_left(B: _Matrix, v: Sequence[Scalar]) -> list[Fraction] | None:
    """A rational x with x B = v, or None when v is outside the row space."""
    aug = [list(col) + [v[j]] for j, col in enumerate(zip(*B.entries))] if B.rows else None
    if aug is None:
        return [] if all(x == 0 for x in v) else None
    red, pivots = _rref(aug)
    if B.rows in pivots:
        return None
    x = [Fraction(0)] * B.rows
    for row, p in zip(red, pivots):
        x[p] = row[B.rows]
    return x


def primitive(v: Sequence[Scalar]) -> list[int]:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    den = 1
    for a in v:
        den = lcm(den, Fraction(a).denominator)
    ints = [int(Fraction(a) * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    return [a // g for a in ints] if g else ints


# ---------------------------------------------------------------------------
# Integer normal forms


def _row_hnf(a: list[list[int]], u: list[list[int]] | None) -> int:
    """In-place row Hermite form of ``a``; mirrors row operations into ``u``.

    Returns the rank.  Pivots are positive and entries above each pivot are
    reduced into ``[0, pivot)``.
    """
    m = len(a)
    n = len(a[0]) if m else 0

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]

    def addmul(i, j, q):
        # row_i -= q * row_j
        ai, aj = a[i], a[j]
        for k in range(n):
            if aj[k]:
                ai[k] -= q * aj[k]
        if u is not None:
            ui, uj = u[i], u[j]
            for k in range(len(uj)):
                if uj[k]:
                    ui[k] -= q * uj[k]

    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if a[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(a[i][c]))
            if p != r:
                swap(p, r)
            clean = True
            for i in range(r + 1, m):
                if a[i][c]:
                    addmul(i, r, a[i][c] // a[r][c])
                    if a[i][c]:
                        clean = False
            if clean:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            if u is not None:
                u[r] = [-x for x in u[r]]
        for i in range(r):
            if a[i][c]:
                addmul(i, r, a[i][c] // a[r][c])
        r += 1
    return r


def hnf(M: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form: returns (H, U) with U unimodular and U M = H."""
    a = [list(r) for r in M.entries]
    u = [[int(i == j) for j in range(M.rows)] for i in range(M.rows)]
    _row_hnf(a, u)
    return IntMatrix(a, cols=M.cols), IntMatrix(u, cols=M.rows)


def hnf_basis(M: IntMatrix) -> IntMatrix:
    """Nonzero rows of the row Hermite normal form."""
    a = [list(r) for r in M.entries]
    rank = _row_hnf(a, None)
    return IntMatrix(a[:rank], cols=M.cols)


def snf(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns (S, U, V) with U M V = S."""
    m, n = M.rows, M.cols
    a = [list(r) for r in M.entries]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_add(i, j, q):
        # row_i += q * row_j
        a[i] = [x + q * y for x, y in zip(a[i], a[j])]
        u[i] = [x + q * y for x, y in zip(u[i], u[j])]

    def col_add(i, j, q):
        # col_i += q * col_j
        for row in a:
            row[i] += q * row[j]
        for row in v:
            row[i] += q * row[j]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
            if not nz:
                break
            _, pi, pj = min(nz)
            if pi != t:
                row_swap(pi, t)
            if pj != t:
                col_swap(pj, t)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    row_add(i, t, -(a[i][t] // p))
                    dirty |= a[i][t] != 0
            for j in range(t + 1, n):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // p))
                    dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if t < m and t < n and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return IntMatrix(a, cols=n), IntMatrix(u, cols=m), IntMatrix(v, cols=n)


def invariant_factors(M: IntMatrix) -> list[int]:
    """Diagonal of the Smith form, including zeros for the rank deficiency."""
    S, _, _ = snf(M)
    return [S[i, i] for i in range(min(S.rows, S.cols))]


# ---------------------------------------------------------------------------
# Sublattices


@dataclass(frozen=True, eq=False)
class Sublattice:
    """A sublattice of Z^n given by independent basis rows, stored in HNF."""

    ambient_dim: int
    basis: IntMatrix

    @classmethod
    def from_generators(cls, ambient_dim: int, gens: Iterable[Sequence[int]] | IntMatrix) -> Sublattice:
        M = gens if isinstance(gens, IntMatrix) else IntMatrix(list(gens), cols=ambient_dim)
        if M.cols != ambient_dim:
            raise LatticeError("generator length differs from ambient dimension")
        return cls(ambient_dim, hnf_basis(M))

    @classmethod
    def zero(cls, ambient_dim: int) -> Sublattice:
        return cls(ambient_dim, IntMatrix([], cols=ambient_dim))

    @classmethod
    def full(cls, ambient_dim: int) -> Sublattice:
        return cls(ambient_dim, IntMatrix.identity(ambient_dim))

    @property
    def rank(self) -> int:
        return self.basis.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sublattice):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    @cached_property
    def _pivot_inverse(self) -> tuple[list[int], RatMatrix] | None:
        if self.rank == 0:
            return None
        # Pivot columns of the echelon form index independent columns of B.
        _, cols = _rref(self.basis.entries)
        sub = self.basis.submatrix(None, cols)
        return cols, sub.inverse()

    def coordinates(self, v: Sequence[int]) -> list[Fraction] | None:
        """Rational coordinates of ``v`` in this basis, or None if outside the span."""
        if self.rank == 0:
            return [] if all(x == 0 for x in v) else None
        cols, inv = self._pivot_inverse
        x = [sum(Fraction(v[c]) * inv[k, j] for k, c in enumerate(cols)) for j in range(self.rank)]
        recon = [sum(x[i] * self.basis[i, j] for i in range(self.rank)) for j in range(self.ambient_dim)]
        if any(recon[j] != v[j] for j in range(self.ambient_dim)):
            return None
        return x

    def contains(self, v: Sequence[int]) -> bool:
        x = self.coordinates(v)
        return x is not None and all(c.denominator == 1 for c in x)

    def contains_lattice(self, other: Sublattice) -> bool:
        return all(self.contains(r) for r in other.basis)

    def __add__(self, other: Sublattice) -> Sublattice:
        return Sublattice.from_generators(
            self.ambient_dim, IntMatrix.vstack([self.basis, other.basis], cols=self.ambient_dim)
        )

    def intersection(self, other: Sublattice) -> Sublattice:
        stacked = IntMatrix.vstack([self.basis, other.basis], cols=self.ambient_dim)
        ker = integer_kernel(stacked)
        head = ker.basis.submatrix(None, range(self.rank))
        return Sublattice.from_generators(self.ambient_dim, head @ self.basis)

    def image(self, M: IntMatrix) -> Sublattice:
        return Sublattice.from_generators(M.cols, self.basis @ M)

    def to_json(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "basis": self.basis.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> Sublattice:
        return cls.from_generators(int(data["ambient_dim"]), IntMatrix.from_json(data["basis"]).entries)


def integer_kernel(M: IntMatrix) -> Sublattice:
    """Saturated lattice of integer rows x with x M = 0."""
    H, U = hnf(M)
    rank = sum(1 for r in H if any(r))
    return Sublattice.from_generators(M.rows, U.entries[rank:])


def saturate(L: Sublattice) -> Sublattice:
    """Smallest sublattice with the same rational span and torsion-free cokernel."""
    if L.rank == 0:
        return L
    K = rational_right_kernel(L.basis)
    if K.cols == 0:
        return Sublattice.full(L.ambient_dim)
    den = K.common_denominator()
    return integer_kernel(K.scale(den).to_int())


def adapted_basis(big: Sublattice, small: Sublattice) -> tuple[IntMatrix, list[int]]:
    """A basis of ``big`` whose first k rows, scaled by the returned factors, span ``small``.

    The factors are the nonzero Smith invariants (some may be 1); the rows
    after the first k span a complement lifting the free part of big/small.
    """
    coords = []
    for row in small.basis:
        x = big.coordinates(row)
        if x is None or any(c.denominator != 1 for c in x):
            raise LatticeError("quotient: small lattice is not contained in big lattice")
        coords.append([int(c) for c in x])
    C = IntMatrix(coords, cols=big.rank)
    S, _, V = snf(C)
    factors = [S[i, i] for i in range(min(S.rows, S.cols)) if S[i, i]]
    return V.inverse_int() @ big.basis, factors


def quotient(big: Sublattice, small: Sublattice) -> tuple[Sublattice, list[int]]:
    """Free-part lift and torsion invariant factors of big/small."""
    B, factors = adapted_basis(big, small)
    k = len(factors)
    free = Sublattice.from_generators(big.ambient_dim, B.entries[k:])
    return free, [d for d in factors if d > 1]


# ---------------------------------------------------------------------------
# Bilinear forms


@dataclass(frozen=True)
class GramForm:
    matrix: IntMatrix
    symmetry: str = "symmetric"

    def __post_init__(self):
        if self.symmetry not in ("symmetric", "antisymmetric"):
            raise LatticeError(f"unknown symmetry flag {self.symmetry!r}")
        M = self.matrix
        if M.rows != M.cols:
            raise LatticeError("Gram matrix must be square")
        target = M.T if self.symmetry == "symmetric" else -M.T
        if M != target:
            raise LatticeError(f"Gram matrix is not {self.symmetry}")

    @property
    def rank(self) -> int:
        return self.matrix.rows

    def pair(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Scalar:
        M = self.matrix
        return sum(x[i] * M[i, j] * y[j] for i in range(M.rows) for j in range(M.cols) if M[i, j])


@dataclass(frozen=True)
class FormInvariants:
    det: int
    disc: tuple[int, ...]
    signature: tuple[int, int] | None

    def to_json(self) -> dict:
        return {
            "det": str(self.det),
            "disc": [str(d) for d in self.disc],
            "signature": list(self.signature) if self.signature else None,
        }


def gram_restrict(L: Sublattice, J: GramForm) -> GramForm:
    if J.rank != L.ambient_dim:
        raise LatticeError("form dimension differs from the lattice ambient dimension")
    return GramForm(L.basis @ J.matrix @ L.basis.T, J.symmetry)


def _inertia(Q: IntMatrix) -> tuple[int, int, int]:
    """(positive, negative, zero) counts by symmetric elimination over Q."""
    a = [[Fraction(x) for x in r] for r in Q.entries]
    pos = neg = zero = 0
    while a:
        n = len(a)
        p = next((i for i in range(n) if a[i][i] != 0), None)
        if p is None:
            pair = next(((i, j) for i in range(n) for j in range(i + 1, n) if a[i][j] != 0), None)
            if pair is None:
                zero += n
                break
            i, j = pair
            # congruence e_i -> e_i + e_j puts 2 a_ij on the diagonal
            a[i] = [x + y for x, y in zip(a[i], a[j])]
            for row in a:
                row[i] += row[j]
            p = i
        d = a[p][p]
        if d > 0:
            pos += 1
        else:
            neg += 1
        rest = [t for t in range(n) if t != p]
        a = [[a[s][t] - a[s][p] * a[p][t] / d for t in rest] for s in rest]
    return pos, neg, zero


def signature(Q: GramForm) -> tuple[int, int]:
    """Inertia (positive, negative) of a nondegenerate symmetric form."""
    if Q.symmetry != "symmetric":
        raise LatticeError("signature of an antisymmetric form is undefined")
    pos, neg, zero = _inertia(Q.matrix)
    if zero:
        raise LatticeError("signature requested for a degenerate form")
    return pos, neg


def form_invariants(Q: GramForm) -> FormInvariants:
    det = Q.matrix.det() if Q.rank else 1
    disc = tuple(abs(d) for d in invariant_factors(Q.matrix) if abs(d) > 1)
    sig = signature(Q) if Q.symmetry == "symmetric" and det != 0 else None
    return FormInvariants(int(det), disc, sig)


def orthogonal_complement(L: Sublattice, J: GramForm, ambient: Sublattice) -> Sublattice:
    """Saturated {x in ambient : x J y^T = 0 for all y in L}."""
    if not (L.ambient_dim == ambient.ambient_dim == J.rank):
        raise LatticeError("dimension mismatch in orthogonal complement")
    if L.rank == 0:
        return ambient
    A = ambient.basis
    K = integer_kernel(A @ J.matrix @ L.basis.T)
    return Sublattice.from_generators(ambient.ambient_dim, K.basis @ A)
