"""Dense exact linear algebra over a prime field F_p.

Matrices are immutable numpy int64 arrays with entries reduced mod p.
Field elements are plain residues in [0, p).  All basis conventions are
deterministic (RREF pivots, free variables set to zero) so that every
downstream coordinate chart is reproducible bit for bit.
"""

from __future__ import annotations

import os
from typing import List, Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "DEFAULT_PRIME",
    "default_prime",
    "Matrix",
    "rref",
    "solve",
    "kernel_basis",
    "image_basis",
    "QuotientChart",
]

DEFAULT_PRIME = 101


def default_prime() -> int:
    """Configured prime: TRIHERED_PRIME env var, else 101."""
    return int(os.environ.get("TRIHERED_PRIME", DEFAULT_PRIME))


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("no inverse of 0 mod %d" % p)
    return pow(a, p - 2, p)


class Matrix:
    """Immutable matrix over F_p backed by a numpy int64 array."""

    __slots__ = ("p", "a")

    def __init__(self, p: int, data):
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(arr.shape[0], 1)
        if arr.ndim != 2:
            raise ValueError("matrix data must be 2-dimensional")
        arr = np.mod(arr, p)
        arr.setflags(write=False)
        self.p = p
        self.a = arr

    # -- constructors ------------------------------------------------

    @staticmethod
    def zeros(p: int, rows: int, cols: int) -> "Matrix":
        return Matrix(p, np.zeros((rows, cols), dtype=np.int64))

    @staticmethod
    def identity(p: int, n: int) -> "Matrix":
        return Matrix(p, np.eye(n, dtype=np.int64))

    @staticmethod
    def from_rows(p: int, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "Matrix":
        if len(rows) == 0:
            return Matrix.zeros(p, 0, 0 if cols is None else cols)
        return Matrix(p, np.array(rows, dtype=np.int64))

    # -- shape -------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.a.shape

    # -- algebra -----------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        assert self.p == other.p, "prime mismatch"
        assert self.cols == other.rows, f"shape mismatch {self.shape} @ {other.shape}"
        return Matrix(self.p, (self.a @ other.a) % self.p)

    def __add__(self, other: "Matrix") -> "Matrix":
        assert self.p == other.p and self.shape == other.shape
        return Matrix(self.p, self.a + other.a)

    def __sub__(self, other: "Matrix") -> "Matrix":
        assert self.p == other.p and self.shape == other.shape
        return Matrix(self.p, self.a - other.a)

    def __neg__(self) -> "Matrix":
        return Matrix(self.p, -self.a)

    def scale(self, c: int) -> "Matrix":
        return Matrix(self.p, self.a * (c % self.p))

    @property
    def T(self) -> "Matrix":
        return Matrix(self.p, self.a.T)

    def kron(self, other: "Matrix") -> "Matrix":
        assert self.p == other.p
        return Matrix(self.p, np.kron(self.a, other.a) % self.p)

    def hstack(self, other: "Matrix") -> "Matrix":
        assert self.p == other.p and self.rows == other.rows
        return Matrix(self.p, np.hstack([self.a, other.a]))

    def vstack(self, other: "Matrix") -> "Matrix":
        assert self.p == other.p and self.cols == other.cols
        return Matrix(self.p, np.vstack([self.a, other.a]))

    @staticmethod
    def block(blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        p = blocks[0][0].p
        return Matrix(p, np.block([[b.a for b in row] for row in blocks]))

    def submatrix(self, rows, cols) -> "Matrix":
        return Matrix(self.p, self.a[np.ix_(list(rows), list(cols))])

    def column(self, j: int) -> "Matrix":
        return Matrix(self.p, self.a[:, j : j + 1])

    def flatten(self) -> "Matrix":
        """Row-major flattening as a column vector."""
        return Matrix(self.p, self.a.reshape(-1, 1))

    def power(self, k: int) -> "Matrix":
        assert self.rows == self.cols
        result = Matrix.identity(self.p, self.rows)
        base = self
        while k > 0:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    # -- predicates / misc --------------------------------------------

    def is_zero(self) -> bool:
        return not self.a.any()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.p == other.p
            and self.shape == other.shape
            and np.array_equal(self.a, other.a)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self.a.tobytes()))

    def __repr__(self) -> str:
        return f"Matrix(p={self.p}, {self.a.tolist()})"

    def tolist(self) -> List[List[int]]:
        return self.a.tolist()

    def entries(self) -> List[int]:
        """Row-major entry list (the on-disk representation)."""
        return self.a.reshape(-1).tolist()


def _rref_array(a: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    m = a.copy()
    rows, cols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = inv_mod(int(m[r, c]), p)
        m[r] = (m[r] * inv) % p
        hit = np.nonzero(m[:, c])[0]
        hit = hit[hit != r]
        if hit.size:
            m[hit] = (m[hit] - np.outer(m[hit, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rref(m: Matrix) -> Tuple[Matrix, List[int], int]:
    """Reduced row echelon form: (rref matrix, pivot columns, rank)."""
    red, pivots = _rref_array(m.a, m.p)
    return Matrix(m.p, red), pivots, len(pivots)


def rank(m: Matrix) -> int:
    return rref(m)[2]


def solve(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """Solve a @ x = b (b may have several columns).

    Returns the solution with free variables set to zero, or None when
    the system is inconsistent.
    """
    assert a.p == b.p
    if a.rows != b.rows:
        raise ValueError(f"dimension mismatch: A has {a.rows} rows, b has {b.rows}")
    aug = np.hstack([a.a, b.a])
    red, pivots = _rref_array(aug, a.p)
    n = a.cols
    if any(c >= n for c in pivots):
        return None
    x = np.zeros((n, b.cols), dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = red[r, n:]
    return Matrix(a.p, x)


def kernel_basis(a: Matrix) -> Matrix:
    """Columns form the canonical basis of the null space of a."""
    red, pivots = _rref_array(a.a, a.p)
    n = a.cols
    free = [c for c in range(n) if c not in pivots]
    k = np.zeros((n, len(free)), dtype=np.int64)
    for idx, f in enumerate(free):
        k[f, idx] = 1
        for r, c in enumerate(pivots):
            k[c, idx] = (-red[r, f]) % a.p
    return Matrix(a.p, k)


def image_basis(a: Matrix) -> Matrix:
    """Columns form the canonical (RREF of a^T) basis of the column space."""
    red, pivots = _rref_array(a.a.T, a.p)
    return Matrix(a.p, red[: len(pivots)].T)


def inverse(a: Matrix) -> Optional[Matrix]:
    if a.rows != a.cols:
        return None
    x = solve(a, Matrix.identity(a.p, a.rows))
    if x is None:
        return None
    if not (a @ x == Matrix.identity(a.p, a.rows)):
        return None
    return x


class QuotientChart:
    """Coordinates on F_p^n / (column span of S), via RREF complements.

    Coordinates live at the non-pivot positions of RREF(S^T); the section
    places coordinates back at those positions with zeros elsewhere.
    """

    __slots__ = ("p", "n", "dim", "_red", "_pivots", "_free")

    def __init__(self, span: Matrix):
        self.p = span.p
        self.n = span.rows
        red, pivots = _rref_array(span.a.T, span.p)
        self._red = red[: len(pivots)]
        self._pivots = pivots
        self._free = [c for c in range(self.n) if c not in pivots]
        self.dim = len(self._free)

    def reduce(self, v: Matrix) -> Matrix:
        """Coordinates of v + span in the quotient (columnwise)."""
        assert v.rows == self.n
        w = v.a.copy()
        for r, c in enumerate(self._pivots):
            coef = w[c].copy()
            if coef.any():
                w = (w - np.outer(self._red[r], coef)) % self.p
        return Matrix(self.p, w[self._free, :] if self._free else np.zeros((0, v.cols), dtype=np.int64))

    def section(self, c: Matrix) -> Matrix:
        """Canonical representative of quotient coordinates."""
        assert c.rows == self.dim
        v = np.zeros((self.n, c.cols), dtype=np.int64)
        for idx, f in enumerate(self._free):
            v[f] = c.a[idx]
        return Matrix(self.p, v)

    def section_matrix(self) -> Matrix:
        return self.section(Matrix.identity(self.p, self.dim))


def charpoly(a: Matrix) -> List[int]:
    """Characteristic polynomial coefficients [c_0, ..., c_n] with c_n = 1.

    Faddeev-LeVerrier; requires n < p so the divisions 1..n are units.
    """
    n = a.rows
    p = a.p
    assert a.rows == a.cols
    assert n < p, "Faddeev-LeVerrier needs matrix size below the field characteristic"
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    m = Matrix.identity(p, n)
    c = 1
    for k in range(1, n + 1):
        am = a @ m
        tr = int(np.trace(am.a) % p)
        c = (-tr * inv_mod(k, p)) % p
        coeffs[n - k] = c
        m = am + Matrix.identity(p, n).scale(c)
    return coeffs


def poly_roots(coeffs: List[int], p: int) -> List[int]:
    """Roots in F_p by direct evaluation (p is small)."""
    xs = np.arange(p, dtype=np.int64)
    vals = np.zeros(p, dtype=np.int64)
    for c in reversed(coeffs):
        vals = (vals * xs + c) % p
    return [int(x) for x in np.nonzero(vals == 0)[0]]
