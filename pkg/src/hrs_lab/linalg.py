"""Exact dense linear algebra over a prime field F_p.

Matrices are numpy int64 arrays reduced mod p.  With p < 2**16 every
product of two entries fits in 32 bits, so a dot product of length n stays
below 2**63 as long as n < 2**31.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_PRIME = 1 << 16


class NoSolution(ValueError):
    """Raised by :func:`solve` when the right-hand side is outside the image."""


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or p < 2 or p >= MAX_PRIME:
        raise ValueError(f"modulus must be a prime below {MAX_PRIME}, got {p!r}")
    p = int(p)
    for q in range(2, int(p**0.5) + 1):
        if p % q == 0:
            raise ValueError(f"modulus {p} is not prime")
    return p


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod p")
    return pow(int(a), p - 2, p)


class FpMatrix:
    """Immutable dense matrix over F_p."""

    __slots__ = ("a", "p")

    def __init__(self, entries, p: int, shape: tuple[int, int] | None = None):
        p = check_prime(p)
        a = np.array(entries, dtype=np.int64)
        if shape is not None:
            a = a.reshape(shape)
        if a.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {a.shape}")
        a %= p
        a.flags.writeable = False
        self.a = a
        self.p = p

    @classmethod
    def _wrap(cls, a: np.ndarray, p: int) -> "FpMatrix":
        # trusted fast path: `a` is already reduced and 2-d
        m = cls.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.int64)
        a.flags.writeable = False
        m.a = a
        m.p = p
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FpMatrix":
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64), check_prime(p))

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls._wrap(np.eye(n, dtype=np.int64), check_prime(p))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix._wrap(self.a.T, self.p)

    def _check(self, other: "FpMatrix") -> None:
        if not isinstance(other, FpMatrix):
            raise TypeError(f"expected FpMatrix, got {type(other).__name__}")
        if other.p != self.p:
            raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        return FpMatrix._wrap((self.a @ other.a) % self.p, self.p)

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"cannot add {self.shape} and {other.shape}")
        return FpMatrix._wrap((self.a + other.a) % self.p, self.p)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"cannot subtract {self.shape} and {other.shape}")
        return FpMatrix._wrap((self.a - other.a) % self.p, self.p)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix._wrap((-self.a) % self.p, self.p)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix._wrap((self.a * (int(c) % self.p)) % self.p, self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self.a, other.a))

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self.a.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix({self.a.tolist()}, p={self.p})"

    def tolist(self) -> list[list[int]]:
        return self.a.tolist()

    def is_zero(self) -> bool:
        return not self.a.any()

    def rank(self) -> int:
        return rank(self)


def hstack(blocks: Sequence[FpMatrix], rows: int | None = None, p: int | None = None) -> FpMatrix:
    if not blocks:
        return FpMatrix.zeros(rows or 0, 0, p)
    return FpMatrix._wrap(np.hstack([b.a for b in blocks]), blocks[0].p)


def vstack(blocks: Sequence[FpMatrix], cols: int | None = None, p: int | None = None) -> FpMatrix:
    if not blocks:
        return FpMatrix.zeros(0, cols or 0, p)
    return FpMatrix._wrap(np.vstack([b.a for b in blocks]), blocks[0].p)


def block_diag(blocks: Sequence[FpMatrix], p: int) -> FpMatrix:
    r = sum(b.rows for b in blocks)
    c = sum(b.cols for b in blocks)
    out = np.zeros((r, c), dtype=np.int64)
    i = j = 0
    for b in blocks:
        out[i:i + b.rows, j:j + b.cols] = b.a
        i += b.rows
        j += b.cols
    return FpMatrix._wrap(out, p)


# --- raw array kernels ------------------------------------------------------

def rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a reduced int64 array; returns a new array."""
    r = np.array(a, dtype=np.int64, copy=True)
    nrows, ncols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.flatnonzero(r[row:, col])
        if nz.size == 0:
            continue
        k = row + int(nz[0])
        if k != row:
            r[[row, k]] = r[[k, row]]
        piv = int(r[row, col])
        if piv != 1:
            r[row] = (r[row] * inv_mod(piv, p)) % p
        factors = r[:, col].copy()
        factors[row] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            r[hit] = (r[hit] - np.outer(factors[hit], r[row])) % p
        pivots.append(col)
        row += 1
    return r, pivots


def rank_array(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref_array(a, p)[1])


def nullspace_with_free(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Canonical (rref-derived) basis of {x : a x = 0} and its free columns.

    The basis vector attached to free column j has a 1 in position j and 0
    in every other free position, so the coordinates of a kernel element
    are its entries at the free indices.
    """
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64), list(range(ncols))
    r, pivots = rref_array(a, p)
    piv = set(pivots)
    free = [j for j in range(ncols) if j not in piv]
    basis = np.zeros((ncols, len(free)), dtype=np.int64)
    if free:
        basis[free, range(len(free))] = 1
        if pivots:
            basis[pivots, :] = (-r[: len(pivots)][:, free]) % p
    return basis, free


def nullspace_array(a: np.ndarray, p: int) -> np.ndarray:
    return nullspace_with_free(a, p)[0]


def solve_array(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Deterministic solution of a x = b (free variables set to 0), or None."""
    m, n = a.shape
    k = b.shape[1]
    if m == 0:
        return np.zeros((n, k), dtype=np.int64)
    aug = np.hstack([a, b]) % p
    r, pivots = rref_array(aug, p)
    if pivots and pivots[-1] >= n:
        return None
    x = np.zeros((n, k), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, n:]
    return x


def column_basis_array(a: np.ndarray, p: int) -> np.ndarray:
    """The pivot columns of `a`: a canonical basis of its column space."""
    _, pivots = rref_array(a, p)
    return a[:, pivots]


# --- public operations ------------------------------------------------------

def rref(m: FpMatrix) -> tuple[FpMatrix, list[int]]:
    r, pivots = rref_array(m.a, m.p)
    return FpMatrix._wrap(r, m.p), pivots


def rank(m: FpMatrix) -> int:
    return rank_array(m.a, m.p)


def nullspace_basis(m: FpMatrix) -> FpMatrix:
    return FpMatrix._wrap(nullspace_array(m.a, m.p), m.p)


def column_space_basis(m: FpMatrix) -> FpMatrix:
    return FpMatrix._wrap(column_basis_array(m.a, m.p), m.p)


def left_annihilator(m: FpMatrix) -> FpMatrix:
    """Matrix Q of full row rank with Q m = 0 and rows(Q) = rows(m) - rank(m)."""
    return FpMatrix._wrap(nullspace_array(m.a.T, m.p).T, m.p)


def solve(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    """Return X with a @ X == b; raise NoSolution when none exists."""
    a._check(b)
    if a.rows != b.rows:
        raise ValueError(f"row mismatch: A is {a.shape}, B is {b.shape}")
    x = solve_array(a.a, b.a, a.p)
    if x is None:
        raise NoSolution("right-hand side is not in the column space")
    return FpMatrix._wrap(x, a.p)


def inverse(m: FpMatrix) -> FpMatrix:
    if m.rows != m.cols:
        raise ValueError(f"non-square matrix {m.shape}")
    return solve(m, FpMatrix.identity(m.rows, m.p))


def is_invertible(m: FpMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def kron(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return np.kron(a, b) % p


def random_matrix(rng: np.random.Generator, rows: int, cols: int, p: int) -> FpMatrix:
    return FpMatrix._wrap(rng.integers(0, p, size=(rows, cols), dtype=np.int64), p)


def as_matrices(items: Iterable, p: int) -> list[FpMatrix]:
    return [x if isinstance(x, FpMatrix) else FpMatrix(x, p) for x in items]
