"""Exact linear algebra over the rationals and prime fields.

Matrices are plain numpy arrays.  Over F_p they hold reduced ``int64``
entries; over Q they are ``object`` arrays whose entries are Python ints
or :class:`fractions.Fraction` (integral values stay ints, which is much
faster and compares equal).
Every routine takes the :class:`Field` explicitly, so the same code path
serves both cases.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np


class FieldMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Field:
    """The rationals (``p == 0``) or the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p < 0 or (self.p and not _is_prime(self.p)):
            raise ValueError(f"not a prime: {self.p}")
        if self.p >= 1 << 15:
            # products of three reduced entries must fit comfortably in int64
            raise ValueError("prime fields are limited to p < 2**15")

    # -- descriptors -------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Accept ``Q``, ``F2``, ``Fp:7`` or ``F7``."""
        t = text.strip()
        if t.upper() in ("Q", "QQ"):
            return cls(0)
        if t.startswith("Fp:"):
            return cls(int(t[3:]))
        if t[:1] in "Ff" and t[1:].isdigit():
            return cls(int(t[1:]))
        raise ValueError(f"unknown field descriptor {text!r}")

    @classmethod
    def default(cls) -> "Field":
        return cls.parse(os.environ.get("DGKERNELS_FIELD", "Q"))

    @property
    def is_finite(self) -> bool:
        return self.p > 0

    @property
    def dtype(self):
        return np.int64 if self.p else object

    def __str__(self):
        return f"F{self.p}" if self.p else "Q"

    def descriptor(self) -> str:
        return f"Fp:{self.p}" if self.p else "Q"

    # -- scalars -----------------------------------------------------------

    def __call__(self, x):
        """Coerce an int, Fraction or ``"p/q"`` string into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        x = Fraction(x)
        return x.numerator if x.denominator == 1 else x

    def inv(self, x):
        if self.p:
            return pow(int(x), -1, self.p)
        return _normal(1 / Fraction(x))

    def to_text(self, x) -> str | int:
        if self.p:
            return int(x)
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def elements(self) -> Iterator:
        if not self.p:
            raise ValueError("Q is infinite")
        return iter(range(self.p))

    # -- arrays ------------------------------------------------------------

    def zeros(self, shape) -> np.ndarray:
        if self.p:
            return np.zeros(shape, dtype=np.int64)
        return np.full(shape, 0, dtype=object)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self(1)
        return out

    def array(self, data) -> np.ndarray:
        a = np.asarray(data, dtype=object)
        if a.size == 0:
            return self.zeros(a.shape)
        flat = [self(x) for x in a.reshape(-1)]
        return np.array(flat, dtype=self.dtype).reshape(a.shape)

    def reduce(self, a) -> np.ndarray:
        """Normalize the result of integer-valued arithmetic."""
        if self.p:
            return np.asarray(a, dtype=np.int64) % self.p
        a = np.asarray(a)
        if a.dtype != object:
            return a.astype(np.int64).astype(object)
        return a

    def matmul(self, a, b) -> np.ndarray:
        a = np.asarray(a)
        b = np.asarray(b)
        if a.shape[-1] == 0:
            return self.zeros(a.shape[:-1] + b.shape[1:])
        if self.p:
            return (a @ b) % self.p
        if a.dtype != object or b.dtype != object:
            a, b = self.reduce(a), self.reduce(b)
        # object arithmetic is slow: contract only over indices used on both sides
        if a.ndim == 2 and a.size and b.size:
            keep = np.any(a != 0, axis=0) & (np.any(b != 0, axis=1) if b.ndim == 2 else (b != 0))
            if not keep.all():
                if not keep.any():
                    return self.zeros(a.shape[:-1] + b.shape[1:])
                a, b = a[:, keep], b[keep]
        return a @ b

    def kron(self, a, b) -> np.ndarray:
        if np.asarray(a).size == 0 or np.asarray(b).size == 0:
            a, b = np.asarray(a), np.asarray(b)
            return self.zeros((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]))
        return self.reduce(np.kron(a, b))

    def random(self, rng: np.random.Generator, shape, bound: int = 3) -> np.ndarray:
        if self.p:
            return rng.integers(0, self.p, size=shape).astype(np.int64)
        vals = rng.integers(-bound, bound + 1, size=shape)
        return self.array(vals)

    def check(self, a: np.ndarray) -> None:
        if self.p and a.dtype != np.int64:
            raise FieldMismatch(f"expected int64 array over {self}, got {a.dtype}")
        if not self.p and a.size and not all(type(x) in (int, Fraction) for x in a.flat):
            raise FieldMismatch(f"expected int/Fraction entries over {self}")


def _normal(x):
    """Integral Fractions become ints (much faster object arithmetic)."""
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


_normal_array = np.frompyfunc(_normal, 1, 1)


def normalize(F: "Field", a: np.ndarray) -> np.ndarray:
    if F.p or a.size == 0:
        return a
    return _normal_array(a).astype(object)


@lru_cache(maxsize=None)
def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


QQ = Field(0)
F2 = Field(2)


def is_zero(a) -> bool:
    a = np.asarray(a)
    return a.size == 0 or not np.any(a != 0)


def rref(F: Field, A: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` has exactly ``len(pivots)`` nonzero
    rows.  Pivot columns are chosen left to right, which makes the result
    canonical for the row space of ``A``.
    """
    A = np.array(A, dtype=F.dtype, copy=True)
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        piv = A[r, c]
        if piv != 1:
            A[r] = A[r] * F.inv(piv)
            if F.p:
                A[r] %= F.p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            upd = np.multiply.outer(col[rows], A[r])
            A[rows] = A[rows] - upd
            if F.p:
                A[rows] %= F.p
        pivots.append(c)
        r += 1
    return normalize(F, A[:r]), pivots


def rank(F: Field, A: np.ndarray) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def nullspace(F: Field, A: np.ndarray, ncols: Optional[int] = None) -> tuple[np.ndarray, list[int]]:
    """Basis of ``{x : A x = 0}`` as columns, plus the free-variable positions.

    The basis is the standard one read off the RREF: column ``j`` has a 1 at
    free position ``free[j]`` and zeros at every other free position, so the
    coordinates of any kernel vector ``x`` are simply ``x[free]``.
    """
    A = np.asarray(A)
    n = A.shape[1] if ncols is None else ncols
    if A.size == 0:
        return F.eye(n), list(range(n))
    R, piv = rref(F, A)
    free = [j for j in range(n) if j not in set(piv)]
    N = F.zeros((n, len(free)))
    for j, fcol in enumerate(free):
        N[fcol, j] = F(1)
        for i, pc in enumerate(piv):
            N[pc, j] = -R[i, fcol]
    return F.reduce(N), free


def solve(F: Field, A: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    """A solution of ``A x = b`` with free variables set to zero, or None."""
    A = np.asarray(A)
    b = np.asarray(b)
    m, n = A.shape
    if b.shape[0] != m:
        raise ValueError(f"dimension mismatch: {A.shape} vs {b.shape}")
    vec = b.ndim == 1
    B = b.reshape(m, 1) if vec else b
    if m == 0:
        x = F.zeros((n, B.shape[1]))
        return x[:, 0] if vec else x
    aug = np.concatenate([np.asarray(A, dtype=F.dtype), np.asarray(B, dtype=F.dtype)], axis=1)
    R, piv = rref(F, aug)
    if piv and piv[-1] >= n:
        return None
    x = F.zeros((n, B.shape[1]))
    for i, pc in enumerate(piv):
        x[pc] = R[i, n:]
    return x[:, 0] if vec else x


def cokernel(F: Field, M: np.ndarray, rows: Optional[int] = None) -> tuple[np.ndarray, np.ndarray]:
    """Projection ``P`` (k x m) and section ``S`` (m x k) for ``coker M``.

    ``P @ M == 0`` and ``P @ S == I``.  The complement of the image is spanned
    by the standard vectors at non-pivot positions of the RREF of ``M.T``.
    """
    M = np.asarray(M)
    m = M.shape[0] if rows is None else rows
    if M.size == 0:
        return F.eye(m), F.eye(m)
    R, piv = rref(F, M.T)
    pset = set(piv)
    keep = [j for j in range(m) if j not in pset]
    P = F.zeros((len(keep), m))
    S = F.zeros((m, len(keep)))
    for t, j in enumerate(keep):
        P[t, j] = F(1)
        S[j, t] = F(1)
        for i, pc in enumerate(piv):
            P[t, pc] = -R[i, j]
    return F.reduce(P), S


def image_basis(F: Field, M: np.ndarray) -> np.ndarray:
    """Canonical basis of the column space (columns of the result)."""
    M = np.asarray(M)
    if M.size == 0:
        return F.zeros((M.shape[0], 0))
    R, _ = rref(F, M.T)
    return R.T.copy()


def inverse(F: Field, A: np.ndarray) -> Optional[np.ndarray]:
    A = np.asarray(A)
    n = A.shape[0]
    if A.shape != (n, n):
        return None
    return solve(F, A, F.eye(n)) if rank(F, A) == n else None
