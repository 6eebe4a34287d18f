"""Bounded cochain complexes of finite-dimensional vector spaces.

A complex is stored flat: one list of basis degrees and one square
differential matrix ``d`` with ``d[i, j] != 0`` only when
``degrees[i] == degrees[j] + 1``.  Per-degree blocks are available through
:meth:`Complex.block`.  Koszul conventions used throughout the package::

    d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy
    d(phi)     = d o phi - (-1)^|phi| phi o d
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from .linalg import Field
from .report import Report


def signs(F: Field, degrees: Sequence[int], parity=None) -> np.ndarray:
    """Vector of ``(-1)^deg`` (or ``(-1)^(deg*parity)``) as field elements."""
    deg = np.asarray(degrees, dtype=np.int64)
    if parity is not None:
        deg = deg * parity
    return F.array(np.where(deg % 2 == 0, 1, -1))


@dataclass(frozen=True, eq=False)
class Complex:
    field: Field
    degrees: tuple[int, ...]
    d: np.ndarray
    names: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(x) for x in self.degrees))
        n = len(self.degrees)
        if self.d.shape != (n, n):
            raise ValueError(f"differential has shape {self.d.shape}, expected {(n, n)}")
        if self.names is not None and len(self.names) != n:
            raise ValueError("one name per basis vector required")

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @cached_property
    def _by_degree(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, k in enumerate(self.degrees):
            out.setdefault(k, []).append(i)
        return out

    def indices(self, n: int) -> list[int]:
        return self._by_degree.get(n, [])

    def dims(self) -> dict[int, int]:
        return {k: len(v) for k, v in sorted(self._by_degree.items())}

    def dim_at(self, n: int) -> int:
        return len(self.indices(n))

    @property
    def window(self) -> tuple[int, int] | None:
        if not self.degrees:
            return None
        return min(self.degrees), max(self.degrees)

    def block(self, n: int) -> np.ndarray:
        """The component ``d^n`` from degree n to degree n+1."""
        return self.d[np.ix_(self.indices(n + 1), self.indices(n))]

    def __eq__(self, other):
        if not isinstance(other, Complex):
            return NotImplemented
        return (
            self.field == other.field
            and self.degrees == other.degrees
            and self.names == other.names
            and np.array_equal(self.d, other.d)
        )

    __hash__ = None

    def same_as(self, other: "Complex") -> bool:
        """Equality ignoring basis names."""
        return (
            self.field == other.field
            and self.degrees == other.degrees
            and np.array_equal(self.d, other.d)
        )

    def with_names(self, names) -> "Complex":
        return Complex(self.field, self.degrees, self.d, tuple(names) if names else None)

    def __repr__(self):
        return f"Complex({self.field}, dims={self.dims()})"


def from_blocks(F: Field, dims: dict[int, int], diffs: dict[int, Sequence] | None = None) -> Complex:
    """Build a complex from per-degree dimensions and matrices ``d^n``."""
    diffs = diffs or {}
    degs: list[int] = []
    offset: dict[int, int] = {}
    for n in sorted(dims):
        offset[n] = len(degs)
        degs.extend([n] * dims[n])
    d = F.zeros((len(degs), len(degs)))
    for n, mat in diffs.items():
        mat = F.array(mat)
        if mat.size == 0:
            continue
        if mat.shape != (dims.get(n + 1, 0), dims.get(n, 0)):
            raise ValueError(f"d^{n} has shape {mat.shape}")
        r, c = offset[n + 1], offset[n]
        d[r : r + mat.shape[0], c : c + mat.shape[1]] = mat
    return Complex(F, tuple(degs), d)


def zero_complex(F: Field) -> Complex:
    return Complex(F, (), F.zeros((0, 0)))


def unit_complex(F: Field, degree: int = 0) -> Complex:
    """K[-degree]: one basis vector sitting in ``degree``."""
    return Complex(F, (degree,), F.zeros((1, 1)))


def shift(X: Complex, k: int) -> Complex:
    """``X[k]`` with ``X[k]^n = X^(n+k)`` and differential ``(-1)^k d``."""
    d = X.d if k % 2 == 0 else X.field.reduce(-X.d)
    return Complex(X.field, tuple(n - k for n in X.degrees), d, X.names)


def direct_sum(*Xs: Complex) -> Complex:
    F = Xs[0].field
    degs: list[int] = []
    n = sum(X.dim for X in Xs)
    d = F.zeros((n, n))
    o = 0
    for X in Xs:
        _same_field(F, X.field)
        d[o : o + X.dim, o : o + X.dim] = X.d
        degs.extend(X.degrees)
        o += X.dim
    return Complex(F, tuple(degs), d)


def _same_field(F: Field, G: Field):
    if F != G:
        raise la.FieldMismatch(f"{F} vs {G}")


# --------------------------------------------------------------------------
# validation and cohomology


def validate_complex(C: Complex) -> Report:
    rep = Report("complex")
    F = C.field
    deg = np.asarray(C.degrees, dtype=np.int64)
    bad = np.argwhere((C.d != 0) & (deg[:, None] != deg[None, :] + 1))
    rep.add("differential has degree +1", bad.size == 0, entries=bad[:5].tolist())
    dd = F.matmul(C.d, C.d)
    offenders = sorted({int(deg[j]) for j in np.nonzero(np.any(dd != 0, axis=0))[0]})
    rep.add("d^2 = 0", not offenders, degrees=offenders)
    return rep


def _ranks(C: Complex) -> dict[int, int]:
    F = C.field
    return {n: la.rank(F, C.block(n)) for n in C.dims()}


def cohomology_dims(C: Complex) -> dict[int, int]:
    """Nonzero cohomology dimensions by degree."""
    r = _ranks(C)
    out = {}
    for n, k in C.dims().items():
        h = k - r.get(n, 0) - r.get(n - 1, 0)
        if h:
            out[n] = h
    return out


def euler_characteristic(C: Complex) -> int:
    return sum((-1) ** (n % 2) * k for n, k in C.dims().items())


def is_acyclic(C: Complex) -> bool:
    return not cohomology_dims(C)


def cycles(C: Complex, n: int) -> np.ndarray:
    """Basis of Z^n as columns in the ambient coordinates of ``C``."""
    F = C.field
    idx = C.indices(n)
    N, _ = la.nullspace(F, C.block(n), len(idx))
    out = F.zeros((C.dim, N.shape[1]))
    out[idx] = N
    return out


def boundaries(C: Complex, n: int) -> np.ndarray:
    """Basis of B^n (columns, ambient coordinates)."""
    F = C.field
    idx = C.indices(n)
    B = la.image_basis(F, C.block(n - 1)) if C.indices(n - 1) else F.zeros((len(idx), 0))
    out = F.zeros((C.dim, B.shape[1]))
    out[idx] = B
    return out


@dataclass
class Cohomology:
    """``H^n`` with chosen representatives and a projection from cycles."""

    complex: Complex
    degree: int
    reps: np.ndarray  # ambient x h, representative cycles
    _proj: np.ndarray  # h x dim C^n, defined on cycles

    @property
    def dim(self) -> int:
        return self.reps.shape[1]

    def classify(self, z: np.ndarray) -> np.ndarray:
        """Coordinates of the class of the cycle ``z`` (ambient vector)."""
        idx = self.complex.indices(self.degree)
        return self.complex.field.matmul(self._proj, np.asarray(z)[idx])


def cohomology(C: Complex, n: int) -> Cohomology:
    """Degree-n cohomology with deterministic representatives.

    Cycles get the RREF nullspace basis; the boundaries, written in that
    basis, are split off with the canonical cokernel, and representatives
    are the section vectors.  ``classify`` is exact on every cycle.
    """
    F = C.field
    idx = C.indices(n)
    k = len(idx)
    Z, free = la.nullspace(F, C.block(n), k)
    if Z.shape[1] == 0:
        return Cohomology(C, n, F.zeros((C.dim, 0)), F.zeros((0, k)))
    B = boundaries(C, n)[idx]
    Bz = B[free] if B.shape[1] else F.zeros((Z.shape[1], 0))
    P, S = la.cokernel(F, Bz, rows=Z.shape[1])
    select = F.zeros((len(free), k))
    for t, j in enumerate(free):
        select[t, j] = F(1)
    reps = F.zeros((C.dim, S.shape[1]))
    reps[idx] = F.matmul(Z, S)
    return Cohomology(C, n, reps, F.matmul(P, select))


# --------------------------------------------------------------------------
# tensor and hom


def tensor_complexes(X: Complex, Y: Complex) -> Complex:
    """Basis ``x_i (x) y_j`` at index ``i * dim Y + j``."""
    F = X.field
    _same_field(F, Y.field)
    degs = tuple(a + b for a in X.degrees for b in Y.degrees)
    d = F.kron(X.d, F.eye(Y.dim))
    d = F.reduce(d + F.kron(np.diag(signs(F, X.degrees)) if X.dim else F.zeros((0, 0)), Y.d))
    names = None
    if X.names and Y.names:
        names = tuple(f"{a}*{b}" for a in X.names for b in Y.names)
    return Complex(F, degs, d, names)


def hom_complex(X: Complex, Y: Complex) -> Complex:
    """Graded maps ``X -> Y``; elementary map ``x_j |-> y_i`` at ``i * dim X + j``."""
    F = X.field
    _same_field(F, Y.field)
    degs = tuple(b - a for b in Y.degrees for a in X.degrees)
    left = F.kron(Y.d, F.eye(X.dim))
    right = F.kron(F.eye(Y.dim), X.d.T)
    s = signs(F, degs)
    d = F.reduce(left - s[:, None] * right) if degs else F.zeros((0, 0))
    return Complex(F, degs, d)


@dataclass(frozen=True, eq=False)
class GradedMap:
    """A homogeneous linear map ``source -> target`` of the given degree."""

    source: Complex
    target: Complex
    degree: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError("matrix shape does not match source/target")

    @property
    def field(self) -> Field:
        return self.source.field

    def is_homogeneous(self) -> bool:
        s = np.asarray(self.source.degrees, dtype=np.int64)
        t = np.asarray(self.target.degrees, dtype=np.int64)
        mask = t[:, None] != s[None, :] + self.degree
        return not np.any((self.matrix != 0) & mask)

    def differential(self) -> "GradedMap":
        F = self.field
        sgn = 1 if self.degree % 2 == 0 else -1
        m = F.matmul(self.target.d, self.matrix) - sgn * F.matmul(self.matrix, self.source.d)
        return GradedMap(self.source, self.target, self.degree + 1, F.reduce(m))

    def is_chain_map(self) -> bool:
        return self.degree == 0 and self.is_homogeneous() and la.is_zero(self.differential().matrix)

    def compose(self, other: "GradedMap") -> "GradedMap":
        """``self o other``."""
        return GradedMap(
            other.source, self.target, self.degree + other.degree,
            self.field.matmul(self.matrix, other.matrix),
        )

    def component(self, n: int) -> np.ndarray:
        return self.matrix[np.ix_(self.target.indices(n + self.degree), self.source.indices(n))]

    def __eq__(self, other):
        return (
            isinstance(other, GradedMap)
            and self.degree == other.degree
            and self.source.same_as(other.source)
            and self.target.same_as(other.target)
            and np.array_equal(self.matrix, other.matrix)
        )

    __hash__ = None


def identity_map(X: Complex) -> GradedMap:
    return GradedMap(X, X, 0, X.field.eye(X.dim))


def zero_map(X: Complex, Y: Complex, degree: int = 0) -> GradedMap:
    return GradedMap(X, Y, degree, X.field.zeros((Y.dim, X.dim)))


def cone(f: GradedMap) -> Complex:
    """``X[1] (+) Y`` with ``d(x, y) = (-dx, f x + dy)``."""
    X, Y, F = f.source, f.target, f.field
    n = X.dim + Y.dim
    d = F.zeros((n, n))
    d[: X.dim, : X.dim] = F.reduce(-X.d)
    d[X.dim :, : X.dim] = f.matrix
    d[X.dim :, X.dim :] = Y.d
    return Complex(F, tuple(k - 1 for k in X.degrees) + Y.degrees, d)


def is_quasi_iso(f: GradedMap) -> bool:
    return is_acyclic(cone(f))


@dataclass
class HomotopyInverse:
    inverse: GradedMap
    source_homotopy: GradedMap  # g f - 1 = d h + h d on the source
    target_homotopy: GradedMap  # f g - 1 = d k + k d on the target


def _allowed(src: Complex, tgt: Complex, degree: int) -> list[int]:
    """Row-major positions of a tgt x src matrix allowed for a given degree."""
    s = np.asarray(src.degrees, dtype=np.int64)
    t = np.asarray(tgt.degrees, dtype=np.int64)
    return np.flatnonzero((t[:, None] == s[None, :] + degree).reshape(-1)).tolist()


def find_homotopy_inverse(f: GradedMap) -> Optional[HomotopyInverse]:
    """Solve for ``g, h, k`` in one linear system; None iff ``f`` is no quasi-iso."""
    X, Y, F = f.source, f.target, f.field
    nx, ny = X.dim, Y.dim
    pg = _allowed(Y, X, 0)
    ph = _allowed(X, X, -1)
    pk = _allowed(Y, Y, -1)
    I_x, I_y = F.eye(nx), F.eye(ny)

    def vec_op(A, B):
        # vec(A G B) = kron(A, B^T) vec(G), row-major vec
        return F.kron(A, B.T)

    ng, nh, nk = len(pg), len(ph), len(pk)
    blocks = []
    rhs = []
    # d_X g - g d_Y = 0
    row = vec_op(X.d, I_y) - vec_op(I_x, Y.d)
    blocks.append([row[:, pg], F.zeros((nx * ny, nh)), F.zeros((nx * ny, nk))])
    rhs.append(F.zeros(nx * ny))
    # g f - d h - h d = 1_X
    row_g = vec_op(I_x, f.matrix)
    row_h = vec_op(X.d, I_x) + vec_op(I_x, X.d)
    blocks.append([row_g[:, pg], F.reduce(-row_h[:, ph]), F.zeros((nx * nx, nk))])
    rhs.append(I_x.reshape(-1))
    # f g - d k - k d = 1_Y
    row_g = vec_op(f.matrix, I_y)
    row_k = vec_op(Y.d, I_y) + vec_op(I_y, Y.d)
    blocks.append([row_g[:, pg], F.zeros((ny * ny, nh)), F.reduce(-row_k[:, pk])])
    rhs.append(I_y.reshape(-1))
    A = np.concatenate([np.concatenate(b, axis=1) for b in blocks], axis=0)
    b = np.concatenate(rhs)
    x = la.solve(F, F.reduce(A), b) if A.shape[1] else (None if not la.is_zero(b) else F.zeros(0))
    if x is None:
        return None

    def unpack(vals, pos, rows, cols):
        m = F.zeros(rows * cols)
        m[pos] = vals
        return m.reshape(rows, cols)

    g = unpack(x[:ng], pg, nx, ny)
    h = unpack(x[ng : ng + nh], ph, nx, nx)
    k = unpack(x[ng + nh :], pk, ny, ny)
    return HomotopyInverse(GradedMap(Y, X, 0, g), GradedMap(X, X, -1, h), GradedMap(Y, Y, -1, k))


def check_homotopy_inverse(f: GradedMap, hi: HomotopyInverse) -> bool:
    F = f.field
    g, h, k = hi.inverse, hi.source_homotopy, hi.target_homotopy
    X, Y = f.source, f.target
    lhs1 = F.reduce(F.matmul(g.matrix, f.matrix) - F.eye(X.dim))
    rhs1 = F.reduce(F.matmul(X.d, h.matrix) + F.matmul(h.matrix, X.d))
    lhs2 = F.reduce(F.matmul(f.matrix, g.matrix) - F.eye(Y.dim))
    rhs2 = F.reduce(F.matmul(Y.d, k.matrix) + F.matmul(k.matrix, Y.d))
    return (
        g.is_chain_map()
        and h.is_homogeneous()
        and k.is_homogeneous()
        and np.array_equal(lhs1, rhs1)
        and np.array_equal(lhs2, rhs2)
    )
