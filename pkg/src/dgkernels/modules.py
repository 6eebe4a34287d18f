"""Dg modules (dg functors A^op -> C_dg) in basis form.

A module stores a complex ``M(X)`` per object and an action tensor per
ordered pair::

    act[(X, Y)][i, j, k] = coefficient of e_i in M(f_j)(e_k),
                           f_j in A(X, Y),  e_k in M(Y),  e_i in M(X)

Laws (checked by :func:`validate_module`)::

    M(1_X) = id
    M(g o f) = (-1)^{|f||g|} M(f) M(g)
    d M(f) - (-1)^{|f|} M(f) d = M(df)

A degree-n transformation ``t: M -> N`` satisfies
``t(X) M(f) = (-1)^{n|f|} N(f) t(Y)`` and ``(dt)(X) = d t(X) - (-1)^n t(X) d``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .categories import DgCategory, DgFunctor, tensor_categories, field_category
from .complexes import (
    Complex,
    GradedMap,
    cohomology_dims,
    cone as complex_cone,
    direct_sum as complex_sum,
    shift as complex_shift,
    tensor_complexes,
    zero_complex,
)
from .linalg import Field
from .report import Report


def _par(degs) -> np.ndarray:
    return np.asarray(degs, dtype=np.int64) % 2


def _sgn(F: Field, par) -> np.ndarray:
    return F.array(np.where(np.asarray(par) % 2 == 1, -1, 1))


@dataclass(frozen=True, eq=False)
class DgModule:
    base: DgCategory
    values: dict
    action: dict
    name: str = ""

    @property
    def field(self) -> Field:
        return self.base.field

    def value(self, X) -> Complex:
        return self.values[X]

    def dim(self, X) -> int:
        return self.values[X].dim

    def act(self, X, Y) -> np.ndarray:
        t = self.action.get((X, Y))
        if t is None:
            return self.field.zeros((self.dim(X), self.base.dim(X, Y), self.dim(Y)))
        return t

    def on(self, X, Y, f) -> np.ndarray:
        """Matrix of ``M(f)``: M(Y) -> M(X) for a coordinate vector ``f``."""
        t = self.act(X, Y)
        F = self.field
        if t.size == 0:
            return F.zeros((self.dim(X), self.dim(Y)))
        f = np.asarray(f)
        nz = np.flatnonzero(f != 0)
        out = F.zeros((self.dim(X), self.dim(Y)))
        for j in nz:
            out = out + f[j] * t[:, j, :]
        return F.reduce(out)

    def basis_map(self, X, Y, j: int) -> np.ndarray:
        return self.act(X, Y)[:, j, :]

    def total_dim(self) -> int:
        return sum(C.dim for C in self.values.values())

    def same_as(self, other: "DgModule") -> bool:
        if not self.base.same_as(other.base):
            return False
        for X in self.base.objects:
            if not self.values[X].same_as(other.values[X]):
                return False
        return all(np.array_equal(self.act(X, Y), other.act(X, Y))
                   for X in self.base.objects for Y in self.base.objects)

    def __eq__(self, other):
        if not isinstance(other, DgModule):
            return NotImplemented
        return self.same_as(other) and all(
            self.values[X].names == other.values[X].names for X in self.base.objects)

    __hash__ = object.__hash__

    def __repr__(self):
        dims = {X: C.dim for X, C in self.values.items()}
        return f"DgModule({self.name or '?'} over {self.base.name or '?'}, dims={dims})"


def make_module(A: DgCategory, values: dict, action: dict, name: str = "") -> DgModule:
    """Normalize entries and drop all-zero action tensors."""
    F = A.field
    clean = {}
    for key, t in action.items():
        t = np.asarray(t)
        if t.size and not la.is_zero(t):
            clean[key] = F.reduce(t)
    return DgModule(A, dict(values), clean, name)


def zero_module(A: DgCategory) -> DgModule:
    return DgModule(A, {X: zero_complex(A.field) for X in A.objects}, {}, "0")


# --------------------------------------------------------------------------
# validation


def validate_module(M: DgModule) -> Report:
    A, F = M.base, M.field
    rep = Report(f"module {M.name}".strip())
    missing = [X for X in A.objects if X not in M.values]
    rep.add("value at every object", not missing, objects=missing)
    if missing:
        return rep
    from .complexes import validate_complex

    bad_val = [X for X in A.objects if not validate_complex(M.value(X)).ok]
    rep.add("values are complexes", not bad_val, objects=bad_val[:5])
    bad_shape, bad_deg, bad_unit, bad_comp, bad_diff = [], [], [], [], []
    for X, Y in itertools.product(A.objects, repeat=2):
        t = M.act(X, Y)
        if t.shape != (M.dim(X), A.dim(X, Y), M.dim(Y)):
            bad_shape.append([X, Y])
    rep.add("action shapes", not bad_shape, pairs=bad_shape)
    if bad_shape:
        return rep
    for X, Y in itertools.product(A.objects, repeat=2):
        t = M.act(X, Y)
        if t.size == 0:
            continue
        dx, dh, dy = np.asarray(M.value(X).degrees), np.asarray(A.hom(X, Y).degrees), np.asarray(M.value(Y).degrees)
        mask = dx[:, None, None] != dh[None, :, None] + dy[None, None, :]
        if np.any((t != 0) & mask):
            bad_deg.append([X, Y])
    for X in A.objects:
        if not np.array_equal(M.on(X, X, A.unit(X)), F.eye(M.dim(X))):
            bad_unit.append(X)
    for X, Y, Z in itertools.product(A.objects, repeat=3):
        if not (A.dim(X, Y) and A.dim(Y, Z)) or not (M.dim(X) and M.dim(Z)):
            continue
        c = A.comp_tensor(X, Y, Z)
        txz, txy, tyz = M.act(X, Z), M.act(X, Y), M.act(Y, Z)
        mx, mz = M.dim(X), M.dim(Z)
        ng, nf, my = A.dim(Y, Z), A.dim(X, Y), M.dim(Y)
        # lhs[i, g, f, k] = sum_l txz[i, l, k] c[l, g, f]
        lhs = F.matmul(txz.transpose(0, 2, 1).reshape(mx * mz, c.shape[0]), c.reshape(c.shape[0], ng * nf))
        lhs = lhs.reshape(mx, mz, ng, nf).transpose(0, 2, 3, 1)
        # rhs[i, g, f, k] = (-1)^{|f||g|} sum_m txy[i, f, m] tyz[m, g, k]
        rhs = F.matmul(txy.reshape(mx * nf, my), tyz.reshape(my, ng * mz)).reshape(mx, nf, ng, mz)
        rhs = rhs.transpose(0, 2, 1, 3)
        par = np.outer(_par(A.hom(Y, Z).degrees), _par(A.hom(X, Y).degrees))
        rhs = F.reduce(rhs * _sgn(F, par)[None, :, :, None])
        diff = F.reduce(lhs - rhs)
        if not la.is_zero(diff):
            w = np.argwhere(diff != 0)[0].tolist()
            bad_comp.append({"objects": [X, Y, Z], "g": w[1], "f": w[2]})
    for X, Y in itertools.product(A.objects, repeat=2):
        t = M.act(X, Y)
        if t.size == 0:
            continue
        H = A.hom(X, Y)
        dX, dY = M.value(X).d, M.value(Y).d
        sg = _sgn(F, _par(H.degrees))
        # d M(f_j) - (-1)^{|f_j|} M(f_j) d  vs  sum_l dH[l, j] M(f_l)
        mx, nh, my = t.shape
        left = F.matmul(dX, t.reshape(mx, nh * my)).reshape(mx, nh, my)
        right = F.matmul(t.reshape(mx * nh, my), dY).reshape(mx, nh, my)
        lhs = F.reduce(left - right * sg[None, :, None])
        rhs = F.matmul(t.transpose(0, 2, 1).reshape(mx * my, nh), H.d).reshape(mx, my, nh).transpose(0, 2, 1)
        if not np.array_equal(lhs, rhs):
            j = int(np.argwhere(F.reduce(lhs - rhs) != 0)[0][1])
            bad_diff.append({"pair": [X, Y], "f": j})
    rep.add("action has the degree of the morphism", not bad_deg, pairs=bad_deg[:5])
    rep.add("unit acts as identity", not bad_unit, objects=bad_unit[:5])
    rep.add("composition with Koszul sign", not bad_comp, witnesses=bad_comp[:5])
    rep.add("compatible with differentials", not bad_diff, witnesses=bad_diff[:5])
    return rep


# --------------------------------------------------------------------------
# basic modules


def yoneda(A: DgCategory, X) -> DgModule:
    """``h^X = A(-, X)`` with ``h^X(f)(u) = (-1)^{|f||u|} u o f``."""
    if X not in A.objects:
        raise KeyError(f"unknown object {X!r}")
    F = A.field
    values = {W: A.hom(W, X) for W in A.objects}
    action = {}
    for W, V in itertools.product(A.objects, repeat=2):
        c = A.comp_tensor(W, V, X)  # [i, k (u in A(V,X)), j (f in A(W,V))]
        if c.size == 0:
            continue
        t = np.transpose(c, (0, 2, 1))
        par = np.outer(_par(A.hom(W, V).degrees), _par(A.hom(V, X).degrees))
        action[(W, V)] = F.reduce(t * _sgn(F, par)[None, :, :])
    return make_module(A, values, action, f"h^{X}")


def yoneda_all(A: DgCategory) -> dict:
    return {X: yoneda(A, X) for X in A.objects}


def simple_module(A: DgCategory, Y, degree: int = 0) -> DgModule:
    """``S_Y``: K at Y, zero elsewhere; only the unit acts nontrivially.

    Valid when the non-unit part of A(Y, Y) is closed under d and products
    (for example in a directed category).
    """
    F = A.field
    values = {X: (Complex(F, (degree,), F.zeros((1, 1))) if X == Y else zero_complex(F)) for X in A.objects}
    u = A.unit(Y)
    t = F.zeros((1, A.dim(Y, Y), 1))
    j = int(np.flatnonzero(u != 0)[0])
    if np.count_nonzero(u) != 1 or u[j] != 1:
        raise ValueError("unit of Y is not a basis vector")
    t[0, j, 0] = F(1)
    return make_module(A, values, {(Y, Y): t}, f"S_{Y}")


def restrict(G: DgFunctor, M: DgModule) -> DgModule:
    """``Res_G(M) = M(G(-))``."""
    A = G.source
    F = A.field
    values = {X: M.value(G(X)) for X in A.objects}
    action = {}
    for X, Y in itertools.product(A.objects, repeat=2):
        t = M.act(G(X), G(Y))
        if t.size == 0 or A.dim(X, Y) == 0:
            continue
        action[(X, Y)] = F.reduce(np.einsum("ajb,ji->aib", t, G.on(X, Y)))
    return make_module(A, values, action, f"Res({M.name})")


def direct_sum_modules(*Ms: DgModule) -> DgModule:
    A = Ms[0].base
    F = A.field
    values = {X: complex_sum(*[M.value(X) for M in Ms]) if Ms else zero_complex(F) for X in A.objects}
    action = {}
    for X, Y in itertools.product(A.objects, repeat=2):
        t = F.zeros((values[X].dim, A.dim(X, Y), values[Y].dim))
        ox = oy = 0
        for M in Ms:
            a = M.act(X, Y)
            t[ox : ox + M.dim(X), :, oy : oy + M.dim(Y)] = a
            ox += M.dim(X)
            oy += M.dim(Y)
        action[(X, Y)] = t
    return make_module(A, values, action, "+".join(M.name for M in Ms))


def shift_module(M: DgModule, k: int) -> DgModule:
    """``M[k]``: values shifted, ``M[k](f) = (-1)^{k|f|} M(f)``."""
    A, F = M.base, M.field
    values = {X: complex_shift(M.value(X), k) for X in A.objects}
    action = {}
    for key, t in M.action.items():
        s = _sgn(F, _par(A.hom(*key).degrees) * k)
        action[key] = F.reduce(t * s[None, :, None])
    return make_module(A, values, action, f"{M.name}[{k}]")


def external_tensor(M: DgModule, N: DgModule) -> DgModule:
    """``(M (x) N)((X, Y)) = M(X) (x) N(Y)`` over ``A (x) B``.

    ``(a (x) b)(v (x) w) = (-1)^{|v||b|} M(a)v (x) N(b)w``.
    """
    A, B = M.base, N.base
    F = A.field
    if F != B.field:
        raise la.FieldMismatch(f"{F} vs {B.field}")
    T = tensor_categories(A, B)
    values = {(X, Y): tensor_complexes(M.value(X), N.value(Y)) for X, Y in T.objects}
    action = {}
    for (X1, Y1), (X2, Y2) in itertools.product(T.objects, repeat=2):
        ta, tb = M.act(X1, X2), N.act(Y1, Y2)
        if ta.size == 0 or tb.size == 0:
            continue
        # v in M(X2) index k, b index jb
        par = np.outer(_par(M.value(X2).degrees), _par(B.hom(Y1, Y2).degrees))  # [k, jb]
        t = np.einsum("ajk,bml,km->abjmkl", ta, tb, _sgn(F, par))
        a, b, j, m, k, l = t.shape
        action[((X1, Y1), (X2, Y2))] = F.reduce(t.reshape(a * b, j * m, k * l))
    return make_module(T, values, action, f"{M.name}#{N.name}")


def lift_left(M: DgModule, obj="*") -> DgModule:
    """View a module over A as a module over ``K (x) A`` (relabel objects)."""
    A, F = M.base, M.field
    T = tensor_categories(field_category(F, obj), A)
    values = {(obj, X): M.value(X) for X in A.objects}
    action = {((obj, X), (obj, Y)): t for (X, Y), t in M.action.items()}
    return make_module(T, values, action, M.name)


def lift_right(N: DgModule, obj="*") -> DgModule:
    """View a module over B as a module over ``B (x) K``."""
    B, F = N.base, N.field
    T = tensor_categories(B, field_category(F, obj))
    values = {(X, obj): N.value(X) for X in B.objects}
    action = {((X, obj), (Y, obj)): t for (X, Y), t in N.action.items()}
    return make_module(T, values, action, N.name)


def drop_unit_factor(M: DgModule, side: int, base: DgCategory) -> DgModule:
    """Inverse of :func:`lift_left` (side 0) / :func:`lift_right` (side 1)."""
    values = {X: M.value(k) for k in M.base.objects for X in [k[1 - side]]}
    action = {(k1[1 - side], k2[1 - side]): t for (k1, k2), t in M.action.items()}
    return make_module(base, values, action, M.name)


# --------------------------------------------------------------------------
# natural transformations and hom complexes


@dataclass(frozen=True, eq=False)
class NatTransform:
    source: DgModule
    target: DgModule
    degree: int
    components: dict  # X -> matrix N(X) x M(X)

    @property
    def field(self) -> Field:
        return self.source.field

    def __getitem__(self, X) -> np.ndarray:
        return self.components[X]

    def component_map(self, X) -> GradedMap:
        return GradedMap(self.source.value(X), self.target.value(X), self.degree, self.components[X])

    def differential(self) -> "NatTransform":
        F = self.field
        s = 1 if self.degree % 2 == 0 else -1
        comps = {}
        for X, m in self.components.items():
            comps[X] = F.reduce(F.matmul(self.target.value(X).d, m) - s * F.matmul(m, self.source.value(X).d))
        return NatTransform(self.source, self.target, self.degree + 1, comps)

    def compose(self, other: "NatTransform") -> "NatTransform":
        """``self o other``."""
        F = self.field
        comps = {X: F.matmul(self.components[X], other.components[X]) for X in self.components}
        return NatTransform(other.source, self.target, self.degree + other.degree, comps)

    def is_closed(self) -> bool:
        return all(la.is_zero(m) for m in self.differential().components.values())

    def is_zero(self) -> bool:
        return all(la.is_zero(m) for m in self.components.values())

    def __eq__(self, other):
        return (
            isinstance(other, NatTransform)
            and self.degree == other.degree
            and all(np.array_equal(self.components[X], other.components[X]) for X in self.components)
        )

    __hash__ = None


def identity_transform(M: DgModule) -> NatTransform:
    return NatTransform(M, M, 0, {X: M.field.eye(M.dim(X)) for X in M.base.objects})


def zero_transform(M: DgModule, N: DgModule, degree: int = 0) -> NatTransform:
    F = M.field
    return NatTransform(M, N, degree, {X: F.zeros((N.dim(X), M.dim(X))) for X in M.base.objects})


def validate_transform(t: NatTransform) -> Report:
    M, N, n = t.source, t.target, t.degree
    A, F = M.base, M.field
    rep = Report("transformation")
    bad_deg, bad_nat = [], []
    for X in A.objects:
        if not t.component_map(X).is_homogeneous():
            bad_deg.append(X)
    for X, Y in itertools.product(A.objects, repeat=2):
        for j in range(A.dim(X, Y)):
            s = -1 if (n * A.hom(X, Y).degrees[j]) % 2 else 1
            lhs = F.matmul(t[X], M.basis_map(X, Y, j))
            rhs = F.matmul(N.basis_map(X, Y, j), t[Y])
            if not np.array_equal(lhs, F.reduce(s * rhs)):
                bad_nat.append({"pair": [X, Y], "f": j})
    rep.add("components have the stated degree", not bad_deg, objects=bad_deg)
    rep.add("graded naturality", not bad_nat, witnesses=bad_nat[:5])
    return rep


def _allowed_positions(src: Complex, tgt: Complex, n: int) -> np.ndarray:
    s = np.asarray(src.degrees, dtype=np.int64)
    t = np.asarray(tgt.degrees, dtype=np.int64)
    return np.flatnonzero((t[:, None] == s[None, :] + n).reshape(-1))


@dataclass
class HomComplex:
    """``Hom(M, N)`` with its basis of transformations."""

    source: DgModule
    target: DgModule
    complex: Complex
    basis: list  # NatTransform per basis index
    _layout: dict = field(repr=False, default_factory=dict)

    def transform(self, v: np.ndarray) -> NatTransform:
        """The transformation with coordinates ``v`` (homogeneous of one degree)."""
        F = self.source.field
        v = np.asarray(v)
        nz = np.flatnonzero(v != 0)
        degs = {self.complex.degrees[i] for i in nz}
        if len(degs) > 1:
            raise ValueError("coordinate vector is not homogeneous")
        n = degs.pop() if degs else 0
        comps = {X: F.zeros((self.target.dim(X), self.source.dim(X))) for X in self.source.base.objects}
        for i in nz:
            for X, m in self.basis[i].components.items():
                comps[X] = comps[X] + v[i] * m
        return NatTransform(self.source, self.target, n, {X: F.reduce(m) for X, m in comps.items()})

    def coords(self, t: NatTransform, check: bool = True) -> np.ndarray:
        """Coordinates of a natural transformation in the chosen basis."""
        F = self.source.field
        out = F.zeros(self.complex.dim)
        lay = self._layout.get(t.degree)
        if lay is None:
            if not t.is_zero():
                raise ValueError("transformation outside the hom complex")
            return out
        flat = _flatten(t, lay["offsets"], lay["positions"])
        out[self.complex.indices(t.degree)] = flat[lay["free"]]
        if check:
            back = self.transform(out)
            if not all(np.array_equal(back[X], t[X]) for X in t.components):
                raise ValueError("transformation outside the hom complex")
        return out


def _flatten(t: NatTransform, offsets: dict, positions: dict) -> np.ndarray:
    F = t.field
    size = sum(len(p) for p in positions.values())
    v = F.zeros(size)
    for X, pos in positions.items():
        if len(pos):
            v[offsets[X] : offsets[X] + len(pos)] = t.components[X].reshape(-1)[pos]
    return v


def _naturality_system(M: DgModule, N: DgModule, n: int, positions: dict, offsets: dict, size: int) -> np.ndarray:
    A, F = M.base, M.field
    rows = []
    for X, Y in itertools.product(A.objects, repeat=2):
        H = A.hom(X, Y)
        if H.dim == 0:
            continue
        tm, tn = M.act(X, Y), N.act(X, Y)
        nx, ny = N.dim(X), M.dim(Y)
        if nx * ny == 0:
            continue
        px, py = positions[X], positions[Y]
        if len(px) == 0 and len(py) == 0:
            continue
        for j in range(H.dim):
            s = -1 if (n * H.degrees[j]) % 2 else 1
            blk = F.zeros((nx * ny, size))
            # vec(t(X) M(f)) = kron(I, M(f)^T) vec t(X)
            if len(px) and M.dim(X):
                k1 = F.kron(F.eye(nx), tm[:, j, :].T)
                blk[:, offsets[X] : offsets[X] + len(px)] += k1[:, px]
            if len(py) and N.dim(Y):
                k2 = F.kron(tn[:, j, :], F.eye(ny))
                blk[:, offsets[Y] : offsets[Y] + len(py)] -= s * k2[:, py]
            blk = F.reduce(blk)
            keep = np.any(blk != 0, axis=1)
            if np.any(keep):
                rows.append(blk[keep])
    if not rows:
        return F.zeros((0, size))
    return np.concatenate(rows, axis=0)


def module_hom_complex(M: DgModule, N: DgModule) -> HomComplex:
    A, F = M.base, M.field
    if not A.same_as(N.base):
        raise ValueError("modules live over different categories")
    cand = set()
    for X in A.objects:
        for a in set(M.value(X).degrees):
            for b in set(N.value(X).degrees):
                cand.add(b - a)
    layout, basis, degs = {}, [], []
    for n in sorted(cand):
        positions = {X: _allowed_positions(M.value(X), N.value(X), n) for X in A.objects}
        offsets, o = {}, 0
        for X in A.objects:
            offsets[X] = o
            o += len(positions[X])
        S = _naturality_system(M, N, n, positions, offsets, o)
        Nsp, free = la.nullspace(F, S, o)
        if Nsp.shape[1] == 0:
            continue
        layout[n] = {"positions": positions, "offsets": offsets, "free": free}
        for c in range(Nsp.shape[1]):
            comps = {}
            for X in A.objects:
                m = F.zeros(N.dim(X) * M.dim(X))
                pos = positions[X]
                m[pos] = Nsp[offsets[X] : offsets[X] + len(pos), c]
                comps[X] = m.reshape(N.dim(X), M.dim(X))
            basis.append(NatTransform(M, N, n, comps))
            degs.append(n)
    hc = HomComplex(M, N, Complex(F, tuple(degs), F.zeros((len(degs), len(degs)))), basis, layout)
    d = F.zeros((len(degs), len(degs)))
    for j, t in enumerate(basis):
        dt = t.differential()
        if dt.is_zero():
            continue
        d[:, j] = hc.coords(dt, check=False)
    hc.complex = Complex(F, tuple(degs), d)
    return hc


def yoneda_evaluation(hc: HomComplex, X) -> GradedMap:
    """``Hom(h^X, M) -> M(X)``, ``t |-> t(X)(1_X)``."""
    A, F = hc.source.base, hc.source.field
    M = hc.target
    u = A.unit(X)
    cols = [F.matmul(t[X], u) for t in hc.basis]
    m = np.stack(cols, axis=1) if cols else F.zeros((M.dim(X), 0))
    return GradedMap(hc.complex, M.value(X), 0, m)


def yoneda_transform(M: DgModule, X, v: np.ndarray, degree: int) -> NatTransform:
    """Inverse of evaluation: ``t_v(W)(u) = (-1)^{|v||u|} M(u)(v)``."""
    A, F = M.base, M.field
    h = yoneda(A, X)
    comps = {}
    for W in A.objects:
        H = A.hom(W, X)
        cols = []
        for i in range(H.dim):
            s = -1 if (degree * H.degrees[i]) % 2 else 1
            cols.append(F.reduce(s * F.matmul(M.basis_map(W, X, i), v)))
        comps[W] = np.stack(cols, axis=1) if cols else F.zeros((M.dim(W), 0))
    return NatTransform(h, M, degree, comps)


def is_graded_iso(f: GradedMap) -> bool:
    """Chain map that is bijective in every degree."""
    F = f.field
    if f.source.dims() != f.target.dims() or not f.is_chain_map():
        return False
    return la.rank(F, f.matrix) == f.source.dim


def check_yoneda(A: DgCategory, X, M: DgModule) -> Report:
    rep = Report(f"dg Yoneda at {X}")
    hc = module_hom_complex(yoneda(A, X), M)
    ev = yoneda_evaluation(hc, X)
    rep.add("evaluation is a chain map", ev.is_chain_map())
    rep.add("evaluation is bijective in every degree", is_graded_iso(ev),
            hom_dims=hc.complex.dims(), value_dims=M.value(X).dims())
    bad = []
    F = A.field
    for n in M.value(X).dims():
        for i in M.value(X).indices(n):
            v = F.zeros(M.dim(X))
            v[i] = F(1)
            t = yoneda_transform(M, X, v, n)
            if not validate_transform(t).ok or not np.array_equal(F.matmul(ev.matrix, hc.coords(t)), v):
                bad.append(i)
    rep.add("inverse v |-> M(-)(v) is natural and inverts evaluation", not bad, basis=bad[:5])
    return rep


# --------------------------------------------------------------------------
# cones, acyclicity


def cone_transform(t: NatTransform) -> DgModule:
    """Cone of a closed degree-0 transformation: ``M[1] (+) N``."""
    if t.degree != 0:
        raise ValueError("cone needs a degree-0 transformation")
    M, N = t.source, t.target
    A, F = M.base, M.field
    values = {X: complex_cone(t.component_map(X)) for X in A.objects}
    action = {}
    for X, Y in itertools.product(A.objects, repeat=2):
        ta, tb = M.act(X, Y), N.act(X, Y)
        out = F.zeros((values[X].dim, A.dim(X, Y), values[Y].dim))
        s = _sgn(F, _par(A.hom(X, Y).degrees))
        out[: M.dim(X), :, : M.dim(Y)] = F.reduce(ta * s[None, :, None])
        out[M.dim(X) :, :, M.dim(Y) :] = tb
        action[(X, Y)] = out
    return make_module(A, values, action, f"cone({M.name}->{N.name})")


@dataclass
class AcyclicityTag:
    module: DgModule
    acyclic: bool
    cohomology: dict  # X -> {degree: dim}


def is_acyclic(M: DgModule) -> AcyclicityTag:
    table = {X: cohomology_dims(M.value(X)) for X in M.base.objects}
    return AcyclicityTag(M, all(not v for v in table.values()), table)


def acyclic_battery(A: DgCategory) -> list[DgModule]:
    """Cones of identities on Yoneda modules and on their shifts."""
    out = []
    for X in A.objects:
        h = yoneda(A, X)
        out.append(cone_transform(identity_transform(h)))
        hs = shift_module(h, 1)
        out.append(cone_transform(identity_transform(hs)))
    return out


def is_natural_iso(t: NatTransform) -> bool:
    return t.degree == 0 and validate_transform(t).ok and all(
        is_graded_iso(t.component_map(X)) for X in t.source.base.objects)


def is_quasi_iso_transform(t: NatTransform) -> bool:
    from .complexes import is_quasi_iso

    return t.degree == 0 and t.is_closed() and all(
        is_quasi_iso(t.component_map(X)) for X in t.source.base.objects)


__all__ = [
    "DgModule", "make_module", "zero_module", "validate_module", "yoneda", "yoneda_all",
    "simple_module", "restrict", "direct_sum_modules", "shift_module", "external_tensor",
    "lift_left", "lift_right", "drop_unit_factor", "NatTransform", "identity_transform",
    "zero_transform", "validate_transform", "HomComplex", "module_hom_complex",
    "yoneda_evaluation", "yoneda_transform", "is_graded_iso", "check_yoneda", "cone_transform",
    "AcyclicityTag", "is_acyclic", "acyclic_battery", "is_natural_iso", "is_quasi_iso_transform",
]
