"""Finite dg categories and dg functors given by structure constants.

A :class:`DgCategory` stores one :class:`~dgkernels.complexes.Complex` per
ordered pair of objects and a composition tensor per composable triple::

    comp[X, Y, Z][l, i, j] = coefficient of basis l of hom(X, Z)
                             in  g_i o f_j,   g_i in hom(Y, Z), f_j in hom(X, Y)

Sign conventions (the only ones that pass the validator with odd morphisms)::

    opposite:  f o^op g = (-1)^{|f||g|} g o f
    tensor:    (f2 (x) g2) o (f1 (x) g1) = (-1)^{|g2||f1|} (f2 f1) (x) (g2 g1)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Optional

import numpy as np

from . import linalg as la
from .complexes import (
    Complex,
    GradedMap,
    cohomology,
    direct_sum,
    is_quasi_iso,
    signs,
    tensor_complexes,
    validate_complex,
)
from .linalg import Field
from .report import Report

Obj = Hashable


@dataclass(frozen=True, eq=False)
class DgCategory:
    field: Field
    objects: tuple
    homs: dict
    comp: dict
    units: dict
    name: str = ""
    factors: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        for X in self.objects:
            for Y in self.objects:
                if (X, Y) not in self.homs:
                    raise ValueError(f"missing hom({X!r}, {Y!r})")

    def hom(self, X, Y) -> Complex:
        return self.homs[(X, Y)]

    def dim(self, X, Y) -> int:
        return self.homs[(X, Y)].dim

    def comp_tensor(self, X, Y, Z) -> np.ndarray:
        t = self.comp.get((X, Y, Z))
        if t is None:
            return self.field.zeros((self.dim(X, Z), self.dim(Y, Z), self.dim(X, Y)))
        return t

    def compose(self, X, Y, Z, g: np.ndarray, f: np.ndarray) -> np.ndarray:
        """``g o f`` for coordinate vectors ``g`` in hom(Y,Z), ``f`` in hom(X,Y)."""
        F = self.field
        t = self.comp_tensor(X, Y, Z)
        if t.size == 0:
            return F.zeros(self.dim(X, Z))
        return F.reduce(np.einsum("lij,i,j->l", t, np.asarray(g), np.asarray(f)))

    def left_mult(self, X, Y, Z, g: np.ndarray) -> np.ndarray:
        """Matrix of ``f |-> g o f`` from hom(X,Y) to hom(X,Z)."""
        t = self.comp_tensor(X, Y, Z)
        if t.size == 0:
            return self.field.zeros((self.dim(X, Z), self.dim(X, Y)))
        return self.field.reduce(np.einsum("lij,i->lj", t, np.asarray(g)))

    def right_mult(self, X, Y, Z, f: np.ndarray) -> np.ndarray:
        """Matrix of ``g |-> g o f`` from hom(Y,Z) to hom(X,Z)."""
        t = self.comp_tensor(X, Y, Z)
        if t.size == 0:
            return self.field.zeros((self.dim(X, Z), self.dim(Y, Z)))
        return self.field.reduce(np.einsum("lij,j->li", t, np.asarray(f)))

    def unit(self, X) -> np.ndarray:
        return self.units[X]

    def basis_degree(self, X, Y, i: int) -> int:
        return self.homs[(X, Y)].degrees[i]

    def same_as(self, other: "DgCategory") -> bool:
        """Structural equality ignoring display and basis names."""
        if self.field != other.field or self.objects != other.objects:
            return False
        for key, C in self.homs.items():
            if not C.same_as(other.homs[key]):
                return False
        for X in self.objects:
            if not np.array_equal(self.units[X], other.units[X]):
                return False
        for X, Y, Z in itertools.product(self.objects, repeat=3):
            if not np.array_equal(self.comp_tensor(X, Y, Z), other.comp_tensor(X, Y, Z)):
                return False
        return True

    def __eq__(self, other):
        if not isinstance(other, DgCategory):
            return NotImplemented
        return self.same_as(other) and all(
            self.homs[k].names == other.homs[k].names for k in self.homs
        )

    __hash__ = object.__hash__

    def __repr__(self):
        return f"DgCategory({self.name or '?'}, {len(self.objects)} objects, {self.field})"


def make_category(F: Field, objects, homs: dict, comp: dict, units: dict, name: str = "",
                  factors=None) -> DgCategory:
    """Build a category, dropping composition tensors that are identically empty."""
    clean = {}
    for key, t in comp.items():
        t = np.asarray(t)
        if t.size and not la.is_zero(t):
            clean[key] = F.reduce(t)
    units = {X: F.reduce(np.asarray(u)) for X, u in units.items()}
    return DgCategory(F, tuple(objects), dict(homs), clean, units, name, factors)


# --------------------------------------------------------------------------
# validation


def _deg(C: Complex) -> np.ndarray:
    return np.asarray(C.degrees, dtype=np.int64)


def validate_dg_category(A: DgCategory) -> Report:
    """Check every dg category axiom exactly; failures carry witnesses."""
    rep = Report(f"category {A.name}".strip())
    F = A.field
    obs = A.objects
    bad_d, bad_deg, bad_leib, bad_assoc = [], [], [], []
    bad_lu, bad_ru, bad_uc = [], [], []
    for X, Y in itertools.product(obs, repeat=2):
        r = validate_complex(A.hom(X, Y))
        if not r.ok:
            bad_d.append({"pair": [X, Y], "failed": sorted(r.failed_checks())})
    for X, Y, Z in itertools.product(obs, repeat=3):
        t = A.comp_tensor(X, Y, Z)
        if t.size == 0:
            continue
        dl, di, dj = _deg(A.hom(X, Z)), _deg(A.hom(Y, Z)), _deg(A.hom(X, Y))
        mask = dl[:, None, None] != di[None, :, None] + dj[None, None, :]
        if np.any((t != 0) & mask):
            w = np.argwhere((t != 0) & mask)[0].tolist()
            bad_deg.append({"triple": [X, Y, Z], "index": w})
        # d(g f) = dg f + (-1)^|g| g df
        nl, ni, nj = t.shape
        lhs = F.matmul(A.hom(X, Z).d, t.reshape(nl, ni * nj)).reshape(nl, ni, nj)
        r1 = F.matmul(t.transpose(0, 2, 1).reshape(nl * nj, ni), A.hom(Y, Z).d)
        r1 = r1.reshape(nl, nj, ni).transpose(0, 2, 1)
        r2 = F.matmul(t.reshape(nl * ni, nj), A.hom(X, Y).d).reshape(nl, ni, nj)
        r2 = r2 * signs(F, A.hom(Y, Z).degrees)[None, :, None]
        diff = F.reduce(lhs - r1 - r2)
        if not la.is_zero(diff):
            w = np.argwhere(diff != 0)[0].tolist()
            bad_leib.append({"triple": [X, Y, Z], "g": w[1], "f": w[2]})
    for W, X, Y, Z in itertools.product(obs, repeat=4):
        if not (A.dim(W, X) and A.dim(X, Y) and A.dim(Y, Z) and A.dim(W, Z)):
            continue
        # (h g) f - h (g f), both contracted as matrix products
        a, b = A.comp_tensor(W, Y, Z), A.comp_tensor(W, X, Y)
        c, e = A.comp_tensor(W, X, Z), A.comp_tensor(X, Y, Z)
        nl, nh, ng, nf = a.shape[0], a.shape[1], b.shape[1], b.shape[2]
        t1 = F.matmul(a.reshape(nl * nh, a.shape[2]), b.reshape(b.shape[0], ng * nf)).reshape(nl, nh, ng, nf)
        t2 = F.matmul(c.transpose(0, 2, 1).reshape(nl * nf, c.shape[1]), e.reshape(e.shape[0], nh * ng))
        t2 = t2.reshape(nl, nf, nh, ng).transpose(0, 2, 3, 1)
        diff = F.reduce(t1 - t2)
        if not la.is_zero(diff):
            w = np.argwhere(diff != 0)[0].tolist()
            bad_assoc.append({"objects": [W, X, Y, Z], "h": w[1], "g": w[2], "f": w[3]})
    for X in obs:
        u = A.unit(X)
        C = A.hom(X, X)
        if u.shape != (C.dim,):
            bad_uc.append({"object": X, "reason": "shape"})
            continue
        if not la.is_zero(F.matmul(C.d, u)) or any(u[i] != 0 and C.degrees[i] != 0 for i in range(C.dim)):
            bad_uc.append({"object": X})
        for Y in obs:
            n = A.dim(X, Y)
            if n == 0:
                continue
            left = A.left_mult(X, Y, Y, A.unit(Y))  # 1_Y o f
            if not np.array_equal(left, F.eye(n)):
                bad_lu.append({"pair": [X, Y]})
            right = A.right_mult(X, X, Y, u)  # f o 1_X
            if not np.array_equal(right, F.eye(n)):
                bad_ru.append({"pair": [X, Y]})
    rep.add("hom complexes: d^2 = 0", not bad_d, witnesses=bad_d[:5])
    rep.add("composition has degree 0", not bad_deg, witnesses=bad_deg[:5])
    rep.add("Leibniz rule", not bad_leib, witnesses=bad_leib[:5])
    rep.add("associativity", not bad_assoc, witnesses=bad_assoc[:5])
    rep.add("unit closed of degree 0", not bad_uc, witnesses=bad_uc[:5])
    rep.add("left unit law", not bad_lu, witnesses=bad_lu[:5])
    rep.add("right unit law", not bad_ru, witnesses=bad_ru[:5])
    return rep


# --------------------------------------------------------------------------
# constructions


def opposite(A: DgCategory) -> DgCategory:
    F = A.field
    homs = {(X, Y): A.hom(Y, X) for X in A.objects for Y in A.objects}
    comp = {}
    for (Z, Y, X), t in A.comp.items():
        # g in op(Y, Z) = hom(Z, Y), f in op(X, Y) = hom(Y, X); g o^op f = +-(f o g)
        par = np.outer(_deg(A.hom(Z, Y)) % 2, _deg(A.hom(Y, X)) % 2)
        sgn = F.array(np.where(par == 1, -1, 1))
        comp[(X, Y, Z)] = F.reduce(np.transpose(t, (0, 2, 1)) * sgn[None, :, :])
    name = A.name[:-3] if A.name.endswith("^op") else (A.name + "^op" if A.name else "")
    # (A (x) B)^op and A^op (x) B^op agree on Kronecker bases, signs included
    factors = tuple(opposite(C) for C in A.factors) if A.factors else None
    return DgCategory(F, A.objects, homs, comp, dict(A.units), name, factors)


def tensor_categories(A: DgCategory, B: DgCategory) -> DgCategory:
    F = A.field
    if F != B.field:
        raise la.FieldMismatch(f"{A.field} vs {B.field}")
    objs = [(X, Y) for X in A.objects for Y in B.objects]
    homs = {}
    for (X1, Y1), (X2, Y2) in itertools.product(objs, repeat=2):
        homs[((X1, Y1), (X2, Y2))] = tensor_complexes(A.hom(X1, X2), B.hom(Y1, Y2))
    comp = {}
    for (X1, Y1), (X2, Y2), (X3, Y3) in itertools.product(objs, repeat=3):
        ta = A.comp.get((X1, X2, X3))
        tb = B.comp.get((Y1, Y2, Y3))
        if ta is None or tb is None:
            continue
        # g2 in B(Y2,Y3) index i2, f1 in A(X1,X2) index j1
        par = np.outer(_deg(B.hom(Y2, Y3)) % 2, _deg(A.hom(X1, X2)) % 2)
        sgn = np.where(par == 1, -1, 1)
        # t[l, m, i1, i2, j1, j2] = ta[l, i1, j1] tb[m, i2, j2] sgn[i2, j1]
        t = np.einsum("aik,bjl,jk->abijkl", ta, tb, F.array(sgn))
        la_, lb, i1, i2, j1, j2 = t.shape
        comp[((X1, Y1), (X2, Y2), (X3, Y3))] = F.reduce(t.reshape(la_ * lb, i1 * i2, j1 * j2))
    units = {(X, Y): F.reduce(np.kron(A.unit(X), B.unit(Y))) for X, Y in objs}
    name = f"({A.name}*{B.name})" if A.name or B.name else ""
    return make_category(F, objs, homs, comp, units, name, factors=(A, B))


def product_categories(A: DgCategory, B: DgCategory) -> DgCategory:
    """Cartesian product: homs and compositions componentwise."""
    F = A.field
    objs = [(X, Y) for X in A.objects for Y in B.objects]
    homs = {}
    for (X1, Y1), (X2, Y2) in itertools.product(objs, repeat=2):
        homs[((X1, Y1), (X2, Y2))] = direct_sum(A.hom(X1, X2), B.hom(Y1, Y2))
    comp = {}
    for (X1, Y1), (X2, Y2), (X3, Y3) in itertools.product(objs, repeat=3):
        ta, tb = A.comp_tensor(X1, X2, X3), B.comp_tensor(Y1, Y2, Y3)
        a, b = ta.shape, tb.shape
        t = F.zeros((a[0] + b[0], a[1] + b[1], a[2] + b[2]))
        t[: a[0], : a[1], : a[2]] = ta
        t[a[0] :, a[1] :, a[2] :] = tb
        comp[((X1, Y1), (X2, Y2), (X3, Y3))] = t
    units = {(X, Y): np.concatenate([A.unit(X), B.unit(Y)]) for X, Y in objs}
    name = f"({A.name}x{B.name})" if A.name or B.name else ""
    return make_category(F, objs, homs, comp, units, name)


def full_subcategory(A: DgCategory, objects: Iterable, name: str = "") -> DgCategory:
    objs = list(objects)
    s = set(objs)
    homs = {(X, Y): A.hom(X, Y) for X in objs for Y in objs}
    comp = {k: v for k, v in A.comp.items() if set(k) <= s}
    units = {X: A.unit(X) for X in objs}
    return DgCategory(A.field, tuple(objs), homs, comp, units, name or A.name)


def field_category(F: Field, obj="*") -> DgCategory:
    """The one-object category K."""
    C = Complex(F, (0,), F.zeros((1, 1)), ("1",))
    return make_category(F, [obj], {(obj, obj): C}, {(obj, obj, obj): F.array([[[1]]])},
                         {obj: F.array([1])}, "K")


def directed_order(A: DgCategory) -> Optional[list]:
    """An order with no backward morphisms and scalar endomorphisms, if any."""
    for X in A.objects:
        C = A.hom(X, X)
        if C.dim != 1 or C.degrees != (0,):
            return None
    import networkx as nx

    G = nx.DiGraph()
    G.add_nodes_from(range(len(A.objects)))
    for i, X in enumerate(A.objects):
        for j, Y in enumerate(A.objects):
            if i != j and A.dim(X, Y):
                G.add_edge(i, j)
    try:
        order = list(nx.lexicographical_topological_sort(G))
    except nx.NetworkXUnfeasible:
        return None
    return [A.objects[i] for i in order]


# --------------------------------------------------------------------------
# functors


@dataclass(frozen=True, eq=False)
class DgFunctor:
    source: DgCategory
    target: DgCategory
    obj: dict
    maps: dict  # (X, Y) -> matrix hom_B(FX, FY) x hom_A(X, Y)
    name: str = ""

    def __call__(self, X):
        return self.obj[X]

    def on(self, X, Y) -> np.ndarray:
        return self.maps[(X, Y)]

    def hom_map(self, X, Y) -> GradedMap:
        return GradedMap(self.source.hom(X, Y), self.target.hom(self.obj[X], self.obj[Y]), 0,
                         self.maps[(X, Y)])

    def __eq__(self, other):
        if not isinstance(other, DgFunctor):
            return NotImplemented
        return (
            self.source.same_as(other.source)
            and self.target.same_as(other.target)
            and self.obj == other.obj
            and all(np.array_equal(self.maps[k], other.maps[k]) for k in self.maps)
        )

    __hash__ = object.__hash__


def identity_functor(A: DgCategory) -> DgFunctor:
    F = A.field
    return DgFunctor(A, A, {X: X for X in A.objects},
                     {(X, Y): F.eye(A.dim(X, Y)) for X in A.objects for Y in A.objects}, "id")


def compose_functors(G: DgFunctor, Fn: DgFunctor) -> DgFunctor:
    """``G o Fn``."""
    K = Fn.source.field
    obj = {X: G.obj[Fn.obj[X]] for X in Fn.source.objects}
    maps = {}
    for X in Fn.source.objects:
        for Y in Fn.source.objects:
            maps[(X, Y)] = K.matmul(G.maps[(Fn.obj[X], Fn.obj[Y])], Fn.maps[(X, Y)])
    return DgFunctor(Fn.source, G.target, obj, maps, f"{G.name}o{Fn.name}")


def validate_functor(Fn: DgFunctor) -> Report:
    A, B, K = Fn.source, Fn.target, Fn.source.field
    rep = Report(f"functor {Fn.name}".strip())
    missing = [X for X in A.objects if Fn.obj.get(X) not in B.objects]
    rep.add("object map lands in target", not missing, objects=missing)
    if missing:
        return rep
    bad_chain, bad_unit, bad_comp = [], [], []
    for X, Y in itertools.product(A.objects, repeat=2):
        m = Fn.hom_map(X, Y)
        if not m.is_chain_map():
            bad_chain.append([X, Y])
    for X in A.objects:
        if not np.array_equal(K.matmul(Fn.on(X, X), A.unit(X)), B.unit(Fn(X))):
            bad_unit.append(X)
    for X, Y, Z in itertools.product(A.objects, repeat=3):
        t = A.comp_tensor(X, Y, Z)
        if not (A.dim(X, Y) and A.dim(Y, Z)):
            continue
        # F(g f) vs F(g) F(f)
        lhs = np.einsum("pl,lij->pij", Fn.on(X, Z), t) if t.size else K.zeros(
            (B.dim(Fn(X), Fn(Z)), A.dim(Y, Z), A.dim(X, Y)))
        tb = B.comp_tensor(Fn(X), Fn(Y), Fn(Z))
        rhs = np.einsum("pab,ai,bj->pij", tb, Fn.on(Y, Z), Fn.on(X, Y)) if tb.size else K.zeros(lhs.shape)
        if not la.is_zero(K.reduce(lhs - rhs)):
            bad_comp.append([X, Y, Z])
    rep.add("hom components are chain maps", not bad_chain, pairs=bad_chain[:5])
    rep.add("preserves units", not bad_unit, objects=bad_unit[:5])
    rep.add("preserves composition", not bad_comp, triples=bad_comp[:5])
    return rep


def tensor_functors(Fn: DgFunctor, Gn: DgFunctor) -> DgFunctor:
    S = tensor_categories(Fn.source, Gn.source)
    T = tensor_categories(Fn.target, Gn.target)
    K = S.field
    obj = {(X, Y): (Fn(X), Gn(Y)) for X, Y in S.objects}
    maps = {}
    for (X1, Y1), (X2, Y2) in itertools.product(S.objects, repeat=2):
        maps[((X1, Y1), (X2, Y2))] = K.kron(Fn.on(X1, X2), Gn.on(Y1, Y2))
    return DgFunctor(S, T, obj, maps, f"({Fn.name}*{Gn.name})")


def swap_functor(A: DgCategory, B: DgCategory) -> DgFunctor:
    """``A (x) B -> B (x) A``, ``a (x) b |-> (-1)^{|a||b|} b (x) a``."""
    S, T = tensor_categories(A, B), tensor_categories(B, A)
    K = A.field
    maps = {}
    for (X1, Y1), (X2, Y2) in itertools.product(S.objects, repeat=2):
        da, db = A.hom(X1, X2), B.hom(Y1, Y2)
        m = K.zeros((db.dim * da.dim, da.dim * db.dim))
        for i in range(da.dim):
            for j in range(db.dim):
                s = -1 if (da.degrees[i] * db.degrees[j]) % 2 else 1
                m[j * da.dim + i, i * db.dim + j] = K(s)
        maps[((X1, Y1), (X2, Y2))] = m
    return DgFunctor(S, T, {(X, Y): (Y, X) for X, Y in S.objects}, maps, "swap")


def relabel_functor(A: DgCategory, B: DgCategory, obj: dict) -> DgFunctor:
    """Identity-on-bases functor between categories with matching hom bases.

    Used for associativity of tensors and ``(A (x) B)^op = A^op (x) B^op``,
    which are both sign-free on the Kronecker bases.
    """
    K = A.field
    maps = {(X, Y): K.eye(A.dim(X, Y)) for X in A.objects for Y in A.objects}
    return DgFunctor(A, B, dict(obj), maps, "relabel")


def diagonal_functor(A: DgCategory) -> DgFunctor:
    P = product_categories(A, A)
    K = A.field
    maps = {(X, Y): np.concatenate([K.eye(A.dim(X, Y)), K.eye(A.dim(X, Y))], axis=0)
            for X in A.objects for Y in A.objects}
    return DgFunctor(A, P, {X: (X, X) for X in A.objects}, maps, "diag")


def pair_functor(S: DgFunctor, T: DgFunctor) -> DgFunctor:
    """``(S, T): C -> A x B`` for functors out of a common source."""
    P = product_categories(S.target, T.target)
    C = S.source
    maps = {k: np.concatenate([S.maps[k], T.maps[k]], axis=0) for k in S.maps}
    return DgFunctor(C, P, {X: (S(X), T(X)) for X in C.objects}, maps, f"({S.name},{T.name})")


def inclusion_functor(A: DgCategory, objects: Iterable) -> DgFunctor:
    sub = full_subcategory(A, objects)
    K = A.field
    maps = {(X, Y): K.eye(A.dim(X, Y)) for X in sub.objects for Y in sub.objects}
    return DgFunctor(sub, A, {X: X for X in sub.objects}, maps, "incl")


# --------------------------------------------------------------------------
# Z^0 and H^0


@dataclass(frozen=True, eq=False)
class LinearCategory:
    """A K-linear category given by structure constants in degree 0."""

    field: Field
    objects: tuple
    dims: dict
    comp: dict  # (X, Y, Z) -> array (dXZ, dYZ, dXY)
    units: dict

    def compose(self, X, Y, Z, g, f) -> np.ndarray:
        t = self.comp[(X, Y, Z)]
        if t.size == 0:
            return self.field.zeros(self.dims[(X, Z)])
        return self.field.reduce(np.einsum("lij,i,j->l", t, np.asarray(g), np.asarray(f)))

    def inverse(self, X, Y, u) -> Optional[np.ndarray]:
        """Two-sided inverse of ``u: X -> Y`` or None."""
        K = self.field
        n = self.dims[(Y, X)]
        t1, t2 = self.comp[(X, Y, X)], self.comp[(Y, X, Y)]
        u = np.asarray(u)
        L = K.reduce(np.einsum("lij,j->li", t1, u)) if t1.size else K.zeros((self.dims[(X, X)], n))
        R = K.reduce(np.einsum("lij,i->lj", t2, u)) if t2.size else K.zeros((self.dims[(Y, Y)], n))
        A = np.concatenate([L, R], axis=0)
        b = np.concatenate([self.units[X], self.units[Y]])
        if A.shape[1] == 0:
            return K.zeros(0) if la.is_zero(b) else None
        return la.solve(K, A, b)

    def is_iso(self, X, Y, u) -> bool:
        return self.inverse(X, Y, u) is not None

    def elements(self, X, Y):
        K = self.field
        for coords in itertools.product(range(K.p), repeat=self.dims[(X, Y)]):
            yield K.array(list(coords)) if coords else K.zeros(0)

    def isomorphic(self, X, Y) -> Optional[np.ndarray]:
        """Exhaustive search for an iso (finite fields only)."""
        for u in self.elements(X, Y):
            if self.is_iso(X, Y, u):
                return u
        return None

    def iso_classes(self) -> list[list]:
        classes: list[list] = []
        for X in self.objects:
            for c in classes:
                if self.isomorphic(c[0], X) is not None:
                    c.append(X)
                    break
            else:
                classes.append([X])
        return classes

    def opposite(self) -> "LinearCategory":
        dims = {(X, Y): self.dims[(Y, X)] for X, Y in self.dims}
        comp = {(X, Y, Z): np.transpose(self.comp[(Z, Y, X)], (0, 2, 1)) for X, Y, Z in self.comp}
        return LinearCategory(self.field, self.objects, dims, comp, dict(self.units))

    def __eq__(self, other):
        return (
            isinstance(other, LinearCategory)
            and self.objects == other.objects
            and self.dims == other.dims
            and all(np.array_equal(self.comp[k], other.comp[k]) for k in self.comp)
            and all(np.array_equal(self.units[k], other.units[k]) for k in self.units)
        )

    __hash__ = object.__hash__


@dataclass
class _DegreeZero:
    reps: dict  # (X, Y) -> ambient x k representatives
    coords: dict  # (X, Y) -> callable ambient vector -> coordinates


def _z0_data(A: DgCategory) -> _DegreeZero:
    K = A.field
    reps, coords = {}, {}
    for X, Y in itertools.product(A.objects, repeat=2):
        C = A.hom(X, Y)
        idx = C.indices(0)
        N, free = la.nullspace(K, C.block(0), len(idx))
        R = K.zeros((C.dim, N.shape[1]))
        R[idx] = N
        reps[(X, Y)] = R
        coords[(X, Y)] = (lambda v, idx=idx, free=free: np.asarray(v)[idx][free])
    return _DegreeZero(reps, coords)


def _h0_data(A: DgCategory) -> _DegreeZero:
    reps, coords = {}, {}
    for X, Y in itertools.product(A.objects, repeat=2):
        H = cohomology(A.hom(X, Y), 0)
        reps[(X, Y)] = H.reps
        coords[(X, Y)] = H.classify
    return _DegreeZero(reps, coords)


def _linear(A: DgCategory, data: _DegreeZero) -> LinearCategory:
    K = A.field
    dims = {k: v.shape[1] for k, v in data.reps.items()}
    comp = {}
    for X, Y, Z in itertools.product(A.objects, repeat=3):
        t = K.zeros((dims[(X, Z)], dims[(Y, Z)], dims[(X, Y)]))
        for i in range(dims[(Y, Z)]):
            for j in range(dims[(X, Y)]):
                v = A.compose(X, Y, Z, data.reps[(Y, Z)][:, i], data.reps[(X, Y)][:, j])
                t[:, i, j] = data.coords[(X, Z)](v)
        comp[(X, Y, Z)] = t
    units = {X: K.reduce(data.coords[(X, X)](A.unit(X))) for X in A.objects}
    return LinearCategory(K, A.objects, dims, comp, units)


def z0(A: DgCategory) -> LinearCategory:
    return _linear(A, _z0_data(A))


def h0(A: DgCategory) -> LinearCategory:
    return _linear(A, _h0_data(A))


def h0_functor_matrix(Fn: DgFunctor, hA=None, hB=None):
    """Matrices of ``H^0(Fn)`` on each hom space, in the H^0 bases."""
    dA = hA or _h0_data(Fn.source)
    dB = hB or _h0_data(Fn.target)
    K = Fn.source.field
    out = {}
    for X, Y in itertools.product(Fn.source.objects, repeat=2):
        reps = dA.reps[(X, Y)]
        cols = [dB.coords[(Fn(X), Fn(Y))](K.matmul(Fn.on(X, Y), reps[:, i])) for i in range(reps.shape[1])]
        n = dB.reps[(Fn(X), Fn(Y))].shape[1]
        out[(X, Y)] = np.stack(cols, axis=1) if cols else K.zeros((n, 0))
    return out


def homotopy_equivalence_in(A: DgCategory, X, Y, f: np.ndarray, hA: Optional[LinearCategory] = None,
                            data: Optional[_DegreeZero] = None) -> bool:
    """Is the closed degree-0 ``f: X -> Y`` invertible in H^0(A)?"""
    data = data or _h0_data(A)
    hA = hA or _linear(A, data)
    return hA.is_iso(X, Y, data.coords[(X, Y)](f))


def functors_quasi_iso_on_homs(Fn: DgFunctor) -> list:
    """Pairs whose hom component is not a quasi-isomorphism."""
    bad = []
    for X, Y in itertools.product(Fn.source.objects, repeat=2):
        if not is_quasi_iso(Fn.hom_map(X, Y)):
            bad.append([X, Y])
    return bad


__all__ = [
    "DgCategory", "DgFunctor", "LinearCategory", "make_category", "validate_dg_category",
    "opposite", "tensor_categories", "product_categories", "full_subcategory", "field_category",
    "directed_order", "identity_functor", "compose_functors", "validate_functor", "tensor_functors",
    "swap_functor", "relabel_functor", "diagonal_functor", "pair_functor", "inclusion_functor",
    "z0", "h0", "h0_functor_matrix", "homotopy_equivalence_in",
]
