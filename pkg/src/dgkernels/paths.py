"""Morphism categories, path objects, fiber products and the checks around them.

Objects of ``Mor(A)`` are triples ``(X, Y, f)`` with ``f`` closed of degree 0;
``f`` is stored in the object identifier as a tuple of serialized
coordinates so identifiers stay hashable and JSON friendly.  A morphism
``(a, b, h)`` of degree n has ``a in A(X, X')^n``, ``b in A(Y, Y')^n`` and
``h in A(X, Y')^(n-1)``, with::

    d(a, b, h) = (da, db, dh + (-1)^n (f' a - b f))
    (a', b', h') o (a, b, h) = (a' a, b' b, b' h + (-1)^n h' a)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import linalg as la
from .categories import (
    DgCategory,
    DgFunctor,
    LinearCategory,
    _h0_data,
    _linear,
    _z0_data,
    functors_quasi_iso_on_homs,
    make_category,
    pair_functor,
    product_categories,
)
from .complexes import Complex
from .linalg import Field
from .report import Report


# --------------------------------------------------------------------------
# Mor(A)


def triple(A: DgCategory, X, Y, f) -> tuple:
    """Object identifier of ``(X, Y, f)`` in ``Mor(A)``."""
    K = A.field
    return (X, Y, tuple(K.to_text(c) for c in np.asarray(f)))


def triple_map(A: DgCategory, T) -> np.ndarray:
    X, Y, coords = T
    K = A.field
    return K.array(list(coords)) if coords else K.zeros(0)


def closed_degree_zero(A: DgCategory, X, Y, limit: Optional[int] = None) -> list[np.ndarray]:
    """Elements of Z^0(A(X, Y)).

    Over F_p every element is listed.  Over Q the list is zero, the RREF
    basis of Z^0 and, for X = Y, the unit.
    """
    K = A.field
    R = _z0_data(A).reps[(X, Y)]
    k = R.shape[1]
    out: list[np.ndarray] = []
    if K.is_finite:
        for coeffs in itertools.product(range(K.p), repeat=k):
            out.append(K.matmul(R, K.array(list(coeffs))) if k else K.zeros(A.dim(X, Y)))
            if limit is not None and len(out) >= limit:
                break
        return out
    out.append(K.zeros(A.dim(X, Y)))
    out.extend(R[:, i].copy() for i in range(k))
    if X == Y:
        out.append(A.unit(X))
    seen, uniq = set(), []
    for v in out:
        key = tuple(K.to_text(c) for c in v)
        if key not in seen:
            seen.add(key)
            uniq.append(v)
    return uniq


def default_triples(A: DgCategory) -> list[tuple]:
    return [triple(A, X, Y, f) for X in A.objects for Y in A.objects
            for f in closed_degree_zero(A, X, Y)]


def _mor_hom(A: DgCategory, S, T) -> Complex:
    K = A.field
    X, Y, _ = S
    X2, Y2, _ = T
    f, f2 = triple_map(A, S), triple_map(A, T)
    ca, cb, ch = A.hom(X, X2), A.hom(Y, Y2), A.hom(X, Y2)
    na, nb, nh = ca.dim, cb.dim, ch.dim
    n = na + nb + nh
    d = K.zeros((n, n))
    d[:na, :na] = ca.d
    d[na : na + nb, na : na + nb] = cb.d
    d[na + nb :, na + nb :] = ch.d
    if nh:
        sa = np.where(np.asarray(ca.degrees, dtype=np.int64) % 2 == 0, 1, -1)
        sb = np.where(np.asarray(cb.degrees, dtype=np.int64) % 2 == 0, 1, -1)
        if na:
            d[na + nb :, :na] = K.reduce(A.left_mult(X, X2, Y2, f2) * K.array(sa)[None, :])
        if nb:
            d[na + nb :, na : na + nb] = K.reduce(-A.right_mult(X, Y, Y2, f) * K.array(sb)[None, :])
    degs = ca.degrees + cb.degrees + tuple(k + 1 for k in ch.degrees)
    names = None
    if ca.names is not None and cb.names is not None and ch.names is not None:
        names = tuple(f"a:{x}" for x in ca.names) + tuple(f"b:{x}" for x in cb.names) + tuple(
            f"h:{x}" for x in ch.names)
    return Complex(K, degs, K.reduce(d), names)


def _mor_comp(A: DgCategory, S, T, U, homs) -> np.ndarray:
    K = A.field
    (X, Y, _), (X2, Y2, _), (X3, Y3, _) = S, T, U
    g, f, r = homs[(T, U)], homs[(S, T)], homs[(S, U)]
    na, nb = A.dim(X, X2), A.dim(Y, Y2)
    ga, gb = A.dim(X2, X3), A.dim(Y2, Y3)
    ra, rb = A.dim(X, X3), A.dim(Y, Y3)
    t = K.zeros((r.dim, g.dim, f.dim))
    t[:ra, :ga, :na] = A.comp_tensor(X, X2, X3)
    t[ra : ra + rb, ga : ga + gb, na : na + nb] = A.comp_tensor(Y, Y2, Y3)
    # b' o h
    t[ra + rb :, ga : ga + gb, na + nb :] = A.comp_tensor(X, Y2, Y3)
    # (-1)^n h' o a, n = |a|
    sa = np.where(np.asarray(A.hom(X, X2).degrees, dtype=np.int64) % 2 == 0, 1, -1)
    t[ra + rb :, ga + gb :, :na] = K.reduce(A.comp_tensor(X, X2, Y3) * K.array(sa)[None, None, :])
    return t


def mor_category(A: DgCategory, objects: Optional[Iterable[tuple]] = None) -> DgCategory:
    """``Mor(A)`` on the given triples (default: :func:`default_triples`)."""
    K = A.field
    objs = list(objects) if objects is not None else default_triples(A)
    for X, Y, coords in objs:
        f = triple_map(A, (X, Y, coords))
        C = A.hom(X, Y)
        if f.shape != (C.dim,) or any(f[i] != 0 and C.degrees[i] != 0 for i in range(C.dim)) \
                or not la.is_zero(K.matmul(C.d, f)):
            raise ValueError(f"{(X, Y, coords)} is not a closed degree-0 morphism")
    homs = {(S, T): _mor_hom(A, S, T) for S in objs for T in objs}
    comp = {}
    for S, T, U in itertools.product(objs, repeat=3):
        comp[(S, T, U)] = _mor_comp(A, S, T, U, homs)
    units = {}
    for S in objs:
        X, Y, _ = S
        units[S] = np.concatenate([A.unit(X), A.unit(Y), K.zeros(A.dim(X, Y))])
    return make_category(K, objs, homs, comp, units, f"Mor({A.name})")


def is_homotopy_equivalence(A: DgCategory, X, Y, f, data=None, hA=None) -> bool:
    """Is closed degree-0 ``f: X -> Y`` invertible in H^0(A)?"""
    data = data or _h0_data(A)
    hA = hA or _linear(A, data)
    return hA.is_iso(X, Y, data.coords[(X, Y)](np.asarray(f)))


@dataclass
class PathObject:
    category: DgCategory
    iota: DgFunctor
    s: DgFunctor
    t: DgFunctor

    @property
    def st(self) -> DgFunctor:
        return pair_functor(self.s, self.t)


def path_object(A: DgCategory, extra: Iterable[tuple] = ()) -> PathObject:
    """``P(A)``: triples whose map is a homotopy equivalence, with iota, s, t.

    The identity triples ``(X, X, 1_X)`` are always present; ``extra``
    triples (for instance targets of a standard homotopy over Q) are added
    when they qualify.
    """
    K = A.field
    data = _h0_data(A)
    hA = _linear(A, data)
    cands = [triple(A, X, X, A.unit(X)) for X in A.objects] + default_triples(A) + list(extra)
    objs, seen = [], set()
    for T in cands:
        if T in seen:
            continue
        seen.add(T)
        if is_homotopy_equivalence(A, T[0], T[1], triple_map(A, T), data, hA):
            objs.append(T)
    P = mor_category(A, objs)
    P = DgCategory(K, P.objects, P.homs, P.comp, P.units, f"P({A.name})")
    iota_obj = {X: triple(A, X, X, A.unit(X)) for X in A.objects}
    iota_maps = {}
    for X, Y in itertools.product(A.objects, repeat=2):
        n = A.dim(X, Y)
        iota_maps[(X, Y)] = np.concatenate([K.eye(n), K.eye(n), K.zeros((n, n))], axis=0)
    iota = DgFunctor(A, P, iota_obj, iota_maps, "iota")
    s_maps, t_maps = {}, {}
    for S, T in itertools.product(objs, repeat=2):
        na, nb, nh = A.dim(S[0], T[0]), A.dim(S[1], T[1]), A.dim(S[0], T[1])
        s_maps[(S, T)] = np.concatenate([K.eye(na), K.zeros((na, nb + nh))], axis=1)
        t_maps[(S, T)] = np.concatenate([K.zeros((nb, na)), K.eye(nb), K.zeros((nb, nh))], axis=1)
    s = DgFunctor(P, A, {T: T[0] for T in objs}, s_maps, "s")
    t = DgFunctor(P, A, {T: T[1] for T in objs}, t_maps, "t")
    return PathObject(P, iota, s, t)


# --------------------------------------------------------------------------
# subcategories cut out by subcomplexes, fiber products


def _homogeneous_kernel(K: Field, C: Complex, M: np.ndarray) -> np.ndarray:
    """Basis (columns) of ``ker M`` inside ``C`` made of homogeneous vectors."""
    cols = []
    for n in sorted(C.dims()):
        idx = C.indices(n)
        N, _ = la.nullspace(K, M[:, idx], len(idx)) if M.shape[0] else (K.eye(len(idx)), None)
        for j in range(N.shape[1]):
            v = K.zeros(C.dim)
            v[idx] = N[:, j]
            cols.append(v)
    return np.stack(cols, axis=1) if cols else K.zeros((C.dim, 0))


def _coords(K: Field, basis: np.ndarray, v: np.ndarray) -> np.ndarray:
    if basis.shape[1] == 0:
        return K.zeros(0)
    x = la.solve(K, basis, v)
    if x is None:
        raise ValueError("vector leaves the subspace")
    return x


def sub_category(A: DgCategory, objects: list, bases: dict, name: str = "") -> DgCategory:
    """Category on ``objects`` with hom(X, Y) the span of ``bases[(X, Y)]``.

    Each basis column must be homogeneous; the spans must be closed under
    d, composition and contain the units.
    """
    K = A.field
    homs = {}
    for X, Y in itertools.product(objects, repeat=2):
        B, C = bases[(X, Y)], A.hom(X, Y)
        degs = tuple(int(C.degrees[int(np.flatnonzero(B[:, j] != 0)[0])]) if np.any(B[:, j] != 0) else 0
                     for j in range(B.shape[1]))
        dB = K.matmul(C.d, B)
        d = np.stack([_coords(K, B, dB[:, j]) for j in range(B.shape[1])], axis=1) if B.shape[1] else K.zeros((0, 0))
        homs[(X, Y)] = Complex(K, degs, K.reduce(d))
    comp = {}
    for X, Y, Z in itertools.product(objects, repeat=3):
        bg, bf, bh = bases[(Y, Z)], bases[(X, Y)], bases[(X, Z)]
        t = K.zeros((bh.shape[1], bg.shape[1], bf.shape[1]))
        if t.size:
            for i in range(bg.shape[1]):
                for j in range(bf.shape[1]):
                    t[:, i, j] = _coords(K, bh, A.compose(X, Y, Z, bg[:, i], bf[:, j]))
        comp[(X, Y, Z)] = t
    units = {X: _coords(K, bases[(X, X)], A.unit(X)) for X in objects}
    return make_category(K, objects, homs, comp, units, name)


@dataclass
class FiberProduct:
    category: DgCategory
    p1: DgFunctor
    p2: DgFunctor
    bases: dict = field(default_factory=dict)


def fiber_product(Fn: DgFunctor, Gn: DgFunctor) -> FiberProduct:
    """``A x_C B`` along ``Fn: A -> C`` and ``Gn: B -> C``."""
    if not Fn.target.same_as(Gn.target):
        raise ValueError("functors have different targets")
    A, B = Fn.source, Gn.source
    K = A.field
    P = product_categories(A, B)
    objs = [(X, Y) for X, Y in P.objects if Fn(X) == Gn(Y)]
    bases = {}
    for S, T in itertools.product(objs, repeat=2):
        (X, Y), (X2, Y2) = S, T
        M = np.concatenate([Fn.on(X, X2), K.reduce(-Gn.on(Y, Y2))], axis=1)
        bases[(S, T)] = _homogeneous_kernel(K, P.hom(S, T), M)
    D = sub_category(P, objs, bases, f"{A.name}x_{Fn.target.name}{B.name}")
    p1m, p2m = {}, {}
    for S, T in itertools.product(objs, repeat=2):
        na = A.dim(S[0], T[0])
        p1m[(S, T)] = bases[(S, T)][:na]
        p2m[(S, T)] = bases[(S, T)][na:]
    p1 = DgFunctor(D, A, {S: S[0] for S in objs}, p1m, "p1")
    p2 = DgFunctor(D, B, {S: S[1] for S in objs}, p2m, "p2")
    return FiberProduct(D, p1, p2, bases)


# --------------------------------------------------------------------------
# quasi-equivalences and fibrations


def _search_iso(hB: LinearCategory, X, Y, rng: np.random.Generator, budget: int) -> Optional[np.ndarray]:
    """Exhaustive over F_p; random integer trials over Q."""
    K = hB.field
    if X == Y:
        return hB.units[X]
    if K.is_finite:
        return hB.isomorphic(X, Y)
    n = hB.dims[(X, Y)]
    if n == 0 or hB.dims[(Y, X)] == 0:
        return None
    for k in range(n):
        e = K.zeros(n)
        e[k] = K(1)
        if hB.is_iso(X, Y, e):
            return e
    for _ in range(budget):
        u = K.random(rng, n)
        if hB.is_iso(X, Y, u):
            return u
    return None


def _iso_decidable_absent(hB: LinearCategory, X, Y) -> bool:
    """Cases where no iso exists for dimension reasons, over any field."""
    return hB.dims[(X, Y)] == 0 or hB.dims[(Y, X)] == 0


def check_quasi_equivalence(Fn: DgFunctor, seed: int = 0, budget: int = 64) -> Report:
    """Quasi-iso on every hom plus essential surjectivity of H^0(Fn)."""
    rep = Report(f"quasi-equivalence {Fn.name}".strip())
    bad = functors_quasi_iso_on_homs(Fn)
    rep.add("hom components are quasi-isomorphisms", not bad, pairs=bad[:5])
    hB = _linear(Fn.target, _h0_data(Fn.target))
    rng = np.random.default_rng(seed)
    images = sorted(set(Fn.obj.values()), key=repr)
    missing, unknown, witnesses = [], [], {}
    for Y in Fn.target.objects:
        found = None
        for X in Fn.source.objects:
            u = _search_iso(hB, Fn(X), Y, rng, budget)
            if u is not None:
                found = (X, u)
                break
        if found is not None:
            witnesses[repr(Y)] = {"source": found[0], "iso": [hB.field.to_text(c) for c in found[1]]}
        elif hB.field.is_finite or all(_iso_decidable_absent(hB, Z, Y) for Z in images):
            missing.append(Y)
        else:
            unknown.append(Y)
    if missing:
        rep.add("H^0 essentially surjective", False, missing=missing[:5])
    elif unknown:
        rep.add("H^0 essentially surjective", None, undecided=unknown[:5], budget=budget, seed=seed)
    else:
        rep.add("H^0 essentially surjective", True, witnesses=witnesses)
    return rep


def _affine_solutions(K: Field, M: np.ndarray, b: np.ndarray):
    x0 = la.solve(K, M, b) if M.shape[1] else (K.zeros(0) if la.is_zero(b) else None)
    if x0 is None:
        return
    N, _ = la.nullspace(K, M, M.shape[1])
    for coeffs in itertools.product(range(K.p), repeat=N.shape[1]):
        yield K.reduce(x0 + K.matmul(N, K.array(list(coeffs)))) if coeffs else x0


def _is_isomorphism(Fn: DgFunctor) -> bool:
    A, B = Fn.source, Fn.target
    if sorted(map(repr, Fn.obj.values())) != sorted(map(repr, B.objects)) or len(set(Fn.obj.values())) != len(A.objects):
        return False
    return all(la.inverse(A.field, Fn.on(X, Y)) is not None or Fn.on(X, Y).size == 0 and A.dim(X, Y) == 0
               for X, Y in itertools.product(A.objects, repeat=2))


def check_fibration(Fn: DgFunctor) -> Report:
    """Fullness (degreewise surjective homs) plus H^0 isofibration."""
    A, B, K = Fn.source, Fn.target, Fn.source.field
    rep = Report(f"fibration {Fn.name}".strip())
    notfull = []
    for X, Y in itertools.product(A.objects, repeat=2):
        T = B.hom(Fn(X), Fn(Y))
        S = A.hom(X, Y)
        m = Fn.on(X, Y)
        for n, k in T.dims().items():
            blk = m[np.ix_(T.indices(n), S.indices(n))]
            if la.rank(K, blk) != k:
                notfull.append({"pair": [X, Y], "degree": n})
    rep.add("full (degreewise surjective on homs)", not notfull, witnesses=notfull[:5])
    if not K.is_finite:
        if _is_isomorphism(Fn):
            # isos lift along an isomorphism of dg categories
            rep.add("H^0 isofibration", True, reason="isomorphism of dg categories")
        else:
            rep.add("H^0 isofibration", None, reason="iso lifting over Q is not searched exhaustively")
        return rep
    dA, dB = _h0_data(A), _h0_data(B)
    hA, hB = _linear(A, dA), _linear(B, dB)
    from .categories import h0_functor_matrix

    HF = h0_functor_matrix(Fn, dA, dB)
    failures = []
    for X in A.objects:
        for Y2 in B.objects:
            for u in hB.elements(Fn(X), Y2):
                if not hB.is_iso(Fn(X), Y2, u):
                    continue
                lifted = False
                for X2 in A.objects:
                    if Fn(X2) != Y2:
                        continue
                    for g in _affine_solutions(K, HF[(X, X2)], u):
                        if hA.is_iso(X, X2, g):
                            lifted = True
                            break
                    if lifted:
                        break
                if not lifted:
                    failures.append({"object": X, "target": Y2, "iso": [int(c) for c in u]})
    rep.add("H^0 isofibration", not failures, witnesses=failures[:5])
    return rep


# --------------------------------------------------------------------------
# standard homotopies


class StandardHomotopyError(ValueError):
    def __init__(self, report: Report):
        self.report = report
        names = "; ".join(f"{v.check} {v.detail.get('objects', '')}" for v in report.failures())
        super().__init__(f"not a termwise homotopy equivalence: {names}")


def check_termwise_equivalence(Fn: DgFunctor, Gn: DgFunctor, alpha: dict) -> Report:
    """``alpha(X): Fn(X) -> Gn(X)`` closed, degree 0, natural, H^0-invertible."""
    A, B, K = Fn.source, Fn.target, Fn.source.field
    rep = Report("termwise homotopy equivalence")
    data = _h0_data(B)
    hB = _linear(B, data)
    not_closed, not_inv, not_nat = [], [], []
    for X in A.objects:
        C = B.hom(Fn(X), Gn(X))
        a = np.asarray(alpha[X])
        if a.shape != (C.dim,) or any(a[i] != 0 and C.degrees[i] != 0 for i in range(C.dim)) \
                or not la.is_zero(K.matmul(C.d, a)):
            not_closed.append(X)
        elif not hB.is_iso(Fn(X), Gn(X), data.coords[(Fn(X), Gn(X))](a)):
            not_inv.append(X)
    rep.add("components closed of degree 0", not not_closed, objects=not_closed)
    rep.add("components invertible in H^0", not not_inv, objects=not_inv)
    if not_closed:
        return rep
    for X, Y in itertools.product(A.objects, repeat=2):
        fx, fy, gx, gy = Fn(X), Fn(Y), Gn(X), Gn(Y)
        # G(a) o alpha(X) = alpha(Y) o F(a)
        lhs = K.matmul(B.right_mult(fx, gx, gy, alpha[X]), Gn.on(X, Y))
        rhs = K.matmul(B.left_mult(fx, fy, gy, alpha[Y]), Fn.on(X, Y))
        if not np.array_equal(lhs, rhs):
            not_nat.append([X, Y])
    rep.add("natural", not not_nat, pairs=not_nat[:5])
    return rep


def construct_standard_homotopy(Fn: DgFunctor, Gn: DgFunctor, alpha: dict) -> tuple[DgFunctor, PathObject]:
    """``H: A -> P(B)``, ``X |-> (F X, G X, alpha X)``, ``a |-> (F a, G a, 0)``."""
    A, B, K = Fn.source, Fn.target, Fn.source.field
    rep = check_termwise_equivalence(Fn, Gn, alpha)
    if not rep.ok:
        raise StandardHomotopyError(rep)
    obj = {X: triple(B, Fn(X), Gn(X), alpha[X]) for X in A.objects}
    PB = path_object(B, extra=obj.values())
    maps = {}
    for X, Y in itertools.product(A.objects, repeat=2):
        nh = B.dim(Fn(X), Gn(Y))
        maps[(X, Y)] = np.concatenate([Fn.on(X, Y), Gn.on(X, Y), K.zeros((nh, A.dim(X, Y)))], axis=0)
    return DgFunctor(A, PB.category, obj, maps, "H"), PB


__all__ = [
    "triple", "triple_map", "closed_degree_zero", "default_triples", "mor_category",
    "is_homotopy_equivalence", "PathObject", "path_object", "sub_category", "FiberProduct",
    "fiber_product", "check_quasi_equivalence", "check_fibration", "StandardHomotopyError",
    "check_termwise_equivalence", "construct_standard_homotopy",
]
