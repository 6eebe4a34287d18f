"""Tensor product of dg modules as the cokernel of the Xi map.

For ``M`` over ``A (x) B`` and ``N`` over ``B^op (x) C`` the value at
``(X, Z)`` is the cokernel of::

    Xi: (+)_{Y, Y'} M(X,Y') (x) B(Y,Y') (x) N(Y,Z)  ->  (+)_Y M(X,Y) (x) N(Y,Z)
    (v1, f, v2) |-> M(f)(v1) (x) v2 - (-1)^{|v1||f|} v1 (x) N(f)(v2)

taken degreewise with the canonical projection/section of
:func:`dgkernels.linalg.cokernel`.  The codomain is ordered by middle object
and then by the Kronecker index ``k * dim N + l``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg as la
from .categories import DgCategory, opposite, tensor_categories
from .complexes import Complex, direct_sum, tensor_complexes
from .linalg import Field
from .modules import (
    DgModule,
    NatTransform,
    _par,
    _sgn,
    is_acyclic,
    lift_left,
    lift_right,
    make_module,
)
from .report import Report


@dataclass
class Cokernel:
    """One value of a tensor product with its presentation."""

    codomain: Complex
    blocks: dict  # middle object -> (offset, dim of left factor, dim of right factor)
    xi: np.ndarray  # codomain x relations
    P: np.ndarray  # result x codomain
    S: np.ndarray  # codomain x result
    value: Complex

    def descend(self, F: Field, phi: np.ndarray) -> Optional[np.ndarray]:
        """``phi`` on the codomain, pushed to the cokernel; None if ill defined."""
        if self.xi.shape[1] and not la.is_zero(F.matmul(phi, self.xi)):
            return None
        return F.matmul(phi, self.S)


@dataclass
class TensorPresentation:
    module: DgModule
    parts: dict  # result object -> Cokernel
    left: DgModule
    right: DgModule


def _split(base: DgCategory, what: str) -> tuple[DgCategory, DgCategory]:
    if not base.factors:
        raise ValueError(f"{what} must live over a tensor category")
    return base.factors


def _e(F: Field, n: int, i: int) -> np.ndarray:
    e = F.zeros(n)
    e[i] = F(1)
    return e


def _vec_kron(F: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Coordinates of ``a (x) b`` in a tensor hom complex."""
    return F.kron(np.asarray(a).reshape(-1, 1), np.asarray(b).reshape(-1, 1)).reshape(-1)


def _cokernel_value(F: Field, C: Complex, xi: np.ndarray) -> tuple[np.ndarray, np.ndarray, Complex]:
    degs, Ps, Ss = [], [], []
    for n in sorted(C.dims()):
        idx = C.indices(n)
        rel = xi[idx]
        if rel.shape[1]:
            rel = rel[:, np.any(rel != 0, axis=0)]
        P, S = la.cokernel(F, rel, rows=len(idx))
        Pf = F.zeros((P.shape[0], C.dim))
        Pf[:, idx] = P
        Sf = F.zeros((C.dim, S.shape[1]))
        Sf[idx] = S
        Ps.append(Pf)
        Ss.append(Sf)
        degs.extend([n] * P.shape[0])
    P = np.concatenate(Ps, axis=0) if Ps else F.zeros((0, C.dim))
    S = np.concatenate(Ss, axis=1) if Ss else F.zeros((C.dim, 0))
    d = F.matmul(F.matmul(P, C.d), S) if degs else F.zeros((0, 0))
    return P, S, Complex(F, tuple(degs), d)


def tensor_presentation(M: DgModule, N: DgModule) -> TensorPresentation:
    """``M (x)_B N`` for ``M`` over ``A (x) B`` and ``N`` over ``B^op (x) C``."""
    A, B = _split(M.base, "left module")
    Bop, C = _split(N.base, "right module")
    F = M.field
    if F != N.field:
        raise la.FieldMismatch(f"{F} vs {N.field}")
    if not opposite(B).same_as(Bop):
        raise ValueError("middle categories do not match")
    T = tensor_categories(A, C)
    parts = {}
    for X, Z in T.objects:
        blocks, comps, o = {}, [], 0
        for Y in B.objects:
            mv, nv = M.value((X, Y)), N.value((Y, Z))
            blocks[Y] = (o, mv.dim, nv.dim)
            comps.append(tensor_complexes(mv, nv))
            o += mv.dim * nv.dim
        Cd = direct_sum(*comps) if comps else Complex(F, (), F.zeros((0, 0)))
        cols = []
        for Y, Y2 in itertools.product(B.objects, repeat=2):
            H = B.hom(Y, Y2)
            o1, m1, n1 = blocks[Y]
            o2, m2, n2 = blocks[Y2]
            if H.dim == 0 or m2 == 0 or n1 == 0:
                continue
            for j in range(H.dim):
                Mf = M.on((X, Y), (X, Y2), _vec_kron(F, A.unit(X), _e(F, H.dim, j)))  # M(X,Y2) -> M(X,Y)
                Nf = N.on((Y2, Z), (Y, Z), _vec_kron(F, _e(F, H.dim, j), C.unit(Z)))  # N(Y,Z) -> N(Y2,Z)
                blk = F.zeros((Cd.dim, m2 * n1))
                if m1:
                    blk[o1 : o1 + m1 * n1] = F.kron(Mf, F.eye(n1))
                s = _sgn(F, _par(M.value((X, Y2)).degrees) * (H.degrees[j] % 2))
                blk[o2 : o2 + m2 * n2] = F.reduce(blk[o2 : o2 + m2 * n2] - F.kron(np.diag(s), Nf))
                cols.append(blk)
        xi = np.concatenate(cols, axis=1) if cols else F.zeros((Cd.dim, 0))
        xi = F.reduce(xi)
        if xi.shape[1]:
            xi = xi[:, np.any(xi != 0, axis=0)]
        P, S, val = _cokernel_value(F, Cd, xi)
        parts[(X, Z)] = Cokernel(Cd, blocks, xi, P, S, val)
    values = {k: p.value for k, p in parts.items()}
    action = {}
    for (X, Z), (X2, Z2) in itertools.product(T.objects, repeat=2):
        src, tgt = parts[(X2, Z2)], parts[(X, Z)]
        ha, hc = A.hom(X, X2), C.hom(Z, Z2)
        if ha.dim * hc.dim == 0 or src.value.dim == 0 or tgt.value.dim == 0:
            continue
        t = F.zeros((tgt.value.dim, ha.dim * hc.dim, src.value.dim))
        for Y in B.objects:
            os_, ms, ns = src.blocks[Y]
            ot, mt, nt = tgt.blocks[Y]
            if ms * ns == 0 or mt * nt == 0:
                continue
            Pb = tgt.P[:, ot : ot + mt * nt]
            Sb = src.S[os_ : os_ + ms * ns]
            if la.is_zero(Pb) or la.is_zero(Sb):
                continue
            par = _par(M.value((X2, Y)).degrees)
            for ia in range(ha.dim):
                Ma = M.on((X, Y), (X2, Y), _vec_kron(F, _e(F, ha.dim, ia), B.unit(Y)))
                if la.is_zero(Ma):
                    continue
                for ic in range(hc.dim):
                    Nc = N.on((Y, Z), (Y, Z2), _vec_kron(F, B.unit(Y), _e(F, hc.dim, ic)))
                    if la.is_zero(Nc):
                        continue
                    s = _sgn(F, par * (hc.degrees[ic] % 2))
                    phi = F.kron(Ma * s[None, :], Nc)
                    blk = F.matmul(F.matmul(Pb, phi), Sb)
                    t[:, ia * hc.dim + ic, :] = F.reduce(t[:, ia * hc.dim + ic, :] + blk)
        action[((X, Z), (X2, Z2))] = t
    mod = make_module(T, values, action, f"({M.name}@{N.name})")
    return TensorPresentation(mod, parts, M, N)


def tensor_over_middle(M: DgModule, N: DgModule) -> DgModule:
    return tensor_presentation(M, N).module


def tensor_over(M: DgModule, N: DgModule) -> Complex:
    """``M (x)_A N`` for ``M`` over A and ``N`` over ``A^op``: a complex."""
    return tensor_over_presentation(M, N).module.value(("*", "*"))


def tensor_over_presentation(M: DgModule, N: DgModule) -> TensorPresentation:
    return tensor_presentation(lift_left(M), lift_right(N))


# --------------------------------------------------------------------------
# functoriality


def induced_tensor_map(theta: NatTransform, N: DgModule, pres_src: Optional[TensorPresentation] = None,
                       pres_tgt: Optional[TensorPresentation] = None) -> NatTransform:
    """``theta (x) 1_N`` for ``theta: M1 -> M2`` over ``A (x) B``."""
    M1, M2 = theta.source, theta.target
    F = M1.field
    ps = pres_src or tensor_presentation(M1, N)
    pt = pres_tgt or tensor_presentation(M2, N)
    comps = {}
    for key, src in ps.parts.items():
        tgt = pt.parts[key]
        X, Z = key
        phi = F.zeros((tgt.codomain.dim, src.codomain.dim))
        for Y, (os_, ms, ns) in src.blocks.items():
            ot, mt, nt = tgt.blocks[Y]
            if ms * ns == 0 or mt * nt == 0:
                continue
            phi[ot : ot + mt * nt, os_ : os_ + ms * ns] = F.kron(theta[(X, Y)], F.eye(ns))
        comps[key] = F.matmul(F.matmul(tgt.P, phi), src.S)
    return NatTransform(ps.module, pt.module, theta.degree, comps)


def induced_tensor_map_right(M: DgModule, eta: NatTransform, pres_src: Optional[TensorPresentation] = None,
                             pres_tgt: Optional[TensorPresentation] = None) -> NatTransform:
    """``1_M (x) eta`` with ``(1 (x) eta)(v (x) w) = (-1)^{|eta||v|} v (x) eta(w)``."""
    N1, N2 = eta.source, eta.target
    F = M.field
    ps = pres_src or tensor_presentation(M, N1)
    pt = pres_tgt or tensor_presentation(M, N2)
    comps = {}
    for key, src in ps.parts.items():
        tgt = pt.parts[key]
        X, Z = key
        phi = F.zeros((tgt.codomain.dim, src.codomain.dim))
        for Y, (os_, ms, ns) in src.blocks.items():
            ot, mt, nt = tgt.blocks[Y]
            if ms * ns == 0 or mt * nt == 0:
                continue
            s = _sgn(F, _par(M.value((X, Y)).degrees) * (eta.degree % 2))
            phi[ot : ot + mt * nt, os_ : os_ + ms * ns] = F.kron(np.diag(s), eta[(Y, Z)])
        comps[key] = F.matmul(F.matmul(tgt.P, phi), src.S)
    return NatTransform(ps.module, pt.module, eta.degree, comps)


def descends(pres: TensorPresentation, F: Field, key, phi: np.ndarray) -> bool:
    """Does ``phi`` (defined on the codomain at ``key``) kill the relations?"""
    xi = pres.parts[key].xi
    return xi.shape[1] == 0 or la.is_zero(F.matmul(phi, xi))


# --------------------------------------------------------------------------
# h-flatness


def check_hflat(M: DgModule, battery: list) -> Report:
    """``M (x)_A N`` acyclic for every (acyclic) ``N`` over ``A^op`` in the battery."""
    rep = Report(f"h-flat {M.name}".strip())
    if not battery:
        rep.add("battery nonempty", None, reason="no evidence: empty battery")
        return rep
    rejected, bad = [], []
    for i, N in enumerate(battery):
        if not is_acyclic(N).acyclic:
            rejected.append(i)
            continue
        T = tensor_over(M, N)
        from .complexes import cohomology_dims

        h = cohomology_dims(T)
        if h:
            bad.append({"battery": i, "cohomology": h})
    rep.add("battery members acyclic", not rejected, rejected=rejected)
    rep.add("tensor with each battery member acyclic", not bad, witnesses=bad[:5], battery_size=len(battery))
    return rep


__all__ = [
    "Cokernel", "TensorPresentation", "tensor_presentation", "tensor_over_middle", "tensor_over",
    "tensor_over_presentation", "induced_tensor_map", "induced_tensor_map_right", "descends",
    "check_hflat",
]
