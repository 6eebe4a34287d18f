"""Semi-free resolutions, h-projectivity evidence and homotopy equivalences of modules.

Right-module notation: for ``v in M(Y)`` and ``a in A(X, Y)`` put
``v.a = (-1)^{|v||a|} M(a)(v)``; this is a strictly associative right
action with ``d(v.a) = dv.a + (-1)^{|v|} v.da``.

The reduced bar resolution of ``M`` has generators
``m [a1 | ... | an]`` with ``m in M(X0)``, ``ai`` in the non-unit part of
``A(Xi, X(i-1))`` and free variable in ``h^{Xn}``; the degree is
``|m| + sum(|ai| - 1)``.  Its differential on a tensor ``x0 (x) ... (x) x(n+1)``
(``x0 = m``, ``xi = s ai``, ``x(n+1) = u``) is the Koszul sum of the internal
differentials (``d(s a) = -s(da)``) and of the contractions::

    mu(m, s a) = (-1)^{|m|} m.a     mu(s a, s b) = (-1)^{|s a|} s(ab)     mu(s a, u) = -a u

with products landing on the unit line dropped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg as la
from .categories import DgCategory, directed_order, h0, opposite, tensor_categories
from .complexes import Complex, cohomology, cohomology_dims, cycles, is_quasi_iso
from .linalg import Field
from .modules import (
    DgModule,
    HomComplex,
    NatTransform,
    acyclic_battery,
    cone_transform,
    direct_sum_modules,
    identity_transform,
    is_acyclic,
    make_module,
    module_hom_complex,
    shift_module,
    simple_module,
    validate_module,
    validate_transform,
    yoneda,
    zero_module,
)
from .report import Report


def _unit_index(A: DgCategory, X) -> int:
    u = A.unit(X)
    nz = np.flatnonzero(u != 0)
    if len(nz) != 1 or u[nz[0]] != 1:
        raise ValueError(f"unit of {X!r} is not a basis vector")
    return int(nz[0])


def _reduced(A: DgCategory, X, Y) -> list[int]:
    """Basis indices of A(X, Y) with the unit line removed."""
    n = A.dim(X, Y)
    if X != Y:
        return list(range(n))
    j = _unit_index(A, X)
    return [i for i in range(n) if i != j]


# --------------------------------------------------------------------------
# semi-free modules from generators


@dataclass(frozen=True)
class Generator:
    obj: object
    degree: int


def semi_free_module(A: DgCategory, gens: list, dgen: dict, name: str = "") -> DgModule:
    """``(+) h^{X_g}`` shifted so the generator ``g`` sits in its degree.

    ``dgen[i]`` lists ``(j, c)`` with ``d(g_i) = sum g_j . c`` for ``c`` in
    ``A(X_i, X_j)`` (right action, ``g . c = g (x) c``).  On all elements
    ``d(g (x) u) = d(g) . u + (-1)^{|g|} g (x) du``.
    """
    F = A.field
    offs, values = {}, {}
    for W in A.objects:
        degs, o = [], 0
        for i, g in enumerate(gens):
            offs[(W, i)] = o
            H = A.hom(W, g.obj)
            degs.extend(g.degree + d for d in H.degrees)
            o += H.dim
        values[W] = degs
    diffs = {}
    for W in A.objects:
        n = len(values[W])
        D = F.zeros((n, n))
        for i, g in enumerate(gens):
            H = A.hom(W, g.obj)
            if H.dim == 0:
                continue
            oi = offs[(W, i)]
            s = -1 if g.degree % 2 else 1
            D[oi : oi + H.dim, oi : oi + H.dim] = F.reduce(s * H.d)
            for j, c in dgen.get(i, ()):
                # g_j (x) (c o u)
                Hj = A.hom(W, gens[j].obj)
                if Hj.dim == 0:
                    continue
                comp = A.comp_tensor(W, g.obj, gens[j].obj)  # [l, c, u]
                blk = np.einsum("lcu,c->lu", comp, c)
                oj = offs[(W, j)]
                D[oj : oj + Hj.dim, oi : oi + H.dim] = F.reduce(D[oj : oj + Hj.dim, oi : oi + H.dim] + blk)
        diffs[W] = D
    vals = {W: Complex(F, tuple(values[W]), F.reduce(diffs[W])) for W in A.objects}
    action = {}
    for W, V in itertools.product(A.objects, repeat=2):
        Hf = A.hom(W, V)
        if Hf.dim == 0 or vals[W].dim == 0 or vals[V].dim == 0:
            continue
        t = F.zeros((vals[W].dim, Hf.dim, vals[V].dim))
        for i, g in enumerate(gens):
            Hu, Hw = A.hom(V, g.obj), A.hom(W, g.obj)
            if Hu.dim == 0 or Hw.dim == 0:
                continue
            comp = A.comp_tensor(W, V, g.obj)  # [l, u, f]
            # P(f)(g (x) u) = (-1)^{(|g| + |u|)|f|} g (x) (u o f)
            par = (g.degree + np.asarray(Hu.degrees)[:, None]) * np.asarray(Hf.degrees)[None, :]
            sg = F.array(np.where(par % 2 == 1, -1, 1))  # [u, f]
            blk = np.einsum("luf,uf->lfu", comp, sg)
            t[offs[(W, i)] : offs[(W, i)] + Hw.dim, :, offs[(V, i)] : offs[(V, i)] + Hu.dim] = blk
        action[(W, V)] = t
    return make_module(A, vals, action, name)


def generator_element(A: DgCategory, gens: list, i: int) -> np.ndarray:
    """``g_i (x) 1`` in ``P(X_i)``."""
    F = A.field
    X = gens[i].obj
    o = sum(A.dim(X, g.obj) for g in gens[:i])
    v = F.zeros(sum(A.dim(X, g.obj) for g in gens))
    v[o : o + A.dim(X, X)] = A.unit(X)
    return v


# --------------------------------------------------------------------------
# certificates


@dataclass
class CertificateEntry:
    obj: object
    shift: int  # the summand is h^obj[shift]; its generator sits in degree -shift
    element: np.ndarray  # the generator in P(obj)


@dataclass
class SemiFreeCertificate:
    module: DgModule
    steps: list  # list of lists of CertificateEntry
    attaching: dict = field(default_factory=dict)  # (step, k) -> list of ((step', k'), hom vector)


def _degree_of(C: Complex, v: np.ndarray) -> Optional[int]:
    nz = np.flatnonzero(np.asarray(v) != 0)
    degs = {C.degrees[i] for i in nz}
    return degs.pop() if len(degs) == 1 else None


def certify(M: DgModule, steps: list) -> Optional[SemiFreeCertificate]:
    """Attaching maps for candidate generator steps, found by exact solving."""
    A, F = M.base, M.field
    cert = SemiFreeCertificate(M, steps, {})
    earlier: list = []
    for s, step in enumerate(steps):
        for k, ent in enumerate(step):
            X = ent.obj
            target = F.matmul(M.value(X).d, ent.element)
            cols, labels = [], []
            for (s2, k2), e2 in earlier:
                H = A.hom(X, e2.obj)
                for b in range(H.dim):
                    if H.degrees[b] != -ent.shift + 1 + e2.shift:
                        continue
                    cols.append(F.matmul(M.basis_map(X, e2.obj, b), e2.element))
                    labels.append(((s2, k2), b, H.dim))
            if la.is_zero(target):
                cert.attaching[(s, k)] = []
                continue
            if not cols:
                return None
            x = la.solve(F, np.stack(cols, axis=1), target)
            if x is None:
                return None
            att: dict = {}
            for coef, (key, b, n) in zip(x, labels):
                if coef != 0:
                    att.setdefault(key, F.zeros(n))[b] = coef
            cert.attaching[(s, k)] = sorted(att.items())
        earlier.extend(((s, k), e) for k, e in enumerate(step))
    return cert


def is_semi_free(P: DgModule, cert: SemiFreeCertificate) -> bool:
    """Exact check: generators freely span ``P`` and each ``d(g)`` uses earlier steps only."""
    return certificate_report(P, cert).ok


def certificate_report(P: DgModule, cert: SemiFreeCertificate) -> Report:
    A, F = P.base, P.field
    rep = Report("semi-free certificate")
    flat = [((s, k), e) for s, step in enumerate(cert.steps) for k, e in enumerate(step)]
    bad_deg = [key for key, e in flat
               if e.obj not in A.objects or len(e.element) != P.dim(e.obj)
               or (not la.is_zero(e.element) and _degree_of(P.value(e.obj), e.element) != -e.shift)
               or la.is_zero(e.element)]
    rep.add("generators are homogeneous of degree -shift", not bad_deg, generators=[list(k) for k in bad_deg])
    if bad_deg:
        return rep
    bad_free = []
    for W in A.objects:
        cols = []
        for _, e in flat:
            for b in range(A.dim(W, e.obj)):
                cols.append(F.matmul(P.basis_map(W, e.obj, b), e.element))
        if len(cols) != P.dim(W) or (cols and la.rank(F, np.stack(cols, axis=1)) != P.dim(W)):
            bad_free.append(W)
    rep.add("generators freely span every value", not bad_free, objects=bad_free)
    order = {key: i for i, (key, _) in enumerate(flat)}
    step_of = {key: key[0] for key, _ in flat}
    bad_att = []
    for key, e in flat:
        att = cert.attaching.get(key)
        if att is None:
            bad_att.append({"generator": list(key), "reason": "missing"})
            continue
        acc = F.zeros(P.dim(e.obj))
        ok = True
        for key2, c in att:
            if key2 not in order or step_of[key2] >= step_of[key]:
                ok = False
                break
            e2 = dict(flat)[key2]
            H = A.hom(e.obj, e2.obj)
            if len(c) != H.dim or any(c[b] != 0 and H.degrees[b] != -e.shift + 1 + e2.shift for b in range(H.dim)):
                ok = False
                break
            acc = acc + F.matmul(P.on(e.obj, e2.obj, c), e2.element)
        if not ok or not np.array_equal(F.reduce(acc), F.matmul(P.value(e.obj).d, e.element)):
            bad_att.append({"generator": list(key)})
    rep.add("differential of each generator lies in earlier steps", not bad_att, witnesses=bad_att[:5])
    return rep


def yoneda_certificate(A: DgCategory, X) -> SemiFreeCertificate:
    h = yoneda(A, X)
    return SemiFreeCertificate(h, [[CertificateEntry(X, 0, A.unit(X))]], {(0, 0): []})


# --------------------------------------------------------------------------
# bar resolution


@dataclass
class Resolution:
    module: DgModule
    projection: NatTransform  # module -> original
    certificate: Optional[SemiFreeCertificate]
    status: str  # complete | truncated-quasi-iso | insufficient
    generators: list
    lengths: list

    @property
    def complete(self) -> bool:
        return self.status == "complete"


def _chains(A: DgCategory, M: DgModule, max_length: int) -> list:
    out = [(X,) for X in A.objects if M.dim(X)]
    frontier = list(out)
    for _ in range(max_length):
        nxt = []
        for ch in frontier:
            for X in A.objects:
                if _reduced(A, X, ch[-1]):
                    nxt.append(ch + (X,))
        out.extend(nxt)
        frontier = nxt
    return out


def _project_reduced(A: DgCategory, X, Y, v: np.ndarray) -> dict:
    """Coordinates of ``v`` in A(X, Y) on the reduced basis (unit part dropped)."""
    return {i: v[i] for i in _reduced(A, X, Y) if v[i] != 0}


def bar_resolution(M: DgModule, max_length: Optional[int] = None) -> Resolution:
    A, F = M.base, M.field
    order = directed_order(A)
    if max_length is None:
        max_length = max(len(A.objects) - 1, 0) if order is not None else 2
    chains = _chains(A, M, max_length)
    gens, keys = [], []
    for ch in chains:
        X0 = ch[0]
        red = [_reduced(A, ch[i], ch[i - 1]) for i in range(1, len(ch))]
        mdeg = M.value(X0).degrees
        for m in range(M.dim(X0)):
            for aa in itertools.product(*red):
                deg = mdeg[m] + sum(A.hom(ch[i + 1], ch[i]).degrees[a] - 1 for i, a in enumerate(aa))
                keys.append((ch, m, aa))
                gens.append(Generator(ch[-1], deg))
    index = {k: i for i, k in enumerate(keys)}
    dgen: dict = {}

    def add(i, key, c):
        j = index.get(key)
        if j is None:
            return
        dgen.setdefault(i, []).append((j, c))

    def adeg(ch, i, a):  # |a_i| for a_i in A(ch[i], ch[i-1])
        return A.hom(ch[i], ch[i - 1]).degrees[a]

    for i, (ch, m, aa) in enumerate(keys):
        n = len(aa)
        Xn = ch[-1]
        mdeg = M.value(ch[0]).degrees[m]
        sdeg = [adeg(ch, k + 1, a) - 1 for k, a in enumerate(aa)]
        unit_n = A.unit(Xn)
        # internal: d m
        dm = M.value(ch[0]).d[:, m]
        for m2 in np.flatnonzero(dm != 0):
            add(i, (ch, int(m2), aa), F.reduce(dm[m2] * unit_n))
        # internal: d(s a_k) = -s(d a_k)
        for k in range(n):
            H = A.hom(ch[k + 1], ch[k])
            eps = (mdeg + sum(sdeg[:k])) % 2
            da = H.d[:, aa[k]]
            for b, coef in _project_reduced(A, ch[k + 1], ch[k], da).items():
                s = -1 if eps else 1
                add(i, (ch, m, aa[:k] + (b,) + aa[k + 1 :]), F.reduce(-s * coef * unit_n))
        if n == 0:
            continue
        # mu(m, s a1) = (-1)^{|m|} m.a1,  m.a = (-1)^{|m||a|} M(a) m
        a1deg = adeg(ch, 1, aa[0])
        col = M.basis_map(ch[1], ch[0], aa[0])[:, m]
        s0 = (-1) ** ((mdeg + mdeg * a1deg) % 2)
        for m2 in np.flatnonzero(col != 0):
            add(i, (ch[1:], int(m2), aa[1:]), F.reduce(s0 * col[m2] * unit_n))
        # mu(s ak, s a(k+1)) = (-1)^{|s ak|} s(ak a(k+1))
        for k in range(n - 1):
            eps = (mdeg + sum(sdeg[:k]) + sdeg[k]) % 2
            c = A.comp_tensor(ch[k + 2], ch[k + 1], ch[k])[:, aa[k], aa[k + 1]]
            for b, coef in _project_reduced(A, ch[k + 2], ch[k], c).items():
                s = -1 if eps else 1
                add(i, (ch[: k + 1] + ch[k + 2 :], m, aa[:k] + (b,) + aa[k + 2 :]), F.reduce(s * coef * unit_n))
        # mu(s an, u) = -an u: coefficient -an on the shorter chain
        eps = (mdeg + sum(sdeg[:-1])) % 2
        H = A.hom(ch[-1], ch[-2])
        e = F.zeros(H.dim)
        e[aa[-1]] = F(1 if eps else -1)
        add(i, (ch[:-1], m, aa[:-1]), e)
    P = semi_free_module(A, gens, dgen, f"bar({M.name})")
    # projection: m (x) u |-> m.u for length-0 generators
    comps = {}
    for W in A.objects:
        mat = F.zeros((M.dim(W), P.dim(W)))
        o = 0
        for i, (ch, m, aa) in enumerate(keys):
            H = A.hom(W, ch[-1])
            if not aa:
                mdeg = M.value(ch[0]).degrees[m]
                for u in range(H.dim):
                    s = -1 if (mdeg * H.degrees[u]) % 2 else 1
                    mat[:, o + u] = F.reduce(s * M.basis_map(W, ch[0], u)[:, m])
            o += H.dim
        comps[W] = mat
    pi = NatTransform(P, M, 0, comps)
    lengths = [len(k[2]) for k in keys]
    steps = _bar_steps(A, gens, lengths)
    cert = certify(P, steps)
    qi = all(is_quasi_iso(pi.component_map(W)) for W in A.objects)
    if order is not None and max_length >= len(A.objects) - 1:
        status = "complete" if qi else "insufficient"
    else:
        status = "truncated-quasi-iso" if qi else "insufficient"
    return Resolution(P, pi, cert, status, gens, lengths)


def _bar_steps(A: DgCategory, gens: list, lengths: list) -> list:
    """Filtration by length, then by degree descending."""
    groups: dict = {}
    for i, g in enumerate(gens):
        groups.setdefault((lengths[i], -g.degree), []).append(i)
    steps = []
    for key in sorted(groups):
        steps.append([CertificateEntry(gens[i].obj, -gens[i].degree, generator_element(A, gens, i))
                      for i in groups[key]])
    # elements live in P(obj); rebuild against the full generator list
    return steps


def check_resolution(M: DgModule, res: Resolution) -> Report:
    rep = Report(f"resolution of {M.name}".strip())
    rep.add("resolution is a valid module", validate_module(res.module).ok)
    pi = res.projection
    rep.add("projection is a closed natural transformation",
            pi.is_closed() and validate_transform(pi).ok)
    bad = [X for X in M.base.objects if not is_quasi_iso(pi.component_map(X))]
    rep.add("projection is a quasi-isomorphism at every object", not bad, objects=bad)
    rep.add("semi-free certificate verifies",
            res.certificate is not None and is_semi_free(res.module, res.certificate))
    rep.add("construction terminated", res.status == "complete" or None, status=res.status)
    return rep


# --------------------------------------------------------------------------
# h-projectivity evidence


def hprojective_battery_check(M: DgModule, battery: list) -> Report:
    """``H^0 Hom(M, N) = 0`` for every acyclic ``N`` in the battery."""
    rep = Report(f"h-projective evidence {M.name}".strip())
    if not battery:
        rep.add("battery nonempty", None, reason="no evidence: empty battery")
        return rep
    rejected = [i for i, N in enumerate(battery) if not is_acyclic(N).acyclic]
    rep.add("battery members acyclic", not rejected, rejected=rejected)
    if rejected:
        return rep
    bad = []
    for i, N in enumerate(battery):
        hc = module_hom_complex(M, N)
        h = cohomology_dims(hc.complex)
        if h.get(0, 0):
            bad.append({"battery": i, "H0": h[0]})
    rep.add("H^0 Hom(M, N) = 0 for every battery member", not bad, witnesses=bad[:5],
            battery_size=len(battery))
    return rep


def default_battery(A: DgCategory) -> list:
    """At least five acyclic modules: cones of identities on Yoneda modules, shifts and a sum."""
    bat = acyclic_battery(A)
    if len(bat) >= 2:
        bat.append(direct_sum_modules(bat[0], bat[-1]))
    bat.append(shift_module(bat[0], -1))
    bat.append(shift_module(bat[-2], 1))
    return bat


# --------------------------------------------------------------------------
# homotopy equivalences of modules


@dataclass
class HomotopyEquivalence:
    forward: NatTransform  # M -> N
    backward: NatTransform  # N -> M
    homotopy_source: NatTransform  # degree -1 on M with d h = g f - 1
    homotopy_target: NatTransform  # degree -1 on N with d h = f g - 1


@dataclass
class EquivalenceResult:
    status: str  # equivalent | not-equivalent | unknown
    witness: Optional[HomotopyEquivalence] = None
    searched: int = 0
    reason: str = ""


def _h0_data(hc: HomComplex):
    H = cohomology(hc.complex, 0)
    return H


def _compose_in(hc_out: HomComplex, g: NatTransform, f: NatTransform) -> np.ndarray:
    F = f.field
    t = NatTransform(f.source, g.target, g.degree + f.degree,
                     {X: F.matmul(g[X], f[X]) for X in f.components})
    return hc_out.coords(t)


def _solve_homotopy(hc: HomComplex, t: NatTransform) -> Optional[NatTransform]:
    """``h`` of degree -1 with ``d h = t`` (t closed of degree 0), or None."""
    F = hc.source.field
    C = hc.complex
    rows, cols = C.indices(0), C.indices(-1)
    v = hc.coords(t)
    if not cols:
        return zero_like(hc, -1) if la.is_zero(v) else None
    x = la.solve(F, C.d[np.ix_(rows, cols)], v[rows])
    if x is None:
        return None
    full = F.zeros(C.dim)
    full[cols] = x
    h = hc.transform(full)
    return NatTransform(h.source, h.target, -1, h.components)


def zero_like(hc: HomComplex, degree: int) -> NatTransform:
    F = hc.source.field
    return NatTransform(hc.source, hc.target, degree,
                        {X: F.zeros((hc.target.dim(X), hc.source.dim(X))) for X in hc.source.base.objects})


def _iter_classes(F: Field, k: int, budget: int, seed: int):
    """All coefficient vectors over F_p (if within budget), else seeded random ones."""
    if F.is_finite and F.p ** k <= budget:
        for c in itertools.product(range(F.p), repeat=k):
            yield F.array(list(c)) if k else F.zeros(0)
        return
    rng = np.random.default_rng(seed)
    for _ in range(budget):
        yield F.random(rng, k)


def homotopy_equivalence_modules(M: DgModule, N: DgModule, seed: int = 0, budget: int = 4096) -> EquivalenceResult:
    """Search the H^0 classes of ``Hom(M, N)`` for an isomorphism in ``H^0(dgm(A))``.

    For each candidate ``f`` the inverse is found by solving the linear
    conditions ``[g][f] = 1`` and ``[f][g] = 1`` on ``H^0(Hom(N, M))``.
    Over ``F_p`` with ``p^dim <= budget`` the search is exhaustive and the
    answer is decisive; otherwise a failed search is ``unknown``.
    """
    if not M.base.same_as(N.base):
        raise ValueError("modules live over different categories")
    F = M.field
    A = M.base
    coh_m = {X: cohomology_dims(M.value(X)) for X in A.objects}
    coh_n = {X: cohomology_dims(N.value(X)) for X in A.objects}
    obstruction = coh_m != coh_n
    if obstruction and F.is_finite:
        return EquivalenceResult("not-equivalent", reason="cohomology dimensions differ")
    hMN, hNM = module_hom_complex(M, N), module_hom_complex(N, M)
    hMM, hNN = module_hom_complex(M, M), module_hom_complex(N, N)
    H1, H2 = _h0_data(hMN), _h0_data(hNM)
    E1, E2 = _h0_data(hMM), _h0_data(hNN)
    fs = [hMN.transform(H1.reps[:, i]) for i in range(H1.dim)]
    gs = [hNM.transform(H2.reps[:, i]) for i in range(H2.dim)]
    # T1[:, j, i] = [g_j f_i] in H^0 End(M); T2[:, j, i] = [f_i g_j] in H^0 End(N)
    T1 = F.zeros((E1.dim, len(gs), len(fs)))
    T2 = F.zeros((E2.dim, len(gs), len(fs)))
    for i, f in enumerate(fs):
        for j, g in enumerate(gs):
            T1[:, j, i] = E1.classify(_compose_in(hMM, g, f))
            T2[:, j, i] = E2.classify(_compose_in(hNN, f, g))
    one_m = E1.classify(hMM.coords(identity_transform(M)))
    one_n = E2.classify(hNN.coords(identity_transform(N)))
    exhaustive = F.is_finite and F.p ** len(fs) <= budget
    searched = 0
    for c in _iter_classes(F, len(fs), budget, seed):
        searched += 1
        S = F.reduce(np.concatenate([np.einsum("aji,i->aj", T1, c), np.einsum("aji,i->aj", T2, c)], axis=0)) \
            if len(fs) else F.zeros((E1.dim + E2.dim, len(gs)))
        rhs = np.concatenate([one_m, one_n])
        x = la.solve(F, S, rhs) if S.shape[0] else F.zeros(len(gs))
        if x is None:
            continue
        fv = F.matmul(H1.reps, c) if len(fs) else F.zeros(hMN.complex.dim)
        gv = F.matmul(H2.reps, x) if len(gs) else F.zeros(hNM.complex.dim)
        f = _at_degree(hMN.transform(fv), 0)
        g = _at_degree(hNM.transform(gv), 0)
        w = _witness(M, N, f, g, hMM, hNN)
        if w is not None:
            return EquivalenceResult("equivalent", w, searched)
    if exhaustive:
        return EquivalenceResult("not-equivalent", None, searched, "exhaustive search over H^0 classes")
    reason = "bounded search found no equivalence"
    if obstruction:
        reason += "; cohomology dimensions differ"
    return EquivalenceResult("unknown", None, searched, reason)


def _at_degree(t: NatTransform, n: int) -> NatTransform:
    return NatTransform(t.source, t.target, n, t.components)


def _witness(M, N, f, g, hMM, hNN) -> Optional[HomotopyEquivalence]:
    F = M.field
    gf = NatTransform(M, M, 0, {X: F.reduce(F.matmul(g[X], f[X]) - F.eye(M.dim(X))) for X in M.base.objects})
    fg = NatTransform(N, N, 0, {X: F.reduce(F.matmul(f[X], g[X]) - F.eye(N.dim(X))) for X in N.base.objects})
    h1 = _solve_homotopy(hMM, gf)
    h2 = _solve_homotopy(hNN, fg)
    if h1 is None or h2 is None:
        return None
    w = HomotopyEquivalence(f, g, h1, h2)
    return w if check_homotopy_equivalence(w) else None


def check_homotopy_equivalence(w: HomotopyEquivalence) -> bool:
    """Exact verification of the maps and homotopies."""
    f, g = w.forward, w.backward
    M, N = f.source, f.target
    F = M.field
    for t in (f, g):
        if t.degree != 0 or not t.is_closed() or not validate_transform(t).ok:
            return False
    for h, a, b, Mod in ((w.homotopy_source, g, f, M), (w.homotopy_target, f, g, N)):
        if h.degree != -1 or not validate_transform(h).ok:
            return False
        dh = h.differential()
        for X in Mod.base.objects:
            want = F.reduce(F.matmul(a[X], b[X]) - F.eye(Mod.dim(X)))
            if not np.array_equal(dh[X], want):
                return False
    return True


def brute_force_equivalent(M: DgModule, N: DgModule) -> bool:
    """Enumerate all pairs in ``Z^0 Hom(M, N) x Z^0 Hom(N, M)`` (tiny modules over F_p only)."""
    F = M.field
    if not F.is_finite:
        raise ValueError("brute force needs a finite field")
    hMN, hNM = module_hom_complex(M, N), module_hom_complex(N, M)
    hMM, hNN = module_hom_complex(M, M), module_hom_complex(N, N)
    Z1, Z2 = cycles(hMN.complex, 0), cycles(hNM.complex, 0)

    def elems(Z):
        k = Z.shape[1]
        for c in itertools.product(range(F.p), repeat=k):
            yield F.matmul(Z, F.array(list(c))) if k else F.zeros(Z.shape[0])

    def boundary(hc, t):
        return _solve_homotopy(hc, t) is not None

    gs = [_at_degree(hNM.transform(v), 0) for v in elems(Z2)]
    for fv in elems(Z1):
        f = _at_degree(hMN.transform(fv), 0)
        for g in gs:
            gf = NatTransform(M, M, 0, {X: F.reduce(F.matmul(g[X], f[X]) - F.eye(M.dim(X))) for X in M.base.objects})
            if not boundary(hMM, gf):
                continue
            fg = NatTransform(N, N, 0, {X: F.reduce(F.matmul(f[X], g[X]) - F.eye(N.dim(X))) for X in N.base.objects})
            if boundary(hNN, fg):
                return True
    return False


# --------------------------------------------------------------------------
# essential image and right quasi-representability


@dataclass
class Membership:
    status: str  # found | none | unknown
    obj: object = None
    witness: Optional[HomotopyEquivalence] = None


def essim_membership(M: DgModule, seed: int = 0, budget: int = 4096) -> Membership:
    """An object ``Y`` with ``M`` homotopy equivalent to ``h^Y``, if any."""
    B = M.base
    unknown = False
    for Y in B.objects:
        r = homotopy_equivalence_modules(M, yoneda(B, Y), seed, budget)
        if r.status == "equivalent":
            return Membership("found", Y, r.witness)
        if r.status == "unknown":
            unknown = True
    return Membership("unknown" if unknown else "none")


@dataclass
class RqrReport:
    kernel: object
    verdicts: dict  # X -> Membership

    @property
    def status(self) -> str:
        st = {m.status for m in self.verdicts.values()}
        if "none" in st:
            return "fail"
        if "unknown" in st:
            return "unknown"
        return "pass"

    def to_report(self) -> Report:
        rep = Report(f"right quasi-representability {getattr(self.kernel, 'name', '')}".strip())
        for X, m in self.verdicts.items():
            ok = {"found": True, "none": False}.get(m.status)
            rep.add(f"Phi({X}) in the essential image", ok,
                    witness=m.obj if m.status == "found" else None,
                    note="not found (bounded search)" if m.status == "unknown" else None)
        return rep


def rqr_check(E, seed: int = 0, budget: int = 4096) -> RqrReport:
    from .kernels import curry_kernel

    Phi = curry_kernel(E)
    return RqrReport(E, {X: essim_membership(Phi(X), seed, budget) for X in E.left.objects})


# --------------------------------------------------------------------------
# kernels


@dataclass
class KernelResolution:
    kernel: object
    projection: NatTransform
    status: str
    resolution: Resolution


def resolve_kernel(E, max_length: Optional[int] = None) -> KernelResolution:
    from .kernels import Kernel

    res = bar_resolution(E.carrier, max_length)
    K2 = Kernel(E.left, E.right, res.module, f"res({E.name})")
    return KernelResolution(K2, res.projection, res.status, res)


def slice_certificate(KR: KernelResolution, X) -> Optional[SemiFreeCertificate]:
    """Certificate for ``Phi_{E'}(X)``: generators ``E'(a (x) 1) g`` ordered by step, then degree."""
    from .kernels import curry_kernel

    E2 = KR.kernel
    A, B, F = E2.left, E2.right, E2.field
    P = E2.carrier
    sl = curry_kernel(E2)(X)
    cert = KR.resolution.certificate
    if cert is None:
        return None
    steps = []
    for step in cert.steps:
        by_deg: dict = {}
        for e in step:
            Xg, Yg = e.obj
            H = A.hom(Xg, X)
            for a in range(H.dim):
                f = np.kron(_unit_vec(F, H.dim, a), B.unit(Yg))
                v = F.matmul(P.on((X, Yg), (Xg, Yg), F.reduce(f)), e.element)
                deg = -e.shift + H.degrees[a]
                by_deg.setdefault(deg, []).append(CertificateEntry(Yg, -deg, F.reduce(v)))
        for deg in sorted(by_deg, reverse=True):
            steps.append(by_deg[deg])
    return certify(sl, steps)


def _unit_vec(F: Field, n: int, i: int) -> np.ndarray:
    v = F.zeros(n)
    v[i] = F(1)
    return v


# --------------------------------------------------------------------------
# the micro count


def rqr_battery(B: DgCategory) -> list:
    """Kernels ``K -> B``: Yoneda modules, padded by contractibles, and non-representable decoys."""
    from .categories import field_category
    from .kernels import Kernel
    from .modules import lift_left

    F = B.field
    K = field_category(F)
    mods = []
    ys = {Y: yoneda(B, Y) for Y in B.objects}
    for Y in B.objects:
        mods.append(ys[Y])
        for Z in B.objects:
            mods.append(direct_sum_modules(ys[Y], cone_transform(identity_transform(ys[Z]))))
        mods.append(shift_module(ys[Y], 1))
    for Y in B.objects:
        try:
            mods.append(simple_module(B, Y))
        except ValueError:
            pass
    if len(B.objects) >= 2:
        mods.append(direct_sum_modules(*ys.values()))
    mods.append(zero_module(B))
    out = []
    for M in mods:
        L = lift_left(M)
        base = tensor_categories(opposite(K), B)
        out.append(Kernel(K, B, make_module(base, L.values, L.action, M.name), M.name))
    return out


@dataclass
class ClassCount:
    rqr_members: list
    classes: list  # list of lists of kernel names
    class_objects: list  # witness object per class
    h0_classes: list
    bijective: bool


def micro_class_count(B: DgCategory, seed: int = 0, budget: int = 4096) -> ClassCount:
    """Homotopy classes of right quasi-representable kernels ``K -> B`` against ``Iso(H^0(B))``."""
    from .kernels import curry_kernel

    members = []
    for E in rqr_battery(B):
        r = rqr_check(E, seed, budget)
        if r.status == "pass":
            members.append((E, r.verdicts["*"].obj))
    classes: list = []
    for E, Y in members:
        M = curry_kernel(E)("*")
        for cl in classes:
            N = curry_kernel(cl[0][0])("*")
            if homotopy_equivalence_modules(M, N, seed, budget).status == "equivalent":
                cl.append((E, Y))
                break
        else:
            classes.append([(E, Y)])
    iso = h0(B).iso_classes()
    cls_of = {X: i for i, c in enumerate(iso) for X in c}
    hit = [cls_of[cl[0][1]] for cl in classes]
    bijective = sorted(hit) == list(range(len(iso)))
    return ClassCount([E.name for E, _ in members], [[E.name for E, _ in cl] for cl in classes],
                     [cl[0][1] for cl in classes], iso, bijective)


__all__ = [
    "Generator", "semi_free_module", "generator_element", "CertificateEntry", "SemiFreeCertificate",
    "certify", "is_semi_free", "certificate_report", "yoneda_certificate", "Resolution",
    "bar_resolution", "check_resolution", "hprojective_battery_check", "default_battery",
    "HomotopyEquivalence", "EquivalenceResult", "homotopy_equivalence_modules",
    "check_homotopy_equivalence", "brute_force_equivalent", "Membership", "essim_membership",
    "RqrReport", "rqr_check", "KernelResolution", "resolve_kernel", "slice_certificate",
    "rqr_battery", "ClassCount", "micro_class_count",
]
