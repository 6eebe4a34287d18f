"""The acceptance battery: fifteen criteria, each returning a :class:`Report`.

Shared by ``dgkernels harness --suite paper-lemmas`` and the test suite.
Criteria that are stated over F_2 run over F_2 whatever field is requested;
the sign-flip mutations run over Q since every sign is invisible mod 2.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import corpus, io
from .categories import (
    DgCategory,
    DgFunctor,
    compose_functors,
    diagonal_functor,
    identity_functor,
    inclusion_functor,
    opposite,
    tensor_categories,
    tensor_functors,
    validate_dg_category,
    validate_functor,
)
from .complexes import Complex
from .kernels import (
    Kernel,
    associator,
    check_adjunction,
    check_kerprod,
    compose_kernels,
    curry_compose_iso,
    curry_kernel,
    ext_compose_iso,
    ext_sum_iso,
    ext_yoneda_iso,
    unit_kernel,
    unit_left_iso,
    unit_right_iso,
    validate_kernel,
)
from .linalg import Field
from .modules import (
    DgModule,
    NatTransform,
    check_yoneda,
    cone_transform,
    direct_sum_modules,
    identity_transform,
    is_acyclic,
    is_natural_iso,
    is_quasi_iso_transform,
    make_module,
    shift_module,
    simple_module,
    validate_module,
    validate_transform,
    yoneda,
)
from .paths import (
    StandardHomotopyError,
    check_fibration,
    check_quasi_equivalence,
    construct_standard_homotopy,
    mor_category,
    path_object,
)
from .report import Report
from .resolutions import (
    Generator,
    bar_resolution,
    brute_force_equivalent,
    check_resolution,
    default_battery,
    homotopy_equivalence_modules,
    hprojective_battery_check,
    is_semi_free,
    micro_class_count,
    resolve_kernel,
    semi_free_module,
    slice_certificate,
)

F2 = Field(2)
QQ = Field(0)


def _iso(t) -> bool:
    return t is not None and is_natural_iso(t)


def bundled_modules(F: Field) -> list[DgModule]:
    """Yoneda and simple modules over every bundled category."""
    out = []
    for A in corpus.bundled_categories(F).values():
        for X in A.objects:
            out.append(yoneda(A, X))
        for X in A.objects:
            try:
                M = simple_module(A, X)
            except ValueError:
                continue
            if validate_module(M).ok:
                out.append(M)
    return out


# --------------------------------------------------------------------------
# 1. validators and the mutation battery


def _op_without_sign(A: DgCategory) -> DgCategory:
    homs = {(X, Y): A.hom(Y, X) for X in A.objects for Y in A.objects}
    comp = {(X, Y, Z): np.transpose(t, (0, 2, 1)) for (Z, Y, X), t in A.comp.items()}
    return DgCategory(A.field, A.objects, homs, comp, dict(A.units), "op without sign")


def _tensor_without_sign(A: DgCategory, B: DgCategory) -> DgCategory:
    T = tensor_categories(A, B)
    F = T.field
    comp = {}
    for key in T.comp:
        (X1, Y1), (X2, Y2), (X3, Y3) = key
        t = np.einsum("aik,bjl->abijkl", A.comp[(X1, X2, X3)], B.comp[(Y1, Y2, Y3)])
        s = t.shape
        comp[key] = F.reduce(t.reshape(s[0] * s[1], s[2] * s[3], s[4] * s[5]))
    return DgCategory(F, T.objects, T.homs, comp, T.units, "tensor without sign")


def _yoneda_without_sign(A: DgCategory, X) -> DgModule:
    action = {}
    for W, V in itertools.product(A.objects, repeat=2):
        c = A.comp_tensor(W, V, X)
        if c.size:
            action[(W, V)] = np.transpose(c, (0, 2, 1))
    return make_module(A, {W: A.hom(W, X) for W in A.objects}, action, "h without sign")


def _replace_comp(A: DgCategory, key, index, value) -> DgCategory:
    comp = {k: v.copy() for k, v in A.comp.items()}
    t = comp.get(key, A.comp_tensor(*key)).copy()
    t[index] = A.field(value)
    comp[key] = t
    return DgCategory(A.field, A.objects, dict(A.homs), comp, dict(A.units), A.name + "*")


def _replace_hom(A: DgCategory, key, C: Complex) -> DgCategory:
    homs = dict(A.homs)
    homs[key] = C
    return DgCategory(A.field, A.objects, homs, dict(A.comp), dict(A.units), A.name + "*")


def mutation_battery() -> list[tuple[str, Callable[[], Report], str]]:
    """Corrupted instances over Q: (description, validator thunk, violated check)."""
    F = QQ
    cats = corpus.bundled_categories(F)
    A2, C, D, E, O = cats["A2"], cats["C"], cats["D"], cats["E"], cats["O"]
    out = []
    out.append(("opposite of C (x) O with the Koszul sign dropped",
                lambda: validate_dg_category(_op_without_sign(tensor_categories(C, O))), "Leibniz rule"))
    out.append(("C (x) O with the interchange sign dropped",
                lambda: validate_dg_category(_tensor_without_sign(C, O)), "Leibniz rule"))
    out.append(("E (x) D with the interchange sign dropped",
                lambda: validate_dg_category(_tensor_without_sign(E, D)), "Leibniz rule"))

    def broken_assoc():
        names = E.hom("y", "y").names
        return _replace_comp(E, ("x", "y", "y"), (0, names.index("ab"), 0), 0)

    out.append(("E with ab o a set to zero", lambda: validate_dg_category(broken_assoc()), "associativity"))

    def non_closed_unit():
        B = corpus.category_from_table(F, ["x"], {("x", "x"): [("e", 1)]}, name="U")
        hom = B.hom("x", "x")
        d = hom.d.copy()
        d[1, 0] = F(1)
        return _replace_hom(B, ("x", "x"), Complex(F, hom.degrees, d, hom.names))

    out.append(("unit with nonzero differential", lambda: validate_dg_category(non_closed_unit()),
                "unit closed of degree 0"))

    def zero_unit():
        units = dict(A2.units)
        units["x"] = F.zeros(A2.dim("x", "x"))
        return DgCategory(F, A2.objects, A2.homs, A2.comp, units, "A2 with zero unit")

    out.append(("A2 with a zero unit", lambda: validate_dg_category(zero_unit()), "left unit law"))

    def d_squared():
        return corpus.category_from_table(
            F, ["x", "y"], {("x", "y"): [("h", -1), ("c", 0), ("k", 1)]},
            differential={"h": {"c": 1}, "c": {"k": 1}}, name="d2")

    out.append(("hom complex with d^2 != 0", lambda: validate_dg_category(d_squared()), "hom complexes: d^2 = 0"))

    def bad_degree():
        names_y, names_xy = C.hom("y", "y").names, C.hom("x", "y").names
        return _replace_comp(C, ("x", "y", "y"), (names_xy.index("h"), names_y.index("1_y"), names_xy.index("c")), 1)

    out.append(("C with 1_y o c = h added", lambda: validate_dg_category(bad_degree()), "composition has degree 0"))
    out.append(("h^z over O with the Koszul sign dropped",
                lambda: validate_module(_yoneda_without_sign(O, "z")), "composition with Koszul sign"))
    OC = tensor_categories(O, C)
    out.append(("h^(y,y) over O (x) C with the Koszul sign dropped",
                lambda: validate_module(_yoneda_without_sign(OC, ("y", "y"))), "compatible with differentials"))
    DD = tensor_categories(opposite(D), D)
    out.append(("diagonal kernel of D with the Koszul sign dropped",
                lambda: validate_kernel(Kernel(D, D, _yoneda_without_sign(DD, ("*", "*")))),
                "composition with Koszul sign"))

    def unit_scaled():
        S = simple_module(A2, "y")
        return DgModule(A2, S.values, {k: F.reduce(2 * t) for k, t in S.action.items()}, "2 S_y")

    out.append(("simple module whose unit acts by 2", lambda: validate_module(unit_scaled()),
                "unit acts as identity"))

    def wrong_degree():
        h = yoneda(A2, "y")
        return DgModule(A2, {X: Complex(F, tuple(n + (X == "x") for n in h.value(X).degrees), h.value(X).d)
                             for X in A2.objects}, h.action, "twisted")

    out.append(("h^y with one value regraded", lambda: validate_module(wrong_degree()),
                "action has the degree of the morphism"))

    def collapse_broken():
        G = corpus.bundled_functors(F)["A3->A2 collapse"]
        maps = {k: v.copy() for k, v in G.maps.items()}
        maps[("v0", "v2")][:] = 0
        return DgFunctor(G.source, G.target, G.obj, maps, "collapse*")

    out.append(("collapse functor killing a02", lambda: validate_functor(collapse_broken()),
                "preserves composition"))

    def not_chain():
        G = identity_functor(C)
        maps = {k: v.copy() for k, v in G.maps.items()}
        j = C.hom("x", "y").names.index("h")
        maps[("x", "y")][:, j] = 0
        return DgFunctor(C, C, G.obj, maps, "id*")

    out.append(("identity of C killing h", lambda: validate_functor(not_chain()), "hom components are chain maps"))
    return out


def criterion_validators(F: Field) -> Report:
    rep = Report("validator soundness")
    bad = []
    for n, A in corpus.bundled_categories(F).items():
        if not validate_dg_category(A).ok:
            bad.append(n)
    for n, G in corpus.bundled_functors(F).items():
        if not validate_functor(G).ok:
            bad.append(n)
    mods = bundled_modules(F)
    for M in mods:
        if not validate_module(M).ok:
            bad.append(f"{M.name} over {M.base.name}")
    kers = corpus.bundled_kernels(F)
    for n, E in kers.items():
        if not validate_kernel(E).ok:
            bad.append(n)
    rep.add("bundled categories, functors, modules and kernels validate", not bad, failing=bad,
            modules=len(mods), kernels=len(kers))
    battery = mutation_battery()
    for desc, run, check in battery:
        r = run()
        rep.add(f"mutation caught: {desc}", check in r.failed_checks(), expected=check,
                failed=sorted(r.failed_checks()))
    rep.add("mutation battery has at least 10 cases", len(battery) >= 10, size=len(battery))
    return rep


# --------------------------------------------------------------------------
# 2. Yoneda


def criterion_yoneda(F: Field) -> Report:
    rep = Report("dg Yoneda")
    count, slow, bad = 0, [], []
    for A in corpus.bundled_categories(F).values():
        mods = [yoneda(A, X) for X in A.objects]
        for X in A.objects:
            try:
                mods.append(simple_module(A, X))
            except ValueError:
                pass
        mods = [M for M in mods if validate_module(M).ok]
        for X in A.objects:
            for M in mods:
                t0 = time.perf_counter()
                r = check_yoneda(A, X, M)
                if time.perf_counter() - t0 >= 1.0:
                    slow.append(f"{A.name}:{X}:{M.name}")
                count += 1
                if not r.ok:
                    bad.append(f"{A.name}:{X}:{M.name}")
    rep.add("Hom(h^X, M) ~ M(X) degreewise", not bad, failing=bad)
    rep.add("at least 20 instances", count >= 20, instances=count)
    rep.add("each instance under 1 s", not slow, slow=slow)
    return rep


# --------------------------------------------------------------------------
# 3. unit and associativity isomorphisms


def _composable_triples(kers: dict) -> list:
    items = list(kers.items())
    out = []
    for (n1, E1), (n2, E2), (n3, E3) in itertools.product(items, repeat=3):
        if E1.right.same_as(E2.left) and E2.right.same_as(E3.left):
            out.append((n1, n2, n3))
    return out


ASSOC_TRIPLES = [
    ("ker(A2->A3 outer)", "ker(A3->A2 collapse)", "ker(A2->C)"),
    ("ker(A2->A3 upper)", "diag(A3)", "ker(A3->A2 collapse)"),
    ("h_y#h^y (A2->O)", "diag(O)", "(h_x#h^*)[1] (O->D)"),
    ("ker(A3->A2 collapse)", "ker(A2->E)", "diag(E)"),
]


def criterion_tensor_unit_assoc(F: Field) -> Report:
    rep = Report("tensor unit and associativity")
    kers = corpus.bundled_kernels(F)
    bad_l, bad_r = [], []
    for n, E in kers.items():
        if not _iso(unit_left_iso(E)):
            bad_l.append(n)
        if not _iso(unit_right_iso(E)):
            bad_r.append(n)
    rep.add("diag(A) (x)_A E ~ E on every bundled kernel", not bad_l, failing=bad_l, kernels=len(kers))
    rep.add("E (x)_B diag(B) ~ E on every bundled kernel", not bad_r, failing=bad_r, kernels=len(kers))
    bad_a = []
    for names in ASSOC_TRIPLES:
        E1, E2, E3 = (kers[n] for n in names)
        if not _iso(associator(E1.carrier, E2.carrier, E3.carrier)):
            bad_a.append(list(names))
    rep.add("associativity comparison is an isomorphism on kernel triples", not bad_a, failing=bad_a,
            triples=len(ASSOC_TRIPLES))
    return rep


# --------------------------------------------------------------------------
# 4. adjunction


def adjunction_triples(F: Field) -> list[tuple[Kernel, DgModule, DgModule]]:
    kers = corpus.bundled_kernels(F)
    cats = corpus.bundled_categories(F)
    A2, A3, C, O, D = cats["A2"], cats["A3"], cats["C"], cats["O"], cats["D"]
    out = [
        (kers["diag(A2)"], yoneda(A2, "x"), yoneda(A2, "y")),
        (kers["diag(A2)"], simple_module(A2, "y"), yoneda(A2, "y")),
        (kers["ker(A2->A3 outer)"], simple_module(A2, "x"), yoneda(A3, "v1")),
        (kers["ker(A2->A3 upper)"], yoneda(A2, "y"), simple_module(A3, "v2")),
        (kers["ker(A3->A2 collapse)"], simple_module(A3, "v1"), yoneda(A2, "y")),
        (kers["ker(A2->C)"], direct_sum_modules(yoneda(A2, "x"), simple_module(A2, "y")), yoneda(C, "y")),
        (kers["diag(O)"], yoneda(O, "y"), shift_module(yoneda(O, "z"), 1)),
        (kers["h_y#h^y (A2->O)"], simple_module(A2, "y"), yoneda(O, "z")),
        (kers["(h_x#h^*)[1] (O->D)"], simple_module(O, "x"), yoneda(D, "*")),
        (kers["diag(D)"], yoneda(D, "*"), cone_transform(identity_transform(yoneda(D, "*")))),
        (kers["ker(D->K)"], shift_module(yoneda(D, "*"), -1), yoneda(kers["ker(D->K)"].right, "*")),
        (kers["diag(C)"], simple_module(C, "x"), yoneda(C, "y")),
    ]
    return out


def criterion_adjunction(F: Field) -> Report:
    rep = Report("extension left adjoint to restriction")
    triples = adjunction_triples(F)
    bad = []
    for E, M, N in triples:
        r = check_adjunction(E, M, N)
        if not r.ok:
            bad.append({"kernel": E.name, "M": M.name, "N": N.name, "failed": sorted(r.failed_checks())})
    rep.add("iso of hom complexes, naturality, unit, counit and triangle identities", not bad, failing=bad)
    rep.add("at least 10 triples", len(triples) >= 10, triples=len(triples))
    return rep


# --------------------------------------------------------------------------
# 5. extension of a Yoneda module


def criterion_ext_yoneda(F: Field) -> Report:
    rep = Report("extension of Yoneda modules")
    bad, count, bad_sum = [], 0, []
    for n, E in corpus.bundled_kernels(F).items():
        A = E.left
        for X in A.objects:
            count += 1
            if not _iso(ext_yoneda_iso(E, X)):
                bad.append([n, X])
        Ms = [yoneda(A, X) for X in A.objects]
        Ms.append(shift_module(Ms[0], 1))
        t = ext_sum_iso(E, Ms)
        if not is_natural_iso(t):
            bad_sum.append(n)
    rep.add("ext_E(h^X) ~ Phi_E(X) for every bundled kernel and object", not bad, failing=bad, instances=count)
    rep.add("ext preserves finite direct sums", not bad_sum, failing=bad_sum)
    return rep


# --------------------------------------------------------------------------
# 6. composition of extensions


def criterion_ext_composition(F: Field) -> Report:
    rep = Report("extension along a composite kernel")
    kers = corpus.bundled_kernels(F)
    pairs = [(a, b) for a, b in itertools.product(kers, repeat=2) if kers[a].right.same_as(kers[b].left)]
    bad, bad_c = [], []
    for a, b in pairs:
        E1, E2 = kers[a], kers[b]
        M = yoneda(E1.left, E1.left.objects[0])
        if not _iso(ext_compose_iso(E1, E2, M)):
            bad.append([a, b])
        for X in E1.left.objects:
            if not _iso(curry_compose_iso(E1, E2, X)):
                bad_c.append([a, b, X])
    rep.add("ext_E2 ext_E1 (M) ~ ext_(E1 E2)(M) on all composable pairs", not bad, failing=bad, pairs=len(pairs))
    rep.add("ext_E2 (Phi_E1(X)) ~ Phi_(E1 E2)(X) objectwise", not bad_c, failing=bad_c)
    names = ASSOC_TRIPLES[0]
    E1, E2, E3 = (kers[n] for n in names)
    left = compose_kernels(compose_kernels(E1, E2), E3)
    right = compose_kernels(E1, compose_kernels(E2, E3))
    t = associator(E1.carrier, E2.carrier, E3.carrier)
    ok = _iso(t) and t.source.same_as(left.carrier) and t.target.same_as(right.carrier)
    rep.add("kernel composition is associative up to isomorphism", ok, triple=list(names))
    return rep


# --------------------------------------------------------------------------
# 7. external products


def criterion_kerprod(F: Field) -> Report:
    rep = Report("external product of kernels")
    kers = corpus.bundled_kernels(F)
    pairs = [("diag(A2)", "diag(A2)"), ("diag(D)", "diag(O)"), ("ker(A2->C)", "diag(D)"),
             ("h_y#h^y (A2->O)", "ker(D->K)")]
    bad = []
    for a, b in pairs:
        r = check_kerprod(kers[a], kers[b])
        if not r.ok:
            bad.append({"pair": [a, b], "failed": sorted(r.failed_checks())})
    rep.add("both clauses hold degreewise", not bad, failing=bad, pairs=len(pairs))
    cats = corpus.bundled_categories(F)
    U = unit_kernel(cats["A2"])
    from .kernels import external_kernel_product

    P = external_kernel_product(U, U)
    T = unit_kernel(tensor_categories(cats["A2"], cats["A2"]))
    rep.add("diag # diag = diag of the tensor category", P.carrier.same_as(T.carrier))
    return rep


# --------------------------------------------------------------------------
# 8. path objects (over F_2)


def criterion_path_object(F: Field) -> Report:
    F = F2
    rep = Report("path objects over F2")
    for n, A in corpus.bundled_categories(F).items():
        PO = path_object(A)
        st_iota = compose_functors(PO.st, PO.iota)
        diag = diagonal_functor(A)
        rep.add(f"{n}: (s, t) o iota = diagonal", st_iota == diag and st_iota.obj == diag.obj)
        rep.add(f"{n}: iota is a quasi-equivalence", check_quasi_equivalence(PO.iota).ok)
        rep.add(f"{n}: (s, t) is a fibration", check_fibration(PO.st).ok)
        rep.add(f"{n}: Mor and P validate",
                validate_dg_category(mor_category(A)).ok and validate_dg_category(PO.category).ok)
    return rep


# --------------------------------------------------------------------------
# 9. standard homotopies


def homotopy_instances(F: Field) -> list:
    cats = corpus.bundled_categories(F)
    A2, A3, E, O = cats["A2"], cats["A3"], cats["E"], cats["O"]

    def coords(A, X, Y, name):
        v = F.zeros(A.dim(X, Y))
        v[A.hom(X, Y).names.index(name)] = F(1)
        return v

    out = [(identity_functor(A), identity_functor(A), {X: A.unit(X) for X in A.objects}) for A in (A2, A3, O)]
    px, py = corpus.object_functor(E, "x"), corpus.object_functor(E, "y")
    out.append((px, px, {"*": coords(E, "x", "x", "ba")}))
    out.append((px, py, {"*": coords(E, "x", "y", "a")}))
    return out


def criterion_standard_homotopy(F: Field) -> Report:
    rep = Report("standard homotopies")
    insts = homotopy_instances(F)
    bad = []
    for k, (Fn, Gn, alpha) in enumerate(insts):
        H, PB = construct_standard_homotopy(Fn, Gn, alpha)
        ok = validate_functor(H).ok and compose_functors(PB.s, H) == Fn and compose_functors(PB.t, H) == Gn
        ok = ok and all(compose_functors(PB.s, H).obj[X] == Fn(X) and compose_functors(PB.t, H).obj[X] == Gn(X)
                        for X in Fn.source.objects)
        if not ok:
            bad.append(k)
    rep.add("H validates with s H = F and t H = G", not bad, failing=bad, instances=len(insts))
    rep.add("at least 3 instances", len(insts) >= 3)
    A2 = corpus.a2(F)
    zero = {X: F.zeros(A2.dim(X, X)) for X in A2.objects}
    try:
        construct_standard_homotopy(identity_functor(A2), identity_functor(A2), zero)
        rejected = False
    except StandardHomotopyError as e:
        rejected = "components invertible in H^0" in e.report.failed_checks()
    rep.add("a non-invertible alpha is rejected", rejected)
    return rep


# --------------------------------------------------------------------------
# 10. bar resolutions


def criterion_resolutions(F: Field) -> Report:
    rep = Report("bar resolutions")
    cats = corpus.bundled_categories(F)
    bad, count = [], 0
    from .categories import directed_order

    directed = [n for n, A in cats.items() if directed_order(A) is not None]
    for n in directed:
        A = cats[n]
        mods = [yoneda(A, X) for X in A.objects]
        for X in A.objects:
            try:
                S = simple_module(A, X)
            except ValueError:
                continue
            if validate_module(S).ok:
                mods.append(S)
        for M in mods:
            count += 1
            res = bar_resolution(M)
            r = check_resolution(M, res)
            if not (res.complete and r.ok):
                bad.append({"category": n, "module": M.name, "status": res.status,
                            "failed": sorted(r.failed_checks())})
    rep.add("complete, exact quasi-isomorphism and certified on directed categories", not bad,
            failing=bad, categories=directed, modules=count)
    A2 = cats["A2"]
    Sy = simple_module(A2, "y")
    a = F.zeros(A2.dim("x", "y"))
    a[0] = F(1)
    model = semi_free_module(A2, [Generator("y", 0), Generator("x", -1)], {1: [(0, a)]}, "h^x -> h^y")
    res = bar_resolution(Sy)
    # the model maps onto S_y by sending the generator of h^y to the basis vector
    comps = {X: F.zeros((Sy.dim(X), model.dim(X))) for X in A2.objects}
    comps["y"][0, 0] = F(1)
    q = NatTransform(model, Sy, 0, comps)
    q_ok = validate_transform(q).ok and is_quasi_iso_transform(q)
    cone_ok = q_ok and is_acyclic(cone_transform(q)).acyclic
    rep.add("h^x -> h^y model maps quasi-isomorphically onto S_y (acyclic cone)", cone_ok)
    heq = homotopy_equivalence_modules(res.module, model)
    rep.add("bar(S_y) is homotopy equivalent to the h^x -> h^y model", heq.status == "equivalent",
            status=heq.status, bar_dims={X: res.module.dim(X) for X in A2.objects},
            model_dims={X: model.dim(X) for X in A2.objects})
    return rep


# --------------------------------------------------------------------------
# 11. slices of resolved kernels


def criterion_hproj(F: Field) -> Report:
    rep = Report("slices of resolved kernels are h-projective against the battery")
    from .categories import directed_order

    bad, sizes, count = [], {}, 0
    for n, E in corpus.bundled_kernels(F).items():
        base = E.carrier.base
        if directed_order(base) is None:
            continue
        KR = resolve_kernel(E)
        if KR.status != "complete":
            bad.append({"kernel": n, "status": KR.status})
            continue
        battery = default_battery(E.right)
        sizes[E.right.name] = len(battery)
        Phi = curry_kernel(KR.kernel)
        for X in E.left.objects:
            count += 1
            cert = slice_certificate(KR, X)
            sl = Phi(X)
            if cert is None or not is_semi_free(sl, cert):
                bad.append({"kernel": n, "object": X, "reason": "slice certificate"})
                continue
            if not hprojective_battery_check(sl, battery).ok:
                bad.append({"kernel": n, "object": X, "reason": "battery"})
    rep.add("every slice is certified semi-free and passes the battery", not bad, failing=bad, slices=count)
    rep.add("batteries have at least 5 acyclic modules", bool(sizes) and min(sizes.values()) >= 5, sizes=sizes)
    return rep


# --------------------------------------------------------------------------
# 12. homotopy equivalence decisions (over F_2)


def small_modules(F: Field) -> list[DgModule]:
    """Modules of total dimension at most 8 over a few bundled categories."""
    cats = corpus.bundled_categories(F)
    out = []
    for n in ("A2", "C", "D", "E"):
        A = cats[n]
        base = [yoneda(A, X) for X in A.objects]
        for X in A.objects:
            try:
                S = simple_module(A, X)
            except ValueError:
                continue
            if validate_module(S).ok:
                base.append(S)
        cands = list(base)
        cands += [shift_module(M, 1) for M in base[:2]]
        h = base[0]
        cands.append(direct_sum_modules(h, cone_transform(identity_transform(base[-1]))))
        cands.append(cone_transform(identity_transform(h)))
        out += [M for M in cands if M.total_dim() <= 8]
    return out


def criterion_heq_decisions(F: Field) -> Report:
    F = F2
    rep = Report("homotopy-equivalence decisions over F2")
    mods = small_modules(F)
    bad, undecided, count = [], [], 0
    by_base: dict = {}
    for M in mods:
        by_base.setdefault(id(M.base), []).append(M)
    for group in by_base.values():
        for M, N in itertools.combinations_with_replacement(group, 2):
            count += 1
            r = homotopy_equivalence_modules(M, N)
            if r.status == "unknown":
                undecided.append([M.name, N.name])
                continue
            if (r.status == "equivalent") != brute_force_equivalent(M, N):
                bad.append([M.name, N.name, r.status])
    rep.add("decisive on every pair", not undecided, undecided=undecided)
    rep.add("agrees with brute-force enumeration of Z^0", not bad, failing=bad, pairs=count)
    return rep


# --------------------------------------------------------------------------
# 13. micro count (over F_2)


def criterion_micro_count(F: Field) -> Report:
    F = F2
    rep = Report("micro count over F2")
    tc = micro_class_count(corpus.a2(F))
    rep.add("the rqr battery splits into |Iso(H^0(A2))| = 2 classes", len(tc.classes) == 2 == len(tc.h0_classes),
            classes=tc.classes, objects=tc.class_objects)
    rep.add("classes match H^0 isomorphism classes bijectively", tc.bijective)
    return rep


# --------------------------------------------------------------------------
# 14. tensoring with a quasi-equivalence (over F_2)


def criterion_tensor_qe(F: Field) -> Report:
    F = F2
    rep = Report("identity tensor a quasi-equivalence over F2")
    cats = corpus.bundled_categories(F)
    functors = [(f"iota_{n}", path_object(A).iota) for n, A in cats.items()]
    functors.append(("E[x] -> E", inclusion_functor(cats["E"], ["x"])))
    bad, checked = [], 0
    for _, G in functors:
        if not check_quasi_equivalence(G).ok:
            continue
        for m in ("A2", "D"):
            checked += 1
            T = tensor_functors(identity_functor(cats[m]), G)
            if not check_quasi_equivalence(T).ok:
                bad.append([m, G.name])
    rep.add("id (x) F is a quasi-equivalence whenever F is", not bad, failing=bad, instances=checked)
    return rep


# --------------------------------------------------------------------------
# 15. serialization and reports


def serialization_corpus(F: Field) -> list:
    cats = corpus.bundled_categories(F)
    out = list(cats.values())
    out += list(corpus.bundled_functors(F).values())
    out += list(corpus.bundled_kernels(F).values())
    out += bundled_modules(F)
    out += [identity_transform(yoneda(A, A.objects[0])) for A in cats.values()]
    out.append(mor_category(cats["A2"]))
    out.append(path_object(cats["C"]).category)
    return out


def criterion_serialization(F: Field) -> Report:
    from . import cli

    rep = Report("serialization and reports")
    objs = serialization_corpus(F)
    bad = []
    for o in objs:
        text = io.serialize(o)
        back = io.parse(text)
        if not io.same(o, back.obj) or io.serialize(back.obj) != text:
            bad.append(getattr(o, "name", "?"))
    rep.add("round trip is bit-exact on the corpus", not bad, failing=bad, objects=len(objs))
    files = corpus_files(F)
    bad_files = [p.name for p in files if io.serialize(io.load(p).obj) != p.read_text(encoding="utf-8")]
    rep.add("bundled document files re-serialize to their own text", bool(files) and not bad_files,
            failing=bad_files, files=len(files))
    runs = cli.sample_runs(F)
    invalid, nondet = [], []
    for argv in runs:
        code1, out1 = cli.run(argv + ["--json"])
        code2, out2 = cli.run(argv + ["--json"])
        if out1 != out2 or code1 != code2:
            nondet.append(" ".join(argv))
        if cli.schema_errors(out1):
            invalid.append(" ".join(argv))
    rep.add("reports validate against the schema", not invalid, failing=invalid, commands=len(runs))
    rep.add("reports are byte-identical for fixed inputs and seed", not nondet, failing=nondet)
    return rep


def corpus_files(F: Field) -> list:
    from importlib import resources

    root = resources.files("dgkernels") / "data" / str(F)
    try:
        return sorted((p for p in root.iterdir() if p.name.endswith(".dg")), key=lambda p: p.name)
    except FileNotFoundError:
        return []


# --------------------------------------------------------------------------
# the suite


@dataclass
class Criterion:
    number: int
    title: str
    run: Callable[[Field], Report]


CRITERIA = [
    Criterion(1, "validator soundness and mutation battery", criterion_validators),
    Criterion(2, "dg Yoneda lemma on bundled instances", criterion_yoneda),
    Criterion(3, "tensor unit and associativity isomorphisms", criterion_tensor_unit_assoc),
    Criterion(4, "extension/restriction adjunction", criterion_adjunction),
    Criterion(5, "extension of Yoneda modules and direct sums", criterion_ext_yoneda),
    Criterion(6, "extension along composite kernels", criterion_ext_composition),
    Criterion(7, "external products of kernels", criterion_kerprod),
    Criterion(8, "path objects over F2", criterion_path_object),
    Criterion(9, "standard homotopies", criterion_standard_homotopy),
    Criterion(10, "bar resolutions", criterion_resolutions),
    Criterion(11, "h-projectivity of resolved kernel slices", criterion_hproj),
    Criterion(12, "homotopy-equivalence decisions vs brute force", criterion_heq_decisions),
    Criterion(13, "micro count of quasi-representable kernels", criterion_micro_count),
    Criterion(14, "identity tensor a quasi-equivalence", criterion_tensor_qe),
    Criterion(15, "serialization, schema and determinism", criterion_serialization),
]

SUITES = {"paper-lemmas": [c.number for c in CRITERIA]}


def run_criterion(number: int, F: Field) -> Report:
    c = CRITERIA[number - 1]
    rep = c.run(F)
    rep.subject = f"[{c.number}] {c.title}"
    return rep


def run_suite(F: Field, suite: str = "paper-lemmas") -> Report:
    """One combined report; each verdict is prefixed with its criterion number."""
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}")
    out = Report(f"suite {suite} over {F}")
    for n in SUITES[suite]:
        r = run_criterion(n, F)
        out.add(f"[{n}] {CRITERIA[n - 1].title}", r.ok if r.status != "unknown" else None,
                failed=sorted(r.failed_checks()))
    return out


__all__ = ["CRITERIA", "SUITES", "Criterion", "run_criterion", "run_suite", "mutation_battery",
           "bundled_modules", "small_modules", "serialization_corpus", "corpus_files"]
