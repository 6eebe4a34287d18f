import dataclasses

from hypothesis import given, strategies as st

from dgkernels import corpus
from dgkernels.categories import directed_order, h0, identity_functor
from dgkernels.harness import small_modules
from dgkernels.kernels import curry_kernel, uncurry_functor, unit_kernel, yoneda_after, zero_kernel
from dgkernels.linalg import Field
from dgkernels.modules import (
    cone_transform, direct_sum_modules, identity_transform, simple_module, validate_module, yoneda,
    zero_module,
)
from dgkernels.resolutions import (
    CertificateEntry, Generator, bar_resolution, brute_force_equivalent, check_homotopy_equivalence,
    check_resolution, default_battery, essim_membership, homotopy_equivalence_modules,
    hprojective_battery_check, is_semi_free, micro_class_count, resolve_kernel, rqr_check,
    semi_free_module, slice_certificate, yoneda_certificate,
)

F2, Q = Field(2), Field(0)


def test_bar_resolution_of_yoneda(field):
    A2 = corpus.a2(field)
    hx = yoneda(A2, "x")
    res = bar_resolution(hx)
    assert res.complete and check_resolution(hx, res).ok
    assert any(e.obj == "x" for e in res.certificate.steps[0])


def test_bar_resolution_of_simple(field):
    A2 = corpus.a2(field)
    Sy = simple_module(A2, "y")
    res = bar_resolution(Sy)
    assert res.complete and check_resolution(Sy, res).ok
    model = semi_free_module(A2, [Generator("y", 0), Generator("x", -1)], {1: [(0, field.array([1]))]})
    assert validate_module(model).ok
    if field.is_finite:
        assert homotopy_equivalence_modules(res.module, model).status == "equivalent"


def test_bar_resolution_of_zero():
    A2 = corpus.a2(Q)
    res = bar_resolution(zero_module(A2))
    assert res.complete and res.module.total_dim() == 0


def test_non_directed_truncation_is_reported():
    E = corpus.homotopy_equivalence_category(F2)
    assert directed_order(E) is None
    res = bar_resolution(yoneda(E, "x"), max_length=1)
    assert res.status in ("truncated-quasi-iso", "insufficient")
    assert res.status != "complete"


def test_semi_free_certificates():
    A3 = corpus.a3(F2)
    assert is_semi_free(yoneda(A3, "v1"), yoneda_certificate(A3, "v1"))
    Sy = simple_module(corpus.a2(F2), "y")
    res = bar_resolution(Sy)
    assert is_semi_free(res.module, res.certificate)
    steps = [list(s) for s in res.certificate.steps]
    e = steps[-1][0]
    steps[-1][0] = CertificateEntry(e.obj, e.shift + 1, e.element)
    bad = dataclasses.replace(res.certificate, steps=steps)
    assert not is_semi_free(res.module, bad)


def test_hprojective_battery(field):
    A2 = corpus.a2(field)
    bat = default_battery(A2)
    assert len(bat) >= 5
    assert hprojective_battery_check(yoneda(A2, "x"), bat).ok
    assert hprojective_battery_check(simple_module(A2, "y"), bat[:1]).ok
    assert hprojective_battery_check(yoneda(A2, "x"), []).status == "unknown"
    assert hprojective_battery_check(yoneda(A2, "x"), [yoneda(A2, "y")]).status == "fail"


def test_homotopy_equivalence_examples():
    A2 = corpus.a2(F2)
    hx, hy = yoneda(A2, "x"), yoneda(A2, "y")
    r = homotopy_equivalence_modules(hx, hx)
    assert r.status == "equivalent" and check_homotopy_equivalence(r.witness)
    M = direct_sum_modules(hx, cone_transform(identity_transform(hx)))
    r = homotopy_equivalence_modules(hx, M)
    assert r.status == "equivalent" and check_homotopy_equivalence(r.witness)
    assert homotopy_equivalence_modules(hx, hy).status == "not-equivalent"


def test_essim_examples():
    A2 = corpus.a2(F2)
    assert essim_membership(yoneda(A2, "y")).obj == "y"
    M = direct_sum_modules(yoneda(A2, "x"), cone_transform(identity_transform(yoneda(A2, "y"))))
    assert essim_membership(M).obj == "x"
    assert essim_membership(simple_module(A2, "y")).status == "none"


def test_rqr_examples():
    for A in corpus.bundled_categories(F2).values():
        assert rqr_check(unit_kernel(A)).status == "pass"
    for G in corpus.bundled_functors(F2).values():
        assert rqr_check(uncurry_functor(yoneda_after(G))).status == "pass"
    A2 = corpus.a2(F2)
    from dgkernels.categories import field_category
    from dgkernels.modules import lift_left
    from dgkernels.kernels import Kernel

    K = field_category(F2)
    E = Kernel(K, A2, lift_left(simple_module(A2, "y")))
    rep = rqr_check(E)
    assert rep.status == "fail" and rep.verdicts["*"].status == "none"


def test_resolve_kernel():
    A2 = corpus.a2(F2)
    KR = resolve_kernel(unit_kernel(A2))
    assert KR.status == "complete"
    bat = default_battery(A2)
    Phi = curry_kernel(KR.kernel)
    for X in A2.objects:
        cert = slice_certificate(KR, X)
        assert cert is not None and is_semi_free(Phi(X), cert)
        assert hprojective_battery_check(Phi(X), bat).ok
    Z = resolve_kernel(zero_kernel(A2, A2))
    assert Z.kernel.carrier.total_dim() == 0


def test_micro_class_count():
    A2 = corpus.a2(F2)
    cc = micro_class_count(A2)
    assert len(cc.classes) == len(h0(A2).iso_classes()) == 2
    assert cc.bijective


def test_rqr_of_identity_kernel_q():
    A2 = corpus.a2(Q)
    assert rqr_check(unit_kernel(A2)).status == "pass"
    assert rqr_check(uncurry_functor(yoneda_after(identity_functor(A2)))).status == "pass"


_SMALL = small_modules(F2)


@given(st.integers(0, len(_SMALL) - 1), st.integers(0, len(_SMALL) - 1))
def test_equivalence_search_matches_brute_force(i, j):
    M, N = _SMALL[i], _SMALL[j]
    if not M.base.same_as(N.base):
        return
    r = homotopy_equivalence_modules(M, N)
    assert (r.status == "equivalent") == brute_force_equivalent(M, N)
    if r.witness is not None:
        assert check_homotopy_equivalence(r.witness)


@given(st.sampled_from(["A2", "A3", "C", "O", "D"]), st.data())
def test_complete_resolutions_are_quasi_isos(name, data):
    A = corpus.bundled_categories(F2)[name]
    X = data.draw(st.sampled_from(A.objects))
    M = yoneda(A, X)
    if data.draw(st.booleans()):
        M = direct_sum_modules(M, cone_transform(identity_transform(yoneda(A, A.objects[0]))))
    res = bar_resolution(M, max_length=3)
    if res.complete:
        assert check_resolution(M, res).ok
        assert is_semi_free(res.module, res.certificate)
