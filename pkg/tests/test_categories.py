import pytest
from hypothesis import given, strategies as st

from dgkernels import corpus
from dgkernels.categories import (
    compose_functors, diagonal_functor, field_category, h0, identity_functor,
    inclusion_functor, opposite, tensor_categories, validate_dg_category, validate_functor, z0,
)
from dgkernels.harness import _replace_comp, mutation_battery
from dgkernels.linalg import Field
from dgkernels.paths import (
    StandardHomotopyError, check_fibration, check_quasi_equivalence, construct_standard_homotopy,
    fiber_product, mor_category, path_object,
)

F2, Q = Field(2), Field(0)


def test_bundled_categories_validate(field):
    for name, A in corpus.bundled_categories(field).items():
        assert validate_dg_category(A).ok, name


def test_broken_unit_law_names_pair():
    A = corpus.a2(Q)
    # a o 1_x = 0
    B = _replace_comp(A, ("x", "x", "y"), (0, 0, 0), 0)
    rep = validate_dg_category(B)
    assert not rep.ok
    text = repr([v.detail for v in rep.failures()])
    assert "'x'" in text and "'y'" in text


def test_mutations_are_caught():
    for desc, thunk, check in mutation_battery():
        rep = thunk()
        assert any(check in c for c in rep.failed_checks()), desc


def test_opposite(field):
    A = corpus.a2(field)
    Aop = opposite(A)
    assert Aop.dim("y", "x") == 1 and Aop.dim("x", "y") == 0
    for A in corpus.bundled_categories(field).values():
        assert opposite(opposite(A)).same_as(A)
        assert validate_dg_category(opposite(A)).ok


def test_opposite_sign_on_odd_pair():
    O = corpus.odd_pair(Q)
    Oop = opposite(O)
    # v o u = w in O, so u o^op v = (-1)^{1*1} w
    t = Oop.comp_tensor("z", "y", "x")
    assert t[0, 0, 0] == -1
    assert validate_dg_category(Oop).ok


def test_tensor_categories(field):
    A2 = corpus.a2(field)
    T = tensor_categories(A2, A2)
    assert len(T.objects) == 4
    assert T.hom(("x", "x"), ("y", "y")).dims() == {0: 1}
    D = corpus.dual_numbers(field)
    assert validate_dg_category(tensor_categories(D, D)).ok
    K = field_category(field)
    KB = tensor_categories(K, A2)
    for X in A2.objects:
        for Y in A2.objects:
            assert KB.hom(("*", X), ("*", Y)).dims() == A2.hom(X, Y).dims()


def test_h0_and_z0(field):
    hA = h0(corpus.a2(field))
    assert hA.dims[("x", "y")] == 1 and hA.dims[("y", "x")] == 0
    assert h0(corpus.dual_numbers(field)).dims[("*", "*")] == 1
    assert z0(corpus.dual_numbers(field)).dims[("*", "*")] == 1
    assert h0(corpus.contractible_arrow(field)).dims[("x", "y")] == 0
    assert z0(corpus.contractible_arrow(field)).dims[("x", "y")] == 1


def test_h0_of_opposite_is_opposite_of_h0(field):
    for A in corpus.bundled_categories(field).values():
        a, b = h0(opposite(A)), h0(A).opposite()
        assert a.dims == b.dims


def test_mor_category_over_f2():
    A2 = corpus.a2(F2)
    M = mor_category(A2)
    assert len(M.objects) == 7
    assert validate_dg_category(M).ok
    # d(1_x, 1_y, 0) on (x, y, a) vanishes
    S = next(T for T in M.objects if T[0] == "x" and T[1] == "y" and any(T[2]))
    C = M.hom(S, S)
    u = M.unit(S)
    assert not F2.matmul(C.d, u).any()


def test_path_object_a2_over_f2():
    A2 = corpus.a2(F2)
    PO = path_object(A2)
    assert sorted(T[:2] for T in PO.category.objects) == [("x", "x"), ("y", "y")]
    assert compose_functors(PO.s, PO.iota) == identity_functor(A2)
    assert compose_functors(PO.t, PO.iota) == identity_functor(A2)
    assert compose_functors(PO.st, PO.iota) == diagonal_functor(A2)
    assert check_quasi_equivalence(PO.iota).ok
    assert check_fibration(PO.st).ok


def test_path_object_of_e_contains_a():
    E = corpus.homotopy_equivalence_category(F2)
    objs = path_object(E).category.objects
    assert any(T[0] == "x" and T[1] == "y" for T in objs)


def test_fiber_products(field):
    A2 = corpus.a2(field)
    idA = identity_functor(A2)
    FP = fiber_product(idA, idA)
    assert sorted(FP.category.objects) == [("x", "x"), ("y", "y")]
    assert validate_dg_category(FP.category).ok
    assert validate_functor(FP.p1).ok and validate_functor(FP.p2).ok
    px, py = corpus.object_functor(A2, "x"), corpus.object_functor(A2, "y")
    assert fiber_product(px, py).category.objects == ()
    with pytest.raises(ValueError):
        fiber_product(idA, identity_functor(corpus.a3(field)))


def test_fiber_product_with_path_object_f2():
    A2 = corpus.a2(F2)
    PO = path_object(A2)
    FP = fiber_product(identity_functor(A2), PO.t)
    assert len(FP.category.objects) == 2


def test_quasi_equivalence_examples(field):
    A2 = corpus.a2(field)
    assert check_quasi_equivalence(identity_functor(A2)).ok
    assert check_quasi_equivalence(inclusion_functor(A2, ["x"])).status == "fail"
    assert check_quasi_equivalence(path_object(A2).iota).status in ("pass", "unknown")


def test_fibration_examples(field):
    A2 = corpus.a2(field)
    assert check_fibration(identity_functor(A2)).ok
    G = corpus.bundled_functors(field)["A2->C"]
    assert check_fibration(G).status == "fail"


def test_quasi_equivalence_implies_h0_equivalence():
    for A in corpus.bundled_categories(F2).values():
        PO = path_object(A)
        assert check_quasi_equivalence(PO.iota).ok
        hA, hP = h0(A), h0(PO.category)
        for X in A.objects:
            for Y in A.objects:
                assert hA.dims[(X, Y)] == hP.dims[(PO.iota(X), PO.iota(Y))]


def test_standard_homotopy():
    A2 = corpus.a2(F2)
    idA = identity_functor(A2)
    H, PB = construct_standard_homotopy(idA, idA, {X: A2.unit(X) for X in A2.objects})
    assert H.obj == PB.iota.obj
    assert compose_functors(PB.s, H) == idA and compose_functors(PB.t, H) == idA
    E = corpus.homotopy_equivalence_category(F2)
    px, py = corpus.object_functor(E, "x"), corpus.object_functor(E, "y")
    a = F2.zeros(E.dim("x", "y"))
    a[E.hom("x", "y").names.index("a")] = 1
    H, PB = construct_standard_homotopy(px, py, {"*": a})
    assert validate_functor(H).ok
    assert compose_functors(PB.s, H) == px and compose_functors(PB.t, H) == py


def test_standard_homotopy_rejects_named_object():
    A2 = corpus.a2(F2)
    idA = identity_functor(A2)
    alpha = {"x": A2.unit("x"), "y": F2.zeros(1)}
    with pytest.raises(StandardHomotopyError) as err:
        construct_standard_homotopy(idA, idA, alpha)
    assert "y" in str(err.value)
    assert "x" not in err.value.report.failures()[0].detail["objects"]


@given(st.sampled_from(["A2", "A3", "D", "C", "E", "O"]), st.sampled_from(["A2", "D", "O"]))
def test_tensor_of_bundled_categories_validates(a, b):
    cats = corpus.bundled_categories(Q)
    T = tensor_categories(cats[a], cats[b])
    assert validate_dg_category(T).ok
    assert opposite(opposite(T)).same_as(T)
