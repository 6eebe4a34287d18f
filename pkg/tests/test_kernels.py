import pytest
from hypothesis import given, strategies as st

from dgkernels import corpus
from dgkernels.categories import field_category, identity_functor, inclusion_functor, tensor_categories
from dgkernels.complexes import cohomology_dims, tensor_complexes, unit_complex
from dgkernels.kernels import (
    Kernel, check_adjunction, check_kerprod, compose_kernels, curry_compose_iso, curry_kernel,
    ext_apply, ext_sum_iso, ext_unit_iso, ext_yoneda_iso, external_kernel_product, ind_apply,
    kernel_base, res_apply, res_g_apply, res_yoneda_iso, uncurry_functor, unit_kernel,
    unit_left_iso, unit_right_iso, validate_kernel, validate_module_functor, yoneda_after,
    yoneda_embedding, zero_kernel,
)
from dgkernels.linalg import Field
from dgkernels.modules import (
    direct_sum_modules, is_natural_iso, is_quasi_iso_transform, make_module, module_hom_complex,
    shift_module, validate_module, yoneda, zero_module,
)

F2, Q = Field(2), Field(0)


def test_bundled_kernels_validate(field):
    for name, E in corpus.bundled_kernels(field).items():
        assert validate_kernel(E).ok, name


def test_unit_kernel_values(field):
    A2 = corpus.a2(field)
    E = unit_kernel(A2)
    assert E.value("y", "x").names == ("a",)
    assert E.value("x", "y").dim == 0
    K = field_category(field)
    assert unit_kernel(K).value("*", "*").dims() == {0: 1}


def test_curry_unit_kernel_is_yoneda(field):
    for A in corpus.bundled_categories(field).values():
        Phi = curry_kernel(unit_kernel(A))
        assert Phi.same_as(yoneda_embedding(A))
        assert validate_module_functor(Phi).ok
        assert uncurry_functor(yoneda_embedding(A)).carrier.same_as(unit_kernel(A).carrier)


def test_curry_uncurry_round_trip(field):
    for name, E in corpus.bundled_kernels(field).items():
        back = uncurry_functor(curry_kernel(E))
        assert back.carrier.same_as(E.carrier), name


def test_zero_kernel_curries_to_zero():
    A2, A3 = corpus.a2(Q), corpus.a3(Q)
    E = zero_kernel(A2, A3)
    Phi = curry_kernel(E)
    assert all(Phi(X).total_dim() == 0 for X in A2.objects)
    assert uncurry_functor(Phi).carrier.same_as(E.carrier)


def test_unit_laws(field):
    for name, E in corpus.bundled_kernels(field).items():
        for t in (unit_left_iso(E), unit_right_iso(E)):
            assert t is not None and is_natural_iso(t), name


def test_ext_of_yoneda_is_phi(field):
    for name, E in corpus.bundled_kernels(field).items():
        for X in E.left.objects:
            t = ext_yoneda_iso(E, X)
            assert t is not None and is_natural_iso(t), (name, X)


def test_ext_unit_and_field_case(field):
    A3 = corpus.a3(field)
    for X in A3.objects:
        t = ext_unit_iso(yoneda(A3, X))
        assert t is not None and is_natural_iso(t)
    K = field_category(field)
    D = corpus.dual_numbers(field)
    X = D.hom("*", "*")
    unit_acts = {("*", "*"): field.eye(X.dim).reshape(X.dim, 1, X.dim)}
    carrier = make_module(kernel_base(K, K), {("*", "*"): X}, {(("*", "*"), ("*", "*")): unit_acts[("*", "*")]})
    assert validate_module(carrier).ok
    M = make_module(K, {"*": X}, unit_acts)
    out = ext_apply(Kernel(K, K, carrier), M)
    assert out.value("*").dims() == tensor_complexes(X, X).dims()


def test_res_of_yoneda_embedding(field):
    for M in [yoneda(corpus.a3(field), "v1"), yoneda(corpus.odd_pair(field), "z")]:
        t = res_yoneda_iso(M)
        assert is_natural_iso(t)
    A2 = corpus.a2(field)
    Phi0 = curry_kernel(zero_kernel(A2, A2))
    assert res_apply(Phi0, yoneda(A2, "y")).total_dim() == 0


def test_ind_and_res_g(field):
    A2 = corpus.a2(field)
    idA = identity_functor(A2)
    M = yoneda(A2, "y")
    assert res_g_apply(idA, M).same_as(M)
    ind = ind_apply(idA, M)
    assert all(ind.value(X).dims() == M.value(X).dims() for X in A2.objects)
    G = inclusion_functor(A2, ["x"])
    R = res_g_apply(G, M)
    assert R.value("x").names == ("a",)


def test_compose_kernels_and_extcomp(field):
    kers = corpus.bundled_kernels(field)
    E1, E2 = kers["ker(A2->A3 outer)"], kers["ker(A3->A2 collapse)"]
    E12 = compose_kernels(E1, E2)
    assert validate_kernel(E12).ok
    for X in E1.left.objects:
        t = curry_compose_iso(E1, E2, X)
        assert t is not None and is_natural_iso(t)
    with pytest.raises(ValueError):
        compose_kernels(E1, E1)


def test_kernel_associativity_dims():
    kers = corpus.bundled_kernels(F2)
    E1, E2, E3 = kers["ker(A2->A3 outer)"], kers["ker(A3->A2 collapse)"], kers["ker(A2->C)"]
    L = compose_kernels(compose_kernels(E1, E2), E3)
    R = compose_kernels(E1, compose_kernels(E2, E3))
    for key in L.carrier.base.objects:
        assert L.carrier.value(key).dims() == R.carrier.value(key).dims()


def test_external_kernel_product(field):
    A2, D = corpus.a2(field), corpus.dual_numbers(field)
    P = external_kernel_product(unit_kernel(A2), unit_kernel(D))
    assert P.carrier.same_as(unit_kernel(tensor_categories(A2, D)).carrier)
    assert check_kerprod(unit_kernel(A2), corpus.bundled_kernels(field)["ker(A2->C)"]).ok


def test_external_product_over_field_category(field):
    K = field_category(field)
    X = unit_complex(field, 1)
    c1 = make_module(kernel_base(K, K), {("*", "*"): X}, {("*", "*"): field.array([[[1]]])})
    E = Kernel(K, K, c1)
    P = external_kernel_product(E, E)
    (key,) = P.carrier.base.objects
    assert P.carrier.value(key).dims() == tensor_complexes(X, X).dims()


def test_adjunction(field):
    kers = corpus.bundled_kernels(field)
    A2 = corpus.a2(field)
    E = kers["ker(A2->A3 outer)"]
    A3 = E.right
    assert check_adjunction(E, yoneda(A2, "y"), yoneda(A3, "v1")).ok
    assert check_adjunction(unit_kernel(A2), yoneda(A2, "x"), yoneda(A2, "y")).ok
    assert check_adjunction(E, yoneda(A2, "x"), zero_module(A3)).ok


def test_adjunction_dimensions():
    E = corpus.bundled_kernels(Q)["ker(A2->C)"]
    A2, C = E.left, E.right
    M, N = yoneda(A2, "y"), yoneda(C, "y")
    lhs = module_hom_complex(ext_apply(E, M), N).complex.dims()
    rhs = module_hom_complex(M, res_apply(curry_kernel(E), N)).complex.dims()
    assert lhs == rhs


def test_finite_sum_continuity(field):
    E = corpus.bundled_kernels(field)["ker(A3->A2 collapse)"]
    A3 = E.left
    t = ext_sum_iso(E, [yoneda(A3, "v0"), shift_module(yoneda(A3, "v2"), 1)])
    assert is_natural_iso(t)


def test_homotopy_equivalent_carriers_give_quasi_isomorphic_slices():
    """Adding a contractible summand to the carrier does not change Phi up to quasi-iso."""
    from dgkernels.modules import cone_transform, identity_transform

    E = corpus.bundled_kernels(F2)["diag(A2)"]
    extra = cone_transform(identity_transform(yoneda(E.carrier.base, ("y", "y"))))
    E2 = Kernel(E.left, E.right, direct_sum_modules(E.carrier, extra))
    assert validate_kernel(E2).ok
    for X in E.left.objects:
        for Y in E.right.objects:
            assert cohomology_dims(curry_kernel(E)(X).value(Y)) == cohomology_dims(curry_kernel(E2)(X).value(Y))


def test_functor_kernels_curry_to_representables():
    for name, G in corpus.bundled_functors(F2).items():
        Phi = curry_kernel(uncurry_functor(yoneda_after(G)))
        for X in G.source.objects:
            assert Phi(X).same_as(yoneda(G.target, G(X))), name


@given(st.sampled_from(sorted(corpus.bundled_kernels(F2))), st.integers(-1, 1))
def test_ext_preserves_quasi_isos_of_yoneda_sums(name, k):
    E = corpus.bundled_kernels(F2)[name]
    A = E.left
    X = A.objects[0]
    from dgkernels.modules import NatTransform, cone_transform, identity_transform

    h = shift_module(yoneda(A, X), k)
    big = direct_sum_modules(h, cone_transform(identity_transform(yoneda(A, X))))
    inc = NatTransform(h, big, 0, {W: F2.eye(big.dim(W))[:, : h.dim(W)] for W in A.objects})
    assert is_quasi_iso_transform(inc)
    from dgkernels.kernels import ext_map

    assert validate_module(ext_apply(E, big)).ok
    assert is_quasi_iso_transform(ext_map(E, inc))
