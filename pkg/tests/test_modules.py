from hypothesis import given, strategies as st

from dgkernels import corpus
from dgkernels.categories import field_category, opposite
from dgkernels.complexes import cohomology_dims, tensor_complexes, unit_complex
from dgkernels.harness import _yoneda_without_sign, bundled_modules
from dgkernels.kernels import ext_compose_iso
from dgkernels.linalg import Field
from dgkernels.modules import (
    NatTransform, acyclic_battery, check_yoneda, cone_transform, direct_sum_modules,
    external_tensor, identity_transform, is_acyclic, is_natural_iso, lift_left, lift_right, make_module,
    module_hom_complex, shift_module, simple_module, validate_module, validate_transform,
    yoneda, yoneda_transform, zero_module, zero_transform,
)
from dgkernels.tensors import check_hflat, induced_tensor_map, tensor_over

F2, Q = Field(2), Field(0)


def test_validate_examples(field):
    A2 = corpus.a2(field)
    assert validate_module(yoneda(A2, "y")).ok
    assert validate_module(zero_module(A2)).ok


def test_dropped_koszul_sign_is_caught():
    O = corpus.odd_pair(Q)
    rep = validate_module(_yoneda_without_sign(O, "z"))
    assert not rep.ok


def test_yoneda_values(field):
    A2 = corpus.a2(field)
    hy, hx = yoneda(A2, "y"), yoneda(A2, "x")
    assert hy.value("x").names == ("a",) and hy.value("y").names == ("1_y",)
    assert hx.dim("y") == 0
    D = corpus.dual_numbers(field)
    h = yoneda(D, "*")
    assert h.value("*").degrees == (0, -1)
    assert validate_module(h).ok


def test_dg_yoneda_for_bundled_modules(field):
    mods = bundled_modules(field)
    for M in mods:
        for X in M.base.objects:
            assert check_yoneda(M.base, X, M).ok, (M, X)


def test_hom_complex_contains_identity():
    M = yoneda(corpus.a3(Q), "v2")
    hc = module_hom_complex(M, M)
    idc = hc.coords(identity_transform(M))
    assert identity_transform(M).is_closed()
    assert not Q.matmul(hc.complex.d, idc).any()


def test_disjoint_supports_give_zero_hom(field):
    A = corpus.a3(field)
    S0, S2 = simple_module(A, "v0"), simple_module(A, "v2")
    assert module_hom_complex(S0, S2).complex.dim == 0


def _n_const(A2):
    """Module over A2^op with N(x) = N(y) = K and N(a) = id."""
    F = A2.field
    Aop = opposite(A2)
    K = unit_complex(F)
    act = {("x", "x"): F.array([[[1]]]), ("y", "y"): F.array([[[1]]]), ("y", "x"): F.array([[[1]]])}
    return make_module(Aop, {"x": K, "y": K}, act, "N")


def test_tensor_identifies_summands(field):
    A2 = corpus.a2(field)
    N = _n_const(A2)
    assert validate_module(N).ok
    T = tensor_over(yoneda(A2, "y"), N)
    assert T.dims() == {0: 1}
    assert tensor_over(yoneda(A2, "x"), N).dims() == {0: 1}


def test_tensor_over_field_category_is_plain_tensor(field):
    K = field_category(field)
    X = corpus.dual_numbers(field).hom("*", "*")
    M = make_module(K, {"*": X}, {("*", "*"): field.eye(X.dim).reshape(X.dim, 1, X.dim)})
    N = make_module(opposite(K), {"*": X}, {("*", "*"): field.eye(X.dim).reshape(X.dim, 1, X.dim)})
    T = tensor_over(M, N)
    P = tensor_complexes(X, X)
    assert T.dims() == P.dims()


def test_associativity_on_bundled_triple(field):
    kers = corpus.bundled_kernels(field)
    E1, E2 = kers["ker(A2->A3 outer)"], kers["diag(A3)"]
    M = yoneda(corpus.a2(field), "y")
    t = ext_compose_iso(E1, E2, M)
    assert t is not None and is_natural_iso(t)


def test_external_tensor(field):
    D = corpus.dual_numbers(field)
    A2 = corpus.a2(field)
    M, N = yoneda(D, "*"), yoneda(A2, "y")
    T = external_tensor(M, N)
    assert validate_module(T).ok
    for X in D.objects:
        for Y in A2.objects:
            want = {}
            for p, a in M.value(X).dims().items():
                for q, b in N.value(Y).dims().items():
                    want[p + q] = want.get(p + q, 0) + a * b
            assert T.value((X, Y)).dims() == {k: v for k, v in want.items() if v}
    K = field_category(field)
    U = make_module(K, {"*": unit_complex(field)}, {("*", "*"): field.array([[[1]]])})
    TU = external_tensor(U, N)
    for Y in A2.objects:
        assert TU.value(("*", Y)).same_as(N.value(Y))
    assert validate_module(external_tensor(M, M)).ok


def _lifted(theta):
    comps = {("*", X): m for X, m in theta.components.items()}
    return NatTransform(lift_left(theta.source), lift_left(theta.target), theta.degree, comps)


def test_induced_tensor_map_functorial(field):
    A2 = corpus.a2(field)
    N = lift_right(_n_const(A2))
    hx, hy = yoneda(A2, "x"), yoneda(A2, "y")
    a = field.array([1])
    theta = yoneda_transform(hy, "x", a, 0)  # h^x -> h^y, 1_x |-> a
    assert validate_transform(theta).ok
    idy = identity_transform(hy)
    lhs = induced_tensor_map(_lifted(idy.compose(theta)), N)
    rhs = induced_tensor_map(_lifted(idy), N).compose(induced_tensor_map(_lifted(theta), N))
    assert lhs == rhs
    ident = induced_tensor_map(_lifted(identity_transform(hx)), N)
    assert all((m == field.eye(m.shape[0])).all() for m in ident.components.values())
    zero = induced_tensor_map(_lifted(zero_transform(hx, hy)), N)
    assert zero.is_zero()


def test_acyclicity(field):
    A2 = corpus.a2(field)
    assert is_acyclic(zero_module(A2)).acyclic
    assert not is_acyclic(yoneda(A2, "y")).acyclic
    for N in acyclic_battery(A2):
        assert is_acyclic(N).acyclic and validate_module(N).ok


def test_yoneda_modules_are_hflat(field):
    for name in ("A2", "O", "D"):
        A = corpus.bundled_categories(field)[name]
        battery = acyclic_battery(opposite(A))
        for X in A.objects:
            assert check_hflat(yoneda(A, X), battery).ok
    A2 = corpus.a2(field)
    assert check_hflat(yoneda(A2, "x"), []).status == "unknown"


@given(st.sampled_from(["A2", "A3", "C", "D", "O", "E"]), st.integers(-2, 2), st.data())
def test_yoneda_iso_on_shifted_sums(name, k, data):
    A = corpus.bundled_categories(F2)[name]
    X = data.draw(st.sampled_from(A.objects))
    Y = data.draw(st.sampled_from(A.objects))
    M = direct_sum_modules(shift_module(yoneda(A, Y), k), cone_transform(identity_transform(yoneda(A, X))))
    assert validate_module(M).ok
    assert check_yoneda(A, X, M).ok
    hc = module_hom_complex(yoneda(A, X), M)
    assert cohomology_dims(hc.complex) == cohomology_dims(M.value(X))
