import numpy as np
from hypothesis import given, strategies as st

from dgkernels.complexes import (
    GradedMap, check_homotopy_inverse, cohomology, cohomology_dims, cone, direct_sum,
    euler_characteristic, find_homotopy_inverse, from_blocks, hom_complex, identity_map,
    is_acyclic, is_quasi_iso, shift, tensor_complexes, unit_complex, validate_complex,
    zero_complex,
)
from dgkernels.linalg import Field

Q = Field(0)


def two_term(F, c):
    return from_blocks(F, {0: 1, 1: 1}, {0: [[c]]})


def test_validate_examples():
    assert validate_complex(from_blocks(Q, {0: 2, 3: 1})).ok
    assert validate_complex(two_term(Q, 1)).ok
    bad = from_blocks(Q, {0: 1, 1: 1, 2: 1}, {0: [[1]], 1: [[1]]})
    rep = validate_complex(bad)
    assert not rep.ok
    assert rep.failures()[0].detail["degrees"] == [0]


def test_cohomology_examples():
    assert cohomology_dims(two_term(Q, 1)) == {} or all(v == 0 for v in cohomology_dims(two_term(Q, 1)).values())
    C = from_blocks(Q, {-1: 2, 0: 3})
    assert cohomology(C, -1).dim == 2 and cohomology(C, 0).dim == 3
    Z = two_term(Q, 0)
    assert cohomology(Z, 0).dim == 1 and cohomology(Z, 1).dim == 1


def test_tensor_with_unit_and_contractible(field):
    Y = from_blocks(field, {0: 1, 1: 2}, {0: [[1], [0]]})
    T = tensor_complexes(unit_complex(field), Y)
    assert T.degrees == Y.degrees and (T.d == Y.d).all()
    assert is_acyclic(tensor_complexes(two_term(field, 1), Y))
    X = from_blocks(field, {0: 2, 1: 1}, {0: [[1, 0]]})
    dims = tensor_complexes(X, Y).dims()
    assert dims == {0: 2, 1: 5, 2: 2}


def test_hom_complex_examples(field):
    Y = from_blocks(field, {0: 1, 1: 2}, {0: [[1], [0]]})
    H = hom_complex(unit_complex(field), Y)
    assert H.dims() == Y.dims()
    assert cohomology_dims(H) == cohomology_dims(Y)
    X = two_term(field, 0)
    E = hom_complex(X, X)
    assert E.dims()[0] == 2
    assert cohomology(E, 0).dim == 2


def test_quasi_iso_examples():
    K = unit_complex(Q)
    assert is_quasi_iso(identity_map(K))
    assert not is_quasi_iso(GradedMap(K, zero_complex(Q), 0, Q.zeros((0, 1))))
    T = direct_sum(K, two_term(Q, 1))
    inc = GradedMap(K, T, 0, Q.array([[1], [0], [0]]))
    assert is_quasi_iso(inc)


def test_homotopy_inverse_of_e1_inclusion(field):
    K = unit_complex(field)
    T = from_blocks(field, {0: 2, 1: 1}, {0: [[0, 1]]})
    inc = GradedMap(K, T, 0, field.array([[1], [0], [0]]))
    hi = find_homotopy_inverse(inc)
    assert hi is not None and check_homotopy_inverse(inc, hi)
    assert list(hi.inverse.matrix[0]) == [1, 0, 0]
    assert is_acyclic(cone(inc))


def test_homotopy_inverse_of_identity_and_failures():
    X = from_blocks(Q, {0: 1, 1: 1})
    hi = find_homotopy_inverse(identity_map(X))
    assert (hi.inverse.matrix == Q.eye(2)).all()
    assert not hi.source_homotopy.matrix.any() and not hi.target_homotopy.matrix.any()
    K = unit_complex(Q)
    assert find_homotopy_inverse(GradedMap(K, zero_complex(Q), 0, Q.zeros((0, 1)))) is None


def test_cone_examples():
    K = unit_complex(Q)
    assert is_acyclic(cone(identity_map(K)))
    C = cone(GradedMap(K, zero_complex(Q), 0, Q.zeros((0, 1))))
    assert cohomology_dims(C).get(-1) == 1


def test_shift_signs():
    X = two_term(Q, 1)
    S = shift(X, 1)
    assert S.degrees == (-1, 0) and S.d[1, 0] == -1


@st.composite
def complexes(draw, F):
    """Random bounded complexes with d^2 = 0 built as d = (basis change) of a split form."""
    lo = draw(st.integers(-2, 1))
    length = draw(st.integers(1, 3))
    dims, diffs = {}, {}
    for n in range(lo, lo + length):
        dims[n] = draw(st.integers(0, 3))
    for n in range(lo, lo + length - 1):
        rows, cols = dims[n + 1], dims[n]
        vals = draw(st.lists(st.integers(0, 2), min_size=rows * cols, max_size=rows * cols))
        diffs[n] = np.array(vals, dtype=object).reshape(rows, cols)
    # enforce d^2 = 0 by zeroing every second differential
    for n in list(diffs):
        if (n - lo) % 2:
            diffs[n] = np.zeros_like(diffs[n])
    return from_blocks(F, dims, {n: m for n, m in diffs.items() if m.size})


@given(st.sampled_from([Field(2), Field(3), Q]).flatmap(lambda F: complexes(F)))
def test_euler_characteristic_matches_cohomology(C):
    assert validate_complex(C).ok
    chi = sum((-1) ** n * k for n, k in C.dims().items())
    assert euler_characteristic(C) == chi
    assert sum((-1) ** n * k for n, k in cohomology_dims(C).items()) == chi


@given(st.sampled_from([Field(2), Q]).flatmap(lambda F: complexes(F)), st.data())
def test_inverse_exists_iff_quasi_iso(C, data):
    F = C.field
    D = direct_sum(C, two_term(F, 1))
    n = C.dim
    proj = F.zeros((n, D.dim))
    proj[:, :n] = F.eye(n)
    f = GradedMap(D, C, 0, proj)
    assert is_quasi_iso(f)
    hi = find_homotopy_inverse(f)
    assert hi is not None and check_homotopy_inverse(f, hi)
    # the zero map is a quasi-iso only when C is acyclic
    z = GradedMap(C, C, 0, F.zeros((n, n)))
    assert (find_homotopy_inverse(z) is not None) == is_quasi_iso(z) == is_acyclic(C)
