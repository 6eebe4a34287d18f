# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Exact linear algebra and cochain complexes
#
# Everything runs over the rationals or a prime field, with no floating
# point anywhere.  A `Field` object carries the arithmetic.

# %%
from dgkernels.linalg import Field, cokernel, rank, solve
from dgkernels.complexes import (
    GradedMap, cohomology_dims, cone, find_homotopy_inverse, from_blocks, is_quasi_iso,
    tensor_complexes, unit_complex,
)

Q, F2 = Field(0), Field(2)
print(rank(Q, Q.array([[1, 2], [2, 4]])))
print(solve(Q, Q.array([[1, 1]]), Q.array([3])))  # free variables are set to zero

# %% [markdown]
# Cokernels come with a projection and a section.  The representative is
# read off the reduced row echelon form, so the output is reproducible.

# %%
P, S = cokernel(Q, Q.array([[1], [0]]))
print(P, S, sep="\n")

# %% [markdown]
# ## Complexes
#
# A complex is a graded basis plus one differential matrix.  `from_blocks`
# builds it from per-degree dimensions and the maps `d^n`.

# %%
contractible = from_blocks(Q, {0: 1, 1: 1}, {0: [[1]]})
Y = from_blocks(Q, {0: 1, 1: 2}, {0: [[1], [0]]})
print(cohomology_dims(Y))
print(cohomology_dims(tensor_complexes(contractible, Y)))  # acyclic

# %% [markdown]
# The inclusion of `K[0]` as the first basis vector of `K^2 -> K`
# (with `d = [0 1]`) is a quasi-isomorphism, and over a field that means it
# has a homotopy inverse.  The solver returns the inverse together with both
# homotopies.

# %%
T = from_blocks(Q, {0: 2, 1: 1}, {0: [[0, 1]]})
inc = GradedMap(unit_complex(Q), T, 0, Q.array([[1], [0], [0]]))
print(is_quasi_iso(inc), cohomology_dims(cone(inc)))
hi = find_homotopy_inverse(inc)
print(hi.inverse.matrix)
