# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Kernels: currying, extension, composition
#
# A kernel from `A` to `B` is a module over `A^op (x) B`.  Currying turns it
# into a dg functor `A -> dgm(B)`; the diagonal kernel curries to the Yoneda
# embedding.

# %%
from dgkernels import corpus
from dgkernels.kernels import (
    check_adjunction, check_kerprod, compose_kernels, curry_compose_iso, curry_kernel, ext_yoneda_iso,
    unit_kernel, unit_left_iso, yoneda_embedding,
)
from dgkernels.linalg import Field
from dgkernels.modules import is_natural_iso, yoneda

F = Field(3)
kers = corpus.bundled_kernels(F)
A2 = corpus.a2(F)
print(curry_kernel(unit_kernel(A2)).same_as(yoneda_embedding(A2)))

# %% [markdown]
# Composition tensors over the middle category.  The isomorphisms below are
# explicit transformations, checked to be natural and bijective in every
# degree.

# %%
E1, E2 = kers["ker(A2->A3 outer)"], kers["ker(A3->A2 collapse)"]
E12 = compose_kernels(E1, E2)
print(is_natural_iso(unit_left_iso(E1)))
print([is_natural_iso(curry_compose_iso(E1, E2, X)) for X in A2.objects])
print([is_natural_iso(ext_yoneda_iso(E12, X)) for X in A2.objects])

# %% [markdown]
# Extension is left adjoint to restriction.  The check builds the map of
# hom complexes, its inverse, unit and counit, and the triangle identities.

# %%
rep = check_adjunction(E1, yoneda(A2, "y"), yoneda(E1.right, "v1"))
for v in rep.verdicts:
    print(v.status, v.check)

# %%
print(check_kerprod(unit_kernel(A2), kers["ker(A2->C)"]).status)
