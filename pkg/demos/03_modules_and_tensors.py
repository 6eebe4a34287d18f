# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Dg modules, Yoneda and tensor products

# %%
from dgkernels import corpus
from dgkernels.categories import opposite
from dgkernels.complexes import unit_complex
from dgkernels.linalg import Field
from dgkernels.modules import (
    acyclic_battery, check_yoneda, make_module, module_hom_complex, validate_module, yoneda,
)
from dgkernels.tensors import check_hflat, tensor_over

Q = Field(0)
A2, O = corpus.a2(Q), corpus.odd_pair(Q)
hy = yoneda(A2, "y")
print({X: hy.value(X).names for X in A2.objects})

# %% [markdown]
# The dg Yoneda isomorphism `Hom(h^X, M) -> M(X)` is evaluation at the
# identity.  It is checked degreewise, which pins down the sign convention
# for graded natural transformations.

# %%
for X in O.objects:
    print(X, check_yoneda(O, X, yoneda(O, "z")).status)
print(module_hom_complex(yoneda(O, "x"), yoneda(O, "z")).complex.dims())

# %% [markdown]
# ## Tensor over a category
#
# `tensor_over(M, N)` is the cokernel of the relation map identifying
# `M(f)v (x) w` with the signed `v (x) N(f)w`.  For `h^y` against the module
# over `A2^op` with `N(a) = id`, the two summands collapse to one line.

# %%
K = unit_complex(Q)
one = Q.array([[[1]]])
N = make_module(opposite(A2), {"x": K, "y": K}, {("x", "x"): one, ("y", "y"): one, ("y", "x"): one})
print(validate_module(N).status, tensor_over(hy, N).dims())

# %% [markdown]
# Yoneda modules are h-flat.  The check is relative to a finite battery of
# acyclic modules, since the real statement quantifies over all of them.

# %%
print(check_hflat(yoneda(A2, "x"), acyclic_battery(opposite(A2))).status)
