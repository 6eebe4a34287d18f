# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Resolutions and representability
#
# The reduced bar construction terminates on directed categories and comes
# with a semi-free certificate.  On other categories it truncates and says so.

# %%
from dgkernels import corpus
from dgkernels.categories import field_category
from dgkernels.kernels import Kernel, unit_kernel
from dgkernels.linalg import Field
from dgkernels.modules import lift_left, simple_module, yoneda
from dgkernels.resolutions import (
    bar_resolution, check_resolution, essim_membership, homotopy_equivalence_modules,
    micro_class_count, rqr_check,
)

F2 = Field(2)
A2 = corpus.a2(F2)
Sy = simple_module(A2, "y")
res = bar_resolution(Sy)
print(res.status, {X: res.module.value(X).dims() for X in A2.objects})
print(check_resolution(Sy, res).status)

# %% [markdown]
# Over F2 the search for homotopy equivalences is exhaustive, so a negative
# answer is a proof.  `S_y` is not representable; `h^x` and `h^y` are not
# equivalent.

# %%
print(essim_membership(Sy).status)
print(homotopy_equivalence_modules(yoneda(A2, "x"), yoneda(A2, "y")).status)

# %%
print(rqr_check(unit_kernel(A2)).status)
K = field_category(F2)
print(rqr_check(Kernel(K, A2, lift_left(Sy))).status)

# %% [markdown]
# Right quasi-representable kernels from the point to `A2` fall into as many
# homotopy classes as `H^0(A2)` has isomorphism classes of objects.

# %%
cc = micro_class_count(A2)
print(len(cc.classes), len(cc.h0_classes), cc.bijective)
