# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Dg categories, Mor and path objects
#
# The bundled corpus has a few small categories: the path categories
# `A2` and `A3`, the dual numbers `D` (one odd endomorphism), a category `C`
# whose only arrow complex is contractible, the walking homotopy
# equivalence `E`, and `O` with two composable odd arrows.

# %%
from dgkernels import corpus
from dgkernels.categories import h0, opposite, tensor_categories, validate_dg_category
from dgkernels.linalg import Field
from dgkernels.paths import (
    check_fibration, check_quasi_equivalence, construct_standard_homotopy, mor_category, path_object,
)

F2, Q = Field(2), Field(0)
for name, A in corpus.bundled_categories(Q).items():
    print(name, validate_dg_category(A).status)

# %% [markdown]
# Opposite and tensor categories carry Koszul signs.  With odd arrows the
# validator would catch a missing sign, so passing here is a real check.

# %%
O = corpus.odd_pair(Q)
print(validate_dg_category(opposite(O)).status)
print(validate_dg_category(tensor_categories(O, corpus.contractible_arrow(Q))).status)

# %% [markdown]
# ## Mor(A) and P(A)
#
# Over F2 the closed degree-0 morphisms of `A2` can be enumerated: three
# nonzero ones plus four zero triples give seven objects of `Mor(A2)`.
# Only the identity triples are homotopy equivalences, so `P(A2)` has two.

# %%
A2 = corpus.a2(F2)
print(len(mor_category(A2).objects))
PO = path_object(A2)
print(PO.category.objects)
print(check_quasi_equivalence(PO.iota).status, check_fibration(PO.st).status)

# %% [markdown]
# In `E` the arrow `a` is invertible in `H^0` but not strictly, so
# `(x, y, a)` belongs to `P(E)` and gives a standard homotopy between the
# two object inclusions.

# %%
E = corpus.homotopy_equivalence_category(F2)
print(h0(E).iso_classes())
px, py = corpus.object_functor(E, "x"), corpus.object_functor(E, "y")
a = F2.zeros(E.dim("x", "y"))
a[E.hom("x", "y").names.index("a")] = 1
H, PE = construct_standard_homotopy(px, py, {"*": a})
print(H.obj)
