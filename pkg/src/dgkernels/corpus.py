"""Bundled small dg categories, modules and kernels used by tests and demos."""

from __future__ import annotations

import itertools
from typing import Iterable

from .categories import DgCategory, DgFunctor, make_category
from .complexes import Complex
from .linalg import Field


def category_from_table(
    F: Field,
    objects: Iterable,
    basis: dict,
    products: dict | None = None,
    differential: dict | None = None,
    name: str = "",
) -> DgCategory:
    """Build a category from named basis elements.

    ``basis[(X, Y)]`` lists ``(name, degree)`` pairs; the identity of each
    object is added automatically as ``"1_X"``.  ``products[(g, f)]`` maps to
    ``{h: coef}`` for ``g o f``; products with an identity are implied.
    ``differential[name]`` is ``{name: coef}``.
    """
    objects = list(objects)
    products = products or {}
    differential = differential or {}
    names: dict = {}
    for X in objects:
        for Y in objects:
            entries = list(basis.get((X, Y), []))
            if X == Y:
                entries = [(f"1_{X}", 0)] + entries
            names[(X, Y)] = entries
    where = {}
    for key, entries in names.items():
        for i, (n, _) in enumerate(entries):
            where[n] = (key, i)
    homs = {}
    for key, entries in names.items():
        k = len(entries)
        d = F.zeros((k, k))
        for j, (n, _) in enumerate(entries):
            for tgt, c in differential.get(n, {}).items():
                tkey, i = where[tgt]
                if tkey != key:
                    raise ValueError(f"d({n}) leaves its hom space")
                d[i, j] = F(c)
        homs[key] = Complex(F, tuple(deg for _, deg in entries), d, tuple(n for n, _ in entries))
    comp = {}
    for X, Y, Z in itertools.product(objects, repeat=3):
        gs, fs, hs = names[(Y, Z)], names[(X, Y)], names[(X, Z)]
        t = F.zeros((len(hs), len(gs), len(fs)))
        for i, (g, _) in enumerate(gs):
            for j, (f, _) in enumerate(fs):
                if g == f"1_{Y}" and Y == Z:
                    t[j, i, j] = F(1)
                    continue
                if f == f"1_{X}" and X == Y:
                    t[i, i, j] = F(1)
                    continue
                for h, c in products.get((g, f), {}).items():
                    hkey, l = where[h]
                    if hkey != (X, Z):
                        raise ValueError(f"{g} o {f} lands outside hom({X}, {Z})")
                    t[l, i, j] = F(c)
        comp[(X, Y, Z)] = t
    units = {}
    for X in objects:
        u = F.zeros(len(names[(X, X)]))
        u[0] = F(1)
        units[X] = u
    return make_category(F, objects, homs, comp, units, name)


def path_category(F: Field, n: int) -> DgCategory:
    """A_n: objects 0 < 1 < ... < n-1, one arrow between each ordered pair.

    For n = 2 the objects are named ``x, y`` and the arrow ``a``.
    """
    if n == 2:
        return category_from_table(F, ["x", "y"], {("x", "y"): [("a", 0)]}, name="A2")
    objs = [f"v{i}" for i in range(n)]
    basis = {(objs[i], objs[j]): [(f"a{i}{j}", 0)] for i in range(n) for j in range(i + 1, n)}
    products = {}
    for i, j, k in itertools.combinations(range(n), 3):
        products[(f"a{j}{k}", f"a{i}{j}")] = {f"a{i}{k}": 1}
    return category_from_table(F, objs, basis, products, name=f"A{n}")


def a2(F: Field) -> DgCategory:
    return path_category(F, 2)


def a3(F: Field) -> DgCategory:
    return path_category(F, 3)


def dual_numbers(F: Field) -> DgCategory:
    """One object, End = K.1 + K.eps with |eps| = -1, eps^2 = 0, d eps = 0."""
    return category_from_table(F, ["*"], {("*", "*"): [("eps", -1)]}, name="D")


def contractible_arrow(F: Field) -> DgCategory:
    """Objects x, y with hom(x, y) the contractible complex K.h -> K.c (dh = c)."""
    return category_from_table(
        F, ["x", "y"], {("x", "y"): [("h", -1), ("c", 0)]},
        differential={"h": {"c": 1}}, name="C",
    )


def homotopy_equivalence_category(F: Field) -> DgCategory:
    """Walking homotopy equivalence ``a: x -> y`` with homotopy inverse ``b``.

    ``ba`` and ``ab`` are idempotents homotopic to the identities via
    ``d hx = ba - 1_x`` and ``d hy = ab - 1_y``; ``a`` is invertible in H^0
    but not in Z^0.
    """
    basis = {
        ("x", "x"): [("ba", 0), ("hx", -1)],
        ("y", "y"): [("ab", 0), ("hy", -1)],
        ("x", "y"): [("a", 0)],
        ("y", "x"): [("b", 0)],
    }
    products = {
        ("b", "a"): {"ba": 1},
        ("a", "b"): {"ab": 1},
        ("ba", "ba"): {"ba": 1},
        ("ab", "ab"): {"ab": 1},
        ("a", "ba"): {"a": 1},
        ("ab", "a"): {"a": 1},
        ("ba", "b"): {"b": 1},
        ("b", "ab"): {"b": 1},
    }
    differential = {"hx": {"ba": 1, "1_x": -1}, "hy": {"ab": 1, "1_y": -1}}
    return category_from_table(F, ["x", "y"], basis, products, differential, name="E")


def odd_pair(F: Field) -> DgCategory:
    """Objects x, y, z with odd arrows u: x -> y, v: y -> z and w = v o u."""
    return category_from_table(
        F, ["x", "y", "z"],
        {("x", "y"): [("u", 1)], ("y", "z"): [("v", 1)], ("x", "z"): [("w", 2)]},
        {("v", "u"): {"w": 1}}, name="O",
    )


def bundled_categories(F: Field) -> dict[str, DgCategory]:
    return {
        "A2": a2(F),
        "A3": a3(F),
        "D": dual_numbers(F),
        "C": contractible_arrow(F),
        "E": homotopy_equivalence_category(F),
        "O": odd_pair(F),
    }


def object_functor(B: DgCategory, X) -> DgFunctor:
    """The functor K -> B picking the object X."""
    from .categories import field_category

    K = field_category(B.field)
    return DgFunctor(K, B, {"*": X}, {("*", "*"): B.unit(X).reshape(-1, 1)}, f"pt_{X}")


def arrow_functor(A: DgCategory, B: DgCategory, obj: dict, images: dict) -> DgFunctor:
    """Functor from named images: ``images[name] = {name: coef}`` (units implied)."""
    F = A.field
    maps = {}
    for X in A.objects:
        for Y in A.objects:
            src, tgt = A.hom(X, Y), B.hom(obj[X], obj[Y])
            m = F.zeros((tgt.dim, src.dim))
            tnames = list(tgt.names or ())
            for j, n in enumerate(src.names or ()):
                if X == Y and j == 0 and n == f"1_{X}":
                    m[:, j] = B.unit(obj[X])
                    continue
                for t, c in images.get(n, {}).items():
                    m[tnames.index(t), j] = F(c)
            maps[(X, Y)] = m
    return DgFunctor(A, B, dict(obj), maps)


def bundled_functors(F: Field) -> dict[str, DgFunctor]:
    """Small dg functors between bundled categories."""
    from .categories import identity_functor

    A2, A3, C, E, D = a2(F), a3(F), contractible_arrow(F), homotopy_equivalence_category(F), dual_numbers(F)
    from .categories import field_category

    K = field_category(F)
    out = {
        "A2->A3 outer": arrow_functor(A2, A3, {"x": "v0", "y": "v2"}, {"a": {"a02": 1}}),
        "A2->A3 upper": arrow_functor(A2, A3, {"x": "v1", "y": "v2"}, {"a": {"a12": 1}}),
        "A3->A2 collapse": arrow_functor(A3, A2, {"v0": "x", "v1": "x", "v2": "y"},
                                         {"a01": {"1_x": 1}, "a02": {"a": 1}, "a12": {"a": 1}}),
        "A2->C": arrow_functor(A2, C, {"x": "x", "y": "y"}, {"a": {"c": 1}}),
        "A2->E": arrow_functor(A2, E, {"x": "x", "y": "y"}, {"a": {"a": 1}}),
        "D->K": arrow_functor(D, K, {"*": "*"}, {}),
        "id_O": identity_functor(odd_pair(F)),
    }
    # arrow_functor does not know the unit name of K
    out["D->K"].maps[("*", "*")][0, 0] = F(1)
    for k, G in out.items():
        object.__setattr__(G, "name", k)
    return out


def bundled_kernels(F: Field) -> dict:
    """Kernels: diagonals, kernels of functors, rank-one and shifted carriers."""
    from .kernels import Kernel, functor_kernel, unit_kernel
    from .modules import external_tensor, shift_module, yoneda
    from .categories import opposite

    cats = bundled_categories(F)
    out = {f"diag({n})": unit_kernel(A) for n, A in cats.items()}
    for n, G in bundled_functors(F).items():
        out[f"ker({n})"] = functor_kernel(G)
    A2, O, D = cats["A2"], cats["O"], cats["D"]
    r1 = external_tensor(yoneda(opposite(A2), "y"), yoneda(O, "y"))
    out["h_y#h^y (A2->O)"] = Kernel(A2, O, r1, "h_y#h^y")
    r2 = shift_module(external_tensor(yoneda(opposite(O), "x"), yoneda(D, "*")), 1)
    out["(h_x#h^*)[1] (O->D)"] = Kernel(O, D, r2, "(h_x#h^*)[1]")
    return out


__all__ = [
    "category_from_table", "path_category", "a2", "a3", "dual_numbers", "contractible_arrow",
    "homotopy_equivalence_category", "odd_pair", "bundled_categories", "object_functor",
    "arrow_functor", "bundled_functors", "bundled_kernels", "bundled_documents", "write_documents",
]


def bundled_documents(F: Field) -> dict:
    """File name -> object for the shipped document corpus (``*`` is spelled ``pt``)."""
    from .modules import simple_module, validate_module, yoneda

    out = {}
    cats = bundled_categories(F)
    for n, A in cats.items():
        out[f"{n}.dg"] = A
    for n, A in cats.items():
        for X in A.objects:
            out[f"h^{X}({n}).dg"] = yoneda(A, X)
        for X in A.objects:
            try:
                S = simple_module(A, X)
            except ValueError:
                continue
            if validate_module(S).ok:
                out[f"S_{X}({n}).dg"] = S
    for n, G in bundled_functors(F).items():
        out[f"{n}.dg".replace(" ", "_")] = G
    for n, E in bundled_kernels(F).items():
        out[f"{n}.dg".replace(" ", "_")] = E
    return {k.replace("*", "pt"): v for k, v in out.items()}


def write_documents(directory, F: Field) -> list:
    """Serialize :func:`bundled_documents` into ``directory``; returns the paths."""
    from pathlib import Path

    from . import io

    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, obj in bundled_documents(F).items():
        io.dump(obj, root / name)
        paths.append(root / name)
    return paths


if __name__ == "__main__":
    # regenerate the shipped corpus: python3 -m dgkernels.corpus
    from pathlib import Path

    here = Path(__file__).parent / "data"
    for F in (Field(2), Field(0)):
        write_documents(here / str(F), F)
