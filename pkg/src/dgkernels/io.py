"""JSON documents for categories, functors, modules, kernels and transformations.

A document looks like::

    {"version": 1, "field": "Fp:2", "kind": "module", "name": "h^x",
     "payload": {...}, "refs": {"A2": {"kind": "category", ...}}}

Sub-objects (categories, modules) are stored once under ``refs`` and pointed
to with ``{"ref": "<id>"}``; an inline ``{"kind": ..., "payload": ...}``
is accepted anywhere a reference is.  Matrices are sparse
``{"shape": [...], "entries": [[i, j, ..., value], ...]}`` with values
written as ``"p/q"`` strings over Q and reduced integers over F_p.
Object labels are strings, integers or lists (decoded to tuples).
Output is canonical: sorted keys, one-space indent, trailing newline.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .categories import DgCategory, DgFunctor
from .complexes import Complex
from .kernels import Kernel, kernel_base
from .linalg import Field, FieldMismatch
from .modules import DgModule, NatTransform

VERSION = 1
KINDS = ("category", "functor", "module", "kernel", "transformation")


class ParseError(ValueError):
    """Malformed document; carries a JSON path or a line/column position."""

    def __init__(self, message: str, path: str = "$", line: Optional[int] = None,
                 col: Optional[int] = None):
        self.message, self.path, self.line, self.col = message, path, line, col
        where = f"line {line}, column {col}" if line is not None else path
        super().__init__(f"{where}: {message}")


@dataclass
class Document:
    kind: str
    obj: Any
    field: Field
    name: str = ""
    refs: dict = field(default_factory=dict)


def kind_of(obj) -> str:
    for cls, kind in ((DgCategory, "category"), (DgFunctor, "functor"), (DgModule, "module"),
                      (Kernel, "kernel"), (NatTransform, "transformation")):
        if isinstance(obj, cls):
            return kind
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def field_of(obj) -> Field:
    if isinstance(obj, DgFunctor):
        return obj.source.field
    if isinstance(obj, NatTransform):
        return obj.source.field
    return obj.field


# --------------------------------------------------------------------------
# encoding


def encode_label(x):
    if isinstance(x, tuple):
        return [encode_label(y) for y in x]
    if isinstance(x, (str, int)) and not isinstance(x, bool):
        return x
    if isinstance(x, np.integer):
        return int(x)
    raise TypeError(f"unsupported object label {x!r}")


def encode_array(F: Field, a: np.ndarray) -> dict:
    a = np.asarray(a)
    entries = [[*map(int, idx), F.to_text(a[idx])] for idx in zip(*np.nonzero(a != 0))]
    return {"shape": list(a.shape), "entries": entries}


def encode_complex(F: Field, C: Complex) -> dict:
    return {"degrees": list(C.degrees), "names": list(C.names) if C.names is not None else None,
            "d": encode_array(F, C.d)}


class _Encoder:
    def __init__(self):
        self.refs: dict[str, dict] = {}
        self.ids: list[tuple[Any, str]] = []

    def ref(self, obj) -> dict:
        for other, rid in self.ids:
            if other is obj:
                return {"ref": rid}
        for other, rid in self.ids:
            if type(other) is type(obj) and other == obj and other.name == obj.name:
                return {"ref": rid}
        base = re.sub(r"[^A-Za-z0-9_.()^#*+-]+", "_", obj.name or kind_of(obj)) or kind_of(obj)
        rid, k = base, 1
        while rid in self.refs:
            k += 1
            rid = f"{base}~{k}"
        self.refs[rid] = {}
        self.ids.append((obj, rid))
        self.refs[rid] = {"kind": kind_of(obj), "name": obj.name, "payload": self.payload(obj)}
        return {"ref": rid}

    def payload(self, obj) -> dict:
        return getattr(self, "_" + kind_of(obj))(obj)

    def _category(self, A: DgCategory) -> dict:
        F = A.field
        objs = A.objects
        return {
            "objects": [encode_label(X) for X in objs],
            "homs": [{"source": encode_label(X), "target": encode_label(Y), **encode_complex(F, A.hom(X, Y))}
                     for X in objs for Y in objs],
            "composition": [{"objects": [encode_label(Z) for Z in key], **encode_array(F, A.comp[key])}
                            for key in _ordered(A.comp, objs, 3)],
            "units": [{"object": encode_label(X), **encode_array(F, A.units[X])} for X in objs],
            "factors": [self.ref(C) for C in A.factors] if A.factors else None,
        }

    def _values(self, M: DgModule) -> dict:
        F, objs = M.field, M.base.objects
        return {
            "values": [{"object": encode_label(X), **encode_complex(F, M.values[X])} for X in objs],
            "action": [{"objects": [encode_label(Z) for Z in key], **encode_array(F, M.action[key])}
                       for key in _ordered(M.action, objs, 2)],
        }

    def _module(self, M: DgModule) -> dict:
        return {"base": self.ref(M.base), **self._values(M)}

    def _functor(self, G: DgFunctor) -> dict:
        F, objs = G.source.field, G.source.objects
        return {
            "source": self.ref(G.source),
            "target": self.ref(G.target),
            "objects": [[encode_label(X), encode_label(G.obj[X])] for X in objs],
            "maps": [{"objects": [encode_label(X), encode_label(Y)], **encode_array(F, G.maps[(X, Y)])}
                     for X in objs for Y in objs],
        }

    def _kernel(self, E: Kernel) -> dict:
        return {"left": self.ref(E.left), "right": self.ref(E.right),
                "carrier": {"name": E.carrier.name, **self._values(E.carrier)}}

    def _transformation(self, t: NatTransform) -> dict:
        F = t.source.field
        return {
            "source": self.ref(t.source),
            "target": self.ref(t.target),
            "degree": int(t.degree),
            "components": [{"object": encode_label(X), **encode_array(F, t.components[X])}
                           for X in t.source.base.objects],
        }


def _ordered(table: dict, objects: tuple, arity: int) -> list:
    """Keys of ``table`` in the product order of ``objects``."""
    index = {X: i for i, X in enumerate(objects)}
    return sorted(table, key=lambda key: tuple(index[Z] for Z in key))


def to_json(obj) -> dict:
    enc = _Encoder()
    kind = kind_of(obj)
    payload = enc.payload(obj)
    return {"version": VERSION, "field": field_of(obj).descriptor(), "kind": kind,
            "name": obj.name if hasattr(obj, "name") else "", "payload": payload, "refs": enc.refs}


def serialize(obj) -> str:
    """Canonical text of a document (a :class:`Document` or a bare object)."""
    if isinstance(obj, Document):
        obj = obj.obj
    return canonical(to_json(obj))


def canonical(data) -> str:
    return json.dumps(data, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


# --------------------------------------------------------------------------
# decoding


class _Decoder:
    def __init__(self, F: Field, refs: dict):
        self.F = F
        self.raw = refs
        self.done: dict[str, Any] = {}
        self.active: set[str] = set()

    def fail(self, msg, path):
        raise ParseError(msg, path)

    def get(self, data, key, path, kind=None):
        if not isinstance(data, dict):
            self.fail(f"expected an object, found {type(data).__name__}", path)
        if key not in data:
            self.fail(f"missing key {key!r}", path)
        v = data[key]
        if kind is not None and not isinstance(v, kind):
            self.fail(f"{key!r} must be {getattr(kind, '__name__', kind)}", f"{path}.{key}")
        return v

    def label(self, x, path):
        if isinstance(x, list):
            return tuple(self.label(y, f"{path}[{i}]") for i, y in enumerate(x))
        if isinstance(x, bool) or not isinstance(x, (str, int)):
            self.fail(f"bad object label {x!r}", path)
        return x

    def scalar(self, v, path):
        F = self.F
        if F.is_finite:
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < F.p:
                self.fail(f"expected an integer in [0, {F.p}), found {v!r}", path)
            return v
        if isinstance(v, bool) or not isinstance(v, (str, int)):
            self.fail(f"expected a rational like \"p/q\", found {v!r}", path)
        try:
            return F(Fraction(v) if isinstance(v, str) else v)
        except (ValueError, ZeroDivisionError):
            self.fail(f"not a rational: {v!r}", path)

    def array(self, data, path, shape=None) -> np.ndarray:
        dims = self.get(data, "shape", path, list)
        if not all(isinstance(n, int) and n >= 0 for n in dims):
            self.fail("shape must list non-negative integers", f"{path}.shape")
        if shape is not None and tuple(dims) != tuple(shape):
            self.fail(f"shape {tuple(dims)} does not match expected {tuple(shape)}", f"{path}.shape")
        out = self.F.zeros(tuple(dims))
        for k, e in enumerate(self.get(data, "entries", path, list)):
            p = f"{path}.entries[{k}]"
            if not isinstance(e, list) or len(e) != len(dims) + 1:
                self.fail(f"entry must be {len(dims)} indices and a value", p)
            idx = e[:-1]
            if not all(isinstance(i, int) and 0 <= i < n for i, n in zip(idx, dims)):
                self.fail(f"index {idx} out of range for shape {dims}", p)
            out[tuple(idx)] = self.scalar(e[-1], f"{p}[{len(dims)}]")
        return out

    def complex(self, data, path) -> Complex:
        degs = self.get(data, "degrees", path, list)
        if not all(isinstance(n, int) and not isinstance(n, bool) for n in degs):
            self.fail("degrees must be integers", f"{path}.degrees")
        names = data.get("names") if isinstance(data, dict) else None
        if names is not None and (not isinstance(names, list) or len(names) != len(degs)
                                  or not all(isinstance(s, str) for s in names)):
            self.fail("names must be one string per basis vector", f"{path}.names")
        d = self.array(self.get(data, "d", path), f"{path}.d", (len(degs), len(degs)))
        return Complex(self.F, tuple(degs), d, tuple(names) if names is not None else None)

    def resolve(self, data, path, kind):
        """Follow a reference or decode an inline sub-document."""
        if isinstance(data, dict) and "ref" in data:
            rid = data["ref"]
            if not isinstance(rid, str) or rid not in self.raw:
                self.fail(f"dangling reference {rid!r}", path)
            if rid in self.active:
                self.fail(f"circular reference {rid!r}", path)
            if rid not in self.done:
                self.active.add(rid)
                self.done[rid] = self.document(self.raw[rid], f"$.refs.{rid}")
                self.active.discard(rid)
            obj = self.done[rid]
        else:
            obj = self.document(data, path)
        if kind_of(obj) != kind:
            self.fail(f"expected a {kind}, found a {kind_of(obj)}", path)
        return obj

    def document(self, data, path):
        kind = self.get(data, "kind", path, str)
        if kind not in KINDS:
            self.fail(f"unknown kind {kind!r}", f"{path}.kind")
        name = data.get("name", "") or ""
        if not isinstance(name, str):
            self.fail("name must be a string", f"{path}.name")
        return getattr(self, "_" + kind)(self.get(data, "payload", path, dict), f"{path}.payload", name)

    def _category(self, data, path, name):
        objs = [self.label(x, f"{path}.objects[{i}]")
                for i, x in enumerate(self.get(data, "objects", path, list))]
        if len(set(objs)) != len(objs):
            self.fail("duplicate objects", f"{path}.objects")
        known = set(objs)

        def obj(x, p):
            X = self.label(x, p)
            if X not in known:
                self.fail(f"unknown object {X!r}", p)
            return X

        homs = {}
        for i, h in enumerate(self.get(data, "homs", path, list)):
            p = f"{path}.homs[{i}]"
            key = (obj(self.get(h, "source", p), f"{p}.source"), obj(self.get(h, "target", p), f"{p}.target"))
            homs[key] = self.complex(h, p)
        for X in objs:
            for Y in objs:
                if (X, Y) not in homs:
                    self.fail(f"missing hom({X!r}, {Y!r})", f"{path}.homs")
        comp = {}
        for i, c in enumerate(self.get(data, "composition", path, list)):
            p = f"{path}.composition[{i}]"
            key = self.get(c, "objects", p, list)
            if len(key) != 3:
                self.fail("composition needs three objects", f"{p}.objects")
            X, Y, Z = (obj(x, f"{p}.objects[{k}]") for k, x in enumerate(key))
            comp[(X, Y, Z)] = self.array(c, p, (homs[(X, Z)].dim, homs[(Y, Z)].dim, homs[(X, Y)].dim))
        units = {}
        for i, u in enumerate(self.get(data, "units", path, list)):
            p = f"{path}.units[{i}]"
            X = obj(self.get(u, "object", p), f"{p}.object")
            units[X] = self.array(u, p, (homs[(X, X)].dim,))
        for X in objs:
            if X not in units:
                self.fail(f"missing unit of {X!r}", f"{path}.units")
        factors = data.get("factors")
        if factors is not None:
            if not isinstance(factors, list):
                self.fail("factors must be a list", f"{path}.factors")
            factors = tuple(self.resolve(f, f"{path}.factors[{i}]", "category")
                            for i, f in enumerate(factors))
        return DgCategory(self.F, tuple(objs), homs, comp, units, name, factors)

    def _values(self, data, path, A: DgCategory, name):
        known = set(A.objects)

        def obj(x, p):
            X = self.label(x, p)
            if X not in known:
                self.fail(f"unknown object {X!r}", p)
            return X

        values = {}
        for i, v in enumerate(self.get(data, "values", path, list)):
            p = f"{path}.values[{i}]"
            values[obj(self.get(v, "object", p), f"{p}.object")] = self.complex(v, p)
        for X in A.objects:
            if X not in values:
                self.fail(f"missing value at {X!r}", f"{path}.values")
        action = {}
        for i, a in enumerate(self.get(data, "action", path, list)):
            p = f"{path}.action[{i}]"
            key = self.get(a, "objects", p, list)
            if len(key) != 2:
                self.fail("action needs two objects", f"{p}.objects")
            X, Y = (obj(x, f"{p}.objects[{k}]") for k, x in enumerate(key))
            action[(X, Y)] = self.array(a, p, (values[X].dim, A.dim(X, Y), values[Y].dim))
        return DgModule(A, values, action, name)

    def _module(self, data, path, name):
        A = self.resolve(self.get(data, "base", path), f"{path}.base", "category")
        return self._values(data, path, A, name)

    def _functor(self, data, path, name):
        A = self.resolve(self.get(data, "source", path), f"{path}.source", "category")
        B = self.resolve(self.get(data, "target", path), f"{path}.target", "category")
        obj = {}
        for i, pair in enumerate(self.get(data, "objects", path, list)):
            p = f"{path}.objects[{i}]"
            if not isinstance(pair, list) or len(pair) != 2:
                self.fail("object images are [source, target] pairs", p)
            X, Y = self.label(pair[0], f"{p}[0]"), self.label(pair[1], f"{p}[1]")
            if X not in A.objects:
                self.fail(f"unknown source object {X!r}", f"{p}[0]")
            if Y not in B.objects:
                self.fail(f"unknown target object {Y!r}", f"{p}[1]")
            obj[X] = Y
        for X in A.objects:
            if X not in obj:
                self.fail(f"no image for {X!r}", f"{path}.objects")
        maps = {}
        for i, m in enumerate(self.get(data, "maps", path, list)):
            p = f"{path}.maps[{i}]"
            key = self.get(m, "objects", p, list)
            if len(key) != 2:
                self.fail("maps need two objects", f"{p}.objects")
            X, Y = (self.label(x, f"{p}.objects[{k}]") for k, x in enumerate(key))
            if X not in obj or Y not in obj:
                self.fail(f"unknown objects {key!r}", f"{p}.objects")
            maps[(X, Y)] = self.array(m, p, (B.dim(obj[X], obj[Y]), A.dim(X, Y)))
        for X in A.objects:
            for Y in A.objects:
                if (X, Y) not in maps:
                    self.fail(f"missing map on hom({X!r}, {Y!r})", f"{path}.maps")
        return DgFunctor(A, B, obj, maps, name)

    def _kernel(self, data, path, name):
        A = self.resolve(self.get(data, "left", path), f"{path}.left", "category")
        B = self.resolve(self.get(data, "right", path), f"{path}.right", "category")
        carrier = self.get(data, "carrier", path, dict)
        cname = carrier.get("name", "") or ""
        M = self._values(carrier, f"{path}.carrier", kernel_base(A, B), cname)
        return Kernel(A, B, M, name)

    def _transformation(self, data, path, name):
        M = self.resolve(self.get(data, "source", path), f"{path}.source", "module")
        N = self.resolve(self.get(data, "target", path), f"{path}.target", "module")
        if not M.base.same_as(N.base):
            self.fail("source and target live over different categories", path)
        deg = self.get(data, "degree", path, int)
        comps = {}
        for i, c in enumerate(self.get(data, "components", path, list)):
            p = f"{path}.components[{i}]"
            X = self.label(self.get(c, "object", p), f"{p}.object")
            if X not in M.base.objects:
                self.fail(f"unknown object {X!r}", f"{p}.object")
            comps[X] = self.array(c, p, (N.dim(X), M.dim(X)))
        for X in M.base.objects:
            if X not in comps:
                self.fail(f"missing component at {X!r}", f"{path}.components")
        return NatTransform(M, N, deg, comps)


def parse(text: str, field: Optional[Field] = None, expect: Optional[str] = None) -> Document:
    """Parse document text; ``field`` (if given) must match the declared field."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno, col=e.colno) from None
    if not isinstance(data, dict):
        raise ParseError("a document is a JSON object")
    if "version" not in data:
        raise ParseError("missing key 'version'")
    if data["version"] != VERSION:
        raise ParseError(f"unknown version {data['version']!r}", "$.version")
    desc = data.get("field")
    if not isinstance(desc, str):
        raise ParseError("missing field descriptor", "$.field")
    try:
        F = Field.parse(desc)
    except ValueError as e:
        raise ParseError(str(e), "$.field") from None
    if field is not None and field != F:
        raise ParseError(f"field mismatch: document is over {F.descriptor()}, expected {field.descriptor()}",
                         "$.field")
    refs = data.get("refs", {})
    if not isinstance(refs, dict):
        raise ParseError("refs must be an object", "$.refs")
    dec = _Decoder(F, refs)
    obj = dec.document(data, "$")
    kind = data["kind"]
    if expect is not None and kind != expect:
        raise ParseError(f"expected a {expect} document, found a {kind}", "$.kind")
    return Document(kind, obj, F, data.get("name", "") or "", dict(dec.done))


def load(path, field: Optional[Field] = None, expect: Optional[str] = None) -> Document:
    return parse(Path(path).read_text(encoding="utf-8"), field, expect)


def dump(obj, path) -> None:
    Path(path).write_text(serialize(obj), encoding="utf-8")


def same(a, b) -> bool:
    """Bit-exact equality of two decoded objects, names included."""
    if type(a) is not type(b):
        return False
    if isinstance(a, Kernel):
        return a.name == b.name and a.left == b.left and a.right == b.right and a.carrier == b.carrier \
            and a.carrier.name == b.carrier.name
    if isinstance(a, NatTransform):
        return a == b and same(a.source, b.source) and same(a.target, b.target)
    if isinstance(a, DgModule):
        return a == b and a.name == b.name and same(a.base, b.base)
    if isinstance(a, DgFunctor):
        return a == b and a.name == b.name and same(a.source, b.source) and same(a.target, b.target)
    if isinstance(a, DgCategory):
        if not (a == b and a.name == b.name and set(a.comp) == set(b.comp)):
            return False
        if (a.factors is None) != (b.factors is None):
            return False
        return a.factors is None or all(same(x, y) for x, y in zip(a.factors, b.factors))
    return a == b


__all__ = ["VERSION", "KINDS", "Document", "ParseError", "FieldMismatch", "parse", "serialize", "load",
           "dump", "to_json", "canonical", "same", "kind_of", "encode_array", "encode_label"]
