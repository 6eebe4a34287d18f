"""Command-line interface: ``dgkernels <command> [documents] [options]``.

Every command produces a report; ``--json`` prints it machine-readably.
Constructions write their result document to ``--out`` (or print it when
no ``--out`` is given and ``--json`` is off).
Exit codes: 0 pass, 1 fail, 2 unknown, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import io as _io
import json
import sys
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path
from typing import Optional

import jsonschema

from . import io
from .categories import (
    DgCategory,
    h0,
    opposite,
    tensor_categories,
    validate_dg_category,
    validate_functor,
    z0,
)
from .kernels import (
    check_adjunction,
    compose_kernels,
    curry_kernel,
    ext_apply,
    external_kernel_product,
    ind_apply,
    res_apply,
    res_g_apply,
    uncurry_functor,
    unit_kernel,
    validate_kernel,
    validate_module_functor,
    yoneda_after,
)
from .linalg import Field
from .modules import external_tensor, validate_module, validate_transform, yoneda
from .paths import (
    StandardHomotopyError,
    check_fibration,
    check_quasi_equivalence,
    construct_standard_homotopy,
    fiber_product,
    mor_category,
    path_object,
)
from .report import PASS, FAIL, UNKNOWN, Report, _plain

EXIT = {PASS: 0, FAIL: 1, UNKNOWN: 2}
USAGE_ERROR = 3

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "dgkernels report",
    "type": "object",
    "required": ["command", "status", "exit_code", "subject", "verdicts"],
    "additionalProperties": False,
    "properties": {
        "command": {"type": "string"},
        "status": {"enum": [PASS, FAIL, UNKNOWN, "error"]},
        "exit_code": {"enum": [0, 1, 2, 3]},
        "subject": {"type": "string"},
        "field": {"type": "string"},
        "seed": {"type": "integer"},
        "verdicts": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["check", "status", "detail"],
                "additionalProperties": False,
                "properties": {
                    "check": {"type": "string"},
                    "status": {"enum": [PASS, FAIL, UNKNOWN]},
                    "detail": {"type": "object"},
                },
            },
        },
        "output": {"type": "object", "description": "document produced by a construction"},
        "written": {"type": "string"},
        "error": {"type": "string"},
    },
}


class UsageError(Exception):
    pass


def schema_errors(text: str) -> list[str]:
    """Messages of every schema violation of a JSON report (empty if valid)."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        return [f"not JSON: {e}"]
    v = jsonschema.Draft202012Validator(REPORT_SCHEMA)
    return [e.message for e in v.iter_errors(data)]


# --------------------------------------------------------------------------
# helpers


class Context:
    def __init__(self, args):
        self.args = args
        self.field: Optional[Field] = Field.parse(args.field) if args.field else None
        self.output = None

    @property
    def F(self) -> Field:
        return self.field or Field.default()

    def load(self, path: str, kind: str):
        doc = io.load(path, self.field, kind)
        if self.field is None:
            self.field = doc.field
        return doc.obj

    def label(self, text: str, A: DgCategory):
        """An object label: the text itself, or JSON for tuples and integers."""
        cand = [text]
        try:
            v = json.loads(text)
            cand.insert(0, tuple(_tuples(v)) if isinstance(v, list) else v)
        except json.JSONDecodeError:
            pass
        for c in cand:
            if c in A.objects:
                return c
        raise UsageError(f"unknown object {text!r}; objects are {list(A.objects)!r}")


def _tuples(v):
    return [tuple(_tuples(x)) if isinstance(x, list) else x for x in v]


def _validate(obj) -> Report:
    kind = io.kind_of(obj)
    return {"category": validate_dg_category, "functor": validate_functor, "module": validate_module,
            "kernel": validate_kernel, "transformation": validate_transform}[kind](obj)


def _constructed(ctx: Context, obj, subject: str, validate: bool = True) -> Report:
    rep = Report(subject)
    if validate:
        rep.extend(_validate(obj), "output: ")
    else:
        rep.add("constructed", True)
    ctx.output = obj
    return rep


# --------------------------------------------------------------------------
# commands


def cmd_validate(ctx, a):
    obj = ctx.load(a.document, None)
    return _validate(obj)


def cmd_opposite(ctx, a):
    return _constructed(ctx, opposite(ctx.load(a.category, "category")), "opposite")


def cmd_tensor_cat(ctx, a):
    A, B = ctx.load(a.first, "category"), ctx.load(a.second, "category")
    return _constructed(ctx, tensor_categories(A, B), "tensor product of categories")


def cmd_tensor_mod(ctx, a):
    from .tensors import tensor_over, tensor_over_middle
    from .complexes import cohomology_dims

    M, N = ctx.load(a.first, "module"), ctx.load(a.second, "module")
    if M.base.factors and N.base.factors:
        return _constructed(ctx, tensor_over_middle(M, N), "tensor product over the middle category")
    C = tensor_over(M, N)
    rep = Report("tensor product over the base")
    rep.add("computed", True, dims=C.dims(), cohomology=cohomology_dims(C))
    return rep


def cmd_external_tensor(ctx, a):
    M, N = ctx.load(a.first, "module"), ctx.load(a.second, "module")
    return _constructed(ctx, external_tensor(M, N), "external tensor product")


def _linear_report(L, subject) -> Report:
    rep = Report(subject)
    rep.add("computed", True, dims={f"{X!r} -> {Y!r}": L.dims[(X, Y)] for X in L.objects for Y in L.objects},
            iso_classes=L.iso_classes() if L.field.is_finite else None)
    return rep


def cmd_h0(ctx, a):
    return _linear_report(h0(ctx.load(a.category, "category")), "homotopy category")


def cmd_z0(ctx, a):
    return _linear_report(z0(ctx.load(a.category, "category")), "degree-zero cycle category")


def cmd_yoneda(ctx, a):
    A = ctx.load(a.category, "category")
    return _constructed(ctx, yoneda(A, ctx.label(a.object, A)), "Yoneda module")


def cmd_mor(ctx, a):
    return _constructed(ctx, mor_category(ctx.load(a.category, "category")), "morphism category")


def cmd_path_object(ctx, a):
    from .categories import compose_functors, diagonal_functor

    A = ctx.load(a.category, "category")
    PO = path_object(A)
    rep = _constructed(ctx, PO.category, "path object")
    st = compose_functors(PO.st, PO.iota)
    rep.add("(s, t) o iota = diagonal", st == diagonal_functor(A) and st.obj == diagonal_functor(A).obj)
    return rep


def cmd_fiber_product(ctx, a):
    Fn, Gn = ctx.load(a.first, "functor"), ctx.load(a.second, "functor")
    return _constructed(ctx, fiber_product(Fn, Gn).category, "fiber product")


def cmd_curry(ctx, a):
    E = ctx.load(a.kernel, "kernel")
    Phi = curry_kernel(E)
    rep = Report("curried kernel")
    rep.extend(validate_module_functor(Phi))
    if a.object is not None:
        ctx.output = Phi(ctx.label(a.object, E.left))
    rep.add("values", True, dims={repr(X): Phi(X).total_dim() for X in E.left.objects})
    return rep


def cmd_uncurry(ctx, a):
    G = ctx.load(a.functor, "functor")
    return _constructed(ctx, uncurry_functor(yoneda_after(G)), "kernel of X |-> h^G(X)")


def cmd_unit_kernel(ctx, a):
    return _constructed(ctx, unit_kernel(ctx.load(a.category, "category")), "diagonal kernel")


def cmd_ext(ctx, a):
    E, M = ctx.load(a.kernel, "kernel"), ctx.load(a.module, "module")
    return _constructed(ctx, ext_apply(E, M), "extension")


def cmd_res(ctx, a):
    E, N = ctx.load(a.kernel, "kernel"), ctx.load(a.module, "module")
    return _constructed(ctx, res_apply(curry_kernel(E), N), "restriction")


def cmd_ind(ctx, a):
    G, M = ctx.load(a.functor, "functor"), ctx.load(a.module, "module")
    return _constructed(ctx, ind_apply(G, M), "induction")


def cmd_res_g(ctx, a):
    G, N = ctx.load(a.functor, "functor"), ctx.load(a.module, "module")
    return _constructed(ctx, res_g_apply(G, N), "restriction along a functor")


def cmd_compose_kernels(ctx, a):
    E1, E2 = ctx.load(a.first, "kernel"), ctx.load(a.second, "kernel")
    return _constructed(ctx, compose_kernels(E1, E2), "kernel composition")


def cmd_kernel_product(ctx, a):
    E1, E2 = ctx.load(a.first, "kernel"), ctx.load(a.second, "kernel")
    return _constructed(ctx, external_kernel_product(E1, E2), "external product of kernels")


def cmd_check_adjunction(ctx, a):
    E, M, N = ctx.load(a.kernel, "kernel"), ctx.load(a.source, "module"), ctx.load(a.target, "module")
    return check_adjunction(E, M, N)


def cmd_bar_resolve(ctx, a):
    from .resolutions import bar_resolution, check_resolution

    M = ctx.load(a.module, "module")
    res = bar_resolution(M, a.max_length)
    ctx.output = res.module
    rep = check_resolution(M, res)
    rep.subject = "bar resolution"
    return rep


def cmd_semifree_check(ctx, a):
    from .resolutions import CertificateEntry, bar_resolution, certificate_report, certify

    M = ctx.load(a.module, "module")
    F = M.field
    if a.certificate is None:
        res = bar_resolution(M, a.max_length)
        rep = Report("semi-free certificate of the bar resolution")
        if res.certificate is None:
            rep.add("certificate found", False, status=res.status)
            return rep
        rep.extend(certificate_report(res.module, res.certificate))
        ctx.output = res.module
        return rep
    data = json.loads(Path(a.certificate).read_text(encoding="utf-8"))
    steps = []
    for step in data:
        row = []
        for e in step:
            X = ctx.label(json.dumps(e["object"]) if not isinstance(e["object"], str) else e["object"], M.base)
            row.append(CertificateEntry(X, int(e["shift"]), F.array([F(v) for v in e["element"]])))
        steps.append(row)
    cert = certify(M, steps)
    rep = Report("semi-free certificate")
    if cert is None:
        rep.add("attaching maps exist", False)
        return rep
    rep.extend(certificate_report(M, cert))
    return rep


def cmd_hproj_battery(ctx, a):
    from .resolutions import default_battery, hprojective_battery_check

    M = ctx.load(a.module, "module")
    battery = [ctx.load(p, "module") for p in a.battery] if a.battery else default_battery(M.base)
    return hprojective_battery_check(M, battery)


def _heq_report(r, subject) -> Report:
    rep = Report(subject)
    ok = {"equivalent": True, "not-equivalent": False}.get(r.status)
    rep.add("homotopy equivalent", ok, status=r.status, searched=r.searched, reason=r.reason)
    return rep


def cmd_heq_modules(ctx, a):
    from .resolutions import homotopy_equivalence_modules

    M, N = ctx.load(a.first, "module"), ctx.load(a.second, "module")
    return _heq_report(homotopy_equivalence_modules(M, N, a.seed, a.budget), "homotopy equivalence of modules")


def cmd_essim(ctx, a):
    from .resolutions import essim_membership

    M = ctx.load(a.module, "module")
    m = essim_membership(M, a.seed, a.budget)
    rep = Report("essential image of the Yoneda embedding")
    rep.add("homotopy equivalent to a representable", {"found": True, "none": False}.get(m.status),
            status=m.status, object=m.obj)
    return rep


def cmd_rqr_check(ctx, a):
    from .resolutions import rqr_check

    return rqr_check(ctx.load(a.kernel, "kernel"), a.seed, a.budget).to_report()


def cmd_check_qe(ctx, a):
    return check_quasi_equivalence(ctx.load(a.functor, "functor"), a.seed, min(a.budget, 4096))


def cmd_check_fibration(ctx, a):
    return check_fibration(ctx.load(a.functor, "functor"))


def cmd_standard_homotopy(ctx, a):
    Fn, Gn = ctx.load(a.first, "functor"), ctx.load(a.second, "functor")
    F = Fn.source.field
    data = json.loads(Path(a.alpha).read_text(encoding="utf-8")) if Path(a.alpha).exists() else json.loads(a.alpha)
    alpha = {}
    for pair in data:
        X = ctx.label(json.dumps(pair[0]) if not isinstance(pair[0], str) else pair[0], Fn.source)
        alpha[X] = F.array([F(v) for v in pair[1]])
    missing = [X for X in Fn.source.objects if X not in alpha]
    if missing:
        raise UsageError(f"alpha has no component at {missing!r}")
    try:
        H, _ = construct_standard_homotopy(Fn, Gn, alpha)
    except StandardHomotopyError as e:
        rep = Report("standard homotopy")
        rep.extend(e.report)
        return rep
    return _constructed(ctx, H, "standard homotopy")


def cmd_harness(ctx, a):
    from .harness import SUITES, run_suite

    if a.suite not in SUITES:
        raise UsageError(f"unknown suite {a.suite!r}; known: {sorted(SUITES)}")
    return run_suite(ctx.F, a.suite)


# --------------------------------------------------------------------------
# argument parsing


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="Q or Fp:<p> (default: $DGKERNELS_FIELD, else Q)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=4096)
    common.add_argument("--out", help="write the produced document here")
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    p = argparse.ArgumentParser(prog="dgkernels", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, *pos, **opts):
        s = sub.add_parser(name, parents=[common], help=fn.__doc__)
        for arg in pos:
            s.add_argument(arg)
        for k, kw in opts.items():
            s.add_argument("--" + k.replace("_", "-"), **kw)
        s.set_defaults(func=fn)
        return s

    add("validate", cmd_validate, "document")
    add("opposite", cmd_opposite, "category")
    add("tensor-cat", cmd_tensor_cat, "first", "second")
    add("tensor-mod", cmd_tensor_mod, "first", "second")
    add("external-tensor", cmd_external_tensor, "first", "second")
    add("h0", cmd_h0, "category")
    add("z0", cmd_z0, "category")
    add("yoneda", cmd_yoneda, "category", "object")
    add("mor", cmd_mor, "category")
    add("path-object", cmd_path_object, "category")
    add("fiber-product", cmd_fiber_product, "first", "second")
    add("curry", cmd_curry, "kernel", object={"default": None, "help": "write Phi_E(object) to --out"})
    add("uncurry", cmd_uncurry, "functor")
    add("unit-kernel", cmd_unit_kernel, "category")
    add("ext", cmd_ext, "kernel", "module")
    add("res", cmd_res, "kernel", "module")
    add("ind", cmd_ind, "functor", "module")
    add("res-g", cmd_res_g, "functor", "module")
    add("compose-kernels", cmd_compose_kernels, "first", "second")
    add("kernel-product", cmd_kernel_product, "first", "second")
    add("check-adjunction", cmd_check_adjunction, "kernel", "source", "target")
    add("bar-resolve", cmd_bar_resolve, "module", max_length={"type": int, "default": None})
    add("semifree-check", cmd_semifree_check, "module",
        certificate={"default": None, "help": "JSON steps [[{object, shift, element}]]"},
        max_length={"type": int, "default": None})
    add("hproj-battery", cmd_hproj_battery, "module", battery={"nargs": "*", "default": None})
    add("heq-modules", cmd_heq_modules, "first", "second")
    add("essim", cmd_essim, "module")
    add("rqr-check", cmd_rqr_check, "kernel")
    add("check-qe", cmd_check_qe, "functor")
    add("check-fibration", cmd_check_fibration, "functor")
    add("standard-homotopy", cmd_standard_homotopy, "first", "second",
        alpha={"required": True, "help": "JSON [[object, [coords]], ...] or a file holding it"})
    add("harness", cmd_harness, suite={"default": "paper-lemmas"})
    return p


def run(argv: list[str]) -> tuple[int, str]:
    """Execute one command; returns the exit code and the text for stdout."""
    parser = _parser()
    err = _io.StringIO()
    try:
        with redirect_stderr(err), redirect_stdout(err):
            args = parser.parse_args(argv)
    except SystemExit as e:
        code = USAGE_ERROR if e.code else 0
        return code, err.getvalue()
    ctx = Context(args)
    try:
        rep = args.func(ctx, args)
    except (io.ParseError, UsageError, OSError, ValueError, KeyError, json.JSONDecodeError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        return USAGE_ERROR, _render_error(args, str(msg))
    code = EXIT[rep.status]
    data = {"command": args.command, "status": rep.status, "exit_code": code, "subject": rep.subject,
            "field": ctx.F.descriptor(), "seed": args.seed, "verdicts": [v.to_dict() for v in rep.verdicts]}
    text = ""
    if ctx.output is not None:
        if args.out:
            io.dump(ctx.output, args.out)
            data["written"] = args.out
        elif args.json:
            data["output"] = io.to_json(ctx.output)
        else:
            text += io.serialize(ctx.output)
    if args.json:
        return code, io.canonical(_plain(data))
    if not text or args.out:
        text += _human(data)
    return code, text


def _render_error(args, msg: str) -> str:
    if getattr(args, "json", False):
        data = {"command": args.command, "status": "error", "exit_code": USAGE_ERROR, "subject": args.command,
                "verdicts": [], "error": msg}
        return io.canonical(data)
    return f"error: {msg}\n"


def _human(data: dict) -> str:
    lines = [f"{data['command']}: {data['status']} ({data['subject']})"]
    for v in data["verdicts"]:
        lines.append(f"  [{v['status']}] {v['check']}")
        if v["status"] != PASS and v["detail"]:
            lines.append(f"      {json.dumps(_plain(v['detail']), sort_keys=True)}")
    if "written" in data:
        lines.append(f"  wrote {data['written']}")
    return "\n".join(lines) + "\n"


def sample_runs(F: Field) -> list[list[str]]:
    """Commands over the bundled document files, used for schema and determinism checks."""
    from .harness import corpus_files

    files = {p.name: str(p) for p in corpus_files(F)}
    f = F.descriptor()
    out = []
    if "A2.dg" in files:
        out += [["validate", files["A2.dg"]], ["h0", files["A2.dg"]], ["opposite", files["A2.dg"]],
                ["yoneda", files["A2.dg"], "x"], ["path-object", files["A2.dg"]]]
    if "diag(A2).dg" in files:
        out.append(["compose-kernels", files["diag(A2).dg"], files["diag(A2).dg"]])
        out.append(["rqr-check", files["diag(A2).dg"], "--seed", "3"])
    if "S_y(A2).dg" in files and "h^y(A2).dg" in files:
        out.append(["heq-modules", files["S_y(A2).dg"], files["h^y(A2).dg"], "--seed", "1"])
        out.append(["bar-resolve", files["S_y(A2).dg"]])
    if "A2->C.dg" in files:
        out.append(["check-qe", files["A2->C.dg"]])
    return [r + ["--field", f] for r in out]


def main(argv: Optional[list[str]] = None) -> int:
    code, text = run(list(sys.argv[1:] if argv is None else argv))
    stream = sys.stderr if code == USAGE_ERROR and not text.startswith("{") else sys.stdout
    stream.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
