"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a verification or precondition
failure, 2 on malformed input.
"""
from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

from . import io
from .algebra_core import PreconditionError, ShapeError
from .crossed_module import (
    check_crossed_module, check_leibniz, check_representation, crossed_to_dg, dg_to_crossed,
    quadruple_to_skeletal, skeletal_to_quadruple,
)
from .exterior_calculus import PolyForm, PolyMultivector
from .leibniz_cohomology import Cochain, is_cocycle
from .omni import build_omni, check_dgla_automorphism
from .poly import Poly
from .report import VerifyReport
from .sh_leibniz import check_sh_leibniz, classify
from .twisted_courant import (
    GeneralizedSection, axiom_sections, build_leibniz2, check_b_intertwine, check_b_morphism,
    check_tca_axioms, coordinate_forms, coordinate_sections, default_forms, default_sections, dorfman,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

DIRECTIONS = {
    "crossed-to-dg": ("crossed-module", "sh-leibniz"),
    "dg-to-crossed": ("sh-leibniz", "crossed-module"),
    "quadruple-to-skeletal": ("quadruple", "sh-leibniz"),
    "skeletal-to-quadruple": ("sh-leibniz", "quadruple"),
}


# ---------------------------------------------------------------------------
# families

def _random_poly(rng: random.Random, n: int) -> Poly:
    p = Poly.const(n, rng.randint(-2, 2))
    for _ in range(2):
        e = [0] * n
        e[rng.randrange(n)] += 1
        p = p + Poly.monomial(n, e, rng.randint(-2, 2))
    return p


def random_sections(rng: random.Random, n: int, count: int = 2):
    out = []
    for k in range(count):
        i, j = rng.randrange(n), rng.randrange(n)
        X = PolyMultivector.basis(n, (i,), _random_poly(rng, n))
        xi = PolyForm.basis(n, (j,), _random_poly(rng, n))
        out.append((f"r{k + 1}", GeneralizedSection(X, xi)))
    return out


def random_forms(rng: random.Random, n: int, count: int = 2):
    return [(f"r{k + 1}", PolyForm.basis(n, (rng.randrange(n),), _random_poly(rng, n)))
            for k in range(count)]


def _tca_families(inp, n: int, args):
    """Sections and forms: file families, else defaults (coordinate ones on R^n, n >= 4)."""
    small = n <= 3
    secs = inp.sections if inp.sections is not None else (
        default_sections(n) if small else coordinate_sections(n))
    forms = inp.forms if inp.forms is not None else (
        default_forms(n) if small else coordinate_forms(n))
    extra = io.family_file(args.family, n) if args.family else {}
    secs = secs + extra.get("sections", [])
    forms = forms + extra.get("forms", [])
    if args.seed is not None:
        rng = random.Random(args.seed)
        secs = secs + random_sections(rng, n)
        forms = forms + random_forms(rng, n)
    return secs, forms


def _poisson_family(inp, args):
    n = inp.data.n
    forms = inp.forms if inp.forms is not None else coordinate_forms(n)
    extra = io.family_file(args.family, n) if args.family else {}
    forms = forms + extra.get("forms", [])
    if args.seed is not None:
        forms = forms + random_forms(random.Random(args.seed), n)
    return forms


# ---------------------------------------------------------------------------
# verification per kind

def verify_structure(sf: io.StructureFile, args) -> VerifyReport:
    kind, obj = sf.kind, sf.obj
    if kind == "sh-leibniz":
        rep = check_sh_leibniz(obj)
        rep.notes.update(classify(obj).as_dict())
        return rep
    if kind == "crossed-module":
        return check_crossed_module(obj)
    if kind == "quadruple":
        rep = VerifyReport("skeletal quadruple")
        rep.extend(check_leibniz(obj.g), "g ")
        rep.extend(check_representation(obj.rho), "rho ")
        rep.extend(is_cocycle(Cochain(3, obj.rho, obj.phi))[1], "phi ")
        return rep
    if kind == "end-automorphism":
        return check_dgla_automorphism(obj.automorphism, obj.end)
    if kind == "exact-tca":
        return _verify_tca(obj, args)
    if kind == "twisted-poisson":
        return _verify_poisson(obj, args)
    raise AssertionError(kind)


def _verify_tca(inp, args) -> VerifyReport:
    t, n = inp.data, inp.data.n
    secs, forms = _tca_families(inp, n, args)
    rep = VerifyReport(f"exact twisted Courant algebroid on R^{n}")
    bracket = None
    if inp.mutation is not None:
        drop = io.MUTATIONS[inp.mutation]
        bracket = lambda a, b: dorfman(t, a, b, drop=drop)  # noqa: E731
        rep.notes["mutation"] = inp.mutation
    axiom_family = secs + ([] if inp.sections is not None or n > 3 else
                           [s for s in axiom_sections(n) if s not in secs])
    rep.extend(check_tca_axioms(t, axiom_family, bracket=bracket), "axiom ")
    if inp.mutation is None:
        rep.extend(build_leibniz2(t, secs, forms))
        if inp.B is not None:
            rep.extend(check_b_intertwine(inp.B, t.h, secs, n=n), "B ")
            rep.extend(check_b_morphism(inp.B, t.h, secs, forms, n=n), "B morphism ")
    return rep


def _verify_poisson(inp, args) -> VerifyReport:
    from .dirac import (
        check_graph_dirac, check_h_twisted_lie_algebroid, check_lie2, check_twisted_poisson,
    )

    p = inp.data
    forms = _poisson_family(inp, args)
    rep = VerifyReport(f"twisted Poisson structure on R^{p.n}")
    tp = check_twisted_poisson(p)
    rep.extend(tp)
    rep.extend(check_graph_dirac(p, forms), "graph ")
    if tp.passed:
        rep.extend(check_lie2(p, forms), "lie2 ")
        rep.extend(check_h_twisted_lie_algebroid(p, forms), "algebroid ")
    else:
        rep.notes["skipped"] = "Lie 2-algebra checks need the twisted Poisson condition"
    return rep


# ---------------------------------------------------------------------------
# output

def emit(rep: VerifyReport, args) -> None:
    text = _render(rep, args)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _exit_for(rep: VerifyReport) -> int:
    return EXIT_PASS if rep.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    sf = io.load(args.path, args.kind)
    t0 = time.perf_counter()
    rep = verify_structure(sf, args)
    rep.seconds = round(time.perf_counter() - t0, 3)
    emit(rep, args)
    return _exit_for(rep)


def _write_structure(kind: str, obj, args) -> None:
    text = io.dumps(kind, obj)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_convert(args) -> int:
    src_kind, dst_kind = DIRECTIONS[args.direction]
    sf = io.load(args.path, args.kind or src_kind)
    if sf.kind != src_kind:
        raise io.InputError(f"direction {args.direction} needs a {src_kind} file", "$.kind")
    fn = {"crossed-to-dg": crossed_to_dg, "dg-to-crossed": dg_to_crossed,
          "quadruple-to-skeletal": quadruple_to_skeletal,
          "skeletal-to-quadruple": skeletal_to_quadruple}[args.direction]
    try:
        out = fn(sf.obj)
    except PreconditionError as exc:
        sys.stderr.write(f"precondition failed: {exc}\n")
        return EXIT_FAIL
    _write_structure(dst_kind, out, args)
    return EXIT_PASS


def cmd_construct(args) -> int:
    """``omni`` writes the constructed sh Leibniz file (to ``--out`` or stdout)
    and the report to stdout (stderr when stdout carries the structure).
    ``leibniz2`` and ``lie2`` print the report; ``--out`` receives it in
    structured form."""
    what = args.what
    t0 = time.perf_counter()
    structure_on_stdout = False
    if what == "omni":
        inp = io.load(args.path, "end-automorphism").obj
        try:
            a = build_omni(inp.automorphism, inp.complex, inp.end)
        except PreconditionError as exc:
            sys.stderr.write(f"precondition failed: {exc}\n")
            return EXIT_FAIL
        rep = check_sh_leibniz(a)
        rep.subject = "omni construction"
        rep.notes.update(classify(a).as_dict())
        _write_structure("sh-leibniz", a, args)
        structure_on_stdout = args.out is None
    elif what == "leibniz2":
        inp = io.load(args.path, "exact-tca").obj
        secs, forms = _tca_families(inp, inp.data.n, args)
        rep = build_leibniz2(inp.data, secs, forms)
    else:
        from .dirac import check_lie2, check_twisted_poisson

        inp = io.load(args.path, "twisted-poisson").obj
        gate = check_twisted_poisson(inp.data)
        if not gate.passed:
            sys.stderr.write("precondition failed: not a twisted Poisson structure\n")
            sys.stdout.write(_render(gate, args))
            return EXIT_FAIL
        rep = check_lie2(inp.data, _poisson_family(inp, args))
    rep.seconds = round(time.perf_counter() - t0, 3)
    if what != "omni" and args.out:
        Path(args.out).write_text(io.report_dumps(rep))
    (sys.stderr if structure_on_stdout else sys.stdout).write(_render(rep, args))
    return _exit_for(rep)


def _render(rep: VerifyReport, args) -> str:
    return io.report_dumps(rep) if args.format == "structured" else rep.to_text() + "\n"


def cmd_report(args) -> int:
    try:
        text = Path(args.path).read_text()
    except OSError as exc:
        raise io.InputError(f"cannot read file: {exc.strerror}", args.path) from None
    rep = io.report_loads(text)
    emit(rep, args)
    return _exit_for(rep)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leibniz2", description="Verify and construct Leibniz 2-algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("text", "structured"), default="text")
        sp.add_argument("--out", help="output file")
        sp.add_argument("--kind", choices=io.KINDS, help="expected kind of the input file")

    v = sub.add_parser("verify", help="run the verification suite for a structure file")
    v.add_argument("path")
    common(v)
    v.add_argument("--family", help="extra section/form family file")
    v.add_argument("--seed", type=int, help="add random family members drawn with this seed")

    c = sub.add_parser("convert", help="convert between equivalent descriptions")
    c.add_argument("path")
    c.add_argument("--direction", choices=sorted(DIRECTIONS), required=True)
    common(c)

    k = sub.add_parser("construct", help="build a derived structure and verify it")
    k.add_argument("what", choices=("omni", "leibniz2", "lie2"))
    k.add_argument("path")
    common(k)
    k.add_argument("--family")
    k.add_argument("--seed", type=int)

    r = sub.add_parser("report", help="re-read a structured report and print it")
    r.add_argument("path")
    common(r)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"verify": cmd_verify, "convert": cmd_convert, "construct": cmd_construct,
               "report": cmd_report}[args.command]
    try:
        return handler(args)
    except (io.InputError, ShapeError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
