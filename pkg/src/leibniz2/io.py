"""Structure files: JSON documents with a format version, a kind tag and a payload.

Rationals are ``"p/q"`` strings; polynomials use the text syntax of
``parse_poly``; forms and multivectors are lists of ``[[indices], "poly"]``
pairs with 1-based indices. Multilinear maps are lists of
``[[argument labels], {output label: coefficient}]`` entries.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .algebra_core import FinSpace, LinearMap, StructureTensor, zeros
from .crossed_module import CrossedModule, LeibnizAlgebra, LeibnizRep, SkeletalQuadruple
from .exterior_calculus import PolyForm, PolyMultivector
from .omni import DglaAutomorphism, EndDgla, build_end, scalar_automorphism
from .poly import ParseError
from .report import VerifyReport
from .sh_leibniz import ShLeibniz2, TwoTermComplex
from .twisted_courant import ExactTcaData, GeneralizedSection

FORMAT_VERSION = 1
KINDS = ("sh-leibniz", "crossed-module", "quadruple", "end-automorphism", "exact-tca",
         "twisted-poisson")
MUTATIONS = {"drop-lie": "lie", "drop-interior": "interior", "drop-h": "h"}
#: Interior-product convention written into polynomial structure files.
INTERIOR_CONVENTION = "first-slot; i_{X^Y^Z} = i_Z i_Y i_X"


class InputError(ValueError):
    """Malformed structure file; ``location`` is a JSON path or a line/column."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


@dataclass
class StructureFile:
    kind: str
    obj: Any
    extras: dict

    def to_dict(self) -> dict:
        return {"format": FORMAT_VERSION, "kind": self.kind, **encode(self.kind, self.obj, self.extras)}


# ---------------------------------------------------------------------------
# scalars, matrices, tensors

def rat_text(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_rational(v, where: str) -> Fraction:
    if isinstance(v, bool):
        raise InputError("expected a rational", where)
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"invalid rational {v!r}", where) from None
    raise InputError(f"expected a rational string, got {type(v).__name__}", where)


def matrix_to_json(m: np.ndarray) -> list:
    return [[rat_text(c) for c in row] for row in m.tolist()]


def matrix_from_json(data, rows: int, cols: int, where: str) -> np.ndarray:
    if not isinstance(data, list) or len(data) != rows:
        raise InputError(f"expected {rows} rows", where)
    out = zeros(rows, cols)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise InputError(f"expected {cols} columns", f"{where}[{i}]")
        for j, c in enumerate(row):
            out[i, j] = parse_rational(c, f"{where}[{i}][{j}]")
    return out


def labels(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i + 1}" for i in range(n)]


def tensor_to_json(t: StructureTensor, in_prefixes, out_prefix: str) -> list:
    out: dict = {}
    for idx, c in sorted(t.nonzero_entries().items(), key=lambda kv: (kv[0][1:], kv[0][0])):
        args = tuple(f"{p}{i + 1}" for p, i in zip(in_prefixes, idx[1:]))
        out.setdefault(args, {})[f"{out_prefix}{idx[0] + 1}"] = rat_text(c)
    return [[list(args), vals] for args, vals in out.items()]


def _label_index(label, prefix: str, dim: int, where: str) -> int:
    if not isinstance(label, str) or not label.startswith(prefix) or not label[len(prefix):].isdigit():
        raise InputError(f"expected a label {prefix}1..{prefix}{dim}, got {label!r}", where)
    i = int(label[len(prefix):])
    if not 1 <= i <= dim:
        raise InputError(f"label {label!r} outside {prefix}1..{prefix}{dim}", where)
    return i - 1


def tensor_from_json(data, sources, target: FinSpace, in_prefixes, out_prefix: str,
                     where: str) -> StructureTensor:
    if data is None:
        return StructureTensor.zero(sources, target)
    if not isinstance(data, list):
        raise InputError("expected a list of entries", where)
    shape = (target.dim,) + tuple(s.dim for s in sources)
    arr = zeros(*shape)
    for k, entry in enumerate(data):
        w = f"{where}[{k}]"
        if not (isinstance(entry, list) and len(entry) == 2 and isinstance(entry[0], list)
                and isinstance(entry[1], dict)):
            raise InputError("entry must be [[arguments], {output: coefficient}]", w)
        args, vals = entry
        if len(args) != len(sources):
            raise InputError(f"expected {len(sources)} arguments", w)
        idx = tuple(_label_index(a, p, s.dim, w) for a, p, s in zip(args, in_prefixes, sources))
        for lab, c in vals.items():
            o = _label_index(lab, out_prefix, target.dim, w)
            arr[(o,) + idx] += parse_rational(c, f"{w}.{lab}")
    return StructureTensor(sources, target, arr)


def _get(d: dict, key: str, where: str, kind=None):
    if not isinstance(d, dict) or key not in d:
        raise InputError(f"missing field {key!r}", where)
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise InputError(f"field {key!r} has the wrong type", f"{where}.{key}")
    return v


def _dim(d: dict, key: str, where: str) -> int:
    v = _get(d, key, where, int)
    if isinstance(v, bool) or v < 0:
        raise InputError(f"{key} must be a non-negative integer", f"{where}.{key}")
    return v


# ---------------------------------------------------------------------------
# per-kind encoders

def _complex_to_json(c: TwoTermComplex) -> dict:
    return {"v1": c.v1.dim, "v0": c.v0.dim, "d": matrix_to_json(c.d.coefficients)}


def _complex_from_json(d, where) -> TwoTermComplex:
    n1, n0 = _dim(d, "v1", where), _dim(d, "v0", where)
    m = matrix_from_json(d.get("d", [[0] * n1 for _ in range(n0)]), n0, n1, f"{where}.d")
    return TwoTermComplex(FinSpace(n1, "V1"), FinSpace(n0, "V0"),
                          LinearMap(FinSpace(n1, "V1"), FinSpace(n0, "V0"), m))


def sh_to_json(a: ShLeibniz2) -> dict:
    return {
        "complex": _complex_to_json(a.complex),
        "l2_00": tensor_to_json(a.l2_00, "ee", "e"),
        "l2_01": tensor_to_json(a.l2_01, "em", "m"),
        "l2_10": tensor_to_json(a.l2_10, "me", "m"),
        "l3": tensor_to_json(a.l3, "eee", "m"),
    }


def sh_from_json(d, where="$") -> ShLeibniz2:
    cx = _complex_from_json(_get(d, "complex", where, dict), f"{where}.complex")
    v0, v1 = cx.v0, cx.v1
    return ShLeibniz2(
        cx,
        tensor_from_json(d.get("l2_00"), (v0, v0), v0, "ee", "e", f"{where}.l2_00"),
        tensor_from_json(d.get("l2_01"), (v0, v1), v1, "em", "m", f"{where}.l2_01"),
        tensor_from_json(d.get("l2_10"), (v1, v0), v1, "me", "m", f"{where}.l2_10"),
        tensor_from_json(d.get("l3"), (v0, v0, v0), v1, "eee", "m", f"{where}.l3"),
    )


def _algebra_to_json(a: LeibnizAlgebra, p: str) -> dict:
    return {"dim": a.dim, "bracket": tensor_to_json(a.bracket, p + p, p)}


def _algebra_from_json(d, p: str, where: str) -> LeibnizAlgebra:
    n = _dim(d, "dim", where)
    s = FinSpace(n)
    return LeibnizAlgebra(s, tensor_from_json(d.get("bracket"), (s, s), s, p + p, p, f"{where}.bracket"))


def crossed_to_json(c: CrossedModule) -> dict:
    return {
        "g": _algebra_to_json(c.g, "e"),
        "h": _algebra_to_json(c.h, "u"),
        "mu": matrix_to_json(c.mu.coefficients),
        "left": tensor_to_json(c.action.left, "ue", "e"),
        "right": tensor_to_json(c.action.right, "eu", "e"),
    }


def crossed_from_json(d, where="$") -> CrossedModule:
    g = _algebra_from_json(_get(d, "g", where, dict), "e", f"{where}.g")
    h = _algebra_from_json(_get(d, "h", where, dict), "u", f"{where}.h")
    G, H = g.space, h.space
    mu = LinearMap(G, H, matrix_from_json(_get(d, "mu", where), H.dim, G.dim, f"{where}.mu"))
    left = tensor_from_json(d.get("left"), (H, G), G, "ue", "e", f"{where}.left")
    right = tensor_from_json(d.get("right"), (G, H), G, "eu", "e", f"{where}.right")
    return CrossedModule(g, h, mu, LeibnizRep(h, G, left, right))


def quadruple_to_json(q: SkeletalQuadruple) -> dict:
    return {
        "g": _algebra_to_json(q.g, "e"),
        "v": q.v.dim,
        "left": tensor_to_json(q.rho.left, "ev", "v"),
        "right": tensor_to_json(q.rho.right, "ve", "v"),
        "phi": tensor_to_json(q.phi, "eee", "v"),
    }


def quadruple_from_json(d, where="$") -> SkeletalQuadruple:
    g = _algebra_from_json(_get(d, "g", where, dict), "e", f"{where}.g")
    V = FinSpace(_dim(d, "v", where))
    G = g.space
    left = tensor_from_json(d.get("left"), (G, V), V, "ev", "v", f"{where}.left")
    right = tensor_from_json(d.get("right"), (V, G), V, "ve", "v", f"{where}.right")
    phi = tensor_from_json(d.get("phi"), (G, G, G), V, "eee", "v", f"{where}.phi")
    return SkeletalQuadruple(g, V, LeibnizRep(g, V, left, right), phi)


@dataclass
class AutomorphismInput:
    complex: TwoTermComplex
    end: EndDgla
    automorphism: DglaAutomorphism
    spec: Any


def automorphism_from_json(d, where="$") -> AutomorphismInput:
    cx = _complex_from_json(_get(d, "complex", where, dict), f"{where}.complex")
    e = build_end(cx)
    spec = d.get("automorphism", "identity")
    w = f"{where}.automorphism"
    if spec == "identity":
        f = DglaAutomorphism.identity(e)
    elif isinstance(spec, dict) and set(spec) == {"scalar"}:
        f = scalar_automorphism(e, parse_rational(spec["scalar"], f"{w}.scalar"))
    elif isinstance(spec, dict):
        k0, k1 = e.deg0.dim, e.deg1.dim
        f0 = LinearMap(e.deg0, e.deg0, matrix_from_json(_get(spec, "f0", w), k0, k0, f"{w}.f0"))
        f1 = LinearMap(e.deg1, e.deg1, matrix_from_json(_get(spec, "f1", w), k1, k1, f"{w}.f1"))
        f2 = tensor_from_json(spec.get("f2"), (e.deg0, e.deg0), e.deg1, "aa", "p", f"{w}.f2")
        f = DglaAutomorphism(f0, f1, f2)
    else:
        raise InputError("automorphism must be 'identity', {scalar} or {f0, f1, f2}", w)
    return AutomorphismInput(cx, e, f, spec)


def automorphism_to_json(a: AutomorphismInput) -> dict:
    spec = a.spec
    if isinstance(spec, dict) and set(spec) != {"scalar"}:
        f = a.automorphism
        spec = {"f0": matrix_to_json(f.f0.coefficients), "f1": matrix_to_json(f.f1.coefficients),
                "f2": tensor_to_json(f.f2, "aa", "p")}
    elif isinstance(spec, dict):
        spec = {"scalar": rat_text(parse_rational(spec["scalar"], ""))}
    return {"complex": _complex_to_json(a.complex), "automorphism": spec}


def form_from_json(data, n: int, degree: int, where: str, cls=PolyForm):
    if data is None:
        return None
    if not isinstance(data, list):
        raise InputError("expected a list of [indices, polynomial] pairs", where)
    try:
        return cls.from_pairs(n, degree, data)
    except ParseError as exc:
        raise InputError(str(exc), where) from None


def _family_from_json(data, n, where, sections: bool):
    out = []
    if not isinstance(data, list):
        raise InputError("expected a list", where)
    for k, item in enumerate(data):
        w = f"{where}[{k}]"
        if not isinstance(item, dict):
            raise InputError("family members are objects", w)
        label = item.get("label", f"s{k + 1}")
        if sections:
            vf = form_from_json(item.get("vf", []), n, 1, f"{w}.vf", PolyMultivector)
            form = form_from_json(item.get("form", []), n, 1, f"{w}.form")
            out.append((str(label), GeneralizedSection(vf, form)))
        else:
            out.append((str(label), form_from_json(_get(item, "form", w), n, 1, f"{w}.form")))
    return out


def _family_to_json(fam, sections: bool) -> list:
    out = []
    for label, v in fam:
        if sections:
            out.append({"label": label, **v.to_dict()})
        else:
            out.append({"label": label, "form": v.to_pairs()})
    return out


@dataclass
class TcaInput:
    data: ExactTcaData
    sections: list | None = None
    forms: list | None = None
    B: PolyForm | None = None
    mutation: str | None = None


def _n(d, where) -> int:
    n = _dim(d, "n", where)
    if not 1 <= n <= 8:
        raise InputError("n must be between 1 and 8", f"{where}.n")
    return n


def _check_convention(d, where) -> None:
    conv = d.get("interior", INTERIOR_CONVENTION)
    if conv != INTERIOR_CONVENTION:
        raise InputError(f"unsupported interior-product convention {conv!r}", f"{where}.interior")


def tca_from_json(d, where="$") -> TcaInput:
    n = _n(d, where)
    _check_convention(d, where)
    h = form_from_json(d.get("h"), n, 3, f"{where}.h") if n >= 3 else None
    secs = _family_from_json(d["sections"], n, f"{where}.sections", True) if "sections" in d else None
    forms = _family_from_json(d["forms"], n, f"{where}.forms", False) if "forms" in d else None
    B = form_from_json(d.get("B"), n, 2, f"{where}.B") if n >= 2 else None
    mutation = d.get("mutation")
    if mutation is not None and mutation not in MUTATIONS:
        raise InputError(f"unknown mutation {mutation!r}; expected one of {sorted(MUTATIONS)}",
                         f"{where}.mutation")
    return TcaInput(ExactTcaData(n, h), secs, forms, B, mutation)


def tca_to_json(t: TcaInput) -> dict:
    out: dict = {"n": t.data.n, "interior": INTERIOR_CONVENTION,
                 "h": t.data.h.to_pairs() if t.data.h is not None else []}
    if t.B is not None:
        out["B"] = t.B.to_pairs()
    if t.sections is not None:
        out["sections"] = _family_to_json(t.sections, True)
    if t.forms is not None:
        out["forms"] = _family_to_json(t.forms, False)
    if t.mutation is not None:
        out["mutation"] = t.mutation
    return out


@dataclass
class PoissonInput:
    data: Any  # TwistedPoissonData
    forms: list | None = None


def poisson_from_json(d, where="$") -> PoissonInput:
    from .dirac import TwistedPoissonData

    n = _n(d, where)
    _check_convention(d, where)
    if n < 2:
        raise InputError("a bivector needs n >= 2", f"{where}.n")
    pi = form_from_json(_get(d, "pi", where), n, 2, f"{where}.pi", PolyMultivector)
    h = form_from_json(d.get("h"), n, 3, f"{where}.h") if n >= 3 else None
    forms = _family_from_json(d["forms"], n, f"{where}.forms", False) if "forms" in d else None
    return PoissonInput(TwistedPoissonData(n, pi, h), forms)


def poisson_to_json(p: PoissonInput) -> dict:
    out: dict = {"n": p.data.n, "interior": INTERIOR_CONVENTION, "pi": p.data.pi.to_pairs(),
                 "h": p.data.h.to_pairs() if p.data.h is not None else []}
    if p.forms is not None:
        out["forms"] = _family_to_json(p.forms, False)
    return out


_DECODERS = {
    "sh-leibniz": sh_from_json,
    "crossed-module": crossed_from_json,
    "quadruple": quadruple_from_json,
    "end-automorphism": automorphism_from_json,
    "exact-tca": tca_from_json,
    "twisted-poisson": poisson_from_json,
}
_ENCODERS = {
    "sh-leibniz": sh_to_json,
    "crossed-module": crossed_to_json,
    "quadruple": quadruple_to_json,
    "end-automorphism": automorphism_to_json,
    "exact-tca": tca_to_json,
    "twisted-poisson": poisson_to_json,
}


def encode(kind: str, obj, extras: dict | None = None) -> dict:
    payload = _ENCODERS[kind](obj)
    if extras:
        payload = {**payload, **{k: v for k, v in extras.items() if k not in payload}}
    return payload


def decode(doc: dict, kind: str | None = None) -> StructureFile:
    if not isinstance(doc, dict):
        raise InputError("top level must be an object", "$")
    version = doc.get("format")
    if version != FORMAT_VERSION:
        raise InputError(f"unsupported format version {version!r}", "$.format")
    k = doc.get("kind")
    if k not in KINDS:
        raise InputError(f"unknown kind {k!r}; expected one of {', '.join(KINDS)}", "$.kind")
    if kind is not None and kind != k:
        raise InputError(f"file has kind {k!r}, expected {kind!r}", "$.kind")
    payload = {key: v for key, v in doc.items() if key not in ("format", "kind")}
    extras = {key: payload[key] for key in ("description",) if key in payload}
    try:
        obj = _DECODERS[k](payload)
    except InputError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise InputError(str(exc), "$") from None
    return StructureFile(k, obj, extras)


def loads(text: str, kind: str | None = None) -> StructureFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return decode(doc, kind)


def load(path, kind: str | None = None) -> StructureFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", str(path)) from None
    return loads(text, kind)


def pretty(value, indent: int = 0, width: int = 88) -> str:
    """Deterministic JSON with short arrays and objects kept on one line."""
    flat = json.dumps(value)
    if len(flat) + indent <= width or not isinstance(value, (list, dict)) or not value:
        return flat
    pad, inner = " " * indent, " " * (indent + 2)
    if isinstance(value, list):
        items = [inner + pretty(v, indent + 2, width) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    items = [f"{inner}{json.dumps(k)}: {pretty(v, indent + 2, width)}" for k, v in value.items()]
    return "{\n" + ",\n".join(items) + "\n" + pad + "}"


def dumps(kind: str, obj, extras: dict | None = None) -> str:
    doc = {"format": FORMAT_VERSION, "kind": kind, **encode(kind, obj, extras)}
    return pretty(doc) + "\n"


def report_dumps(rep: VerifyReport, include_timing: bool = True) -> str:
    return pretty(rep.to_dict(include_timing)) + "\n"


def report_loads(text: str) -> VerifyReport:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise InputError("a report must be an object", "$")
    try:
        return VerifyReport.from_dict(doc)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"malformed report: {exc}", "$") from None


def family_file(path, n: int) -> dict:
    """Extra families from ``{"sections": [...], "forms": [...]}``."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", str(path)) from None
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise InputError("family file must be an object", "$")
    out = {}
    if "sections" in doc:
        out["sections"] = _family_from_json(doc["sections"], n, "$.sections", True)
    if "forms" in doc:
        out["forms"] = _family_from_json(doc["forms"], n, "$.forms", False)
    return out
