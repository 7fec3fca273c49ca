"""Model files: JSON documents describing a fan, divisors, a series, a
function to realise, or a Cutkosky problem."""
from __future__ import annotations

import json
import os

import jsonschema
import sympy
from mpmath import iv, mp

from ..exactgeom import HPolyhedron
from ..exactgeom.rational import rat
from ..logcone import (ConcaveProfile, HomogFn, homogenize, product_function, semicircle_profile,
                       weierstrass_profile)
from ..okounkov import SeriesSpec, subseries
from ..toric import Fan, FlagSpec, named_model

SCHEMA_VERSION = 1

_RAT = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$|^-?\d*\.\d+$"}]}
_IVEC = {"type": "array", "items": {"type": "integer"}}

MODEL_SCHEMA = {
    "type": "object",
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "model": {"type": "string"},
        "fan": {
            "type": "object",
            "required": ["n", "rays", "max_cones"],
            "properties": {
                "n": {"type": "integer", "minimum": 1},
                "rays": {"type": "array", "items": _IVEC},
                "max_cones": {"type": "array", "items": _IVEC},
                "name": {"type": "string"},
            },
        },
        "divisor": {"type": "object", "required": ["coeffs"], "properties": {"coeffs": _IVEC}},
        "series": {
            "type": "object",
            "required": ["divisors"],
            "properties": {
                "divisors": {"type": "array", "items": _IVEC, "minItems": 1},
                "flag": _IVEC,
                "require_big": {"type": "boolean"},
                "subcone": {"type": "object"},
            },
        },
        "function": {"type": "object", "required": ["kind"]},
        "problem": {
            "type": "object",
            "required": ["c"],
            "properties": {"c": {"type": "array", "items": _RAT, "minItems": 3, "maxItems": 3},
                           "s": _RAT},
        },
    },
}

FUNCTION_SCHEMA = {
    "oneOf": [
        {"type": "object", "required": ["kind"],
         "properties": {"kind": {"const": "product"}, "p": {"type": "integer", "minimum": 1}}},
        {"type": "object", "required": ["kind", "expr"],
         "properties": {"kind": {"const": "profile"}, "expr": {"type": "string"},
                        "lo": _RAT, "hi": _RAT, "degree": {"type": "integer", "minimum": 1}}},
        {"type": "object", "required": ["kind"],
         "properties": {"kind": {"const": "weierstrass"}, "terms": {"type": "integer", "minimum": 0},
                        "a": _RAT, "b": {"type": "integer"}, "lo": _RAT, "hi": _RAT,
                        "degree": {"type": "integer", "minimum": 1}}},
    ]
}


class ModelError(ValueError):
    """Unreadable or schema-invalid model document."""


def parse_json_text(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from None


def load_document(spec: str) -> dict:
    """A model name such as "P2" or the path of a JSON model file."""
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            doc = parse_json_text(fh.read(), spec)
        if not isinstance(doc, dict):
            raise ModelError(f"{spec}: model file must hold a JSON object")
        try:
            jsonschema.validate(doc, MODEL_SCHEMA)
        except jsonschema.ValidationError as e:
            path = "/".join(map(str, e.absolute_path)) or "<root>"
            raise ModelError(f"{spec}: {path}: {e.message}") from None
        return doc
    if spec.lstrip().startswith("{"):
        return load_inline(spec)
    return {"model": spec}


def load_inline(text: str) -> dict:
    doc = parse_json_text(text)
    if not isinstance(doc, dict):
        raise ModelError("model must be a JSON object")
    try:
        jsonschema.validate(doc, MODEL_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ModelError(e.message) from None
    return doc


def fan_of(doc: dict) -> Fan:
    if "fan" in doc:
        return Fan.from_dict(doc["fan"])
    if "model" in doc:
        return named_model(doc["model"])
    raise ModelError("model document has neither 'fan' nor 'model'")


def series_of(doc: dict, H=None, flag=None):
    """SeriesSpec (or SubSeries, when the document has a subcone) from a document
    plus optional command-line divisors."""
    fan = fan_of(doc)
    ser = doc.get("series", {})
    divs = [tuple(h) for h in H] if H else [tuple(h) for h in ser.get("divisors", [])]
    if not divs:
        raise ModelError("no divisors given (use --H or a 'series' section)")
    fl = flag if flag is not None else ser.get("flag")
    spec = SeriesSpec(fan, tuple(fan.divisor(d) for d in divs), FlagSpec(tuple(fl)) if fl else None,
                      bool(ser.get("require_big", False)))
    if "subcone" in ser:
        return subseries(spec, HPolyhedron.from_dict(ser["subcone"]))
    return spec


def _sympy_profile(expr: str, lo, hi) -> ConcaveProfile:
    x = sympy.Symbol("x")
    try:
        e = sympy.sympify(expr, locals={"x": x})
    except (sympy.SympifyError, SyntaxError, TypeError) as err:
        raise ModelError(f"cannot parse profile expression {expr!r}: {err}") from None
    if not e.free_symbols <= {x}:
        raise ModelError("profile expression may only use the variable x")
    fns = {}
    for name, ctx in (("mp", mp), ("iv", iv)):
        ns = {"mpf": ctx.mpf, "sqrt": ctx.sqrt, "cos": ctx.cos, "sin": ctx.sin,
              "exp": ctx.exp, "log": ctx.log, "pi": ctx.pi}
        fns[name] = sympy.lambdify(x, e, modules=[ns, "mpmath"])

    def g(xs, ctx):
        return fns["mp" if ctx is mp else "iv"](xs[0])

    return ConcaveProfile(HPolyhedron.box([lo], [hi]), g, label=expr)


def function_of(spec) -> HomogFn:
    """A log-concave function from a built-in name or a JSON description."""
    if isinstance(spec, str):
        if os.path.exists(spec):
            with open(spec, encoding="utf-8") as fh:
                spec = parse_json_text(fh.read(), fh.name)
        elif spec.lstrip().startswith("{"):
            spec = parse_json_text(spec)
        else:
            spec = {"product": {"kind": "product", "p": 2},
                    "product2": {"kind": "product", "p": 2},
                    "semicircle": {"kind": "profile", "expr": "sqrt(x*(1-x))"},
                    "weierstrass": {"kind": "weierstrass"}}.get(spec)
            if spec is None:
                raise ModelError("unknown function name; use product2, semicircle, weierstrass or JSON")
    if isinstance(spec, dict) and "function" in spec:
        spec = spec["function"]
    try:
        jsonschema.validate(spec, FUNCTION_SCHEMA)
    except jsonschema.ValidationError as e:
        raise ModelError(f"function: {e.message}") from None
    kind = spec["kind"]
    if kind == "product":
        return product_function(spec.get("p", 2))
    n = spec.get("degree", 2)
    if kind == "profile":
        if spec["expr"].replace(" ", "") == "sqrt(x*(1-x))" and "lo" not in spec:
            return homogenize(semicircle_profile(), n)
        return homogenize(_sympy_profile(spec["expr"], rat(spec.get("lo", 0)), rat(spec.get("hi", 1))), n)
    prof = weierstrass_profile(rat(spec.get("lo", 0)), rat(spec.get("hi", 1)), spec.get("terms", 8),
                               rat(spec.get("a", "1/2")), spec.get("b", 3))
    return homogenize(prof, n)


def problem_c(doc: dict):
    p = doc.get("problem")
    if p is None:
        return None
    return tuple(rat(x) for x in p["c"]), rat(p.get("s", 1))
