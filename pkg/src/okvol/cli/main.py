"""``okvol`` command line: toric, okounkov, logcone and cutkosky subcommands."""
from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from fractions import Fraction
from math import factorial

import numpy as np

from .. import __version__
from ..cutkosky import (CutkoskyProblem, ToleranceNotReached, full_simplex_is_ample, region_area, simplex_integral_exact,
                        vol_adaptive, vol_lattice_extrapolated, vol_lattice_sum, vol_mc, vol_sections)
from ..cutkosky.region import GammaRegion
from ..exactgeom.rational import rat
from ..logcone import (HypothesisError, ShrinkError, build_ball_cone, realize, slice_volume_mc)
from ..logcone.functions import interior_samples
from ..okounkov import (SeriesError, SubSeries, direct_vol_estimate, okounkov_cone, slice,
                        support_status, volfn)
from ..toric import FanError, h0_count
from .emit import csv_text, emit_svg, format_value
from .models import ModelError, fan_of, function_of, load_document, series_of

EXIT_OK, EXIT_INVALID, EXIT_TOLERANCE, EXIT_USAGE = 0, 2, 3, 64


class UsageError(Exception):
    pass


class ToleranceFailure(Exception):
    def __init__(self, msg, result=None):
        super().__init__(msg)
        self.result = result


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# -- argument types ----------------------------------------------------------

def int_list(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}")


def rat_list(s: str) -> list[Fraction]:
    try:
        return [rat(x.strip()) for x in s.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {s!r}")


def count(s: str) -> int:
    """Integers written as 1000000 or 1e6."""
    try:
        v = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a count, got {s!r}")
    if v != int(v) or v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {s!r}")
    return int(v)


def grid_spec(s: str) -> list[tuple[int, ...]]:
    """"1..5" or "0..3,1..2" (ranges are inclusive; single numbers allowed)."""
    axes = []
    for part in s.split(","):
        part = part.strip()
        try:
            if ".." in part:
                a, b = part.split("..")
                axes.append(range(int(a), int(b) + 1))
            else:
                axes.append([int(part)])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad grid {s!r}; use e.g. 1..5 or 0..3,1..2")
    return [tuple(p) for p in itertools.product(*axes)]


# -- handlers ----------------------------------------------------------------
# Each returns (text, result); text goes to stdout, result is the --json document.

def _divisor(args, fan):
    doc = args._doc
    coeffs = args.coeffs if args.coeffs is not None else doc.get("divisor", {}).get("coeffs")
    if coeffs is None:
        raise ModelError("no divisor given (use --coeffs or a 'divisor' section)")
    return fan.divisor(coeffs)


def cmd_toric_validate(args):
    fan = fan_of(args._doc)
    rep = fan.validate(seed=args.seed)
    text = "valid" if rep.ok else "invalid:\n" + "\n".join("  " + p for p in rep.problems)
    res = rep.to_dict()
    if not rep.ok:
        raise _ValidationResult(text, res)
    return text, res


class _ValidationResult(FanError):
    def __init__(self, text, result):
        super().__init__(text)
        self.result = result


def cmd_toric_h0(args):
    fan = fan_of(args._doc)
    fan.validate().raise_if_invalid()
    d = _divisor(args, fan)
    h = h0_count(d)
    return str(h), {"coeffs": list(d.coeffs), "h0": h}


def cmd_toric_polytope(args):
    fan = fan_of(args._doc)
    d = _divisor(args, fan)
    p = d.polytope()
    verts = p.vertices() if not p.is_empty else []
    if args.svg:
        emit_svg(args.svg, p, title=f"P_D for D = {list(d.coeffs)}")
    lines = [json.dumps(p.to_dict())] + [" ".join(format_value(x) for x in v) for v in verts]
    return "\n".join(lines), {"polytope": p.to_dict(),
                              "vertices": [[str(x) for x in v] for v in verts]}


def _series(args):
    return series_of(args._doc, args.H, args.flag)


def cmd_okounkov_cone(args):
    s = _series(args)
    c = s.as_cone() if isinstance(s, SubSeries) else okounkov_cone(s)
    d = {"n": c.n, "rho": c.rho, "cone": c.cone.pruned().to_dict()}
    return json.dumps(d), d


def _need_m(args, rho):
    if args.m is None:
        raise UsageError("--m is required")
    if len(args.m) != rho:
        raise ModelError(f"--m has {len(args.m)} entries but the series has rho = {rho}")
    return args.m


def cmd_okounkov_slice(args):
    s = _series(args)
    c = s.as_cone() if isinstance(s, SubSeries) else okounkov_cone(s)
    m = _need_m(args, c.rho)
    sl = slice(c, m)
    verts = sl.vertices() if not sl.is_empty else []
    if args.svg:
        emit_svg(args.svg, sl, title=f"slice at m = {list(m)}")
    text = "\n".join(" ".join(format_value(x) for x in v) for v in verts) or "empty"
    return text, {"m": list(m), "slice": sl.pruned().to_dict(),
                  "vertices": [[str(x) for x in v] for v in verts]}


def cmd_okounkov_volfn(args):
    s = _series(args)
    c = s.as_cone() if isinstance(s, SubSeries) else okounkov_cone(s)
    ks = args.k or []
    if args.grid is None:
        m = _need_m(args, c.rho)
        v = volfn(c, m)
        res = {"m": list(m), "volfn": str(v), "status": support_status(c, m)}
        for k in ks:
            res[f"estimate_k{k}"] = str(direct_vol_estimate(s, m, k))
        return format_value(v), res
    rows = []
    for m in args.grid:
        if len(m) != c.rho:
            raise ModelError(f"grid points have {len(m)} entries but rho = {c.rho}")
        rows.append(list(m) + [volfn(c, m)] + [direct_vol_estimate(s, m, k) for k in ks])
    header = [f"m{i + 1}" for i in range(c.rho)] + ["volfn"] + [f"estimate_k{k}" for k in ks]
    text = csv_text(header, rows)
    if args.csv:
        _write(args.csv, text)
    return text.rstrip("\n"), {"header": header, "rows": [[format_value(x) for x in r] for r in rows]}


def cmd_okounkov_estimate(args):
    s = _series(args)
    m = _need_m(args, s.rho)
    ks = args.k or [10]
    ests = [(k, direct_vol_estimate(s, m, k)) for k in ks]
    text = "\n".join(f"{k} {format_value(e)} {format_value(float(e))}" for k, e in ests)
    return text, {"m": list(m), "estimates": {str(k): str(e) for k, e in ests}}


def _function(args):
    spec = args.function
    if spec is None:
        spec = args._doc.get("function")
        if spec is None:
            raise ModelError("no function given (use --function or a 'function' section)")
    return function_of(spec)


def cmd_logcone_build(args):
    f = _function(args)
    bad = f.check_hypotheses(samples=args.points, seed=args.seed)
    if bad:
        raise HypothesisError(f"{len(bad)} sampled hypothesis violations, first: {bad[0][0]}")
    c = build_ball_cone(f, seed=args.seed)
    res = {"function": f.label, "n": c.n, "rho": c.rho, "form": [str(x) for x in c.form],
           "k": format_value(float(c.k))}
    if args.svg:
        if c.n != 2:
            raise ValueError("SVG output needs 2D data: the ball slices live in R^n with n != 2")
        v = args.v or [Fraction(1)] * c.rho
        r = float(c.radius(v))
        g = float(c.center(v)[0])
        th = np.arange(256) * (2 * np.pi / 256)
        emit_svg(args.svg, np.column_stack([g + r * np.cos(th), g + r * np.sin(th)]),
                 title=f"ball slice at v = {[str(x) for x in v]}")
    return f"k = {res['k']}\nform = {','.join(res['form'])}", res


def cmd_logcone_verify(args):
    import random
    f = _function(args)
    c = build_ball_cone(f, seed=args.seed)
    pts = interior_samples(f.domain, args.points, random.Random(args.seed))
    rows = []
    worst = 0.0
    for i, v in enumerate(pts):
        est, se = slice_volume_mc(c, v, samples=args.samples, seed=args.seed + i)
        fv = float(f(v))
        z = abs(est - fv) / se if se else float("inf") if est != fv else 0.0
        worst = max(worst, z)
        rows.append([*v, fv, est, se, z])
    header = [f"v{i + 1}" for i in range(f.p)] + ["f", "mc", "stderr", "z"]
    text = csv_text(header, rows)
    if args.csv:
        _write(args.csv, text)
    res = {"header": header, "rows": [[format_value(x) for x in r] for r in rows],
           "max_z": format_value(worst), "pass": worst <= 3}
    if worst > 3:
        raise ToleranceFailure(f"MC slice volume off by {worst:.2f} standard errors", res)
    return text.rstrip("\n"), res


def cmd_logcone_shrink(args):
    f = _function(args)
    s = _series(args)
    if isinstance(s, SubSeries):
        raise ModelError("shrink targets a complete series, not a subseries")
    R = realize(f, s, seed=args.seed)
    res = {"lambda": str(R.lam), "cfactor": str(R.cfactor), "n": R.n,
           "volume_constant": str(factorial(R.n) * R.cfactor)}
    text = f"lambda = {R.lam}\nc = {R.cfactor}"
    if args.m is not None:
        est = {str(k): str(R.direct_vol_estimate(args.m, k)) for k in (args.k or [10])}
        res["m"] = [int(x) for x in args.m]
        res["volfn"] = format_value(float(R.volfn(args.m)))
        res["estimates"] = est
        text += f"\nvol_W({','.join(map(str, args.m))}) = {res['volfn']}"
        text += "".join(f"\nestimate k={k}: {format_value(float(Fraction(e)))}" for k, e in est.items())
    return text, res


def _problem(args) -> CutkoskyProblem:
    c = args.c
    s = args.s
    p = args._doc.get("problem")
    if c is None and p is not None:
        c = [rat(x) for x in p["c"]]
        s = s if s is not None else rat(p.get("s", 1))
    if c is None:
        raise UsageError("--c is required")
    if len(c) != 3:
        raise ModelError("--c needs three entries")
    return CutkoskyProblem(tuple(c), s if s is not None else 1)


def _cutkosky_eval(p: CutkoskyProblem, args) -> dict:
    method = args.method
    if method == "adaptive":
        try:
            r = vol_adaptive(p, tol=args.tol, max_cells=args.max_cells)
        except ToleranceNotReached as e:
            raise ToleranceFailure(str(e), {"estimate": format_value(e.estimate),
                                            "error_bound": format_value(e.error)})
        return {"value": float(r.value), "error_bound": r.error, "levels": r.levels,
                "cells": r.cells}
    if method == "mc":
        est, se = vol_mc(p, samples=args.samples, seed=args.seed)
        return {"value": est, "stderr": se}
    if method == "lattice":
        if p.s.denominator != 1:
            raise ModelError("the lattice sum needs an integral weight s")
        ms = args.m or [100, 200, 400]
        if len(ms) == 1:
            v = vol_lattice_sum(p.c, ms[0], int(p.s))
            return {"value": v, "m": ms}
        v, seq = vol_lattice_extrapolated(p.c, ms, int(p.s))
        return {"value": v, "m": ms, "sequence": [str(x) for _, x in seq]}
    if method == "closed":
        if not full_simplex_is_ample(p):
            raise ModelError("the closed form needs the whole simplex to be ample; pick another method")
        return {"value": simplex_integral_exact(p.c, p.s), "whole_simplex": True}
    if method == "sections":
        return {"value": vol_sections(p)}
    raise UsageError(f"unknown method {method}")


def cmd_cutkosky_eval(args):
    p = _problem(args)
    res = _cutkosky_eval(p, args)
    res = {"c": [str(x) for x in p.c], "s": str(p.s), "method": args.method, **res}
    text = format_value(res["value"])
    if isinstance(res["value"], Fraction):
        text += f" ~ {format_value(float(res['value']))}"
    if res.get("stderr") is not None:
        text += f" +- {format_value(res['stderr'])}"
    out = {k: (format_value(v) if isinstance(v, (Fraction, float, np.floating)) else v)
           for k, v in res.items()}
    return text, out


def cmd_cutkosky_region(args):
    p = _problem(args)
    reg = GammaRegion(p)
    if args.svg:
        emit_svg(args.svg, reg)
    area = region_area(p)
    poly = reg.area_polygon()
    res = {"c": [str(x) for x in p.c], "area": format_value(float(area.value)),
           "polygon_area": format_value(poly)}
    return f"area = {res['area']}\npolygon area = {res['polygon_area']}", res


def cmd_cutkosky_grid(args):
    base = args.c or [Fraction(0)] * 3
    axes = [args.c1 or [base[0]], args.c2 or [base[1]], args.c3 or [base[2]]]
    rows = []
    for c in itertools.product(*axes):
        p = CutkoskyProblem(tuple(c), args.s or 1)
        r = _cutkosky_eval(p, args)
        rows.append([*p.c, r["value"], r.get("stderr", r.get("error_bound"))])
    header = ["c1", "c2", "c3", "vol", "err"]
    text = csv_text(header, rows)
    if args.csv:
        _write(args.csv, text)
    return text.rstrip("\n"), {"header": header, "rows": [[format_value(x) for x in r] for r in rows]}


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--model", default=None, help="model name (P2, P1xP1, Hirzebruch:r, P:n) or JSON file")
    common.add_argument("--json", action="store_true", help="print a machine-readable result document")
    common.add_argument("--record", metavar="FILE", help="write a run record for later replay")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")

    series = _Parser(add_help=False)
    series.add_argument("--H", type=int_list, action="append", metavar="a1,..,arho",
                        help="divisor coefficients on the rays; repeat for each H_j")
    series.add_argument("--flag", type=int_list, default=None, help="indices of the flag cone")
    series.add_argument("--m", type=int_list, default=None, help="multidegree, e.g. 2,3")
    series.add_argument("--k", type=int_list, default=None, help="comma-separated k for direct estimates")

    fn = _Parser(add_help=False)
    fn.add_argument("--function", default=None,
                    help="product2, semicircle, weierstrass, JSON text or JSON file")

    ck = _Parser(add_help=False)
    ck.add_argument("--c", type=rat_list, default=None, help="c1,c2,c3 (rationals)")
    ck.add_argument("--s", type=rat, default=None, help="weight s of O(s) (default 1)")
    ck.add_argument("--method", choices=["adaptive", "mc", "lattice", "closed", "sections"],
                    default="adaptive")
    ck.add_argument("--tol", type=float, default=1e-6, help="adaptive tolerance (default 1e-6)")
    ck.add_argument("--max-cells", type=count, default=4_000_000, help="adaptive cell budget")
    ck.add_argument("--samples", type=count, default=10**6, help="MC samples (default 1e6)")
    ck.add_argument("--m", type=int_list, default=None, help="lattice-sum m values (default 100,200,400)")

    p = _Parser(prog="okvol", description="Okounkov cones, volume functions and the Cutkosky example.")
    p.add_argument("--version", action="version", version=f"okvol {__version__}")
    sub = p.add_subparsers(dest="group", metavar="{toric,okounkov,logcone,cutkosky,replay}")
    sub.required = True

    t = sub.add_parser("toric", help="fans, divisors, sections").add_subparsers(dest="cmd", metavar="CMD")
    t.required = True
    x = t.add_parser("validate", parents=[common])
    x.set_defaults(func=cmd_toric_validate)
    for name, func in (("h0", cmd_toric_h0), ("polytope", cmd_toric_polytope)):
        x = t.add_parser(name, parents=[common])
        x.add_argument("--coeffs", type=int_list, default=None, help="a_1,..,a_rho")
        if name == "polytope":
            x.add_argument("--svg", metavar="FILE")
        x.set_defaults(func=func)

    o = sub.add_parser("okounkov", help="Okounkov cones and volume functions").add_subparsers(dest="cmd", metavar="CMD")
    o.required = True
    x = o.add_parser("cone", parents=[common, series])
    x.set_defaults(func=cmd_okounkov_cone)
    x = o.add_parser("slice", parents=[common, series])
    x.add_argument("--svg", metavar="FILE")
    x.set_defaults(func=cmd_okounkov_slice)
    x = o.add_parser("volfn", parents=[common, series])
    x.add_argument("--grid", type=grid_spec, default=None, help="multidegree grid, e.g. 1..5 or 0..3,0..3")
    x.add_argument("--csv", metavar="FILE")
    x.set_defaults(func=cmd_okounkov_volfn)
    x = o.add_parser("estimate", parents=[common, series])
    x.set_defaults(func=cmd_okounkov_estimate)

    lg = sub.add_parser("logcone", help="realise log-concave functions").add_subparsers(dest="cmd", metavar="CMD")
    lg.required = True
    x = lg.add_parser("build", parents=[common, fn])
    x.add_argument("--points", type=int, default=100, help="hypothesis-check samples")
    x.add_argument("--svg", metavar="FILE")
    x.add_argument("--v", type=rat_list, default=None, help="slice to draw")
    x.set_defaults(func=cmd_logcone_build)
    x = lg.add_parser("verify", parents=[common, fn])
    x.add_argument("--points", type=int, default=20)
    x.add_argument("--samples", type=count, default=10**6)
    x.add_argument("--csv", metavar="FILE")
    x.set_defaults(func=cmd_logcone_verify)
    x = lg.add_parser("shrink", parents=[common, fn, series])
    x.set_defaults(func=cmd_logcone_shrink)

    ct = sub.add_parser("cutkosky", help="volume on the P^2-bundle over E x E").add_subparsers(dest="cmd", metavar="CMD")
    ct.required = True
    x = ct.add_parser("eval", parents=[common, ck])
    x.set_defaults(func=cmd_cutkosky_eval)
    x = ct.add_parser("region", parents=[common, ck])
    x.add_argument("--svg", metavar="FILE")
    x.set_defaults(func=cmd_cutkosky_region)
    x = ct.add_parser("grid", parents=[common, ck])
    for i in (1, 2, 3):
        x.add_argument(f"--c{i}", type=rat_list, default=None, help=f"values of c{i}")
    x.add_argument("--csv", metavar="FILE")
    x.set_defaults(func=cmd_cutkosky_grid)

    r = sub.add_parser("replay", help="re-run a recorded command")
    r.add_argument("record", help="run record written by --record")
    r.set_defaults(func=None)
    return p


def _normalise(argv: list[str]) -> list[str]:
    # `okvol cutkosky --c ...` means `okvol cutkosky eval --c ...`
    if len(argv) >= 1 and argv[0] == "cutkosky" and (len(argv) == 1 or argv[1].startswith("-")):
        if not (len(argv) > 1 and argv[1] in ("-h", "--help")):
            return ["cutkosky", "eval"] + argv[1:]
    return argv


def _params(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k.startswith("_") or k in ("func", "record", "json"):
            continue
        if isinstance(v, list):
            v = [[format_value(y) for y in x] if isinstance(x, (list, tuple)) else format_value(x) for x in v]
        elif v is not None and not isinstance(v, (bool, int, str)):
            v = format_value(v)
        out[k] = v
    return out


def _strip_record(argv: list[str]) -> list[str]:
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--record":
            skip = True
        elif not a.startswith("--record="):
            out.append(a)
    return out


def run(argv: list[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = _normalise(list(argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=err)
        return EXIT_USAGE
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    if args.group == "replay":
        try:
            with open(args.record, encoding="utf-8") as fh:
                from .models import parse_json_text
                rec = parse_json_text(fh.read(), args.record)
            argv2 = _strip_record(list(rec["argv"]))
        except (OSError, KeyError, TypeError, ModelError) as e:
            print(f"replay: {e}", file=err)
            return EXIT_INVALID
        return run(argv2, out, err)
    t0 = time.perf_counter()
    code = EXIT_OK
    result = None
    try:
        args._doc = load_document(args.model) if args.model else {}
        text, result = args.func(args)
    except UsageError as e:
        print(f"okvol: {e}", file=err)
        return EXIT_USAGE
    except ToleranceFailure as e:
        print(f"okvol: tolerance not met: {e}", file=err)
        text, result, code = None, e.result, EXIT_TOLERANCE
    except _ValidationResult as e:
        text, result, code = str(e), e.result, EXIT_INVALID
    except (ModelError, FanError, SeriesError, HypothesisError, ShrinkError, ValueError,
            ZeroDivisionError) as e:
        print(f"okvol: {e}", file=err)
        return EXIT_INVALID
    doc = {"command": " ".join([args.group, args.cmd]), "result": result}
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True), file=out)
    elif text is not None:
        print(text, file=out)
    if args.record:
        rec = {"tool": "okvol", "version": __version__, "argv": argv,
               "command": doc["command"], "parameters": _params(args), "seed": args.seed,
               "outputs": result, "exit_code": code,
               "wall_time": round(time.perf_counter() - t0, 6)}
        with open(args.record, "w", encoding="utf-8") as fh:
            json.dump(rec, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return code


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
