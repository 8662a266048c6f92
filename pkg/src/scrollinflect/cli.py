"""Batch command-line frontend: JSON instance files in, one JSON report out.

Exit codes: 0 success, 1 input or validation error, 2 internal invariant
violation (the two osculating-dimension routes disagreeing, or a failed
witness correspondence).  Output is byte-stable for identical inputs and
seeds: keys are sorted and every number is emitted through the exact
serializers.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bundle import BundleSpec, dual_twist, h0
from .curve import Curve, Divisor
from .errors import (DomainError, InputError, InvariantViolation, PrecisionError,
                     Unsupported)
from .fields import field_from_desc
from .scroll import ScanContext, project_system, scan_report, subsheaf_witnesses
from .theorems import (hirschowitz_bound, kprime_expected_dims,
                       nilpotent_rank1_exists, segre1, verify_cohomological_stability,
                       verify_generic_inflection, verify_projection,
                       verify_segre_threshold, verify_semistability)


class Instance:
    """Parsed instance file: field, curve, bundle, twist selector, parameters."""

    def __init__(self, obj):
        self.field = field_from_desc(obj["field"])
        cdesc = obj["curve"]
        a4 = self.field.elt_from_json(cdesc["a4"])
        a6 = self.field.elt_from_json(cdesc["a6"])
        self.curve = Curve(self.field, a4, a6)
        self.bundle = BundleSpec.from_json(self.curve, obj["bundle"])
        self.M_selector = obj.get("M", [])
        params = obj.get("parameters") or {}
        self.k = params.get("k", 0)
        self.ext_degree = params.get("ext_degree", 1)
        self.seed = params.get("seed", 0)
        self.m = params.get("m")

    def twists(self):
        """The selected degree-0 classes: one divisor, or all of Pic^0."""
        sel = self.M_selector
        if sel == "all":
            if not self.field.is_finite:
                raise InputError("'all' twists need a finite field")
            return self.curve.pic0_representatives()
        if not sel:
            return [Divisor()]
        D = self.curve.divisor_from_json(sel)
        if D.degree != 0:
            raise InputError("twist class must have degree zero")
        return [D]


def load_instance(path, overrides):
    with open(path) as fh:
        obj = json.load(fh)
    inst = Instance(obj)
    if overrides.k is not None:
        inst.k = overrides.k
    if overrides.ext is not None:
        inst.ext_degree = overrides.ext
    if overrides.seed is not None:
        inst.seed = overrides.seed
    if overrides.m is not None:
        inst.m = overrides.m
    if overrides.M is not None:
        inst.M_selector = "all" if overrides.M == "all" else json.loads(overrides.M)
    return inst


def emit(payload):
    sys.stdout.write(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    sys.stdout.write("\n")


# -- commands -----------------------------------------------------------------


def cmd_curve_info(inst, args):
    c = inst.curve
    out = {"command": "curve-info", "field": c.field.desc(),
           "a4": c.field.elt_to_json(c.a4), "a6": c.field.elt_to_json(c.a6),
           "discriminant": c.field.elt_to_json(c.discriminant)}
    if c.field.is_finite:
        out["points"] = [c.place_to_json(p) for p in c.points()]
        out["group_order"] = c.group_order
    return out


def cmd_sections(inst, args):
    reports = []
    for M in inst.twists():
        V = h0(dual_twist(inst.bundle, M))
        rec = V.to_json()
        rec["M"] = inst.curve.divisor_to_json(M)
        reports.append(rec)
    return {"command": "sections", "reports": reports}


def _osc_reports(inst, k, cross_check):
    reports = []
    for M in inst.twists():
        ctx = ScanContext(inst.bundle, M, ext_degree=inst.ext_degree, k_max=k)
        rep = scan_report(ctx, k, cross_check=cross_check)
        if cross_check and rep.oracle_agreement is False:
            raise InvariantViolation(
                "jet-rank and pole-counting osculating dimensions disagree: "
                + json.dumps(rep.to_json(), sort_keys=True))
        if cross_check and rep.witness_match is False:
            raise InvariantViolation(
                "deficiency set and subsheaf witnesses disagree: "
                + json.dumps(rep.to_json(), sort_keys=True))
        reports.append(rep.to_json())
    return reports


def cmd_osc(inst, args):
    return {"command": "osc", "k": inst.k,
            "reports": _osc_reports(inst, inst.k, cross_check=True)}


def cmd_scan(inst, args):
    out = []
    for M in inst.twists():
        ctx = ScanContext(inst.bundle, M, ext_degree=inst.ext_degree, k_max=inst.k)
        for k in range(inst.k + 1):
            rep = scan_report(ctx, k, cross_check=True)
            if rep.oracle_agreement is False or rep.witness_match is False:
                raise InvariantViolation(
                    "cross-check failure: " + json.dumps(rep.to_json(),
                                                         sort_keys=True))
            out.append(rep.to_json())
    return {"command": "scan", "reports": out}


def cmd_witnesses(inst, args):
    big = inst.curve.base_change(inst.ext_degree)
    E = inst.bundle if inst.ext_degree == 1 else inst.bundle.base_change(big)
    out = []
    for M in inst.twists():
        Mb = M if inst.ext_degree == 1 else inst.curve.embed_divisor(M, big)
        recs = []
        for place in big.points():
            ws = subsheaf_witnesses(E, Mb, place, inst.k)
            if ws.is_empty:
                continue
            recs.append({"point": big.place_to_json(place),
                         "directions": [[big.field.elt_to_json(c) for c in d]
                                        for d in ws.directions]})
        out.append({"M": inst.curve.divisor_to_json(M), "k": inst.k,
                    "ext_degree": inst.ext_degree, "fibers": recs})
    return {"command": "witnesses", "reports": out}


def cmd_project(inst, args):
    if inst.m is None:
        raise InputError("project needs --m (the projected dimension m + 1)")
    out = []
    for M in inst.twists():
        V = h0(dual_twist(inst.bundle, M))
        W = project_system(V, inst.m, inst.seed)
        ctx = ScanContext(inst.bundle, M, ext_degree=inst.ext_degree,
                          k_max=inst.k, sections=W)
        reports = [scan_report(ctx, k, cross_check=False).to_json()
                   for k in range(inst.k + 1)]
        out.append({"M": inst.curve.divisor_to_json(M), "seed": inst.seed,
                    "m_plus_1": inst.m, "reports": reports})
    return {"command": "project", "seed": inst.seed, "reports": out}


def cmd_segre(inst, args):
    method = args.method or "auto"
    rep = segre1(inst.bundle, method=method, ext_degree=inst.ext_degree)
    out = rep.to_json(inst.curve)
    out["command"] = "segre"
    return out


def cmd_bounds(args):
    out = {"command": "bounds"}
    if args.r is None or args.d is None or args.g is None:
        raise InputError("bounds needs --r, --d, --g (and optionally --n, --m)")
    n = args.n if args.n is not None else 1
    bound, delta = hirschowitz_bound(args.r, n, args.d, args.g)
    out["bound"] = bound
    out["delta"] = delta
    try:
        out["system"] = _jsonable(kprime_expected_dims(args.r, args.d, args.g,
                                                       m=args.m))
    except InputError:
        out["system"] = None
    return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    return obj


def cmd_hypothesis_nilpotent(inst, args):
    exists, details = nilpotent_rank1_exists(inst.bundle)
    out = {"command": "hypothesis-nilpotent", "exists": exists,
           "end_dim": details["dim"]}
    if details["witness_coeffs"] is not None:
        K = inst.field
        out["witness_coeffs"] = [K.elt_to_json(c) for c in details["witness_coeffs"]]
    return out


def cmd_verify(inst, args):
    name = args.theorem
    if name == "mainA":
        ks = None if args.k is None else list(range(args.k + 1))
        rep = verify_segre_threshold(inst.bundle, k_values=ks,
                                     ext_degree=inst.ext_degree)
    elif name == "mainB":
        rep = verify_semistability(inst.bundle, ext_degree=inst.ext_degree)
    elif name == "mainBmod":
        rep = verify_cohomological_stability(inst.bundle,
                                             ext_degree=inst.ext_degree)
    elif name == "mainC":
        rep = verify_generic_inflection(inst.bundle, ext_degree=inst.ext_degree)
    elif name == "appendixA":
        if inst.m is None:
            raise InputError("verify appendixA needs --m")
        M = inst.twists()[0]
        seeds = range(inst.seed, inst.seed + args.seeds)
        rep = verify_projection(inst.bundle, M, inst.m, seeds,
                                ext_degree=inst.ext_degree)
    else:
        raise InputError(f"unknown theorem id {name!r}")
    out = rep.to_json()
    out["command"] = f"verify {name}"
    out["seed"] = inst.seed
    return out


def build_parser():
    p = argparse.ArgumentParser(prog="scroll-inflect",
                                description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, instance=True):
        if instance:
            sp.add_argument("--instance", required=True)
        sp.add_argument("--k", type=int, default=None)
        sp.add_argument("--M", default=None)
        sp.add_argument("--ext", type=int, default=None)
        sp.add_argument("--m", type=int, default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--method", default=None)
        return sp

    for name in ["curve-info", "sections", "osc", "scan", "witnesses",
                 "project", "segre", "hypothesis-nilpotent"]:
        common(sub.add_parser(name))
    bounds = sub.add_parser("bounds")
    bounds.add_argument("--r", type=int)
    bounds.add_argument("--n", type=int)
    bounds.add_argument("--d", type=int)
    bounds.add_argument("--g", type=int)
    bounds.add_argument("--m", type=int, default=None)
    verify = common(sub.add_parser("verify"))
    verify.add_argument("theorem",
                        choices=["mainA", "mainB", "mainBmod", "mainC",
                                 "appendixA"])
    verify.add_argument("--seeds", type=int, default=50)
    return p


_DISPATCH = {
    "curve-info": cmd_curve_info,
    "sections": cmd_sections,
    "osc": cmd_osc,
    "scan": cmd_scan,
    "witnesses": cmd_witnesses,
    "project": cmd_project,
    "segre": cmd_segre,
    "hypothesis-nilpotent": cmd_hypothesis_nilpotent,
    "verify": cmd_verify,
}


def run_command(argv):
    """Parse, dispatch, emit; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.command == "bounds":
            emit(cmd_bounds(args))
            return 0
        inst = load_instance(args.instance, args)
        emit(_DISPATCH[args.command](inst, args))
        return 0
    except InvariantViolation as e:
        emit({"error": str(e), "kind": "invariant-violation"})
        return 2
    except (InputError, DomainError, Unsupported, PrecisionError,
            FileNotFoundError, KeyError, json.JSONDecodeError,
            ZeroDivisionError) as e:
        emit({"error": f"{type(e).__name__}: {e}"})
        return 1


def main(argv=None):
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
