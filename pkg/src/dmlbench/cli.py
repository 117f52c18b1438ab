"""Command-line front end.

Exit codes: 0 success, 1 selftest failure, 2 invalid input, 3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

import jsonschema

from . import __version__
from .polyexp import (
    BudgetExceeded,
    DegenerateEquation,
    PolyExpEquation,
    count_profile,
    fit_log_envelope,
    reduce_and_solve,
    solve_bounded,
    solve_digit_partition,
)
from .structure import PForm, certify_bound, count_nonzero_digits, decompose, pform_match
from .torus import ResourceError, orbit, parse_instance

EXIT_OK, EXIT_SELFTEST, EXIT_INVALID, EXIT_RESOURCE = 0, 1, 2, 3


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# schemas

_INT_LIST = {"type": "array", "items": {"type": "integer"}}
_RATIONAL = {"type": ["string", "integer"]}

_COORD = {
    "oneOf": [
        {"type": "integer"},
        _INT_LIST,
        {
            "type": "object",
            "properties": {"num": _INT_LIST, "den": _INT_LIST},
            "required": ["num"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {"c": {"type": ["integer", "array"]}, "e": {"type": "integer"}},
            "required": ["e"],
            "additionalProperties": False,
        },
    ]
}

TORUS_SCHEMA = {
    "type": "object",
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "ext_degree": {"type": "integer", "minimum": 1},
        "ext_seed": {"type": "integer"},
        "N": {"type": "integer", "minimum": 1},
        "A": {"type": "array", "items": _INT_LIST},
        "beta": {"type": "array", "items": _COORD},
        "alpha": {"type": "array", "items": _COORD},
        "variety": {
            "type": "object",
            "properties": {
                "polys": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "properties": {"coeff": _COORD, "exponents": _INT_LIST},
                            "required": ["coeff", "exponents"],
                        },
                    },
                },
                "dim": {"type": "integer", "minimum": 0},
            },
            "required": ["polys"],
        },
        "M": {"type": "integer", "minimum": 0},
        "mode": {"enum": ["exact", "montecarlo", "auto"]},
        "seed": {"type": "integer"},
    },
    "required": ["p", "N", "A", "beta", "alpha", "variety", "M"],
}

LINREC_SCHEMA = {
    "type": "object",
    "properties": {
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"q_coeffs": {"type": "array", "items": _RATIONAL}, "mu": {"type": "integer"}},
                "required": ["q_coeffs", "mu"],
            },
        }
    },
    "required": ["terms"],
}

EQUATION_SCHEMA = {
    "type": "object",
    "properties": {
        "lhs": LINREC_SCHEMA,
        "rhs": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {
                    "c": _RATIONAL,
                    "lambda": {"type": "integer"},
                    "a": {"type": "integer", "minimum": 1},
                    "unknown": {"type": "integer", "minimum": 0},
                },
                "required": ["c", "lambda", "a"],
            },
        },
        "meta": {"type": "object"},
        "M": {"type": "integer", "minimum": 0},
        "K_max": {"type": "integer", "minimum": 1},
        "solver": {"enum": ["bounded", "digits"]},
        "q": {"type": "integer", "minimum": 2},
        "cs": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "checkpoints": _INT_LIST,
    },
    "required": ["lhs", "rhs", "M"],
}

SET_SCHEMA = {
    "type": "object",
    "properties": {
        "S": _INT_LIST,
        "M": {"type": "integer", "minimum": 0},
        "a_max": {"type": "integer", "minimum": 1},
        "window_fraction": _RATIONAL,
        "d": {"type": "integer", "minimum": 0},
        "checkpoints": _INT_LIST,
        "growth_tolerance": {"type": "number", "exclusiveMinimum": 0},
        "pform": {
            "type": "object",
            "properties": {
                "m": {"type": "integer", "minimum": 1},
                "c": {"type": "array", "items": _RATIONAL},
                "a": _INT_LIST,
                "p": {"type": "integer", "minimum": 2},
            },
            "required": ["m", "c", "a", "p"],
        },
    },
    "required": ["S", "M"],
}

DIGITS_SCHEMA = {
    "type": "object",
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "m": {"type": "integer", "minimum": 1},
        "M": {"type": "integer"},
        "ones_only": {"type": "boolean"},
    },
    "required": ["p", "m", "M"],
}

KIND_SCHEMAS = {
    "torus-return": TORUS_SCHEMA,
    "polyexp": EQUATION_SCHEMA,
    "reduce": EQUATION_SCHEMA,
    "digits": DIGITS_SCHEMA,
    "certify": SET_SCHEMA,
}


# ---------------------------------------------------------------------------
# io helpers


def _load(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return obj, hashlib.sha256(raw).hexdigest()


def _payload(obj, schema, kinds=None):
    """Unwrap {"kind", "payload"} envelopes and validate against ``schema``."""
    if isinstance(obj, dict) and "kind" in obj and "payload" in obj:
        if obj["kind"] not in KIND_SCHEMAS:
            raise InputError(f"unknown instance kind {obj['kind']!r}")
        if kinds is not None and obj["kind"] not in kinds:
            raise InputError(f"instance kind {obj['kind']!r} does not fit this subcommand")
        schema = KIND_SCHEMAS[obj["kind"]]
        obj = obj["payload"]
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(x) for x in exc.absolute_path) or "<root>"
        raise InputError(f"field {where}: {exc.message}") from exc
    return obj


def _dump(report, path):
    text = json.dumps(report, sort_keys=True, indent=2, default=_json_default) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_default(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float) and x != x:
        return None
    raise TypeError(f"not serializable: {type(x).__name__}")


def _write_csv(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _provenance(args, digest, **extra):
    prov = {
        "tool": "dmlbench",
        "version": __version__,
        "subcommand": args.command,
        "instance_sha256": digest,
        "seed": args.seed,
    }
    prov.update(extra)
    return prov


def _checkpoints(args, default=None):
    if args.checkpoints:
        try:
            return [int(x) for x in args.checkpoints.split(",") if x.strip()]
        except ValueError as exc:
            raise InputError(f"--checkpoints: {exc}") from exc
    return default


def _torus(args):
    obj, digest = _load(args.instance)
    inst = parse_instance(_payload(obj, TORUS_SCHEMA, {"torus-return"}))
    if args.max_m is not None:
        inst.M = args.max_m
    if args.seed is not None:
        inst.seed = args.seed
    return inst, digest


def _return_report(inst, args):
    res = inst.run(mode=args.mode)
    out = res.to_json()
    out["M"] = inst.M
    out["dimV"] = inst.V.dim_hint
    return res, out


# ---------------------------------------------------------------------------
# subcommands


def cmd_orbit(args):
    inst, digest = _torus(args)
    steps = inst.M if args.max_m is None else args.max_m
    pts = orbit(inst.phi, inst.alpha, steps)
    report = {"points": [{"n": n, "point": P.to_json()} for n, P in enumerate(pts)]}
    report["provenance"] = _provenance(args, digest, steps=steps)
    _dump(report, args.out)


def cmd_return_set(args):
    inst, digest = _torus(args)
    res, report = _return_report(inst, args)
    report["provenance"] = _provenance(args, digest, mode=res.mode, error_bound=res.error_bound)
    _dump(report, args.out)


def _set_or_torus(args):
    obj, digest = _load(args.instance)
    if isinstance(obj, dict) and ("S" in obj or obj.get("kind") == "certify"):
        payload = _payload(obj, SET_SCHEMA, {"certify"})
        return payload, payload["S"], payload["M"], payload.get("d"), digest, None
    inst, _ = _torus(args)
    res, rep = _return_report(inst, args)
    return {}, res.ns, inst.M, inst.V.dim_hint, digest, rep


def cmd_decompose(args):
    payload, S, M, _, digest, rs = _set_or_torus(args)
    dec = decompose(
        S,
        M,
        a_max=payload.get("a_max", args.a_max),
        window_fraction=Fraction(str(payload.get("window_fraction", args.window_fraction))),
    )
    report = {"decomposition": dec.to_json()}
    if "pform" in payload:
        f = payload["pform"]
        matched, diff = pform_match(dec.sparse, PForm(f["m"], [Fraction(str(c)) for c in f["c"]], f["a"], f["p"]), M)
        report["pform_match"] = {"matched": matched, "difference": diff}
    if rs is not None:
        report["return_set"] = rs
    report["provenance"] = _provenance(args, digest, mode=args.mode)
    _dump(report, args.out)


def cmd_certify(args):
    payload, S, M, d, digest, rs = _set_or_torus(args)
    dec = decompose(S, M, a_max=payload.get("a_max", args.a_max))
    if args.d is not None:
        d = args.d
    if d is None:
        raise InputError("certify needs d (instance field or --d)")
    cps = _checkpoints(args, payload.get("checkpoints"))
    if not cps:
        raise InputError("certify needs checkpoints (instance field or --checkpoints)")
    tol = payload.get("growth_tolerance", args.growth_tolerance)
    cert = certify_bound(dec.sparse, d, cps, tol)
    report = {"decomposition": dec.to_json(), "certificate": cert.to_json()}
    if rs is not None:
        report["return_set"] = rs
    report["provenance"] = _provenance(args, digest, mode=args.mode)
    _write_csv(cert.to_csv(), args.csv)
    _dump(report, args.out)


def _equation(args, kinds):
    obj, digest = _load(args.instance)
    payload = _payload(obj, EQUATION_SCHEMA, kinds)
    eq = PolyExpEquation.from_json(payload)
    M = payload["M"] if args.max_m is None else args.max_m
    return payload, eq, M, digest


def cmd_solve(args):
    payload, eq, M, digest = _equation(args, {"polyexp"})
    K_max = payload.get("K_max", 16)
    if payload.get("solver", "bounded") == "digits":
        if "q" not in payload or "cs" not in payload:
            raise InputError("digits solver needs q and cs")
        sols = solve_digit_partition(eq.lhs, payload["q"], payload["cs"], M, K_max)
    else:
        sols = solve_bounded(eq, M, K_max)
    report = {"equation": eq.to_json(), **sols.to_json()}
    cps = _checkpoints(args, payload.get("checkpoints"))
    if cps:
        d = eq.dim_v if eq.dim_v is not None else eq.m
        prof = count_profile(sols, cps, d)
        report["profile"] = [{"M": a, "count": b, "ratio": c} for a, b, c in prof]
        _write_csv(_profile_csv(prof), args.csv)
    report["provenance"] = _provenance(args, digest, K_max=K_max)
    _dump(report, args.out)


def _profile_csv(prof):
    lines = ["M,count,ratio"]
    lines += [f"{a},{b},{c!r}" for a, b, c in prof]
    return "\n".join(lines) + "\n"


def cmd_reduce(args):
    import math

    payload, eq, M, digest = _equation(args, {"reduce", "polyexp"})
    res = reduce_and_solve(eq, M)
    report = res.to_json()
    pts = res.growth_points()
    A, B = fit_log_envelope([(math.log(n), g) for n, g in pts])
    report["fitted_constants"] = {"A_hat": A, "B_hat": B}
    report["provenance"] = _provenance(args, digest)
    _dump(report, args.out)


def cmd_digits(args):
    if args.instance:
        obj, _ = _load(args.instance)
        payload = _payload(obj, DIGITS_SCHEMA, {"digits"})
        p, m, M, ones = payload["p"], payload["m"], payload["M"], payload.get("ones_only", False)
    else:
        if args.p is None or args.m is None or args.max is None:
            raise InputError("digits needs --p, --m and --max (or --instance)")
        p, m, M, ones = args.p, args.m, args.max, args.ones_only
    from sympy import isprime

    if not isprime(p):
        raise InputError(f"p = {p} is not prime")
    count = count_nonzero_digits(p, m, M, ones)
    print(count)
    if args.out:
        _dump({"p": p, "m": m, "M": M, "ones_only": ones, "count": count}, args.out)


def cmd_selftest(args):
    from .selftest import run_selftest

    ok = run_selftest(verbose=True)
    return EXIT_OK if ok else EXIT_SELFTEST


COMMANDS = {
    "orbit": cmd_orbit,
    "return-set": cmd_return_set,
    "decompose": cmd_decompose,
    "certify": cmd_certify,
    "solve": cmd_solve,
    "reduce": cmd_reduce,
    "digits": cmd_digits,
    "selftest": cmd_selftest,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def build_parser():
    parser = _Parser(prog="dmlbench", description="Return sets of torus self-maps over F_p(t).", allow_abbrev=False)
    parser.add_argument("--version", action="version", version=f"dmlbench {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name, allow_abbrev=False)
        sp.add_argument("--instance")
        sp.add_argument("--out")
        sp.add_argument("--csv")
        sp.add_argument("--mode", choices=["exact", "montecarlo", "auto"])
        sp.add_argument("--seed", type=int)
        sp.add_argument("--checkpoints", help="comma-separated list of M values")
        sp.add_argument("--max-m", dest="max_m", type=int, help="override the scan bound M")
        if name in ("decompose", "certify"):
            sp.add_argument("--a-max", dest="a_max", type=int, default=64)
            sp.add_argument("--window-fraction", dest="window_fraction", default="1/2")
        if name == "certify":
            sp.add_argument("--d", type=int)
            sp.add_argument("--growth-tolerance", dest="growth_tolerance", type=float, default=2.0)
        if name == "digits":
            sp.add_argument("--p", type=int)
            sp.add_argument("--m", type=int)
            sp.add_argument("--max", type=int)
            sp.add_argument("--ones-only", dest="ones_only", action="store_true")
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise InputError("a subcommand is required")
        if args.command in ("orbit", "return-set", "decompose", "certify", "solve", "reduce") and not args.instance:
            raise InputError(f"{args.command} needs --instance")
        status = COMMANDS[args.command](args)
        return EXIT_OK if status is None else status
    except (InputError, DegenerateEquation, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ResourceError, BudgetExceeded) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
