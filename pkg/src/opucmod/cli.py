"""Job-file driven command line front end.

One JSON job in, one structured JSON document out (plus optional CSV side
files for the closed-form chain data).  Numbers are rendered with 17
significant digits and keys are emitted sorted, so identical jobs produce
byte-identical documents.  Exit codes: 0 success, 2 when a run hit a
consistency stop before its horizon (results still emitted), 1 on input
errors or a failed verification sweep.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

import jsonschema
import numpy as np

from .algebra import ComplexPoly, HermitianLaurent
from .associated import (
    associated_from_perturbation,
    associated_solution,
    rotation_residual,
    verify_associated,
)
from .classification import (
    constant_solution,
    degree_drop_test,
    modification_of,
    verify_constant_relation,
)
from .direct import run_direct
from .inverse import (
    inverse_init_i1,
    inverse_init_i2,
    inverse_init_i3,
    run_inverse,
)
from .lebesgue_inverse import (
    LebesgueProblem,
    LebesgueSolution,
    classify,
    emit_figure_data,
    emit_newton_curve,
    s_sequence,
    sigma_sequence,
    sigma_value,
    solution_trajectory,
)
from .opuc_core import moments_to_schur
from .sampling import modified_pair

DEFAULT_TOLERANCE = 1e-10

_COMPLEX = {"type": "array", "items": {"type": "number"},
            "minItems": 2, "maxItems": 2}
_POLY = {"type": "array", "items": _COMPLEX, "minItems": 1}
_SCHUR = {"type": "array", "items": _COMPLEX}
_REAL_OR_RATIONAL = {"oneOf": [
    {"type": "number"},
    {"type": "array", "items": {"type": "integer"},
     "minItems": 2, "maxItems": 2},
]}


def _command_case(name, required_horizon, parameters):
    case = {
        "if": {"properties": {"command": {"const": name}}},
        "then": {"properties": {"parameters": parameters}},
    }
    if required_horizon:
        case["then"]["required"] = ["horizon"]
    return case


JOB_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "opucmod job file",
    "type": "object",
    "required": ["command", "parameters"],
    "additionalProperties": False,
    "properties": {
        "command": {"enum": ["direct", "inverse-i1", "inverse-i2",
                             "inverse-i3", "lebesgue", "classify-constant",
                             "associated", "verify"]},
        "parameters": {"type": "object"},
        "horizon": {"type": "integer", "minimum": 1},
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
        "seed": {"type": "integer", "minimum": 0},
    },
    "allOf": [
        _command_case("direct", True, {
            "type": "object",
            "required": ["P", "schur_v"],
            "additionalProperties": False,
            "properties": {"P": _POLY, "schur_v": _SCHUR},
        }),
        _command_case("inverse-i1", True, {
            "type": "object",
            "required": ["u_schur", "b_head", "r"],
            "additionalProperties": False,
            "properties": {"u_schur": _SCHUR, "b_head": _SCHUR,
                           "r": {"type": "integer", "minimum": 1}},
        }),
        _command_case("inverse-i2", True, {
            "type": "object",
            "required": ["u_schur", "b_head", "x0"],
            "additionalProperties": False,
            "properties": {"u_schur": _SCHUR, "b_head": _SCHUR,
                           "x0": _POLY},
        }),
        _command_case("inverse-i3", True, {
            "type": "object",
            "required": ["u_schur", "b_head", "P"],
            "additionalProperties": False,
            "properties": {"u_schur": _SCHUR, "b_head": _SCHUR,
                           "P": _POLY},
        }),
        _command_case("lebesgue", False, {
            "type": "object",
            "required": ["s0"],
            "additionalProperties": False,
            "properties": {
                "omega": _REAL_OR_RATIONAL,
                "alpha": _COMPLEX,
                "beta": {"type": "number"},
                "s0": _REAL_OR_RATIONAL,
                "phase": {"type": "number"},
                "newton": {
                    "type": "object",
                    "required": ["s_min", "s_max"],
                    "additionalProperties": False,
                    "properties": {"s_min": {"type": "number"},
                                   "s_max": {"type": "number"},
                                   "samples": {"type": "integer",
                                               "minimum": 2}},
                },
            },
        }),
        _command_case("classify-constant", False, {
            "type": "object",
            "required": ["a", "b_head"],
            "additionalProperties": False,
            "properties": {"a": _COMPLEX, "b_head": _SCHUR},
        }),
        _command_case("associated", False, {
            "type": "object",
            "required": ["b1"],
            "additionalProperties": False,
            "properties": {"a1": _COMPLEX, "b1": _COMPLEX,
                           "c0": {"type": "number"},
                           "alpha": _COMPLEX, "beta": {"type": "number"}},
        }),
        _command_case("verify", False, {
            "type": "object",
            "required": ["trials"],
            "additionalProperties": False,
            "properties": {"trials": {"type": "integer", "minimum": 1},
                           "r_max": {"type": "integer", "minimum": 1,
                                     "maximum": 3}},
        }),
    ],
}

_DEFAULT_HORIZONS = {"lebesgue": 40, "classify-constant": 15,
                     "associated": 15, "verify": 8}


class JobError(Exception):
    """Malformed or inconsistent job input."""


# ---------------------------------------------------------------------------
# Input conversion

def _cx(pair) -> complex:
    return complex(float(pair[0]), float(pair[1]))


def _cxlist(pairs) -> list:
    return [_cx(p) for p in pairs]


def _poly(pairs) -> ComplexPoly:
    return ComplexPoly([_cx(p) for p in pairs])


def _real_or_rational(v):
    if isinstance(v, list):
        if v[1] == 0:
            raise JobError("rational with zero denominator")
        return Fraction(int(v[0]), int(v[1]))
    return float(v)


# ---------------------------------------------------------------------------
# Output conversion and canonical rendering

def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _pairs(zs) -> list:
    return [_pair(z) for z in zs]


def _poly_out(p: ComplexPoly) -> list:
    return _pairs(p.coeffs)


def _number_out(v):
    """Exact rationals as [num, den]; everything else as a float."""
    if isinstance(v, Fraction):
        return [v.numerator, v.denominator]
    if isinstance(v, int):
        return v
    if isinstance(v, complex):
        return _pair(v)
    return float(v)


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _render(v, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(v, dict):
        if not v:
            return "{}"
        inner = ",\n".join(
            '%s"%s": %s' % ("  " * (indent + 1), k, _render(v[k], indent + 1))
            for k in sorted(v))
        return "{\n%s\n%s}" % (inner, pad)
    if isinstance(v, (list, tuple)):
        if not len(v):
            return "[]"
        if all(isinstance(x, (int, float, str, bool)) or x is None
               for x in v):
            return "[%s]" % ", ".join(_render(x) for x in v)
        inner = ",\n".join(
            "%s%s" % ("  " * (indent + 1), _render(x, indent + 1))
            for x in v)
        return "[\n%s\n%s]" % (inner, pad)
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return _fmt_float(v)
    if isinstance(v, str):
        return json.dumps(v)
    raise TypeError("unrenderable value %r" % (v,))


def _report_common(rep) -> dict:
    out = {
        "stop_index": rep.stop_index,
        "failed": rep.failed,
        "mop_count": rep.mop_count,
        "horizon": rep.horizon,
        "residual_max": max(rep.residuals) if rep.residuals else 0.0,
        "residuals": [float(x) for x in rep.residuals],
        "det_factors": [float(x) for x in rep.det_factors],
    }
    return out


# ---------------------------------------------------------------------------
# Command handlers

def _run_direct(params, horizon, tol):
    laurent = HermitianLaurent(_poly(params["P"]))
    rep = run_direct(laurent, _cxlist(params["schur_v"]), horizon, tol)
    results = _report_common(rep)
    results["a"] = _pairs(rep.produced)
    return results, (2 if rep.failed else 0), None


def _run_inverse(command, params, horizon, tol):
    u_schur = _cxlist(params["u_schur"])
    b_head = _cxlist(params["b_head"])
    if command == "inverse-i1":
        init = inverse_init_i1(b_head, u_schur, int(params["r"]), tol)
    elif command == "inverse-i2":
        x0 = _poly(params["x0"])
        init = inverse_init_i2(b_head, x0, x0.degree, tol)
    else:
        init = inverse_init_i3(b_head, HermitianLaurent(_poly(params["P"])),
                               tol)
    rep = run_inverse(init, u_schur, b_head, horizon, tol)
    results = _report_common(rep)
    results["b"] = _pairs(rep.produced)
    results["degenerate_start"] = rep.degenerate_start
    results["recovered_A"] = (_poly_out(rep.recovered_A)
                              if rep.recovered_A is not None else None)
    return results, (2 if rep.failed else 0), None


def _run_lebesgue(params, horizon, tol, out_dir):
    has_omega = "omega" in params
    has_ab = "alpha" in params or "beta" in params
    if has_omega == has_ab or ("alpha" in params) != ("beta" in params):
        raise JobError("give either omega or the pair (alpha, beta)")
    if has_omega:
        prob = LebesgueProblem.from_omega(_real_or_rational(params["omega"]))
    else:
        prob = LebesgueProblem(_cx(params["alpha"]), float(params["beta"]))
    s0 = _real_or_rational(params["s0"])

    cls = classify(prob, s0, horizon, tol)
    results = {
        "case": cls.case_label,
        "omega": _number_out(prob.omega),
        "alpha": _pair(prob.alpha),
        "beta": _number_out(prob.beta),
        "s0": _number_out(s0),
        "stop_index": cls.stop_index,
        "mop_count": cls.mop_count,
        "bernstein_szego": cls.bernstein_szego,
        "char_at_s0": _number_out(cls.char_at_s0),
        "sigma": [_number_out(sigma_value(p))
                  for p in sigma_sequence(prob, horizon)],
    }
    if float(s0) != 0.0:
        seq = s_sequence(prob, s0, horizon, tol)
        results["s_recurrence"] = [_number_out(v) for v in seq.values]
        results["s_closed"] = [_number_out(v) for v in seq.closed_values]
        results["s_closed_max_dev"] = seq.max_closed_dev

    if "phase" in params:
        sol = LebesgueSolution.from_circle(prob, s0, float(params["phase"]),
                                           tol)
        traj = solution_trajectory(sol, horizon, tol)
        limits = {k: _number_out(v) if not isinstance(v, str) else v
                  for k, v in traj.limits.items()}
        results["trajectory"] = {
            "b1": _pair(sol.b1),
            "x0": _pair(sol.x0),
            "y0": _pair(sol.y0),
            "b2_closed_form": _pair(sol.second_parameter()),
            "b": _pairs(traj.b),
            "x": _pairs(traj.x),
            "y": _pairs(traj.y),
            "max_closed_dev": traj.max_closed_dev,
            "limits": limits,
        }

    side = {}
    if out_dir is not None:
        side["chain.csv"] = emit_figure_data(prob, s0, horizon, tol)
        if "newton" in params:
            nw = params["newton"]
            side["newton.csv"] = emit_newton_curve(
                prob, float(nw["s_min"]), float(nw["s_max"]),
                int(nw.get("samples", 200)), tol)
        results["csv"] = {name.split(".")[0]: os.path.join(out_dir, name)
                          for name in sorted(side)}
    code = 2 if cls.stop_index is not None else 0
    return results, code, side


def _run_classify(params, horizon, tol):
    sol = constant_solution(_cx(params["a"]), _cxlist(params["b_head"]), tol)
    drop = degree_drop_test(sol, tol)
    results = {
        "r": sol.r,
        "a": _pair(sol.a),
        "zeta": _pair(sol.zeta),
        "b_tail": _pair(sol.b_tail),
        "X": _poly_out(sol.x),
        "Y": _poly_out(sol.y),
        "degree_drop": drop.drop,
        "effective_degree": drop.effective_degree,
        "tail_ratios": _pairs(drop.ratios),
        "ratio_stability": drop.ratios_stable,
        "verify_residual": verify_constant_relation(sol, horizon, tol),
    }
    try:
        results["modification_P"] = _poly_out(modification_of(sol, tol).p)
    except ValueError:
        results["modification_P"] = None
    return results, 0, None


def _run_associated(params, horizon, tol):
    has_head = "a1" in params
    has_pert = "alpha" in params or "beta" in params
    if has_head == has_pert or ("alpha" in params) != ("beta" in params):
        raise JobError("give either a1 (with optional c0) or the "
                       "perturbation pair (alpha, beta)")
    if has_head:
        sol = associated_solution(_cx(params["a1"]), _cx(params["b1"]),
                                  float(params.get("c0", 1.0)), tol)
    else:
        sol = associated_from_perturbation(_cx(params["alpha"]),
                                           float(params["beta"]),
                                           _cx(params["b1"]), tol)
    results = {
        "a1": _pair(sol.a1),
        "b1": _pair(sol.b1),
        "lambda": _pair(sol.lam),
        "c0": float(sol.c0),
        "alpha": _pair(sol.alpha),
        "beta": float(sol.beta),
        "d0": _pair(sol.d0),
        "rotation_base": _pair(sol.rotation_base),
        "verify_residual": verify_associated(sol, horizon, tol),
        "rotation_residual": rotation_residual(sol, min(horizon, 12)),
    }
    return results, 0, None


def _run_verify(params, horizon, seed, tol):
    trials = int(params["trials"])
    r_max = int(params.get("r_max", 2))
    rows = []
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        r = 1 + (i % r_max)
        b, laurent, mu = modified_pair(rng, r, horizon)
        rep = run_direct(laurent, b, horizon, tol)
        oracle = moments_to_schur(mu)
        m = min(len(rep.produced), len(oracle.schur.params), horizon)
        dev = max((abs(rep.produced[k] - oracle.schur.params[k])
                   for k in range(m)), default=0.0)
        ok = (not rep.failed) and oracle.stop_index is None and dev <= 1e-8
        rows.append({"trial": i, "r": r, "max_deviation": dev,
                     "algorithm_stop": rep.stop_index,
                     "oracle_stop": oracle.stop_index, "pass": ok})
    rows.sort(key=lambda row: row["trial"])
    all_pass = all(row["pass"] for row in rows)
    results = {
        "trials": rows,
        "all_pass": all_pass,
        "worst_deviation": max(row["max_deviation"] for row in rows),
    }
    return results, (0 if all_pass else 1), None


# ---------------------------------------------------------------------------
# Driver

def run_job(job: dict, out_dir=None):
    """Validate and execute one job; returns (document, exit_code, side),
    where side maps CSV file names to their text content."""
    try:
        jsonschema.validate(job, JOB_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise JobError("job file rejected by schema: %s" % exc.message)
    command = job["command"]
    params = job["parameters"]
    tol = float(job.get("tolerance", DEFAULT_TOLERANCE))
    horizon = int(job.get("horizon", _DEFAULT_HORIZONS.get(command, 10)))
    seed = int(job.get("seed", 0))

    try:
        if command == "direct":
            results, code, side = _run_direct(params, horizon, tol)
        elif command in ("inverse-i1", "inverse-i2", "inverse-i3"):
            results, code, side = _run_inverse(command, params, horizon, tol)
        elif command == "lebesgue":
            results, code, side = _run_lebesgue(params, horizon, tol, out_dir)
        elif command == "classify-constant":
            results, code, side = _run_classify(params, horizon, tol)
        elif command == "associated":
            results, code, side = _run_associated(params, horizon, tol)
        else:
            results, code, side = _run_verify(params, horizon, seed, tol)
    except (ValueError, RuntimeError) as exc:
        raise JobError(str(exc))

    doc = {
        "command": command,
        "input": job,
        "status": "ok" if code == 0 else ("stop" if code == 2 else "fail"),
        "results": results,
    }
    return doc, code, (side or {})


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="opucmod",
        description="Schur-parameter algorithms for hermitian Laurent "
                    "modifications of moment functionals on the unit circle.")
    parser.add_argument("--job", required=True,
                        help="path to a JSON job file")
    parser.add_argument("--out", default=None,
                        help="directory for the result document and CSV "
                             "side files")
    parser.add_argument("--tolerance", type=float, default=None,
                        help="override the job file's tolerance")
    parser.add_argument("--format", choices=("json", "csv"), default="json",
                        help="stdout format; csv applies to the lebesgue "
                             "command only")
    args = parser.parse_args(argv)

    try:
        with open(args.job, "r", encoding="utf-8") as fh:
            job = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print("error: cannot read job file: %s" % exc, file=sys.stderr)
        return 1
    if args.tolerance is not None:
        if not isinstance(job, dict):
            print("error: job file must hold a JSON object", file=sys.stderr)
            return 1
        job = dict(job)
        job["tolerance"] = args.tolerance
    if args.format == "csv" and isinstance(job, dict) and \
            job.get("command") != "lebesgue":
        print("error: --format csv applies to the lebesgue command only",
              file=sys.stderr)
        return 1
    if not isinstance(job, dict):
        print("error: job file must hold a JSON object", file=sys.stderr)
        return 1

    try:
        doc, code, side = run_job(job, args.out)
    except JobError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1

    if args.format == "csv":
        prob, s0, horizon, tol = _lebesgue_inputs(job)
        text = emit_figure_data(prob, s0, horizon, tol)
    else:
        text = _render(doc) + "\n"
    sys.stdout.write(text)

    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "result.json"), "w",
                  encoding="utf-8") as fh:
            fh.write(_render(doc) + "\n")
        for name, content in side.items():
            with open(os.path.join(args.out, name), "w",
                      encoding="utf-8") as fh:
                fh.write(content)
    return code


def _lebesgue_inputs(job):
    params = job["parameters"]
    if "omega" in params:
        prob = LebesgueProblem.from_omega(_real_or_rational(params["omega"]))
    else:
        prob = LebesgueProblem(_cx(params["alpha"]), float(params["beta"]))
    s0 = _real_or_rational(params["s0"])
    tol = float(job.get("tolerance", DEFAULT_TOLERANCE))
    horizon = int(job.get("horizon", _DEFAULT_HORIZONS["lebesgue"]))
    return prob, s0, horizon, tol


if __name__ == "__main__":
    sys.exit(main())
