"""JSON problem/solution files and CSV iteration traces."""

import csv
import io
import json
import math

import numpy as np

from .problem import ProblemSpec

TRACE_COLUMNS = ["phase", "outer_step", "inner_iter", "tau_or_pi", "lambda_sq",
                 "step_length_t", "objective_value"]


class ParseError(ValueError):
    pass


def _floats(a):
    return [float(v) for v in np.asarray(a, dtype=float).reshape(-1)]


def spec_to_dict(spec):
    d = {"n": spec.n, "Q": _floats(spec.Q), "c": _floats(spec.c), "x_L": _floats(spec.x_L),
         "x_R": _floats(spec.x_R), "delta": spec.delta, "tau_F": spec.tau_F, "pi_F": spec.pi_F}
    if spec.name is not None:
        d["name"] = spec.name
    return d


def _number(v, key):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{key!r} must be a number")
    return float(v)


def spec_from_dict(d):
    if not isinstance(d, dict):
        raise ParseError("problem file must hold a JSON object")
    missing = [k for k in ("n", "Q", "c", "x_L", "x_R", "delta", "tau_F", "pi_F") if k not in d]
    if missing:
        raise ParseError(f"missing keys: {', '.join(missing)}")
    n = d["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ParseError("'n' must be a nonnegative integer")
    arrays = {}
    for key, size in (("Q", n * n), ("c", n), ("x_L", n), ("x_R", n)):
        v = d[key]
        if not isinstance(v, list) or len(v) != size:
            raise ParseError(f"{key!r} must be an array of {size} numbers")
        arrays[key] = [_number(e, key) for e in v]
    name = d.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("'name' must be a string")
    Q = np.array(arrays["Q"]).reshape(n, n)
    return ProblemSpec(Q=Q, c=arrays["c"], x_L=arrays["x_L"], x_R=arrays["x_R"],
                       delta=_number(d["delta"], "delta"), tau_F=_number(d["tau_F"], "tau_F"),
                       pi_F=_number(d["pi_F"], "pi_F"), name=name)


def dumps(obj):
    # repr-based float output round-trips binary64 exactly
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def write_problem(spec, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(spec_to_dict(spec)))


def read_problem(path):
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read problem file {path}: {exc}") from exc
    return spec_from_dict(d)


def _path_dict(res, param):
    return {
        f"{param}0": res.tau0,
        f"{param}_E": res.tauE,
        "eps": res.eps,
        "sigma": res.sigma,
        "barrier_weight": res.barrier_weight,
        "outer_iterations": res.outer_iterations,
        "inner_iterations": list(res.inner_iterations_per_step),
        "final_iterations": res.final_iterations,
        "linear_solves": res.total_linear_solves,
        f"{param}_schedule": list(res.tau_schedule),
        "x_final": _floats(res.x_final),
    }


def solution_to_dict(solution, trace, spec=None):
    p1 = trace.phase1
    d = {
        "x_hat": _floats(solution.x_hat),
        "phi_value": solution.phi_value,
        "certified_gap": solution.certified_gap,
        "L": trace.L,
        "warnings": list(trace.warnings),
        "trace": {
            "convexity": trace.convexity.value,
            "phase1": {"eps": p1.eps, "iterations": p1.iterations,
                       "linear_solves": trace.phase1_linear_solves, "x_I": _floats(p1.x)},
            "phase2": dict(_path_dict(trace.phase2, "tau"), entry_ratio=trace.entry_ratio),
            "phase3": _path_dict(trace.phase3, "pi"),
            "total_linear_solves": trace.total_linear_solves,
        },
    }
    if spec is not None and spec.name is not None:
        d["name"] = spec.name
    return d


def trace_rows(trace):
    """One row per Newton iteration of all three phases."""
    rows = []
    for j, run in enumerate(trace.phase1.runs):
        rows.extend(_run_rows(1, j, None, run))
    for phase, res in ((2, trace.phase2), (3, trace.phase3)):
        for j, run in enumerate(res.runs):
            rows.extend(_run_rows(phase, j, run.parameter, run))
    return rows


def _run_rows(phase, outer, param, run):
    for k, (lam_sq, value) in enumerate(zip(run.decrement_sq_history, run.values)):
        t = run.step_lengths[k] if k < len(run.step_lengths) else None
        yield {"phase": phase, "outer_step": outer, "inner_iter": k, "tau_or_pi": param,
               "lambda_sq": lam_sq, "step_length_t": t, "objective_value": value}


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_trace(rows, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for r in rows:
            w.writerow([_cell(r[k]) for k in TRACE_COLUMNS])


def read_trace(path):
    """Parse a trace CSV back into typed rows (missing cells become ``None``)."""
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    out = []
    for r in csv.DictReader(io.StringIO(text)):
        out.append({
            "phase": int(r["phase"]),
            "outer_step": int(r["outer_step"]),
            "inner_iter": int(r["inner_iter"]),
            "tau_or_pi": float(r["tau_or_pi"]) if r["tau_or_pi"] else None,
            "lambda_sq": float(r["lambda_sq"]),
            "step_length_t": float(r["step_length_t"]) if r["step_length_t"] else None,
            "objective_value": float(r["objective_value"]),
        })
    return out


def descent_violations(rows):
    """Consecutive iterates of one Newton run that break the Armijo
    decrease ``f(x_{k+1}) <= f(x_k) - 0.1 t lambda_k**2`` or have a
    non-finite objective."""
    bad = []
    for prev, cur in zip(rows, rows[1:]):
        if not math.isfinite(prev["objective_value"]):
            bad.append(prev)
        if cur["inner_iter"] == 0:
            continue
        t = prev["step_length_t"]
        if t is None or not cur["objective_value"] <= prev["objective_value"] - 0.1 * t * prev["lambda_sq"]:
            bad.append(cur)
    if rows and not math.isfinite(rows[-1]["objective_value"]):
        bad.append(rows[-1])
    return bad
