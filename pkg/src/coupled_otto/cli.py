"""Command-line front end.

Data goes to stdout (or ``--out``), diagnostics to stderr. Exit codes:
0 success, 1 verification failure, 2 invalid input. Every float is written
with 17 significant digits in scientific notation.
"""

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analysis, coherence
from .cycle import CycleSpec, DEFAULT_STROKE_SAMPLES, run_cycle, trajectory
from .exceptions import OttoError, ParameterError
from .model import max_delta, validate_cycle_constraint
from .verify import run_verify

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_INVALID = 0, 1, 2

PARAM_KEYS = ("omega", "j", "delta1", "delta2", "beta1", "beta2", "grid", "delta2_range",
              "samples", "format", "out", "seed", "cases")


class InputError(Exception):
    pass


@dataclass(frozen=True)
class SweepDescriptor:
    start: float
    stop: float
    count: int

    @classmethod
    def parse(cls, text: str) -> "SweepDescriptor":
        parts = str(text).split(":")
        if len(parts) != 3:
            raise InputError(f"sweep must look like start:stop:count, got {text!r}")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise InputError(f"bad sweep {text!r}: {exc}") from None
        if not start < stop:
            raise InputError(f"sweep start must be < stop, got {text!r}")
        if count < 2:
            raise InputError(f"sweep count must be >= 2, got {count}")
        return cls(start, stop, count)

    def values(self):
        return np.linspace(self.start, self.stop, self.count)


# ---------------------------------------------------------------- formatting

def fmt_float(x) -> str:
    return format(float(x), ".16e")


def _json_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "null" if np.isnan(v) else fmt_float(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def render_json(record: dict) -> str:
    body = ",\n".join(f"  {json.dumps(k)}: {_json_value(v)}" for k, v in record.items())
    return "{\n" + body + "\n}\n"


def _csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "" if np.isnan(v) else fmt_float(v)
    return str(v)


def render_csv(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_csv_value(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_output(text: str, out):
    if out is None or out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def companion_path(out, tag: str):
    if out is None or out == "-":
        return None
    path = Path(out)
    return str(path.with_name(f"{path.stem}.{tag}{path.suffix or '.csv'}"))


# ------------------------------------------------------------- configuration

def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {path!r}: {exc}") from None
    if not isinstance(data, dict):
        raise InputError("config file must hold a JSON object")
    out = {}
    for key, value in data.items():
        norm = key.lstrip("-").replace("-", "_")
        if norm not in PARAM_KEYS:
            raise InputError(f"unknown config key {key!r}")
        out[norm] = value
    return out


def resolve(args) -> dict:
    """Flag values override config-file values."""
    values = load_config(args.config) if args.config else {}
    for key in PARAM_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return values


def _need(values, *keys):
    missing = [k for k in keys if values.get(k) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise InputError(f"missing required parameter(s): {flags}")
    try:
        return [float(values[k]) for k in keys]
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from None


def _samples(values) -> int:
    n = values.get("samples", DEFAULT_STROKE_SAMPLES)
    return DEFAULT_STROKE_SAMPLES if n is None else int(n)


def _cycle_spec(values) -> CycleSpec:
    omega, j, d1, d2, b1, b2 = _need(values, "omega", "j", "delta1", "delta2", "beta1", "beta2")
    return CycleSpec(omega, d1, d2, j, b1, b2, stroke_samples=_samples(values))


def _check_betas(**betas):
    for name, b in betas.items():
        if not (np.isfinite(b) and b > 0):
            raise ParameterError(f"{name} must be finite and > 0, got {b!r}")


# ------------------------------------------------------------------ commands

def cmd_cycle(values) -> int:
    spec = _cycle_spec(values)
    ends, ex = run_cycle(spec)
    report = validate_cycle_constraint(spec.omega, spec.delta1, spec.delta2, spec.coupling)
    record = {
        "omega": spec.omega, "j": spec.coupling, "delta1": spec.delta1, "delta2": spec.delta2,
        "beta1": spec.beta1, "beta2": spec.beta2,
        "W": ex.W, "W_A": ex.W_A, "W_B": ex.W_B, "Q1": ex.Q1, "Q2": ex.Q2, "eta": ex.eta,
    }
    for tag, pops in (("a", ends.pops_a), ("c", ends.pops_c)):
        record.update({
            f"pops_{tag}_p0": pops.p0, f"pops_{tag}_p1": pops.p1,
            f"pops_{tag}_pplus": pops.pplus, f"pops_{tag}_pminus": pops.pminus,
        })
    record["c_l1_a"] = coherence.coherence_l1(ends.rho_a)
    record["c_l1_d"] = coherence.coherence_l1(ends.rho_d)
    record["zero_area_warning"] = spec.delta1 == spec.delta2
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit_record(record, values)
    return EXIT_OK


def _emit_record(record, values):
    if values.get("format", "json") == "csv":
        write_output(render_csv(list(record), [list(record.values())]), values.get("out"))
    else:
        write_output(render_json(record), values.get("out"))


def cmd_scan(values) -> int:
    omega, j, b1, b2 = _need(values, "omega", "j", "beta1", "beta2")
    _check_betas(beta1=b1, beta2=b2)
    report = validate_cycle_constraint(omega, 0.0, 0.0, j)
    report.raise_if_invalid()
    grid = int(values.get("grid") or 200)
    if grid < 2:
        raise InputError(f"--grid must be >= 2, got {grid}")
    g = analysis.window_scan(omega, j, b1, b2, grid)
    d1, d2 = np.meshgrid(g.delta1, g.delta2, indexing="ij")
    out = values.get("out")
    if values.get("format") == "json":
        write_output(render_json({
            "delta1": d1.ravel(), "delta2": d2.ravel(), "W": g.W.ravel(), "f": g.f.ravel(),
            "sign": g.sign.ravel(), "boundary_delta1": g.delta1, "boundary_delta2": g.boundary,
        }), out)
        return EXIT_OK
    rows = zip(d1.ravel(), d2.ravel(), g.W.ravel(), g.f.ravel(), g.sign.ravel())
    write_output(render_csv(["delta1", "delta2", "W", "f", "sign"], rows), out)
    boundary = companion_path(out, "boundary")
    text = render_csv(["delta1", "delta2_f_zero"], zip(g.delta1, g.boundary))
    if boundary is None:
        print("note: boundary curve is written only with --out", file=sys.stderr)
    else:
        write_output(text, boundary)
    return EXIT_OK


def cmd_efficiency(values) -> int:
    omega, j, d1, b1, b2 = _need(values, "omega", "j", "delta1", "beta1", "beta2")
    _check_betas(beta1=b1, beta2=b2)
    top = float(max_delta(omega, j)) if omega > 0 and 0 <= j < omega else 0.0
    sweep_text = values.get("delta2_range") or f"0:{0.999 * top!r}:1001"
    sweep = SweepDescriptor.parse(sweep_text)
    for d2 in (sweep.start, sweep.stop):
        validate_cycle_constraint(omega, d1, d2, j).raise_if_invalid()
    res = analysis.efficiency_sweep(omega, j, d1, b1, b2, sweep.values())
    lo, hi = res.work_range if res.work_range is not None else (None, None)
    if values.get("format") == "json":
        write_output(render_json({
            "delta2": res.delta2, "W": res.W, "eta": res.eta, "eta_up": res.eta_up,
            "eta_carnot": res.eta_carnot, "positive_work_flag": res.positive_work.astype(int),
            "range_low": lo, "range_high": hi,
        }), values.get("out"))
        return EXIT_OK
    rows = (
        (d, w, e, u, res.eta_carnot, bool(p), lo, hi)
        for d, w, e, u, p in zip(res.delta2, res.W, res.eta, res.eta_up, res.positive_work)
    )
    header = ["delta2", "W", "eta", "eta_up", "eta_carnot", "positive_work_flag", "range_low", "range_high"]
    write_output(render_csv(header, rows), values.get("out"))
    return EXIT_OK


def cmd_trajectory(values) -> int:
    spec = _cycle_spec(values)
    traj = trajectory(spec)
    ordered = [traj.endpoints["a"], *traj.strokes["a->b"], traj.endpoints["b"],
               traj.endpoints["c"], *traj.strokes["c->d"], traj.endpoints["d"]]
    header = ["stroke_label", "delta", "omega_A", "omega_B", "p_A", "p_B"]
    rows = [(s.stroke, s.delta, s.omega_A, s.omega_B, s.pA, s.pB) for s in ordered]
    if values.get("format") == "json":
        cols = list(zip(*rows))
        write_output(render_json(dict(zip(header, [list(c) for c in cols]))), values.get("out"))
    else:
        write_output(render_csv(header, rows), values.get("out"))
    return EXIT_OK


def cmd_measure_erase(values) -> int:
    spec = _cycle_spec(values)
    rep = coherence.measure_erase_cycle(spec)
    record = {
        "w_c_to_d": rep.w_c_to_d, "w_turn_off": rep.w_turn_off, "w_decoherence": rep.w_decoherence,
        "w_erase_bound": rep.w_erase_bound, "w_total_bound": rep.w_total_bound,
        "stepwise_sum": rep.stepwise_sum, "c_rel_entropy_d": rep.c_rel_entropy_d,
    }
    for i, label in enumerate(("00", "01", "10", "11")):
        record[f"rho_a_tilde_{label}"] = float(rep.rho_a_tilde[i, i].real)
    _emit_record(record, values)
    return EXIT_OK


def cmd_verify(values) -> int:
    seed = int(values.get("seed") or 0)
    cases = int(values["cases"]) if values.get("cases") is not None else 1000
    if seed < 0 or seed >= 2**64:
        raise InputError("--seed must be an unsigned 64-bit integer")
    if cases < 0:
        raise InputError("--cases must be >= 0")
    if cases == 0:
        print("warning: --cases 0 runs no checks; passing vacuously", file=sys.stderr)
    report = run_verify(seed, cases)
    lines = []
    for s in report.suites:
        status = "PASS" if s.passed else "FAIL"
        lines.append(f"{s.name}: cases={s.cases} failures={s.failures} {status}")
        if not s.passed:
            params = " ".join(f"--{k.replace('_', '-')} {fmt_float(v)}" for k, v in s.counterexample.items())
            lines.append(f"  reproduce: {params}  ({s.detail})")
    lines.append(f"overall: {'PASS' if report.passed else 'FAIL'} (seed={seed}, cases={cases})")
    write_output("\n".join(lines) + "\n", values.get("out"))
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


COMMANDS = {
    "cycle": cmd_cycle,
    "scan": cmd_scan,
    "efficiency": cmd_efficiency,
    "trajectory": cmd_trajectory,
    "measure-erase": cmd_measure_erase,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega", type=float, help="sum of local fields Omega")
    common.add_argument("--j", type=float, help="XX coupling strength J")
    common.add_argument("--delta1", type=float, help="detuning at the hot isochore")
    common.add_argument("--delta2", type=float, help="detuning at the cold isochore")
    common.add_argument("--beta1", type=float, help="inverse temperature of reservoir 1")
    common.add_argument("--beta2", type=float, help="inverse temperature of reservoir 2")
    common.add_argument("--grid", type=int, help="scan grid size N (N x N cells)")
    common.add_argument("--delta2-range", dest="delta2_range", help="efficiency sweep start:stop:count")
    common.add_argument("--samples", type=int, help="samples per adiabatic stroke")
    common.add_argument("--format", choices=("json", "csv"), help="output format")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--seed", type=int, help="verify seed (unsigned 64-bit)")
    common.add_argument("--cases", type=int, help="verify case count")
    common.add_argument("--config", help="JSON file of flag values; flags win")

    parser = argparse.ArgumentParser(prog="coupled-otto", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "cycle": "run one Otto cycle and report work, heats and efficiency",
        "scan": "positive-work window over the (delta1, delta2) plane",
        "efficiency": "efficiency and its bounds along a delta2 sweep",
        "trajectory": "local occupations along both adiabatic strokes",
        "measure-erase": "work bound of the measurement-erase cycle",
        "verify": "randomized invariant suites",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        values = resolve(args)
        if values.get("format") is None:
            values["format"] = "json" if args.command in ("cycle", "measure-erase") else "csv"
        return COMMANDS[args.command](values)
    except (InputError, OttoError, ValueError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
