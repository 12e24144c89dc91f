"""``qmixpar build|measure|sweep|verify``.

Exit codes: 0 success, 2 usage or schema error, 3 verification failure,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import entangle as ent
from . import geometry as geo
from .errors import CoordinateError, InvariantViolation, QMixParError
from .parametrize import (
    ANGLE_KEYS,
    COORD_KEYS,
    TwoQubitCoords,
    appendix_density,
    assemble_density,
    bold_basis,
    change_basis,
    ek_basis,
    ensemble,
    pure_projector,
)
from .verify import SUITES, run_suites

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_INTERNAL = 0, 2, 3, 4
ROUTE_TOL = 1e-10
OUTPUTS = (
    "negativity", "concurrence", "ppt", "c_p", "c_psi1", "c_psi2", "c_psi3",
    "c_e1", "c_e2", "c_e3", "d2_to_pure",
)


class UsageError(QMixParError):
    pass


# --- io helpers -------------------------------------------------------------

def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def _load_coords(path: str, degrees: bool) -> TwoQubitCoords:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise UsageError("coordinate file must hold a JSON object")
    return TwoQubitCoords.from_flat(data, degrees=degrees)


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _num(x: float) -> float | None:
    return None if isinstance(x, float) and math.isnan(x) else x


# --- build ------------------------------------------------------------------

def build_payload(coords: TwoQubitCoords, basis: str = "computational") -> dict:
    """Density matrix via the closed-form bold matrix and via the eigenensemble."""
    bb = bold_basis(coords.local_a, coords.local_b)
    via_ensemble = assemble_density(ensemble(coords))
    closed_bold = appendix_density(coords)
    delta = float(np.max(np.abs(closed_bold - change_basis(via_ensemble, bb))))
    if delta > ROUTE_TOL:
        raise InvariantViolation(f"construction routes disagree by {delta:.3e}")
    rho = closed_bold if basis == "bold" else via_ensemble
    return {
        "basis": basis,
        "coords": coords.flat(),
        "matrix": matrix_to_json(rho),
        "trace": float(np.trace(rho).real),
        "route_delta": delta,
    }


# --- measure ----------------------------------------------------------------

def _with_delta(report: ent.EntanglementReport, oracle: ent.EntanglementReport) -> dict:
    out = report.as_dict()
    out["delta_negativity"] = abs(report.negativity - oracle.negativity)
    out["delta_concurrence"] = abs(report.concurrence - oracle.concurrence)
    out["verdict_agrees"] = report.ppt_satisfied == oracle.ppt_satisfied
    return out


def measure_payload(coords: TwoQubitCoords) -> dict:
    rho = ent.coords_density(coords)
    oracle = ent.general_report(rho)
    pc = ent.part_concurrences(coords)
    branches: dict[str, dict] = {"general_oracle": oracle.as_dict()}
    mu, cp = coords.weights, pc.c_p
    m = coords.mu
    s21_zero = abs(coords.a21.s) <= ent.LIMIT_TOL
    c21_zero = abs(coords.a21.c) <= ent.LIMIT_TOL
    if s21_zero and not math.isnan(pc.c_psi2):
        branches["s21_zero"] = _with_delta(ent.slice_s21_zero(mu, cp, pc.c_psi2), oracle)
    if c21_zero and abs(m[2] - m[3]) <= ent.LIMIT_TOL:
        branches["c21_zero_mu23"] = _with_delta(ent.slice_c21_zero_mu23(mu, cp, pc.c_psi1), oracle)
    if all(abs(a.s) <= ent.LIMIT_TOL for a in (coords.a21, coords.a32, coords.a0)):
        branches["werner_line"] = _with_delta(geo.werner_mu_report(mu, cp), oracle)
    table = {}
    for case in ent.applicable_table1_cases(coords):
        rep = ent.table1_report(coords, case)
        if rep is not None:
            table[case] = _with_delta(rep, oracle)
    if table:
        branches["table1"] = table
    e0 = pure_projector(ek_basis(coords)[:, 0])
    return {
        "coords": coords.flat(),
        "mu": list(m),
        "branches": branches,
        "part_concurrences": {k: _num(v) for k, v in pc.as_dict().items()},
        "weighted_concurrence_bound": ent.weighted_concurrence_bound(coords),
        "d2_to_pure": geo.hs_distance(rho, e0),
    }


# --- sweep ------------------------------------------------------------------

@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SweepSpec:
    vary: tuple[Axis, ...]
    fixed: dict = field(default_factory=dict)
    outputs: tuple[str, ...] = ("negativity", "concurrence")

    @classmethod
    def from_json(cls, data, degrees: bool = False) -> "SweepSpec":
        if not isinstance(data, dict):
            raise UsageError("sweep spec must be a JSON object")
        unknown = set(data) - {"vary", "fixed", "outputs"}
        if unknown:
            raise UsageError(f"unknown sweep keys {sorted(unknown)}")
        raw = data.get("vary")
        if not isinstance(raw, list) or not 1 <= len(raw) <= 3:
            raise UsageError("'vary' must list 1 to 3 coordinates")
        axes = []
        for item in raw:
            if not isinstance(item, dict) or set(item) != {"name", "start", "stop", "steps"}:
                raise UsageError("each vary entry needs exactly name, start, stop, steps")
            name, steps = item["name"], item["steps"]
            if name not in COORD_KEYS:
                raise UsageError(f"unknown coordinate {name!r}")
            if not isinstance(steps, int) or isinstance(steps, bool) or steps < 2:
                raise UsageError("steps must be an integer >= 2")
            lo, hi = item["start"], item["stop"]
            for v in (lo, hi):
                if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                    raise UsageError("start/stop must be finite numbers")
            if degrees and name in ANGLE_KEYS:
                lo, hi = math.radians(lo), math.radians(hi)
            axes.append(Axis(name, float(lo), float(hi), steps))
        if len({a.name for a in axes}) != len(axes):
            raise UsageError("a coordinate is varied twice")
        fixed = data.get("fixed", {})
        if not isinstance(fixed, dict):
            raise UsageError("'fixed' must be an object")
        if set(fixed) & {a.name for a in axes}:
            raise UsageError("a coordinate is both fixed and varied")
        # validate the fixed part on its own
        base = TwoQubitCoords.from_flat(fixed, degrees=degrees)
        outputs = data.get("outputs", ["negativity", "concurrence"])
        if not isinstance(outputs, list) or not outputs or any(o not in OUTPUTS for o in outputs):
            raise UsageError(f"outputs must be a non-empty subset of {list(OUTPUTS)}")
        return cls(tuple(axes), base.flat(), tuple(outputs))

    def grid(self) -> list[tuple[float, ...]]:
        return list(itertools.product(*(a.values() for a in self.vary)))


def evaluate_point(coords: TwoQubitCoords, outputs: tuple[str, ...]) -> list:
    rho = ent.coords_density(coords)
    out: dict = {}
    if {"negativity", "concurrence", "ppt"} & set(outputs):
        rep = ent.general_report(rho)
        out.update(negativity=rep.negativity, concurrence=rep.concurrence, ppt=int(rep.ppt_satisfied))
    if any(o.startswith("c_") for o in outputs):
        out.update(ent.part_concurrences(coords).as_dict())
    if "d2_to_pure" in outputs:
        out["d2_to_pure"] = geo.hs_distance(rho, pure_projector(ek_basis(coords)[:, 0]))
    return [out[o] for o in outputs]


def _sweep_task(args) -> list:
    fixed, names, point, outputs = args
    coords = TwoQubitCoords.from_flat({**fixed, **dict(zip(names, point))})
    return evaluate_point(coords, outputs)


def _fmt(x) -> str:
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def sweep_csv(spec: SweepSpec, jobs: int = 1) -> str:
    names = [a.name for a in spec.vary]
    grid = spec.grid()
    tasks = [(spec.fixed, names, p, spec.outputs) for p in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        rows = [_sweep_task(t) for t in tasks]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names + list(spec.outputs))
    for point, row in zip(grid, rows):
        writer.writerow([_fmt(v) for v in point] + [_fmt(v) for v in row])
    return buf.getvalue()


# --- commands ---------------------------------------------------------------

def _need_input(args) -> str:
    if not args.input:
        raise UsageError(f"{args.command} needs --input")
    return args.input


def cmd_build(args) -> int:
    payload = build_payload(_load_coords(_need_input(args), args.degrees), args.basis)
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_measure(args) -> int:
    payload = measure_payload(_load_coords(_need_input(args), args.degrees))
    _emit(json.dumps(payload, indent=2, allow_nan=False) + "\n", args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = SweepSpec.from_json(_load_json(_need_input(args)), degrees=args.degrees)
    if not args.out:
        raise UsageError("sweep needs --out")
    text = sweep_csv(spec, jobs=args.jobs)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)} or all")
    outcomes = run_suites(names, seed=args.seed, samples=args.samples, jobs=args.jobs)
    for o in outcomes:
        print(o.line())
    if args.out:
        _emit(json.dumps([o.as_dict() for o in outcomes], indent=2) + "\n", args.out)
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="coordinate JSON (build, measure) or sweep spec JSON")
    common.add_argument("--out", help="output path (stdout when omitted)")
    common.add_argument("--degrees", action="store_true", help="read input angles in degrees")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--samples", type=int, default=None, help="override per-suite draw counts")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")

    p = argparse.ArgumentParser(prog="qmixpar", description="Two-qubit mixed-state parametrization and entanglement checks.")
    sub = p.add_subparsers(dest="command", required=True)
    b = sub.add_parser("build", parents=[common], help="build the density matrix")
    b.add_argument("--basis", choices=("computational", "bold"), default="computational")
    sub.add_parser("measure", parents=[common], help="entanglement report with closed-form branches")
    sub.add_parser("sweep", parents=[common], help="evaluate a coordinate grid to CSV")
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("suite", nargs="?", default="all")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1 or (args.samples is not None and args.samples < 1):
        parser.error("--jobs and --samples must be positive")
    handlers = {"build": cmd_build, "measure": cmd_measure, "sweep": cmd_sweep, "verify": cmd_verify}
    try:
        return handlers[args.command](args)
    except InvariantViolation as exc:
        print(f"qmixpar: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UsageError, CoordinateError, ValueError, KeyError) as exc:
        print(f"qmixpar: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
