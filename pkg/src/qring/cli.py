"""Command line front end: levels, sweeps, reference tables, profiles.

Exit codes: 0 on success, 1 for usage problems (bad flags, bad config,
empty m list), 2 when the solver fails to deliver what was asked.
Energies print in the dimensionless unit; a meV column appears when
the run was configured through a [physical] config section.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import matching, oracle, tables
from .model import (
    DEFAULT_PARAMS,
    PhysicalConfig,
    RingParams,
    energy_to_physical,
    load_config,
)
from .radial import r_cut

__all__ = ["SweepSpec", "main"]

_AXES = ("b", "a", "r_i", "v")


@dataclass(frozen=True)
class SweepSpec:
    """One-axis parameter sweep: which knob moves and over what grid.

    The fixed parameters supply every field except the swept axis;
    m_list and max_levels bound the work done per grid point.
    """

    axis: str
    start: float
    stop: float
    step: float
    fixed: RingParams
    m_list: tuple[int, ...]
    max_levels: int = 2

    def __post_init__(self) -> None:
        if self.axis not in _AXES:
            raise ValueError(f"axis must be one of {_AXES}, got {self.axis!r}")
        if not self.start < self.stop:
            raise ValueError(f"start must be below stop, got {self.start}..{self.stop}")
        if not self.step > 0.0:
            raise ValueError(f"step must be positive, got {self.step}")
        if not self.m_list:
            raise ValueError("m_list must not be empty")
        if self.max_levels < 1:
            raise ValueError(f"max_levels must be >= 1, got {self.max_levels}")

    def values(self) -> np.ndarray:
        """Grid points start, start+step, ... including stop if hit."""
        n = int(np.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        pts = self.start + self.step * np.arange(n)
        if pts[-1] < self.stop - 1e-9 * max(1.0, abs(self.stop)):
            pts = np.append(pts, self.stop)
        return pts

    def params_at(self, value: float) -> RingParams:
        return replace(self.fixed, **{self.axis: float(value)})


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _usage_fail(message: str) -> None:
    sys.stderr.write(f"error: {message}\n")
    sys.exit(1)


def _solver_fail(message: str) -> None:
    sys.stderr.write(f"solver error: {message}\n")
    sys.exit(2)


# -- argument plumbing -----------------------------------------------------


def _parse_m_list(text: str) -> tuple[int, ...]:
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise ValueError("m list is empty")
    return tuple(int(t) for t in items)


def _parse_window(text: str) -> tuple[float, float]:
    lo_hi = text.split(":")
    if len(lo_hi) != 2:
        raise ValueError(f"window must look like LO:HI, got {text!r}")
    lo, hi = float(lo_hi[0]), float(lo_hi[1])
    if not lo < hi:
        raise ValueError(f"window must have LO < HI, got {text!r}")
    return lo, hi


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="PATH", help="INI config file")
    sub.add_argument("--v", type=float, help="override: well depth")
    sub.add_argument("--a", type=float, help="override: coupling strength")
    sub.add_argument("--b", type=float, help="override: field parameter")
    sub.add_argument("--s", type=float, help="override: spin splitting factor")
    sub.add_argument("--r-i", dest="r_i", type=float, help="override: inner radius")
    sub.add_argument("--de", type=float, default=0.05, help="scan step (default 0.05)")
    sub.add_argument("--out", metavar="PATH", help="write output to a file")
    sub.add_argument(
        "--format",
        choices=("native", "json"),
        default="native",
        help="native (text or csv per command) or a json mirror",
    )


def _resolve_params(args) -> tuple[RingParams, PhysicalConfig | None]:
    params, phys = DEFAULT_PARAMS, None
    if args.config:
        try:
            params, phys = load_config(args.config)
        except ValueError as exc:
            _usage_fail(str(exc))
    overrides = {
        name: getattr(args, name)
        for name in ("v", "a", "b", "s", "r_i")
        if getattr(args, name) is not None
    }
    if overrides:
        if phys is not None:
            # flag overrides act on the dimensionless view; meV
            # columns would no longer describe the same device
            phys = None
        try:
            params = replace(params, **overrides)
        except ValueError as exc:
            _usage_fail(str(exc))
    return params, phys


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- levels ----------------------------------------------------------------


def _oracle_levels(m: int, params: RingParams, count: int, e_hi: float) -> list[float]:
    r_max = max(3.0, r_cut(params, e_hi))
    grid = oracle.FdGrid(4000, r_max)
    return [e for e, _ in oracle.fd_spectrum(m, params, grid, count)]


def cmd_levels(args) -> int:
    params, phys = _resolve_params(args)
    try:
        m_list = _parse_m_list(args.m)
    except ValueError as exc:
        _usage_fail(str(exc))
    window = None
    if args.window:
        try:
            window = _parse_window(args.window)
        except ValueError as exc:
            _usage_fail(str(exc))
    rows = []
    for m in m_list:
        try:
            if window is None:
                states = matching.levels(m, params, de=args.de, n_levels=2)
            else:
                states = matching.levels(m, params, window[0], window[1], de=args.de)
        except (matching.MatchingError, ValueError) as exc:
            _solver_fail(f"m={m}: {exc}")
        fd = None
        if args.oracle and states:
            fd = _oracle_levels(m, params, len(states), max(s.e for s in states))
        for i, st in enumerate(states):
            row = {
                "m": m,
                "level_index": i,
                "e": st.e,
                "norm": st.norm_check,
                "continuity": st.continuity_residual,
                "det_residual": st.det_residual,
            }
            if phys is not None:
                row["e_meV"] = energy_to_physical(st.e, phys)
            if fd is not None and i < len(fd):
                row["fd_e"] = fd[i]
                row["fd_dev"] = abs(st.e - fd[i]) / max(1.0, abs(fd[i]))
            rows.append(row)
    if args.format == "json":
        _emit(args, json.dumps({"params": asdict(params), "levels": rows}, indent=2) + "\n")
        return 0
    buf = io.StringIO()
    buf.write(f"# params: {params}\n")
    header = ["m", "level", "e"]
    if phys is not None:
        header.append("e_meV")
    header += ["norm", "continuity", "det_resid"]
    if args.oracle:
        header += ["fd_e", "fd_dev"]
    buf.write(" ".join(f"{h:>12}" for h in header) + "\n")
    for row in rows:
        cells = [f"{row['m']:>12d}", f"{row['level_index']:>12d}", f"{row['e']:>12.6f}"]
        if phys is not None:
            cells.append(f"{row['e_meV']:>12.6f}")
        cells += [
            f"{row['norm']:>12.9f}",
            f"{row['continuity']:>12.2e}",
            f"{row['det_residual']:>12.2e}",
        ]
        if args.oracle:
            cells.append(f"{row.get('fd_e', float('nan')):>12.6f}")
            cells.append(f"{row.get('fd_dev', float('nan')):>12.2e}")
        buf.write(" ".join(cells) + "\n")
    _emit(args, buf.getvalue())
    return 0


# -- sweep -----------------------------------------------------------------


def _sweep_point(task: tuple[SweepSpec, float, float]) -> list[dict]:
    """Worker: all levels of all m at one axis value; errors become rows."""
    spec, value, de = task
    rows = []
    try:
        params = spec.params_at(value)
    except ValueError as exc:
        return [{"axis_value": value, "m": m, "error": str(exc)} for m in spec.m_list]
    for m in spec.m_list:
        try:
            found = tables.computed_levels(m, params, n_levels=spec.max_levels, de=de)
            for i, e in enumerate(found[: spec.max_levels]):
                rows.append({"axis_value": value, "m": m, "level_index": i, "e": e})
        except (matching.MatchingError, ValueError) as exc:
            rows.append({"axis_value": value, "m": m, "error": str(exc)})
    return rows


def _run_sweep(spec: SweepSpec, de: float, jobs: int) -> tuple[list[dict], bool]:
    """Collect sweep rows; second member reports interruption."""
    tasks = [(spec, float(v), de) for v in spec.values()]
    rows: list[dict] = []
    truncated = False
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(_sweep_point, t): t for t in tasks}
            pending = set(futures)
            try:
                while pending:
                    done, pending = wait(pending, return_when=FIRST_COMPLETED)
                    for fut in done:
                        rows.extend(fut.result())
            except KeyboardInterrupt:
                truncated = True
                for fut in pending:
                    fut.cancel()
    else:
        try:
            for t in tasks:
                rows.extend(_sweep_point(t))
        except KeyboardInterrupt:
            truncated = True
    rows.sort(
        key=lambda r: (r["axis_value"], r["m"], r.get("level_index", 10**9))
    )
    return rows, truncated


def _sweep_csv(rows: list[dict], phys: PhysicalConfig | None, truncated: bool) -> str:
    buf = io.StringIO()
    fields = ["axis_value", "m", "level_index", "e"]
    if phys is not None:
        fields.append("e_meV")
    if any("error" in r for r in rows):
        fields.append("error")
    writer = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        if phys is not None and "e" in row:
            row = dict(row, e_meV=energy_to_physical(row["e"], phys))
        writer.writerow(row)
    if truncated:
        buf.write("# truncated: interrupted before completion\n")
    return buf.getvalue()


def cmd_sweep(args) -> int:
    params, phys = _resolve_params(args)
    try:
        m_list = _parse_m_list(args.m)
        spec = SweepSpec(
            axis=args.axis,
            start=args.start,
            stop=args.stop,
            step=args.step,
            fixed=params,
            m_list=m_list,
            max_levels=args.max_levels,
        )
    except ValueError as exc:
        _usage_fail(str(exc))
    rows, truncated = _run_sweep(spec, args.de, args.jobs)
    if args.format == "json":
        payload = {"spec": {**asdict(spec), "fixed": asdict(spec.fixed)}, "rows": rows}
        if truncated:
            payload["truncated"] = True
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        _emit(args, _sweep_csv(rows, phys, truncated))
    if rows and all("error" in r for r in rows):
        sys.stderr.write("solver error: every sweep point failed\n")
        return 2
    return 0


# -- table -----------------------------------------------------------------


def cmd_table(args) -> int:
    which = args.which
    computed = tables.compute_table(which, de=args.de, jobs=args.jobs)
    axis, reference = (
        (tables.INNER_RADII, tables.INNER_RADIUS_REFERENCE)
        if which == 1
        else (tables.DEPTHS, tables.DEPTH_REFERENCE)
    )
    ref = np.array(reference)
    rel = np.abs(computed - ref) / np.abs(ref)
    axis_name = "r_i" if which == 1 else "v"
    if args.format == "json":
        payload = {
            "which": which,
            "axis_name": axis_name,
            "axis": list(axis),
            "m_values": list(tables.TABLE_M_VALUES),
            "computed": computed.tolist(),
            "reference": ref.tolist(),
            "rel_dev": rel.tolist(),
            "shared_cell": tables.SHARED_CELL,
        }
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        buf = io.StringIO()
        buf.write(
            f"# table {which}: levels vs reference along {axis_name} "
            f"(fixed {'v=400' if which == 1 else 'r_i=0.5'}, a=1, b=1)\n"
        )
        buf.write(
            f"{axis_name:>8} {'m':>4} {'level':>6} {'computed':>12} "
            f"{'reference':>12} {'rel_dev':>10}\n"
        )
        shared = tables.SHARED_CELL
        for i, av in enumerate(axis):
            for j, m in enumerate(tables.TABLE_M_VALUES):
                for l in range(tables.LEVELS_PER_M):
                    note = ""
                    is_shared_row = (which == 1 and av == 0.5) or (
                        which == 2 and av == 400.0
                    )
                    if (
                        is_shared_row
                        and m == shared["m"]
                        and l == shared["level_index"]
                    ):
                        other = (
                            shared["depth_value"]
                            if which == 1
                            else shared["inner_radius_value"]
                        )
                        note = f"  # other tabulation prints {other}"
                    buf.write(
                        f"{av:>8g} {m:>4d} {l + 1:>6d} {computed[i, j, l]:>12.4f} "
                        f"{ref[i, j, l]:>12.4f} {rel[i, j, l]:>10.2e}{note}\n"
                    )
        buf.write(f"# max rel dev: {np.nanmax(rel):.3e}\n")
        _emit(args, buf.getvalue())
    if np.isnan(computed).any():
        sys.stderr.write("solver error: some cells could not be computed\n")
        return 2
    return 0


# -- wavefunction ----------------------------------------------------------


def cmd_wavefunction(args) -> int:
    params, phys = _resolve_params(args)
    window = None
    if args.window:
        try:
            window = _parse_window(args.window)
        except ValueError as exc:
            _usage_fail(str(exc))
    try:
        if window is None:
            states = matching.levels(
                m=args.m, params=params, de=args.de, n_levels=args.level + 1
            )
        else:
            states = matching.levels(args.m, params, window[0], window[1], de=args.de)
    except (matching.MatchingError, ValueError) as exc:
        _solver_fail(f"m={args.m}: {exc}")
    if args.level >= len(states):
        _solver_fail(
            f"level {args.level} out of range: found {len(states)} level(s) "
            f"for m={args.m}"
        )
    state = states[args.level]
    r, u, w = matching.sample_wavefunction(state, n_samples=args.samples)
    density = (u * u + w * w) * r
    if args.format == "json":
        payload = {
            "m": state.m,
            "level_index": args.level,
            "e": state.e,
            "r": r.tolist(),
            "u": u.tolist(),
            "w": w.tolist(),
            "density": density.tolist(),
        }
        if phys is not None:
            payload["e_meV"] = energy_to_physical(state.e, phys)
        _emit(args, json.dumps(payload, indent=2) + "\n")
        return 0
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["r", "u", "w", "density"])
    for i in range(r.size):
        writer.writerow(
            [f"{r[i]:.9g}", f"{u[i]:.12g}", f"{w[i]:.12g}", f"{density[i]:.12g}"]
        )
    _emit(args, buf.getvalue())
    return 0


# -- entry point -----------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="qring",
        description="Bound states of a ring-shaped quantum well with "
        "spin-orbit coupling in a perpendicular field",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_lv = sub.add_parser("levels", help="bound levels at one parameter point")
    _add_common(p_lv)
    p_lv.add_argument("--m", default="-2,-1,0,1", help="comma list of m values")
    p_lv.add_argument("--window", metavar="LO:HI", help="energy window to scan")
    p_lv.add_argument(
        "--oracle",
        action="store_true",
        help="add finite-difference comparison columns",
    )
    p_lv.set_defaults(func=cmd_levels)

    p_sw = sub.add_parser("sweep", help="levels along one parameter axis")
    _add_common(p_sw)
    p_sw.add_argument("axis", choices=_AXES, help="parameter to sweep")
    p_sw.add_argument("start", type=float)
    p_sw.add_argument("stop", type=float)
    p_sw.add_argument("step", type=float)
    p_sw.add_argument("--m", default="-2,-1,0,1", help="comma list of m values")
    p_sw.add_argument("--max-levels", type=int, default=2, help="levels per point")
    p_sw.add_argument("--jobs", type=int, default=1, help="worker processes")
    p_sw.set_defaults(func=cmd_sweep)

    p_tb = sub.add_parser("table", help="recompute a reference table")
    _add_common(p_tb)
    p_tb.add_argument("which", type=int, choices=(1, 2), help="table number")
    p_tb.add_argument("--jobs", type=int, default=1, help="worker processes")
    p_tb.set_defaults(func=cmd_table)

    p_wf = sub.add_parser("wavefunction", help="radial profile of one state")
    _add_common(p_wf)
    p_wf.add_argument("m", type=int, help="angular quantum number")
    p_wf.add_argument("level", type=int, help="level index within m (0-based)")
    p_wf.add_argument("--window", metavar="LO:HI", help="energy window to scan")
    p_wf.add_argument("--samples", type=int, default=512, help="radial samples")
    p_wf.set_defaults(func=cmd_wavefunction)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
