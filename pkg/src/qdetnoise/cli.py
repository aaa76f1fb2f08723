"""Command-line frontend for reproducible batch runs.

Five subcommands map onto the library layers:

* ``spectra``     susceptibilities plus symmetrized and referred spectra on a
                  symmetric frequency grid
* ``check``       per-frequency constraint audit with verdicts
* ``qubit``       dispersive readout rates and the optimal homodyne angle
* ``mech``        motional sideband spectra, integrated weights, asymmetry
* ``mimo-check``  determinant test on a file of stacked spectral matrices

Every subcommand accepts the full flag set (irrelevant flags are ignored) so
that a :class:`RunConfig` always survives the argv round trip.  Output files
are byte-deterministic: no timestamps, fixed float formatting, a single
``# config:`` echo line as the only metadata.

Exit codes: 0 success, 1 I/O failure, 2 bad configuration or malformed
input file, 3 constraint violation (including invalid spectral matrices),
4 physically degenerate regime (no readout gain, unstable spring).
"""

from __future__ import annotations

import argparse
import cmath
import dataclasses
import json
import math
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .apps import asymmetry_grid, qubit_rates, sideband_asymmetry
from .cavity import cavity_spectra, cavity_susceptibilities, normalize
from .constraints import Verdict, constraint_report, mimo_quantum_limit
from .core import CavityParams, InputState, MechOscillator, make_symmetric_grid
from .errors import GridMismatchError, InvalidMatrixError, QDetNoiseError
from .netsolve import (
    build_one_sided_cavity,
    solve_susceptibilities,
    solve_unsym_spectra,
    symmetrize,
)

__all__ = ["RunConfig", "parse_config", "parse_input_state", "build_parser", "main"]

_COMMANDS = ("spectra", "check", "qubit", "mech", "mimo-check")

# Columns that are spectral densities and therefore double in the
# single-sided convention; responses and the frequency axis do not.
_DENSITY_COLUMNS = frozenset(
    {"s_zz_sym", "s_zf_sym_re", "s_zf_sym_im", "s_ff_sym",
     "imprecision", "cross_re", "cross_im"}
)


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """One fully specified batch run.

    ``to_argv`` and :func:`parse_config` are exact inverses, which is what
    makes runs reproducible from the echoed config line alone.
    """

    command: str
    gamma: float = 2.0
    delta: float = 0.0
    gbar: float = 1.0
    theta: float = math.pi / 2
    omega_max: float = 5.0
    n_half: int = 100
    input_state: str = "vacuum"
    omega_m: float = 1.0
    gamma_m: float = 1e-6
    mass: float = 1.0
    n_occ: float = 0.0
    window_halfwidth: float = 40.0
    window_points: int = 4001
    single_sided: bool = False
    fmt: str = "csv"
    out: str | None = None
    mimo_input: str | None = None

    def __post_init__(self) -> None:
        if self.command not in _COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.fmt!r}")

    def to_argv(self) -> list[str]:
        """Serialize back to an argument vector that re-parses identically.

        Values ride in ``--flag=value`` form: a separate token like
        ``-1e-308`` would be mistaken for an option by argparse.
        """
        argv = [
            self.command,
            f"--gamma={self.gamma!r}",
            f"--delta={self.delta!r}",
            f"--gbar={self.gbar!r}",
            f"--theta={self.theta!r}",
            f"--omega-max={self.omega_max!r}",
            f"--n-half={self.n_half}",
            f"--input={self.input_state}",
            f"--omega-m={self.omega_m!r}",
            f"--gamma-m={self.gamma_m!r}",
            f"--mass={self.mass!r}",
            f"--n-occ={self.n_occ!r}",
            f"--window-halfwidth={self.window_halfwidth!r}",
            f"--window-points={self.window_points}",
            f"--format={self.fmt}",
        ]
        if self.single_sided:
            argv.append("--single-sided")
        if self.out is not None:
            argv.append(f"--out={self.out}")
        if self.mimo_input is not None:
            argv.append(f"--mimo-input={self.mimo_input}")
        return argv


def parse_input_state(spec: str) -> InputState:
    """Parse ``vacuum``, ``thermal:<n>``, or ``squeezed:<r>,<phi>``."""
    body = spec.strip()
    if body == "vacuum":
        return InputState.vacuum()
    if body.startswith("thermal:"):
        return InputState.thermal(float(body[len("thermal:"):]))
    if body.startswith("squeezed:"):
        parts = body[len("squeezed:"):].split(",")
        if len(parts) != 2:
            raise ValueError(
                f"squeezed state spec needs exactly r,phi, got {spec!r}")
        r, phi = float(parts[0]), float(parts[1])
        return InputState.squeezed(cmath.rect(r, phi))
    raise ValueError(f"unrecognized input state spec {spec!r}")


def build_parser() -> argparse.ArgumentParser:
    defaults = RunConfig(command="spectra")
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--gamma", type=float, default=defaults.gamma,
                        help="cavity energy decay rate")
    shared.add_argument("--delta", type=float, default=defaults.delta,
                        help="drive detuning from cavity resonance")
    shared.add_argument("--gbar", type=float, default=defaults.gbar,
                        help="drive-enhanced coupling rate")
    shared.add_argument("--theta", type=float, default=defaults.theta,
                        help="homodyne angle of the monitored output quadrature")
    shared.add_argument("--omega-max", type=float, default=defaults.omega_max,
                        help="frequency grid half-range")
    shared.add_argument("--n-half", type=int, default=defaults.n_half,
                        help="points per half-axis; the grid has 2*n_half + 1 points")
    shared.add_argument("--input", dest="input_state", default=defaults.input_state,
                        help="input field state: vacuum | thermal:<n> | squeezed:<r>,<phi>")
    shared.add_argument("--omega-m", type=float, default=defaults.omega_m,
                        help="mechanical resonance frequency")
    shared.add_argument("--gamma-m", type=float, default=defaults.gamma_m,
                        help="intrinsic mechanical damping rate")
    shared.add_argument("--mass", type=float, default=defaults.mass,
                        help="oscillator mass")
    shared.add_argument("--n-occ", type=float, default=defaults.n_occ,
                        help="mean thermal occupation of the oscillator")
    shared.add_argument("--window-halfwidth", type=float,
                        default=defaults.window_halfwidth,
                        help="mech window half-width in effective linewidths")
    shared.add_argument("--window-points", type=int, default=defaults.window_points,
                        help="number of grid points in the mech window")
    shared.add_argument("--single-sided", action="store_true",
                        default=defaults.single_sided,
                        help="export omega >= 0 only with doubled spectral densities")
    shared.add_argument("--format", dest="fmt", choices=("csv", "json"),
                        default=defaults.fmt, help="output file format")
    shared.add_argument("--out", default=None,
                        help="output path (default: <command>.<format>)")
    shared.add_argument("--mimo-input", default=None,
                        help="CSV of stacked spectral matrices for mimo-check")

    parser = argparse.ArgumentParser(
        prog="qdetnoise",
        description="Quantum noise spectra, constraints, and applications "
                    "of a cavity position detector.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectra", parents=[shared],
                   help="tabulate susceptibilities and spectra on a grid")
    sub.add_parser("check", parents=[shared],
                   help="audit quantum constraints frequency by frequency")
    sub.add_parser("qubit", parents=[shared],
                   help="dispersive readout rates and optimal homodyne angle")
    sub.add_parser("mech", parents=[shared],
                   help="motional sideband spectra and asymmetry ratio")
    sub.add_parser("mimo-check", parents=[shared],
                   help="determinant test for a file of 2Nx2N spectral matrices")
    return parser


def parse_config(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(list(argv))
    field_names = [f.name for f in dataclasses.fields(RunConfig)]
    return RunConfig(**{name: getattr(args, name) for name in field_names})


# ---------------------------------------------------------------------------
# output plumbing


def _config_echo(cfg: RunConfig) -> str:
    return json.dumps(dataclasses.asdict(cfg), sort_keys=True,
                      separators=(",", ":"))


def _output_path(cfg: RunConfig) -> Path:
    if cfg.out is not None:
        return Path(cfg.out)
    return Path(f"{cfg.command}.{cfg.fmt}")


def _cell(value) -> str:
    if isinstance(value, str):
        return value
    return "%.16e" % value


def _write_csv(cfg: RunConfig, columns: dict[str, Sequence]) -> None:
    names = list(columns)
    arrays = [columns[name] for name in names]
    n_rows = len(arrays[0])
    lines = [f"# config: {_config_echo(cfg)}", ",".join(names)]
    for i in range(n_rows):
        lines.append(",".join(_cell(arr[i]) for arr in arrays))
    _output_path(cfg).write_text("\n".join(lines) + "\n",
                                 encoding="utf-8", newline="\n")


def _write_json(cfg: RunConfig, payload: dict) -> None:
    doc = dict(payload)
    doc["config"] = dataclasses.asdict(cfg)
    text = json.dumps(doc, sort_keys=True, indent=2)
    _output_path(cfg).write_text(text + "\n", encoding="utf-8", newline="\n")


def _column_lists(columns: dict[str, Sequence]) -> dict[str, list]:
    out: dict[str, list] = {}
    for name, arr in columns.items():
        out[name] = [v if isinstance(v, str) else float(v) for v in arr]
    return out


# ---------------------------------------------------------------------------
# subcommands


def _cavity_params(cfg: RunConfig) -> CavityParams:
    return CavityParams(gamma=cfg.gamma, delta=cfg.delta, gbar=cfg.gbar,
                        theta=cfg.theta)


def _oscillator(cfg: RunConfig) -> MechOscillator:
    return MechOscillator(omega_m=cfg.omega_m, gamma_m=cfg.gamma_m,
                          mass=cfg.mass, n_occupation=cfg.n_occ)


def _grid(cfg: RunConfig):
    if cfg.n_half < 1:
        raise ValueError("n_half must be at least 1")
    return make_symmetric_grid(cfg.omega_max, cfg.n_half)


def cmd_spectra(cfg: RunConfig) -> int:
    params = _cavity_params(cfg)
    grid = _grid(cfg)
    state = parse_input_state(cfg.input_state)
    if state.kind == "vacuum":
        susc = cavity_susceptibilities(params, grid)
        sym = cavity_spectra(params, grid)
    else:
        net = build_one_sided_cavity(params, input_state=state)
        susc = solve_susceptibilities(net, grid)
        sym = symmetrize(solve_unsym_spectra(net, grid))
    norm = normalize(sym, susc)
    columns: dict[str, np.ndarray] = {
        "omega": grid.points,
        "chi_zf_re": susc.chi_zf.values.real,
        "chi_zf_im": susc.chi_zf.values.imag,
        "chi_ff_re": susc.chi_ff.values.real,
        "chi_ff_im": susc.chi_ff.values.imag,
        "s_zz_sym": sym.s_zz.values.real,
        "s_zf_sym_re": sym.s_zf.values.real,
        "s_zf_sym_im": sym.s_zf.values.imag,
        "s_ff_sym": sym.s_ff.values.real,
        "imprecision": norm.imprecision.values.real,
        "cross_re": norm.cross.values.real,
        "cross_im": norm.cross.values.imag,
    }
    if cfg.single_sided:
        keep = grid.points >= 0.0
        columns = {
            name: (2.0 * arr[keep] if name in _DENSITY_COLUMNS else arr[keep])
            for name, arr in columns.items()
        }
    if cfg.fmt == "csv":
        _write_csv(cfg, columns)
    else:
        _write_json(cfg, _column_lists(columns))
    return 0


def cmd_check(cfg: RunConfig) -> int:
    params = _cavity_params(cfg)
    grid = _grid(cfg)
    state = parse_input_state(cfg.input_state)
    net = build_one_sided_cavity(params, input_state=state)
    susc = solve_susceptibilities(net, grid)
    spectra = solve_unsym_spectra(net, grid)
    report = constraint_report(spectra, susc, units=params.units)
    columns = {
        "omega": grid.points,
        "uncertainty_gap": report.uncertainty_gap,
        "product_residual": report.product_residual,
        "correlation_residual": report.correlation_residual,
        "kubo_residual": report.kubo_residual,
        "positivity_margin": report.positivity_margin,
        "verdict": [v.value for v in report.verdicts],
    }
    if cfg.fmt == "csv":
        _write_csv(cfg, columns)
    else:
        payload = _column_lists(columns)
        payload["worst_verdict"] = report.worst_verdict.value
        _write_json(cfg, payload)
    if any(v is Verdict.violation for v in report.verdicts):
        return 3
    return 0


def cmd_qubit(cfg: RunConfig) -> int:
    result = qubit_rates(_cavity_params(cfg))
    scalars = {
        "gamma_meas": result.gamma_meas,
        "gamma_phi": result.gamma_phi,
        "ratio": result.ratio,
        "theta_opt": result.theta_opt,
    }
    if cfg.fmt == "csv":
        _write_csv(cfg, {name: [value] for name, value in scalars.items()})
    else:
        _write_json(cfg, scalars)
    return 0


def cmd_mech(cfg: RunConfig) -> int:
    params = _cavity_params(cfg)
    osc = _oscillator(cfg)
    if cfg.window_points < 2:
        raise ValueError("window_points must be at least 2")
    grid = asymmetry_grid(params, osc,
                          halfwidth_linewidths=cfg.window_halfwidth,
                          n_points=cfg.window_points)
    result = sideband_asymmetry(params, osc, grid)
    n_rows = grid.points.size
    if cfg.fmt == "csv":
        columns = {
            "omega": grid.points,
            "spectrum_red": result.spectrum_red.values.real,
            "spectrum_blue": result.spectrum_blue.values.real,
            "area_red": np.full(n_rows, result.area_red),
            "area_blue": np.full(n_rows, result.area_blue),
            "ratio": np.full(n_rows, result.ratio),
        }
        _write_csv(cfg, columns)
    else:
        payload = {
            "omega": [float(v) for v in grid.points],
            "spectrum_red": [float(v) for v in result.spectrum_red.values.real],
            "spectrum_blue": [float(v) for v in result.spectrum_blue.values.real],
            "area_red": result.area_red,
            "area_blue": result.area_blue,
            "ratio": result.ratio,
        }
        _write_json(cfg, payload)
    return 0


def _read_mimo_blocks(path: Path) -> tuple[np.ndarray, np.ndarray]:
    rows: list[list[float]] = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("omega"):
            continue
        rows.append([float(tok) for tok in line.split(",")])
    if not rows:
        raise ValueError(f"no data rows in MIMO input {path}")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("ragged MIMO input: rows differ in column count")
    if width < 9 or (width - 1) % 2:
        raise ValueError(
            "each MIMO row must hold omega plus re,im pairs of a 2Nx2N block")
    n_cells = (width - 1) // 2
    dim = math.isqrt(n_cells)
    if dim * dim != n_cells or dim % 2:
        raise ValueError(
            f"{n_cells} cells per row do not form a square even-dimension block")
    data = np.array(rows, dtype=float)
    blocks = (data[:, 1::2] + 1j * data[:, 2::2]).reshape(len(rows), dim, dim)
    return data[:, 0], blocks


def cmd_mimo_check(cfg: RunConfig) -> int:
    if cfg.mimo_input is None:
        raise ValueError("mimo-check requires --mimo-input <file>")
    omega, blocks = _read_mimo_blocks(Path(cfg.mimo_input))
    dets = mimo_quantum_limit(blocks)
    dim = blocks.shape[1]
    traces = np.einsum("kii->k", blocks).real
    scale = np.maximum(traces / dim, 0.0) ** dim
    threshold = 1e-9 * np.maximum(scale, np.finfo(float).tiny)
    verdicts = [
        (Verdict.quantum_limited if det <= thr else Verdict.above_limit).value
        for det, thr in zip(dets, threshold)
    ]
    columns = {"omega": omega, "det": dets, "verdict": verdicts}
    if cfg.fmt == "csv":
        _write_csv(cfg, columns)
    else:
        payload = _column_lists(columns)
        payload["worst_verdict"] = (
            Verdict.above_limit.value if Verdict.above_limit.value in verdicts
            else Verdict.quantum_limited.value)
        _write_json(cfg, payload)
    return 0


_DISPATCH = {
    "spectra": cmd_spectra,
    "check": cmd_check,
    "qubit": cmd_qubit,
    "mech": cmd_mech,
    "mimo-check": cmd_mimo_check,
}


def main(argv: Sequence[str] | None = None) -> int:
    cfg = parse_config(sys.argv[1:] if argv is None else argv)
    try:
        return _DISPATCH[cfg.command](cfg)
    except InvalidMatrixError as exc:
        print(f"error: violation: {exc}", file=sys.stderr)
        return 3
    except GridMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QDetNoiseError as exc:
        # degenerate readout, unstable spring, singular normalization, ...
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
