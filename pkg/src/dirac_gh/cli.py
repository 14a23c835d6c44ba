"""Command-line front end.

Modes
-----
point     one configuration: regime, R, T, theta, shift, extra phase
sweep     the same quantities over a range of phi, E or V
boundary  the sign-change value of phi, V or E, closed form and bisection
oracle    closed-form shift against finite differences and a beam simulation

Energies and barrier heights are in units of m c^2, angles in degrees on the
command line, lengths in hbar/(m c). Exit codes: 0 success, 2 invalid input,
3 a cross-check exceeded its tolerance.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DiracGHError, DomainError, SingularBarrierError
from .ghshift import (
    bisect_critical_angle,
    bisect_critical_energy,
    bisect_critical_potential,
    critical_angle,
    critical_energy,
    critical_potential,
    gh_shift_analytic,
    gh_shift_fd_oracle,
    phase_derivative,
    reflection_phase,
)
from .kinematics import Kinematics, Regime, classify_regime
from .matching import scatter
from .wavepacket import BeamSpec, shift_from_packet

__all__ = [
    "CSV_FIELDS", "OUTPUT_FIELDS", "SweepSpec", "RunConfig",
    "evaluate_point", "run_point", "run_sweep", "run_boundary", "run_oracle",
    "format_csv", "build_parser", "load_config", "main",
]

CSV_FIELDS = ("phi_deg", "E", "V", "regime", "R", "T", "theta", "delta_z", "delta_phase")
OUTPUT_FIELDS = ("R", "T", "theta", "delta_z", "delta_phase", "regime")
BOUNDARY_FIELDS = ("solve_for", "E", "V", "phi_deg", "exists",
                   "closed_form", "bisection", "abs_difference")
ORACLE_FIELDS = ("phi_deg", "E", "V", "a", "envelope", "analytic", "finite_difference",
                 "packet", "fd_rel_dev", "packet_rel_dev", "passed")

EXIT_OK, EXIT_DOMAIN, EXIT_TOLERANCE = 0, 2, 3
BOUNDARY_ATOL = 1e-10

DEFAULTS = {
    "mode": "point", "E": 10.0, "V": 10.0, "phi_deg": 45.0, "ell": 0.0,
    "sweep_var": "phi", "range": (0.0, 89.0), "samples": 300,
    "outputs": OUTPUT_FIELDS, "a": 500.0, "envelope": "rect",
    "out": None, "format": "csv", "solve_for": None, "synthetic_slope": None,
    "fd_tol": 1e-6, "packet_tol": 0.05,
}


class ToleranceBreach(Exception):
    """A cross-check result lies outside its configured tolerance."""

    def __init__(self, message, payload):
        super().__init__(message)
        self.payload = payload


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    lo: float
    hi: float
    samples: int
    outputs: tuple[str, ...] = OUTPUT_FIELDS

    def __post_init__(self):
        if self.variable not in ("phi", "E", "V"):
            raise DomainError(f"sweep variable must be phi, E or V, got {self.variable!r}")
        if not self.lo < self.hi:
            raise DomainError(f"sweep range needs lo < hi, got {self.lo}:{self.hi}")
        if self.samples < 2:
            raise DomainError(f"sweep needs at least 2 samples, got {self.samples}")
        bad = set(self.outputs) - set(OUTPUT_FIELDS)
        if bad:
            raise DomainError(f"unknown outputs: {sorted(bad)}")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.samples)


@dataclass(frozen=True)
class RunConfig:
    mode: str = "point"
    E: float = 10.0
    V: float = 10.0
    phi_deg: float = 45.0
    ell: float = 0.0
    sweep: SweepSpec | None = None
    a: float = 500.0
    envelope: str = "rect"
    output_path: str | None = None
    format: str = "csv"
    solve_for: str | None = None
    synthetic_slope: float | None = None
    fd_tol: float = 1e-6
    packet_tol: float = 0.05
    given: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.mode == "sweep" and self.sweep is None:
            raise DomainError("sweep mode requires a sweep specification")

    def kinematics(self) -> Kinematics:
        return Kinematics.from_degrees(self.E, self.V, self.phi_deg, ell=self.ell)


def evaluate_point(E: float, V: float, phi_deg: float, ell: float = 0.0,
                   outputs=OUTPUT_FIELDS, strict: bool = True) -> dict:
    """One output record; quantities undefined in the regime are ``None``.

    With ``strict=False`` a singular barrier yields a blank record instead of
    raising, so sweeps can pass through it.
    """
    k = Kinematics.from_degrees(E, V, phi_deg, ell=ell)
    rec = dict.fromkeys(CSV_FIELDS)
    rec.update(phi_deg=phi_deg, E=E, V=V)
    regime = classify_regime(k)
    if "regime" in outputs:
        rec["regime"] = regime.value
    if regime is Regime.OUTSIDE_VALIDITY:
        return rec
    try:
        summary = scatter(k)
        shift = gh_shift_analytic(k) if regime is Regime.TOTAL_REFLECTION else None
    except SingularBarrierError:
        if strict:
            raise
        return rec
    values = {"R": summary.R, "T": summary.T}
    if shift is not None:
        values.update(theta=shift.theta, delta_z=shift.delta_z,
                      delta_phase=shift.delta_phase)
    for key, val in values.items():
        if key in outputs:
            rec[key] = val
    return rec


def run_point(config: RunConfig) -> dict:
    return evaluate_point(config.E, config.V, config.phi_deg, config.ell)


def _workers() -> int:
    cap = os.environ.get("DIRAC_GH_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise DomainError(f"DIRAC_GH_THREADS must be an integer, got {cap!r}")
    return n


def run_sweep(config: RunConfig) -> list[dict]:
    """Records over the sweep, in sample order regardless of worker count."""
    sw = config.sweep
    base = {"E": config.E, "V": config.V, "phi_deg": config.phi_deg}
    key = "phi_deg" if sw.variable == "phi" else sw.variable
    points = []
    for x in sw.values():
        p = dict(base)
        p[key] = float(x)
        Kinematics.from_degrees(p["E"], p["V"], p["phi_deg"], ell=config.ell)
        points.append(p)

    def row(p):
        return evaluate_point(p["E"], p["V"], p["phi_deg"], config.ell,
                              sw.outputs, strict=False)

    workers = min(_workers(), len(points))
    if workers <= 1:
        return [row(p) for p in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(row, points))


def _boundary_target(config: RunConfig) -> str:
    if config.solve_for:
        return config.solve_for
    missing = {"E", "V", "phi"} - set(config.given)
    if len(missing) != 1:
        raise DomainError(
            "boundary mode needs --solve-for, or exactly two of --E, --V, --phi-deg")
    return missing.pop()


def run_boundary(config: RunConfig) -> dict:
    """Sign-change value of the shift, in closed form and by bisection.

    Raises :class:`ToleranceBreach` if the two disagree by more than
    ``1e-10``.
    """
    target = _boundary_target(config)
    rec = dict.fromkeys(BOUNDARY_FIELDS)
    rec.update(solve_for=target, E=config.E, V=config.V, phi_deg=config.phi_deg)
    phi = math.radians(config.phi_deg)
    if target == "phi":
        rec["phi_deg"] = None
        if config.V >= config.E:
            rec["exists"] = False
            return rec
        th = critical_angle(config.E, config.V)
        rec["exists"] = th.exists
        if not th.exists:
            return rec
        closed = math.degrees(th.value)
        bis = math.degrees(bisect_critical_angle(config.E, config.V))
    elif target == "V":
        rec["V"] = None
        th = critical_potential(config.E, phi)
        rec["exists"] = th.exists
        closed, bis = th.value, bisect_critical_potential(config.E, phi)
    elif target == "E":
        rec["E"] = None
        th = critical_energy(config.V, phi)
        rec["exists"] = th.exists
        closed, bis = th.value, bisect_critical_energy(config.V, phi)
    else:
        raise DomainError(f"--solve-for must be phi, V or E, got {target!r}")
    rec.update(closed_form=closed, bisection=bis, abs_difference=abs(closed - bis))
    if target == "phi":
        # agreement is judged in radians
        diff = abs(math.radians(closed) - math.radians(bis))
    else:
        diff = abs(closed - bis)
    if not diff <= BOUNDARY_ATOL:
        raise ToleranceBreach(f"closed form and bisection differ by {diff:.3e}", rec)
    return rec


def run_oracle(config: RunConfig) -> dict:
    """Closed-form shift against its two numerical cross-checks.

    With ``synthetic_slope`` set, the reflection phase is replaced by a linear
    function of that slope, for which every route must return the slope.
    Raises :class:`ToleranceBreach` when a deviation exceeds its tolerance.
    """
    k = config.kinematics()
    spec = BeamSpec(k, config.a, envelope=config.envelope)
    if config.synthetic_slope is None:
        analytic = gh_shift_analytic(k).delta_z
        fd = gh_shift_fd_oracle(k)
        phase = None
    else:
        slope = config.synthetic_slope
        p_z0 = spec.p_z0
        theta0 = reflection_phase(k)
        phase = lambda q: theta0 + slope * (np.asarray(q) - p_z0)
        analytic = slope
        fd = phase_derivative(phase, p_z0, 1e-3 * max(1.0, p_z0))
    try:
        packet = shift_from_packet(spec, phase=phase)
    except ConvergenceError as exc:
        raise ToleranceBreach(str(exc), {"analytic": analytic, "finite_difference": fd})
    scale = abs(analytic) if analytic != 0 else 1.0
    fd_dev = abs(fd - analytic) / scale
    packet_dev = abs(packet - analytic) / scale
    passed = fd_dev <= config.fd_tol and packet_dev <= config.packet_tol
    rec = dict(phi_deg=config.phi_deg, E=config.E, V=config.V, a=config.a,
               envelope=str(config.envelope), analytic=analytic, finite_difference=fd,
               packet=packet, fd_rel_dev=fd_dev, packet_rel_dev=packet_dev,
               passed=passed)
    if not passed:
        raise ToleranceBreach(
            f"oracle deviations fd={fd_dev:.3e} (tol {config.fd_tol}), "
            f"packet={packet_dev:.3e} (tol {config.packet_tol})", rec)
    return rec


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def format_csv(records: list[dict], fields=CSV_FIELDS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for rec in records:
        writer.writerow([_fmt(rec.get(f)) for f in fields])
    return buf.getvalue()


def _format(records, fields, fmt: str, single: bool) -> str:
    if fmt == "json":
        payload = records[0] if single else records
        return json.dumps(payload, indent=2) + "\n"
    return format_csv(records, fields)


def _parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(s) for s in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like lo:hi, got {text!r}")
    return lo, hi


def _parse_outputs(text: str) -> tuple[str, ...]:
    return tuple(s.strip() for s in text.split(",") if s.strip())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dirac-gh",
        description="Dirac-particle reflection at a potential step and the "
                    "Goos-Hänchen shift (units: m c^2, degrees, hbar/(m c)).",
    )
    d = DEFAULTS
    p.add_argument("--mode", choices=["point", "sweep", "boundary", "oracle"],
                   help=f"what to compute (default {d['mode']})")
    p.add_argument("--E", type=float, help=f"incident energy (default {d['E']})")
    p.add_argument("--V", type=float, help=f"barrier height (default {d['V']})")
    p.add_argument("--phi-deg", dest="phi_deg", type=float,
                   help=f"incidence angle in degrees (default {d['phi_deg']})")
    p.add_argument("--ell", type=float, help=f"spin mix of the incident wave (default {d['ell']})")
    p.add_argument("--sweep-var", dest="sweep_var", choices=["phi", "E", "V"],
                   help=f"swept variable (default {d['sweep_var']})")
    p.add_argument("--range", type=_parse_range, metavar="LO:HI",
                   help="sweep range, degrees for phi (default 0:89)")
    p.add_argument("--samples", type=int, help=f"sweep samples (default {d['samples']})")
    p.add_argument("--outputs", type=_parse_outputs,
                   help="comma list of sweep columns to fill (default all: "
                        + ",".join(OUTPUT_FIELDS) + ")")
    p.add_argument("--solve-for", dest="solve_for", choices=["phi", "V", "E"],
                   help="boundary mode target (default: the one of E, V, phi-deg not given)")
    p.add_argument("--a", type=float, help=f"beam half-width for oracle mode (default {d['a']})")
    p.add_argument("--envelope", choices=["rect", "gauss"],
                   help=f"beam envelope for oracle mode (default {d['envelope']})")
    p.add_argument("--synthetic-slope", dest="synthetic_slope", type=float,
                   help="oracle mode: replace the phase by a line of this slope")
    p.add_argument("--fd-tol", dest="fd_tol", type=float,
                   help=f"oracle tolerance, finite differences (default {d['fd_tol']})")
    p.add_argument("--packet-tol", dest="packet_tol", type=float,
                   help=f"oracle tolerance, beam simulation (default {d['packet_tol']})")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], help=f"output format (default {d['format']})")
    p.add_argument("--config", help="key=value file; command-line flags override it")
    return p


def load_config(path) -> list[str]:
    """Turn a ``key=value`` file into equivalent command-line arguments."""
    args = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            args.append("--" + key.replace("_", "-") + "=" + value)
    return args


def _config_from_args(ns: argparse.Namespace) -> RunConfig:
    given = {name for name in ("E", "V") if getattr(ns, name) is not None}
    if ns.phi_deg is not None:
        given.add("phi")
    vals = {k: (getattr(ns, k) if getattr(ns, k) is not None else v)
            for k, v in DEFAULTS.items()}
    sweep = None
    if vals["mode"] == "sweep":
        lo, hi = vals["range"]
        sweep = SweepSpec(vals["sweep_var"], lo, hi, vals["samples"], tuple(vals["outputs"]))
    return RunConfig(
        mode=vals["mode"], E=vals["E"], V=vals["V"], phi_deg=vals["phi_deg"],
        ell=vals["ell"], sweep=sweep, a=vals["a"], envelope=vals["envelope"],
        output_path=vals["out"], format=vals["format"], solve_for=vals["solve_for"],
        synthetic_slope=vals["synthetic_slope"], fd_tol=vals["fd_tol"],
        packet_tol=vals["packet_tol"], given=frozenset(given),
    )


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    pre, _ = parser.parse_known_args(argv)
    try:
        file_args = load_config(pre.config) if pre.config else []
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DiracGHError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    ns = parser.parse_args(file_args + argv)

    try:
        config = _config_from_args(ns)
        if config.mode == "point":
            text = _format([run_point(config)], CSV_FIELDS, config.format, True)
        elif config.mode == "sweep":
            text = _format(run_sweep(config), CSV_FIELDS, config.format, False)
        elif config.mode == "boundary":
            text = _format([run_boundary(config)], BOUNDARY_FIELDS, config.format, True)
        else:
            text = _format([run_oracle(config)], ORACLE_FIELDS, config.format, True)
    except ToleranceBreach as exc:
        fields = ORACLE_FIELDS if config.mode == "oracle" else BOUNDARY_FIELDS
        _emit(_format([exc.payload], fields, config.format, True), config.output_path)
        print(f"tolerance breach: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except (DiracGHError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(text, config.output_path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
