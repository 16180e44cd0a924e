"""Command-line front end.

All physical quantities are given in natural units (hbar = c = 1); time is
the atoms' proper time.

Subcommands
-----------
trajectory  one Werner-state trajectory as CSV
sweep       several disorder strengths in one long-format CSV
critical    critical disorder strength, CP bound and regime labels
verify      oracle checks with measured error against tolerance

Exit codes: 0 success, 1 configuration error, 2 physics-regime abort,
3 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from ._precision import DEFAULT_DPS
from .dynamics import BLOCH_LABELS, Trajectory, integrate_rk4, werner_state
from .kossakowski import (
    CP_VALID,
    OUT_OF_MODEL,
    cp_validity,
    critical_sigma,
    kossakowski_coeffs,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PHYSICS = 2
EXIT_VERIFY = 3

MODES = ("trajectory", "sweep", "critical", "verify")
DEFAULT_SWEEP = (0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30)
DEFAULT_SIGMA2 = {"trajectory": (0.0,), "sweep": DEFAULT_SWEEP, "critical": (), "verify": (0.15,)}

CSV_HEADER = ("tau", *BLOCH_LABELS, "concurrence", "trace_err", "herm_err", "min_eig")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


class RegimeAbort(RuntimeError):
    """Parameters outside the physical model for the requested run."""


@dataclass(frozen=True)
class RunConfig:
    """One run of the front end. ``sigma2 = None`` picks the mode default.

    ``dps = None`` chooses the precision automatically (see
    :func:`choose_dps`); ``dps = 0`` forces float64.
    """

    mode: str = "trajectory"
    kappa: float = 0.8
    omega0: float = 5.0
    sigma2: tuple[float, ...] | None = None
    p1_sq: float = 1.0
    p2_sq: float = 1.0
    tau_max: float = 1.0
    dt: float = 1e-3
    stride: int = 1
    out: str | None = None
    dps: int | None = None
    jobs: int = 1

    def sigma2_values(self) -> tuple[float, ...]:
        return DEFAULT_SIGMA2[self.mode] if self.sigma2 is None else self.sigma2

    def validate(self) -> RunConfig:
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if not self.omega0 > 0:
            raise ConfigError(f"omega0 must be > 0, got {self.omega0!r}")
        if not -1.0 / 3.0 <= self.kappa <= 1.0:
            raise ConfigError(f"kappa must be in [-1/3, 1], got {self.kappa!r}")
        if any(not s >= 0 for s in self.sigma2_values()):
            raise ConfigError(f"sigma2 values must be >= 0, got {self.sigma2_values()!r}")
        if self.p1_sq < 0 or self.p2_sq < 0:
            raise ConfigError("p1sq and p2sq must be >= 0")
        if not self.dt > 0 or not self.tau_max >= self.dt:
            raise ConfigError(f"need 0 < dt <= tmax, got dt={self.dt!r}, tmax={self.tau_max!r}")
        if self.stride < 1 or self.jobs < 1:
            raise ConfigError("stride and jobs must be >= 1")
        if self.dps is not None and self.dps < 0:
            raise ConfigError(f"dps must be >= 0, got {self.dps!r}")
        if self.mode == "trajectory" and len(self.sigma2_values()) != 1:
            raise ConfigError("trajectory takes exactly one sigma2 value; use sweep for a list")
        if self.mode == "sweep" and len(self.sigma2_values()) < 2:
            raise ConfigError("sweep needs at least two sigma2 values")
        return self

    def to_text(self) -> str:
        """Key=value form readable by :func:`parse_config_text`; ``mode`` is not included."""
        lines = []
        for key, attr in _CONFIG_KEYS.items():
            value = getattr(self, attr)
            if value is None:
                continue
            if attr == "sigma2":
                value = ",".join(repr(float(v)) for v in value)
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"


# config-file key -> RunConfig attribute
_CONFIG_KEYS = {
    "kappa": "kappa",
    "omega0": "omega0",
    "sigma2": "sigma2",
    "p1sq": "p1_sq",
    "p2sq": "p2_sq",
    "tmax": "tau_max",
    "dt": "dt",
    "stride": "stride",
    "out": "out",
    "dps": "dps",
    "jobs": "jobs",
}


def _parse_sigma2(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"bad sigma2 list {text!r}") from exc


def _convert(attr: str, text: str):
    if attr == "sigma2":
        return _parse_sigma2(text)
    if attr == "out":
        return text
    kind = int if attr in ("stride", "dps", "jobs") else float
    try:
        return kind(text)
    except ValueError as exc:
        raise ConfigError(f"bad value for {attr}: {text!r}") from exc


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lower()
        if not sep or key not in _CONFIG_KEYS:
            raise ConfigError(f"config line {lineno}: cannot parse {raw!r}")
        attr = _CONFIG_KEYS[key]
        values[attr] = _convert(attr, value.strip())
    return values


def choose_dps(cfg: RunConfig, sigma2: float) -> int | None:
    """Precision for one trajectory: None means float64.

    Extended precision is used when ``a22 < 0`` (populations grow and the
    small density-matrix entries survive only as differences) or when the
    Werner state is rank deficient, where the concurrence amplifies
    rounding like a square root.
    """
    if cfg.dps is not None:
        return cfg.dps or None
    c = kossakowski_coeffs(cfg.omega0, sigma2, cfg.p1_sq, cfg.p2_sq, warn=False)
    rank_deficient = cfg.kappa in (1.0, -1.0 / 3.0)
    return DEFAULT_DPS if (c.a22 < 0 or rank_deficient) else None


def check_regime(cfg: RunConfig, sigma2: float) -> str:
    """Regime label for one point; raises :class:`RegimeAbort` when the run is meaningless."""
    c = kossakowski_coeffs(cfg.omega0, sigma2, cfg.p1_sq, cfg.p2_sq, warn=False)
    report = cp_validity(c, cfg.omega0, sigma2)
    if cfg.kappa == 1.0 and c.a11 + c.a22 < 0:
        raise RegimeAbort(
            f"kappa = 1 with {report.describe()}: a11 + a22 < 0 and the singlet "
            "concurrence would exceed one"
        )
    if report.regime != CP_VALID:
        msg = "outside the model" if report.regime == OUT_OF_MODEL else "generator not completely positive"
        print(f"warning: {report.describe()}; {msg}", file=sys.stderr)
    return report.regime


def run_trajectory(cfg: RunConfig, sigma2: float | None = None) -> Trajectory:
    """Integrate one Werner-state trajectory with full diagnostics."""
    if sigma2 is None:
        sigma2 = cfg.sigma2_values()[0]
    c = kossakowski_coeffs(cfg.omega0, sigma2, cfg.p1_sq, cfg.p2_sq, warn=False)
    return integrate_rk4(
        werner_state(cfg.kappa), c, cfg.tau_max, cfg.dt, stride=cfg.stride, dps=choose_dps(cfg, sigma2)
    )


def _trajectory_job(args):
    cfg, sigma2 = args
    return run_trajectory(cfg, sigma2)


def run_sweep(cfg: RunConfig) -> list[tuple[float, Trajectory]]:
    """Trajectories for every sigma2, in the order given.

    With ``jobs > 1`` points run in worker processes; results are collected
    in input order, so the output does not depend on scheduling.
    """
    values = cfg.sigma2_values()
    jobs = [(cfg, s) for s in values]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            trajs = list(pool.map(_trajectory_job, jobs))
    else:
        trajs = [_trajectory_job(j) for j in jobs]
    return list(zip(values, trajs))


def _fmt(x) -> str:
    return format(float(x), ".17g")


def trajectory_csv(traj: Trajectory, sigma2: float | None = None) -> str:
    """CSV text for one trajectory; with ``sigma2`` each row is prefixed by it."""
    header = ("sigma2", *CSV_HEADER) if sigma2 is not None else CSV_HEADER
    lines = [",".join(header)]
    lines.extend(_csv_rows(traj, sigma2))
    return "\n".join(lines) + "\n"


def _csv_rows(traj, sigma2):
    prefix = [] if sigma2 is None else [_fmt(sigma2)]
    for row in traj.rows():
        yield ",".join(prefix + [_fmt(v) for v in row])


def sweep_csv(results: list[tuple[float, Trajectory]]) -> str:
    lines = [",".join(("sigma2", *CSV_HEADER))]
    for sigma2, traj in results:
        lines.extend(_csv_rows(traj, sigma2))
    return "\n".join(lines) + "\n"


def run_critical(cfg: RunConfig) -> str:
    """Text report: critical strength, CP bound and the regime of each supplied sigma2."""
    crit = critical_sigma(cfg.omega0)
    lines = [
        f"omega0 = {_fmt(cfg.omega0)}",
        f"sigma_c^2 = 12 pi / omega0^3 = {_fmt(crit)}",
        f"cp_bound = 6 pi / omega0^3 = {_fmt(crit / 2)}",
    ]
    for s in cfg.sigma2_values():
        c = kossakowski_coeffs(cfg.omega0, s, cfg.p1_sq, cfg.p2_sq, warn=False)
        lines.append(f"sigma2 = {_fmt(s)}: {cp_validity(c, cfg.omega0, s).regime}")
    return "\n".join(lines) + "\n"


def run_verify(cfg: RunConfig) -> tuple[bool, str]:
    """Run every oracle check; returns (all passed, report text)."""
    from .verify import run_all

    results = run_all(cfg.kappa, cfg.omega0, cfg.sigma2_values()[0])
    lines = [r.line() for r in results]
    ok = all(r.passed for r in results)
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return ok, "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; command-line flags override it")
    common.add_argument("--kappa", type=float, help="Werner parameter in [-1/3, 1] (default 0.8)")
    common.add_argument("--omega0", type=float, help="atomic gap (default 5)")
    common.add_argument("--sigma2", type=_parse_sigma2, help="disorder strength; comma list for sweep")
    common.add_argument("--p1sq", dest="p1_sq", type=float, help="squared dipole moment, atom 1")
    common.add_argument("--p2sq", dest="p2_sq", type=float, help="squared dipole moment, atom 2")
    common.add_argument("--tmax", dest="tau_max", type=float, help="final proper time (default 1)")
    common.add_argument("--dt", type=float, help="RK4 step (default 1e-3)")
    common.add_argument("--stride", type=int, help="record every n-th step (default 1)")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--dps", type=int, help="mpmath digits; 0 forces float64 (default automatic)")
    common.add_argument("--jobs", type=int, help="worker processes for sweep (default 1)")
    common.add_argument("--save-config", help="write the resolved configuration to this file")
    common.add_argument("-v", "--verbose", action="store_true", help="log debug output")

    parser = argparse.ArgumentParser(
        prog="lightcone-qubits",
        description="Entanglement dynamics of two atoms in empty and disordered cavities. "
        "All physical quantities are given in natural units.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    sub.add_parser("trajectory", parents=[common], help="one trajectory as CSV")
    sub.add_parser("sweep", parents=[common], help="sigma2 sweep as long-format CSV")
    sub.add_parser("critical", parents=[common], help="critical disorder strength and regimes")
    sub.add_parser("verify", parents=[common], help="run the oracle checks")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                values.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}") from exc
    for attr in _CONFIG_KEYS.values():
        flag = getattr(args, attr, None)
        if flag is not None:
            values[attr] = flag
    return RunConfig(mode=args.mode, **values).validate()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        if args.save_config:
            with open(args.save_config, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(cfg.to_text())
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if cfg.mode == "critical":
            _emit(run_critical(cfg), cfg.out)
            return EXIT_OK
        if cfg.mode == "verify":
            ok, report = run_verify(cfg)
            _emit(report, cfg.out)
            return EXIT_OK if ok else EXIT_VERIFY
        for s in cfg.sigma2_values():
            check_regime(cfg, s)
        if cfg.mode == "trajectory":
            s = cfg.sigma2_values()[0]
            _emit(trajectory_csv(run_trajectory(cfg, s)), cfg.out)
        else:
            _emit(sweep_csv(run_sweep(cfg)), cfg.out)
    except RegimeAbort as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
