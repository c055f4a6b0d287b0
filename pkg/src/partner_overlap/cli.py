"""Command-line front end: scan data for the oscillator and ball-shell examples
and the Monte-Carlo check of the entanglement criterion.

Settings are resolved as command-line flags > ``PARTNER_OVERLAP_*``
environment variables > JSON config file > built-in defaults. The default
scan ranges bracket the entanglement thresholds of the ball-shell pair.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from . import circuits
from .gaussian import min_symplectic_eigenvalues, random_covariances, two_mode_invariants
from .measures import BOUNDARY, BOUNDARY_BAND, ENTANGLED, NOT_APPLICABLE, SEPARABLE, criterion_arrays

ENV_PREFIX = "PARTNER_OVERLAP_"
EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class CommonConfig:
    out: str | None = None
    jobs: int = 1
    tol: float = 1e-10


@dataclass
class HODemoConfig(CommonConfig):
    r: float = 0.5
    theta_steps: int = 199


@dataclass
class SeparationConfig(CommonConfig):
    mu: float = 0.0
    d_b: float = 0.5
    gap_min: float = 0.0
    gap_max: float = 0.1
    steps: int = 41


@dataclass
class MassConfig(CommonConfig):
    r_b: float = 1.0
    d_b: float = 0.5
    mu_min: float = 0.0
    mu_max: float = 3.0
    steps: int = 31


@dataclass
class WidthConfig(CommonConfig):
    r_b: float = 1.0
    mu: float = 0.0
    d_min: float = 0.05
    d_max: float = 3.0
    steps: int = 60


@dataclass
class ProfileConfig(CommonConfig):
    mu: float = 0.0
    r_min: float = 1e-2
    r_max: float = 50.0
    points: int = 400
    tail_min: float = 10.0
    tail_max: float = 50.0


@dataclass
class RandomCheckConfig(CommonConfig):
    n_trials: int = 100_000
    seed: int | None = 42
    band: float = BOUNDARY_BAND
    nu_max: float = 3.0
    squeeze_max: float = 1.0
    chunk: int = 10_000


def _check_positive(cfg, names):
    for n in names:
        v = getattr(cfg, n)
        if not (v > 0 and math.isfinite(v)):
            raise ConfigError(f"{n} must be positive, got {v}")


def validate(cfg) -> None:
    if cfg.jobs < 1:
        raise ConfigError("jobs must be at least 1")
    if not (0 < cfg.tol < 1):
        raise ConfigError(f"tol must be in (0, 1), got {cfg.tol}")
    if isinstance(cfg, HODemoConfig):
        if cfg.theta_steps < 2:
            raise ConfigError("theta_steps must be at least 2")
        if not (cfg.r > 0 and math.isfinite(cfg.r)):
            raise ConfigError(f"r must be positive, got {cfg.r}")
    if isinstance(cfg, (SeparationConfig, MassConfig, WidthConfig)):
        if cfg.steps < 2:
            raise ConfigError("steps must be at least 2")
    if isinstance(cfg, SeparationConfig):
        _check_positive(cfg, ["d_b"])
        if cfg.gap_min < 0 or cfg.gap_max <= cfg.gap_min:
            raise ConfigError("need 0 <= gap_min < gap_max (the shell must not overlap the ball)")
        if cfg.mu < 0:
            raise ConfigError("mu must be non-negative")
    if isinstance(cfg, MassConfig):
        _check_positive(cfg, ["r_b", "d_b"])
        if cfg.r_b < 1.0:
            raise ConfigError("r_b must be at least R_A = 1")
        if cfg.mu_min < 0 or cfg.mu_max <= cfg.mu_min:
            raise ConfigError("need 0 <= mu_min < mu_max")
    if isinstance(cfg, WidthConfig):
        _check_positive(cfg, ["r_b", "d_min"])
        if cfg.r_b < 1.0:
            raise ConfigError("r_b must be at least R_A = 1")
        if cfg.d_max <= cfg.d_min:
            raise ConfigError("need d_min < d_max")
        if cfg.mu < 0:
            raise ConfigError("mu must be non-negative")
    if isinstance(cfg, ProfileConfig):
        _check_positive(cfg, ["r_min", "r_max", "tail_min", "tail_max"])
        if cfg.mu < 0:
            raise ConfigError("mu must be non-negative")
        if cfg.r_max <= cfg.r_min or cfg.points < 2:
            raise ConfigError("need r_min < r_max and at least 2 points")
    if isinstance(cfg, RandomCheckConfig):
        if cfg.n_trials < 1:
            raise ConfigError("n_trials must be at least 1")
        if cfg.seed is None:
            raise ConfigError("random-check needs a seed")
        if cfg.chunk < 1:
            raise ConfigError("chunk must be at least 1")


def _coerce(f: dataclasses.Field, value):
    kind = f.type if isinstance(f.type, str) else getattr(f.type, "__name__", str(f.type))
    if value is None:
        return None
    if "int" in kind and "float" not in kind:
        return int(value)
    if "float" in kind:
        return float(value)
    return str(value)


def resolve(cls, cli: dict, section: str, config_path: str | None = None, environ=None):
    """Build a config of type ``cls`` from defaults, file, environment and flags."""
    environ = os.environ if environ is None else environ
    values = {}
    if config_path:
        with open(config_path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        values.update({k: v for k, v in data.items() if not isinstance(v, dict)})
        values.update(data.get(section, {}))
    names = {f.name: f for f in fields(cls)}
    unknown = set(values) - set(names)
    if unknown:
        raise ConfigError(f"unknown config keys for {section}: {sorted(unknown)}")
    for name in names:
        key = ENV_PREFIX + name.upper()
        if key in environ:
            values[name] = environ[key]
    values.update({k: v for k, v in cli.items() if k in names and v is not None})
    try:
        cfg = cls(**{k: _coerce(names[k], v) for k, v in values.items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    validate(cfg)
    return cfg


def fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return "nan"
        return format(float(value), ".17g")
    return str(value)


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(row[c]) for c in columns])
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(cfg, text: str, diagnostics: dict | None = None) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        if diagnostics is not None:
            sys.stderr.write(json.dumps(diagnostics, sort_keys=True) + "\n")
        return
    write_atomic(cfg.out, text)
    if diagnostics is not None:
        write_atomic(os.path.splitext(cfg.out)[0] + ".json", json.dumps(diagnostics, indent=2, sort_keys=True) + "\n")


# Commands.

HO_COLUMNS = ("theta", "e_n", "d_sym", "d_c", "d_t", "verdict")


def ho_rows(cfg: HODemoConfig) -> list[dict]:
    thetas = np.linspace(0.0, math.pi, cfg.theta_steps + 2)[1:-1]
    rows = []
    for th in thetas:
        ex = circuits.ho_example(cfg.r, float(th))
        rows.append({
            "theta": float(th),
            "e_n": ex.log_negativity,
            "d_sym": ex.d_sym,
            "d_c": ex.d_c,
            "d_t": ex.d_t,
            "verdict": ex.verdict,
        })
    return rows


def cmd_ho_demo(cfg: HODemoConfig) -> int:
    _emit(cfg, csv_text(HO_COLUMNS, ho_rows(cfg)))
    return EXIT_OK


def cmd_scan(kind: str, cfg) -> int:
    from .field import scans

    if kind == "scan-separation":
        res = scans.scan_separation(cfg.mu, cfg.d_b, (cfg.gap_min, cfg.gap_max), cfg.steps, cfg.tol, cfg.jobs)
    elif kind == "scan-mass":
        res = scans.scan_mass((cfg.mu_min, cfg.mu_max), cfg.r_b, cfg.d_b, cfg.steps, cfg.tol, cfg.jobs)
    else:
        res = scans.scan_width((cfg.d_min, cfg.d_max), cfg.r_b, cfg.mu, cfg.steps, cfg.tol, cfg.jobs)
    diag = res.diagnostics()
    diag["config"] = dataclasses.asdict(cfg)
    _emit(cfg, csv_text(res.columns, res.rows), diag)
    return EXIT_OK if not res.failures else EXIT_FAILED


def _profile_chunk(args):
    from .field.profile import partner_profile
    from .field.windows import RadialWindow

    mu, grid, tol = args
    p = partner_profile(RadialWindow.ball(), mu, grid, tol)
    return p.f_Ap, p.g_Ap, p.failures, p.det_JA


def cmd_profile(cfg: ProfileConfig) -> int:
    from .field.profile import profile_slopes, PartnerProfile

    grid = np.geomspace(cfg.r_min, cfg.r_max, cfg.points)
    parts = np.array_split(grid, cfg.jobs)
    tasks = [(cfg.mu, g, cfg.tol) for g in parts if g.size]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            outs = list(pool.map(_profile_chunk, tasks))
    else:
        outs = [_profile_chunk(t) for t in tasks]
    f = np.concatenate([o[0] for o in outs])
    g = np.concatenate([o[1] for o in outs])
    failures = [x for o in outs for x in o[2]]
    prof = PartnerProfile(grid, f, g, outs[0][3], cfg.mu, failures=failures)
    diag = {"det_JA": prof.det_JA, "tol": cfg.tol, "point_failures": failures, "config": dataclasses.asdict(cfg)}
    try:
        diag["tail"] = profile_slopes(prof, (cfg.tail_min, cfg.tail_max))
    except ValueError as exc:
        diag["tail"] = {"error": str(exc)}
    rows = [{"r": r, "f_ap": a, "g_ap": b} for r, a, b in zip(grid, f, g)]
    _emit(cfg, csv_text(("r", "f_ap", "g_ap"), rows), diag)
    return EXIT_OK if not failures else EXIT_FAILED


def random_check(cfg: RandomCheckConfig) -> dict:
    """Counts of verdicts and of disagreements with the PPT test.

    States are drawn in fixed-size chunks from spawned seed sequences, so the
    report depends only on the seed and trial count.
    """
    counts = {ENTANGLED: 0, SEPARABLE: 0, BOUNDARY: 0, NOT_APPLICABLE: 0}
    disagreements = 0
    unphysical = 0
    n_chunks = -(-cfg.n_trials // cfg.chunk)
    seqs = np.random.SeedSequence(cfg.seed).spawn(n_chunks)
    for i, ss in enumerate(seqs):
        n = min(cfg.chunk, cfg.n_trials - i * cfg.chunk)
        sig = random_covariances(n, 2, "mixed", (1.0, cfg.nu_max), cfg.squeeze_max, np.random.default_rng(ss))
        unphysical += int(np.sum(min_symplectic_eigenvalues(sig) < 1 - 1e-9))
        rep = criterion_arrays(*two_mode_invariants(sig), band=cfg.band)
        v = rep["verdict"]
        for key in counts:
            counts[key] += int(np.sum(v == key))
        ppt = rep["nu_tilde_minus"] < 1.0
        decided = (v == ENTANGLED) | (v == SEPARABLE)
        disagreements += int(np.sum(decided & ((v == ENTANGLED) != ppt)))
    return {
        "n_trials": cfg.n_trials,
        "n_entangled": counts[ENTANGLED],
        "n_separable": counts[SEPARABLE],
        "n_boundary": counts[BOUNDARY],
        "n_not_applicable": counts[NOT_APPLICABLE],
        "n_disagreements": disagreements,
        "n_unphysical": unphysical,
        "seed": cfg.seed,
    }


def cmd_random_check(cfg: RandomCheckConfig) -> int:
    report = random_check(cfg)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        write_atomic(cfg.out, text)
    return EXIT_OK if report["n_disagreements"] == 0 and report["n_unphysical"] == 0 else EXIT_FAILED


# Argument parsing.


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--jobs", type=int, help="worker processes")
    p.add_argument("--tol", type=float, help="relative quadrature tolerance")
    p.add_argument("--config", help="JSON config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="partner-overlap", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ho-demo", help="three-oscillator example over the beam-splitter angle")
    _common(p)
    p.add_argument("--r", type=float, help="squeezing parameter")
    p.add_argument("--theta-steps", type=int, help="interior theta samples in (0, pi)")

    bs = sub.add_parser("ball-shell", help="ball-shell field-mode example")
    bsub = bs.add_subparsers(dest="subcommand", required=True)
    p = bsub.add_parser("scan-separation", help="vary the gap R_B - R_A")
    _common(p)
    p.add_argument("--mu", type=float)
    p.add_argument("--d-b", type=float)
    p.add_argument("--gap-min", type=float)
    p.add_argument("--gap-max", type=float)
    p.add_argument("--steps", type=int)
    p = bsub.add_parser("scan-mass", help="vary mu = m R_A")
    _common(p)
    p.add_argument("--r-b", type=float)
    p.add_argument("--d-b", type=float)
    p.add_argument("--mu-min", type=float)
    p.add_argument("--mu-max", type=float)
    p.add_argument("--steps", type=int)
    p = bsub.add_parser("scan-width", help="vary the shell width d_B")
    _common(p)
    p.add_argument("--r-b", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--d-min", type=float)
    p.add_argument("--d-max", type=float)
    p.add_argument("--steps", type=int)
    p = bsub.add_parser("partner-profile", help="radial profiles of the partner of the ball mode")
    _common(p)
    p.add_argument("--mu", type=float)
    p.add_argument("--r-min", type=float)
    p.add_argument("--r-max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--tail-min", type=float)
    p.add_argument("--tail-max", type=float)

    p = sub.add_parser("random-check", help="Monte-Carlo check of the criterion against PPT")
    _common(p)
    p.add_argument("--n-trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--band", type=float)
    return parser


_SECTIONS = {
    "ho-demo": HODemoConfig,
    "scan-separation": SeparationConfig,
    "scan-mass": MassConfig,
    "scan-width": WidthConfig,
    "partner-profile": ProfileConfig,
    "random-check": RandomCheckConfig,
}


def main(argv=None, environ=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    section = args.subcommand if args.command == "ball-shell" else args.command
    cli = {k: v for k, v in vars(args).items() if k not in ("command", "subcommand", "config")}
    try:
        cfg = resolve(_SECTIONS[section], cli, section, args.config, environ)
    except (ConfigError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if section == "ho-demo":
        return cmd_ho_demo(cfg)
    if section == "random-check":
        return cmd_random_check(cfg)
    if section == "partner-profile":
        return cmd_profile(cfg)
    return cmd_scan(section, cfg)


if __name__ == "__main__":
    sys.exit(main())
