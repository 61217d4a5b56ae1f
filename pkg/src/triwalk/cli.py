"""Command-line front end.

Five subcommands: ``simulate`` (finite-time position distribution),
``density`` (continuous limit density, optionally rescaled onto lattice
sites), ``localization`` (trapped-probability profile), ``moments``
(asymptotic vs finite-time rescaled moments) and ``compare`` (normalization
identity plus the gap between prediction and simulation).  Runs are
described by a JSON config; results are CSV or JSON files written
atomically with fixed formatting, so a given config always produces
byte-identical output.

Exit codes: 0 success, 1 runtime failure, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from .coins import Basis, CoinSpec, CoinState, Family, build_coin, to_eigen
from .errors import (ConfigError, NormalizationError, ParameterOutOfRange,
                     TriwalkError)
from .phi_family import PhiAsymptotics
from .rho_family import RhoAsymptotics
from .walk import distribution, empirical_moment, evolve, initial_state

_ALLOWED_KEYS = {
    "family", "parameter", "initial_basis", "initial_amplitudes", "steps",
    "grid_points", "orders", "m_max", "rescale", "out",
}
_REJECT_NORM_DEV = 1e-6
_WARN_NORM_DEV = 1e-9


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


@dataclass
class RunConfig:
    spec: CoinSpec
    initial_basis: Basis
    amplitudes: np.ndarray  # normalized, in the declared basis
    steps: int | None = None
    grid_points: int | None = None
    orders: list[int] | None = None
    m_max: int | None = None
    rescale: int | None = None
    out: str | None = None


def _as_int(value, name: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"field '{name}' must be an integer, got {value!r}")
    if value < minimum:
        raise ConfigError(f"field '{name}' must be at least {minimum}, got {value}")
    return value


def _parse_amplitudes(raw) -> np.ndarray:
    if (not isinstance(raw, list) or len(raw) != 3
            or any(not isinstance(pair, list) or len(pair) != 2 for pair in raw)):
        raise ConfigError(
            "field 'initial_amplitudes' must be three [re, im] pairs")
    try:
        amps = np.array([complex(float(re), float(im)) for re, im in raw])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field 'initial_amplitudes': {exc}") from None
    if not np.all(np.isfinite(amps.view(float))):
        raise ConfigError("field 'initial_amplitudes' must be finite numbers")
    norm = float(np.linalg.norm(amps))
    dev = abs(norm - 1.0)
    if dev > _REJECT_NORM_DEV:
        raise ConfigError(
            f"field 'initial_amplitudes' has norm {norm:.9g}, off unity by "
            f"{dev:.3e} (rejected beyond {_REJECT_NORM_DEV})")
    if dev > _WARN_NORM_DEV:
        print(f"warning: initial amplitudes renormalized (norm was {norm:.9g})",
              file=sys.stderr)
    return amps / norm


def load_config(path: str, overrides: dict | None = None) -> RunConfig:
    """Parse and validate a JSON run configuration."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: config root must be a JSON object")
    unknown = sorted(set(raw) - _ALLOWED_KEYS)
    if unknown:
        raise ConfigError(f"{path}: unknown config fields: {', '.join(unknown)}")
    if overrides:
        raw = {**raw, **{k: v for k, v in overrides.items() if v is not None}}

    for required in ("family", "parameter", "initial_basis", "initial_amplitudes"):
        if required not in raw:
            raise ConfigError(f"{path}: missing required field '{required}'")

    family_raw = raw["family"]
    if family_raw not in ("rho", "phi"):
        raise ConfigError(
            f"field 'family' must be \"rho\" or \"phi\", got {family_raw!r}")
    if not isinstance(raw["parameter"], (int, float)) or isinstance(raw["parameter"], bool):
        raise ConfigError(f"field 'parameter' must be a number, got {raw['parameter']!r}")
    spec = CoinSpec(Family(family_raw), float(raw["parameter"]))

    basis_raw = raw["initial_basis"]
    if basis_raw not in ("standard", "eigen"):
        raise ConfigError(
            f"field 'initial_basis' must be \"standard\" or \"eigen\", got {basis_raw!r}")

    cfg = RunConfig(spec=spec,
                    initial_basis=Basis(basis_raw),
                    amplitudes=_parse_amplitudes(raw["initial_amplitudes"]))

    if "steps" in raw:
        cfg.steps = _as_int(raw["steps"], "steps", 0)
    if "grid_points" in raw:
        cfg.grid_points = _as_int(raw["grid_points"], "grid_points", 3)
    if "m_max" in raw:
        cfg.m_max = _as_int(raw["m_max"], "m_max", 0)
    if "rescale" in raw:
        cfg.rescale = _as_int(raw["rescale"], "rescale", 1)
    if "orders" in raw:
        orders = raw["orders"]
        if not isinstance(orders, list) or not orders:
            raise ConfigError("field 'orders' must be a non-empty list of integers")
        cfg.orders = [_as_int(n, "orders", 1) for n in orders]
    if "out" in raw:
        if not isinstance(raw["out"], str) or not raw["out"]:
            raise ConfigError("field 'out' must be a non-empty string")
        cfg.out = raw["out"]
    return cfg


def _coin_state(cfg: RunConfig) -> CoinState:
    return CoinState(cfg.amplitudes, cfg.initial_basis)


def _eigen_amplitudes(cfg: RunConfig) -> np.ndarray:
    state = _coin_state(cfg)
    if state.basis is Basis.EIGEN:
        return state.amplitudes
    return to_eigen(state, cfg.spec).amplitudes


def _asymptotics(cfg: RunConfig):
    g = _eigen_amplitudes(cfg)
    if cfg.spec.family is Family.RHO:
        return RhoAsymptotics(cfg.spec.parameter, g)
    return PhiAsymptotics(cfg.spec.parameter, g)


def _require_steps(cfg: RunConfig, minimum: int = 0) -> int:
    if cfg.steps is None:
        raise ConfigError("this command needs the 'steps' field (or --steps)")
    if cfg.steps < minimum:
        raise ConfigError(f"'steps' must be at least {minimum} here, got {cfg.steps}")
    return cfg.steps


def _simulated_distribution(cfg: RunConfig, t: int):
    walk0 = initial_state(_coin_state(cfg), cfg.spec)
    return distribution(evolve(walk0, build_coin(cfg.spec), t))


def cmd_simulate(cfg: RunConfig) -> str:
    """CSV of the position distribution after the configured steps."""
    t = _require_steps(cfg)
    dist = _simulated_distribution(cfg, t)
    lines = ["m,probability"]
    for m, p in zip(dist.positions(), dist.probabilities):
        lines.append(f"{m},{_fmt(p)}")
    return "\n".join(lines) + "\n"


def cmd_density(cfg: RunConfig) -> str:
    """CSV of the limit density, either on a velocity grid or per site."""
    asym = _asymptotics(cfg)
    v_peak = asym.v_peak
    if cfg.rescale is not None:
        t = cfg.rescale
        lines = ["m,p"]
        for m in range(-t, t + 1):
            v = m / t
            value = asym.localization(m)
            if abs(v) < v_peak:
                value += asym.density(v) / t
            lines.append(f"{m},{_fmt(value)}")
        return "\n".join(lines) + "\n"
    n = cfg.grid_points if cfg.grid_points is not None else 201
    grid = np.linspace(-v_peak, v_peak, n + 2)[1:-1]
    values = asym.density_grid(grid)
    lines = ["v,w"]
    for v, w in zip(grid, values):
        lines.append(f"{_fmt(v)},{_fmt(w)}")
    return "\n".join(lines) + "\n"


def cmd_localization(cfg: RunConfig) -> str:
    """CSV of the trapped-probability profile plus its closed-form total."""
    asym = _asymptotics(cfg)
    m_max = cfg.m_max if cfg.m_max is not None else 30
    lines = ["m,p_inf"]
    for m in range(-m_max, m_max + 1):
        lines.append(f"{m},{_fmt(asym.localization(m))}")
    lines.append(f"# total,{_fmt(asym.localization_total())}")
    return "\n".join(lines) + "\n"


def cmd_moments(cfg: RunConfig) -> str:
    """JSON report of asymptotic vs finite-time rescaled moments."""
    t = _require_steps(cfg, minimum=1)
    orders = cfg.orders if cfg.orders is not None else [1, 2]
    asym = _asymptotics(cfg)
    dist = _simulated_distribution(cfg, t)
    rows = []
    for n in orders:
        asymptotic = asym.moment(n)
        empirical = empirical_moment(dist, n)
        rows.append({
            "order": n,
            "asymptotic": asymptotic,
            "empirical": empirical,
            "absolute_gap": abs(asymptotic - empirical),
        })
    report = {
        "family": cfg.spec.family.value,
        "parameter": cfg.spec.parameter,
        "steps": t,
        "moments": rows,
    }
    return json.dumps(report, indent=2) + "\n"


def cmd_compare(cfg: RunConfig) -> str:
    """JSON report of the normalization identity and the prediction gap.

    The gap is the sup norm of |p(m, t) - (w(m/t)/t + p_inf(m))| over the
    interior 5 < |m| <= 0.9 * v_peak * t, away from both the ballistic
    fronts and the trapped peak.
    """
    t = _require_steps(cfg, minimum=1)
    asym = _asymptotics(cfg)
    closed = asym.continuous_weight()
    quad = asym.continuous_weight_quadrature()
    loc_total = asym.localization_total()
    dist = _simulated_distribution(cfg, t)
    m_hi = int(0.9 * asym.v_peak * t)
    gap = 0.0
    for m in range(-m_hi, m_hi + 1):
        if abs(m) <= 5:
            continue
        predicted = asym.localization(m)
        if abs(m / t) < asym.v_peak:
            predicted += asym.density(m / t) / t
        gap = max(gap, abs(dist.probability_at(m) - predicted))
    report = {
        "family": cfg.spec.family.value,
        "parameter": cfg.spec.parameter,
        "steps": t,
        "continuous_weight": {"closed_form": closed, "quadrature": quad},
        "localization_total": loc_total,
        "normalization_deviation": {
            "closed_form": abs(closed + loc_total - 1.0),
            "quadrature": abs(quad + loc_total - 1.0),
        },
        "interior_gap": {
            "sup_norm": gap,
            "m_excluded_below": 5,
            "m_max": m_hi,
        },
    }
    return json.dumps(report, indent=2) + "\n"


_COMMANDS = {
    "simulate": (cmd_simulate, "simulate.csv"),
    "density": (cmd_density, "density.csv"),
    "localization": (cmd_localization, "localization.csv"),
    "moments": (cmd_moments, "moments.json"),
    "compare": (cmd_compare, "compare.json"),
}


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".triwalk-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_orders_flag(text: str) -> list[int]:
    try:
        return [int(piece) for piece in text.split(",") if piece.strip()]
    except ValueError:
        raise ConfigError(f"--orders must be comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triwalk",
        description="Three-state quantum walks: simulation and limit distributions")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="JSON run configuration")
        cmd.add_argument("--out", help="output path (default: %s)" % _COMMANDS[name][1])
        if name == "density":
            cmd.add_argument("--grid", type=int, help="number of interior grid points")
            cmd.add_argument("--rescale", type=int, metavar="T",
                             help="emit per-site prediction for a t-step walk")
        if name == "localization":
            cmd.add_argument("--m-max", type=int, help="profile half-width")
        if name == "moments":
            cmd.add_argument("--orders", help="comma-separated moment orders")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides: dict = {"out": args.out}
        if hasattr(args, "grid"):
            overrides["grid_points"] = args.grid
        if hasattr(args, "rescale"):
            overrides["rescale"] = args.rescale
        if hasattr(args, "m_max"):
            overrides["m_max"] = args.m_max
        if getattr(args, "orders", None) is not None:
            overrides["orders"] = _parse_orders_flag(args.orders)
        cfg = load_config(args.config, overrides)
        runner, default_out = _COMMANDS[args.command]
    except (ConfigError, ParameterOutOfRange, NormalizationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        text = runner(cfg)
        out_path = cfg.out or default_out
        _write_atomic(out_path, text)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TriwalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out_path}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
