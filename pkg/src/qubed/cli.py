"""Command-line driver.

Three commands, each writing one CSV artifact:

* ``risk-curve``: Bayes risk vs number of measurements for one or more
  strategies (columns ``strategy,n,bayes_risk,model,notes``).
* ``utility-scan``: expected utility over the coarse time grid for the
  posterior after an optional measurement history (columns
  ``t,expected_utility``).
* ``simulate``: one seeded measurement trajectory (columns
  ``step,t,outcome,posterior_mean,posterior_variance``).

Configuration comes from flags, optionally seeded from a flat key=value
config file (flags override the file).  Floats are serialized with repr so
every CSV parses back to the exact values that produced it, and identical
configuration yields byte-identical output.

Exit status: 0 on success, 2 on argument/config errors, 1 on runtime errors
(a risk-curve run that loses some strategies to size caps still writes the
surviving rows, reports each failure, and exits 1).
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from math import log, pi

from .design import DesignDomain, Utility, utility_profile
from .inference import Distribution, PosteriorUndefined, bayes_update, make_uniform_prior
from .model import IDEAL, NOISY, LikelihoodModel
from .policy import Schedule, nyquist_schedule, run_adaptive, run_schedule
from .risk import STRATEGIES, TreeTooLarge, risk_curve

__all__ = ["RunConfig", "cmd_risk_curve", "cmd_utility_scan", "cmd_simulate", "main"]

DEFAULT_VISIBILITY = 0.75
DEFAULT_T2 = 10.0 * pi / log(2.0)
DEFAULT_PRIOR_POINTS = 1000
DEFAULT_SUPPORT = (0.0, 1.0)
DEFAULT_N_MAX = 12


@dataclass(frozen=True)
class RunConfig:
    """Everything a command needs beyond its own positionals."""

    model: LikelihoodModel
    prior_points: int
    support: tuple[float, float]
    domain: DesignDomain
    n_max: int
    strategies: tuple[str, ...]
    seed: int
    output_path: str

    def make_prior(self) -> Distribution:
        return make_uniform_prior(self.prior_points, self.support)


class _ConfigError(Exception):
    """Bad flag/config-file input discovered after argparse."""


def _parse_support(raw: str) -> tuple[float, float]:
    parts = raw.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"support must be 'a,b', got {raw!r}")
    a, b = float(parts[0]), float(parts[1])
    if not a < b:
        raise argparse.ArgumentTypeError(f"support needs a < b, got {raw!r}")
    return a, b


def _parse_strategies(raw: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in raw.split(",") if s.strip())
    if not names:
        raise argparse.ArgumentTypeError("strategies list is empty")
    for name in names:
        if name not in STRATEGIES:
            raise argparse.ArgumentTypeError(
                f"unknown strategy {name!r}; expected one of {', '.join(STRATEGIES)}")
    return names


def _parse_simulate_strategy(raw: str) -> tuple[str, ...]:
    # A custom schedule ("schedule:t1,t2,...") contains commas, so the whole
    # argument is one identifier; anything else follows the risk-curve syntax
    # but must name exactly one strategy.
    raw = raw.strip()
    if raw.startswith("schedule:"):
        body = raw[len("schedule:"):]
        try:
            times = tuple(float(s) for s in body.split(",") if s.strip())
            Schedule(times)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad schedule {raw!r}: {exc}") from exc
        return (raw,)
    names = _parse_strategies(raw)
    if len(names) != 1:
        raise argparse.ArgumentTypeError("simulate takes exactly one strategy")
    return names


def _parse_utility(raw: str) -> Utility:
    try:
        return Utility(raw)
    except ValueError:
        choices = ", ".join(u.value for u in Utility)
        raise argparse.ArgumentTypeError(
            f"unknown utility {raw!r}; expected one of {choices}") from None


def _parse_history(raw: str) -> tuple[tuple[float, int], ...]:
    raw = raw.strip()
    if not raw:
        return ()
    pairs = []
    for item in raw.split(","):
        t_text, sep, d_text = item.partition(":")
        if not sep:
            raise argparse.ArgumentTypeError(f"history entry {item!r} must be 't:d'")
        t, d = float(t_text), int(d_text)
        if t < 0.0 or d not in (0, 1):
            raise argparse.ArgumentTypeError(
                f"history entry {item!r} needs t >= 0 and d in {{0, 1}}")
        pairs.append((t, d))
    return tuple(pairs)


def _parse_model_kind(raw: str) -> str:
    if raw not in (IDEAL, NOISY):
        raise argparse.ArgumentTypeError(
            f"unknown model {raw!r}; expected {IDEAL} or {NOISY}")
    return raw


# One converter per configurable field, shared by flags and config files so
# both input paths validate identically.
_CONVERTERS = {
    "model": _parse_model_kind,
    "visibility": float,
    "t2": float,
    "prior_points": int,
    "support": _parse_support,
    "tmax": float,
    "ngrid": int,
    "nmax": int,
    "strategies": _parse_strategies,
    "utility": _parse_utility,
    "history": _parse_history,
    "true_omega": float,
    "seed": int,
    "out": str,
}

_DEFAULTS = {
    "model": IDEAL,
    "visibility": DEFAULT_VISIBILITY,
    "t2": DEFAULT_T2,
    "prior_points": DEFAULT_PRIOR_POINTS,
    "support": DEFAULT_SUPPORT,
    "tmax": DesignDomain().t_max,
    "ngrid": DesignDomain().n_grid,
    "nmax": DEFAULT_N_MAX,
    "utility": Utility.NEG_VARIANCE,
    "history": (),
    "seed": 0,
}

_REQUIRED_HINTS = {
    "out": "--out",
    "strategies": "--strategies",
    "true_omega": "--true-omega",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubed",
        description="Adaptive Bayesian design of single-qubit frequency measurements")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--model", type=_parse_model_kind, default=None,
                       help="likelihood model: ideal or noisy (default ideal)")
        p.add_argument("--visibility", type=float, default=None,
                       help=f"noisy-model contrast (default {DEFAULT_VISIBILITY})")
        p.add_argument("--t2", type=float, default=None,
                       help="noisy-model coherence time (default halves the envelope at t=10*pi)")
        p.add_argument("--prior-points", type=int, default=None, dest="prior_points",
                       help=f"prior grid resolution (default {DEFAULT_PRIOR_POINTS})")
        p.add_argument("--support", type=_parse_support, default=None,
                       help="prior support as 'a,b' (default 0,1)")
        p.add_argument("--tmax", type=float, default=None,
                       help="largest candidate evolution time (default 12*pi)")
        p.add_argument("--ngrid", type=int, default=None,
                       help="coarse time-scan resolution (default 240)")
        p.add_argument("--out", type=str, default=None, help="output CSV path")
        p.add_argument("--config", type=str, default=None,
                       help="key=value file supplying defaults for any flag")

    p_risk = sub.add_parser("risk-curve", help="Bayes risk vs measurement count per strategy")
    add_common(p_risk)
    p_risk.add_argument("--strategies", type=_parse_strategies, default=None,
                        help="comma-separated subset of: " + ", ".join(STRATEGIES))
    p_risk.add_argument("--nmax", type=int, default=None,
                        help=f"largest measurement count (default {DEFAULT_N_MAX})")

    p_scan = sub.add_parser("utility-scan", help="expected utility across candidate times")
    add_common(p_scan)
    p_scan.add_argument("--utility", type=_parse_utility, default=None,
                        help="infogain or negvar (default negvar)")
    p_scan.add_argument("--history", type=_parse_history, default=None,
                        help="measurements to condition on, as 't:d,t:d,...'")

    p_sim = sub.add_parser("simulate", help="one seeded measurement trajectory")
    add_common(p_sim)
    p_sim.add_argument("--strategies", type=_parse_simulate_strategy, default=None,
                       help="one strategy name, or 'schedule:t1,t2,...' for fixed times")
    p_sim.add_argument("--nmax", type=int, default=None,
                       help=f"number of measurements (default {DEFAULT_N_MAX})")
    p_sim.add_argument("--true-omega", type=float, default=None, dest="true_omega",
                       help="frequency generating the simulated outcomes")
    p_sim.add_argument("--seed", type=int, default=None,
                       help="RNG seed recorded with the run (default 0)")
    return parser


def _read_config_file(path: str) -> dict[str, str]:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                text = line.strip()
                if not text or text.startswith("#"):
                    continue
                key, sep, value = text.partition("=")
                if not sep:
                    raise _ConfigError(f"{path}:{lineno}: expected key=value, got {text!r}")
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise _ConfigError(f"cannot read config file {path}: {exc}") from exc
    return values


def _resolve(args: argparse.Namespace, fields: list[str]) -> dict:
    """Merge flag values, config-file values, and defaults (in that order)."""
    file_vals = _read_config_file(args.config) if args.config else {}
    unknown = set(file_vals) - set(_CONVERTERS)
    if unknown:
        raise _ConfigError(f"unknown config key(s): {', '.join(sorted(unknown))}")
    resolved = {}
    for name in fields:
        value = getattr(args, name, None)
        if value is None and name in file_vals:
            converter = (_parse_simulate_strategy
                         if name == "strategies" and args.command == "simulate"
                         else _CONVERTERS[name])
            try:
                value = converter(file_vals[name])
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise _ConfigError(f"config key {name}: {exc}") from exc
        if value is None:
            if name in _DEFAULTS:
                value = _DEFAULTS[name]
            else:
                raise _ConfigError(f"missing required setting {_REQUIRED_HINTS[name]}")
        resolved[name] = value
    return resolved


def _build_config(vals: dict) -> RunConfig:
    if vals["model"] == NOISY:
        model = LikelihoodModel.noisy(visibility=vals["visibility"], t2=vals["t2"])
    else:
        model = LikelihoodModel.ideal()
    domain = DesignDomain(t_max=vals["tmax"], n_grid=vals["ngrid"])
    return RunConfig(model=model, prior_points=vals["prior_points"],
                     support=vals["support"], domain=domain,
                     n_max=vals.get("nmax", DEFAULT_N_MAX),
                     strategies=vals.get("strategies", ()), seed=vals.get("seed", 0),
                     output_path=vals["out"])


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(cell) for cell in row])


def cmd_risk_curve(config: RunConfig) -> list[str]:
    """Write the risk-curve CSV; returns per-strategy failure messages.

    A strategy that exceeds a tree-size cap is reported and skipped; the
    remaining strategies still produce rows.
    """
    prior = config.make_prior()
    rows = []
    failures = []
    for strategy in config.strategies:
        try:
            curve = risk_curve(strategy, prior, config.model, config.n_max,
                               domain=config.domain)
        except TreeTooLarge as exc:
            failures.append(f"{strategy}: {exc}")
            continue
        for n, bayes_risk in curve.entries:
            rows.append([strategy, n, bayes_risk, curve.model, curve.notes])
    _write_csv(config.output_path, ["strategy", "n", "bayes_risk", "model", "notes"], rows)
    return failures


def cmd_utility_scan(config: RunConfig, history: tuple[tuple[float, int], ...],
                     utility: Utility) -> None:
    """Write the utility-scan CSV for the posterior after ``history``."""
    dist = config.make_prior()
    for t, d in history:
        dist = bayes_update(dist, config.model, t, d)
    times = config.domain.times()
    utilities = utility_profile(dist, config.model, times, utility)
    _write_csv(config.output_path, ["t", "expected_utility"],
               ([float(t), float(u)] for t, u in zip(times, utilities)))


def cmd_simulate(config: RunConfig, true_omega: float, strategy: str, n: int) -> None:
    """Write one simulated trajectory as CSV."""
    prior = config.make_prior()
    if strategy == "greedy-negvar":
        record = run_adaptive(true_omega, config.model, prior, n,
                              Utility.NEG_VARIANCE, config.domain, seed=config.seed)
    elif strategy == "greedy-infogain":
        record = run_adaptive(true_omega, config.model, prior, n,
                              Utility.INFO_GAIN, config.domain, seed=config.seed)
    elif strategy == "nyquist-bayes":
        schedule = nyquist_schedule(n, omega_max=config.support[1])
        record = run_schedule(true_omega, config.model, prior, schedule, seed=config.seed)
    elif strategy.startswith("schedule:"):
        times = tuple(float(s) for s in strategy[len("schedule:"):].split(",") if s.strip())
        record = run_schedule(true_omega, config.model, prior, Schedule(times),
                              seed=config.seed)
    else:
        raise ValueError(f"strategy {strategy!r} cannot be simulated")
    rows = [[i + 1, step.time, step.outcome, step.posterior_mean, step.posterior_variance]
            for i, step in enumerate(record.steps)]
    _write_csv(config.output_path, ["step", "t", "outcome", "posterior_mean",
                                    "posterior_variance"], rows)


_COMMON_FIELDS = ["model", "visibility", "t2", "prior_points", "support",
                  "tmax", "ngrid", "out"]


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "risk-curve":
            vals = _resolve(args, _COMMON_FIELDS + ["strategies", "nmax"])
            failures = cmd_risk_curve(_build_config(vals))
            for message in failures:
                print(f"error: {message}", file=sys.stderr)
            return 1 if failures else 0
        if args.command == "utility-scan":
            vals = _resolve(args, _COMMON_FIELDS + ["utility", "history"])
            cmd_utility_scan(_build_config(vals), vals["history"], vals["utility"])
            return 0
        vals = _resolve(args, _COMMON_FIELDS + ["strategies", "nmax", "true_omega", "seed"])
        cmd_simulate(_build_config(vals), vals["true_omega"], vals["strategies"][0],
                     vals["nmax"])
        return 0
    except _ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PosteriorUndefined, TreeTooLarge, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
