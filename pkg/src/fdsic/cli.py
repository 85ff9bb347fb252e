"""Command-line front end: sweeps to CSV, single-shot estimation, thresholds.

Subcommands
-----------
trace-sweep / mse-sweep / rsi-sweep
    Run the Monte Carlo sweep and write one CSV row per (n, k) cell.
estimate
    One frame at (n, k, seed): print per-tap errors and the empirical MSE.
threshold
    Print the frame length above which the predicted residual power drops
    below the AWGN floor.

Configuration is layered: built-in defaults, then a flat key=value config
file (--config), then flags.  Unknown config keys are an error.  Identical
inputs produce byte-identical CSV output.

Exit codes: 0 success, 1 configuration error, 2 numerical or I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from .cancellation import find_threshold_n0, predicted_residual_power
from .estimation import SingularGramError, ls_estimate, predicted_mse
from .signal_model import (
    Modulation,
    build_convolution_matrix,
    generate_symbols,
    noise_for_taps,
    sample_channel,
    transmit,
)
from .sweeps import (
    ConfigError,
    ResidualMode,
    SweepCellError,
    SweepConfig,
    SweepRow,
    run_mse_sweep,
    run_rsi_sweep,
    run_trace_sweep,
)

CSV_HEADER = "n,k,metric_mean,metric_stderr,predicted,trials,noise_floor"

_SWEEP_RUNNERS = {
    "trace-sweep": run_trace_sweep,
    "mse-sweep": run_mse_sweep,
    "rsi-sweep": run_rsi_sweep,
}


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError (exit code 1)."""

    def error(self, message: str) -> None:
        raise ConfigError(message)


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part.strip()) for part in text.split(",") if part.strip())
    except ValueError:
        raise ValueError("expected comma-separated integers") from None


_CONFIG_FIELDS = {
    "n_values": (_parse_int_list, "comma-separated positive integers"),
    "k_values": (_parse_int_list, "comma-separated positive integers"),
    "trials": (int, "positive integer"),
    "modulation": (Modulation, "bpsk or qpsk"),
    "sir_db": (float, "real number (dB)"),
    "snr_db": (float, "real number (dB)"),
    "master_seed": (int, "integer"),
    "residual_mode": (ResidualMode, "analysis or practical"),
    "sigma_w2": (float, "non-negative real number"),
}


def load_config_file(path: str) -> dict:
    """Parse a flat key = value config file into SweepConfig overrides."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as err:
        raise ConfigError(f"cannot read config file {path}: {err}") from err
    values = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, text = line.partition("=")
        key = key.strip()
        text = text.strip()
        if key not in _CONFIG_FIELDS:
            accepted = ", ".join(sorted(_CONFIG_FIELDS))
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}; accepted keys: {accepted}")
        parser, domain = _CONFIG_FIELDS[key]
        try:
            values[key] = parser(text)
        except ValueError:
            raise ConfigError(
                f"{path}:{lineno}: invalid value {text!r} for key {key!r}; expected {domain}"
            ) from None
    return values


def _fmt(value: float) -> str:
    # 12 significant digits
    return format(float(value), ".11e")


def write_csv(rows: Sequence[SweepRow], path: str) -> None:
    """Write sweep rows as CSV with a fixed header and 12-digit floats."""
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(
            f"{row.n},{row.k},{_fmt(row.metric_mean)},{_fmt(row.metric_stderr)},"
            f"{_fmt(row.predicted)},{row.trials},{_fmt(row.noise_floor)}"
        )
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _add_link_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="master seed (default 0)")
    parser.add_argument("--mod", choices=["bpsk", "qpsk"], default=None, help="modulation")
    parser.add_argument("--sir-db", type=float, default=None, help="self-interference to desired-signal ratio (dB)")
    parser.add_argument("--snr-db", type=float, default=None, help="desired-signal to AWGN ratio (dB)")
    parser.add_argument("--sigma-w2", type=float, default=None, help="pin the composite noise variance directly")
    parser.add_argument("-v", action="count", default=0, dest="verbosity", help="increase verbosity")


def _add_sweep_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="flat key=value config file")
    parser.add_argument("--out", required=True, help="output CSV path")
    parser.add_argument("--trials", type=int, default=None, help="Monte Carlo trials per cell")
    n_group = parser.add_mutually_exclusive_group()
    n_group.add_argument("--n", type=int, default=None, help="single frame length")
    n_group.add_argument("--n-list", type=str, default=None, help="comma-separated frame lengths")
    k_group = parser.add_mutually_exclusive_group()
    k_group.add_argument("--k", type=int, default=None, help="single channel length")
    k_group.add_argument("--k-list", type=str, default=None, help="comma-separated channel lengths")
    parser.add_argument(
        "--residual", choices=["analysis", "practical"], default=None,
        help="which residual the rsi sweep measures",
    )
    _add_link_flags(parser)


def build_parser() -> _Parser:
    parser = _Parser(prog="fdsic", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    for name, help_text in [
        ("trace-sweep", "sweep the inverse-Gram trace over (n, k)"),
        ("mse-sweep", "sweep the channel-estimation MSE over (n, k)"),
        ("rsi-sweep", "sweep the residual self-interference power over (n, k)"),
    ]:
        _add_sweep_flags(sub.add_parser(name, help=help_text))

    est = sub.add_parser("estimate", help="single-shot estimation at one (n, k, seed)")
    est.add_argument("--n", type=int, default=2000, help="frame length")
    est.add_argument("--k", type=int, default=20, help="channel length")
    _add_link_flags(est)

    thr = sub.add_parser("threshold", help="frame length for sub-noise residual power")
    thr.add_argument("--k", type=int, required=True, help="channel length")
    _add_link_flags(thr)

    return parser


def _sweep_overrides(args: argparse.Namespace) -> dict:
    """Flag values as SweepConfig overrides (flags beat file beat defaults)."""
    overrides = {}
    if args.n is not None:
        overrides["n_values"] = (args.n,)
    if args.n_list is not None:
        try:
            overrides["n_values"] = _parse_int_list(args.n_list)
        except ValueError:
            raise ConfigError(f"invalid --n-list {args.n_list!r}: expected comma-separated integers") from None
    if args.k is not None:
        overrides["k_values"] = (args.k,)
    if args.k_list is not None:
        try:
            overrides["k_values"] = _parse_int_list(args.k_list)
        except ValueError:
            raise ConfigError(f"invalid --k-list {args.k_list!r}: expected comma-separated integers") from None
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.mod is not None:
        overrides["modulation"] = Modulation(args.mod)
    if args.sir_db is not None:
        overrides["sir_db"] = args.sir_db
    if args.snr_db is not None:
        overrides["snr_db"] = args.snr_db
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.residual is not None:
        overrides["residual_mode"] = ResidualMode(args.residual)
    if args.sigma_w2 is not None:
        overrides["sigma_w2"] = args.sigma_w2
    return overrides


def _run_sweep(args: argparse.Namespace) -> int:
    values = dict(load_config_file(args.config)) if args.config else {}
    values.update(_sweep_overrides(args))
    cfg = SweepConfig(**values)
    if args.verbosity:
        print(f"running {args.subcommand} over n={cfg.n_values} k={cfg.k_values} "
              f"trials={cfg.trials} seed={cfg.master_seed}", file=sys.stderr)
    rows = _SWEEP_RUNNERS[args.subcommand](cfg)
    write_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _run_estimate(args: argparse.Namespace) -> int:
    n, k = args.n, args.k
    if n < 1 or k < 1:
        raise ConfigError("--n and --k must be >= 1")
    if n < k:
        raise ConfigError(f"--n must be >= --k (got n={n}, k={k}): system is underdetermined")
    seed = args.seed if args.seed is not None else 0
    modulation = Modulation(args.mod) if args.mod else Modulation.BPSK
    sir_db = args.sir_db if args.sir_db is not None else 10.0
    snr_db = args.snr_db if args.snr_db is not None else 20.0
    noise = noise_for_taps(k, sir_db, snr_db, sigma_w2=args.sigma_w2)

    x = generate_symbols(n, modulation, seed)
    h = sample_channel(k, seed)
    matrix = build_convolution_matrix(x, k)
    frame = transmit(x, h, noise, seed, matrix=matrix)
    try:
        estimate = ls_estimate(matrix, frame.samples)
    except SingularGramError as err:
        raise SweepCellError(n, k, 0, err) from err

    errors = np.abs(estimate.taps - h.taps)
    mse = float(np.mean(errors**2))
    print(f"n={n} k={k} modulation={modulation.value} seed={seed} sigma_w2={_fmt(noise.sigma_w2)}")
    print(f"empirical MSE : {_fmt(mse)}")
    print(f"trace metric  : {_fmt(estimate.trace_metric)}")
    print(f"predicted MSE : {_fmt(predicted_mse(noise.sigma_w2, k, estimate.trace_metric))}")
    print("tap  true                          estimate                      |error|")
    for i, (true_tap, est_tap, err) in enumerate(zip(h.taps, estimate.taps, errors), start=1):
        print(f"{i:>3}  {true_tap.real:+.6f}{true_tap.imag:+.6f}j  "
              f"{est_tap.real:+.6f}{est_tap.imag:+.6f}j  {err:.3e}")
    return 0


def _run_threshold(args: argparse.Namespace) -> int:
    k = args.k
    if k < 1:
        raise ConfigError("--k must be >= 1")
    sir_db = args.sir_db if args.sir_db is not None else 10.0
    snr_db = args.snr_db if args.snr_db is not None else 20.0
    noise = noise_for_taps(k, sir_db, snr_db, sigma_w2=args.sigma_w2)
    if noise.sigma_n2 <= 0:
        raise ConfigError("AWGN variance is zero; no finite sub-noise threshold exists")
    n0 = find_threshold_n0(k, noise.sigma_w2, noise.sigma_n2)
    print(f"k={k} sir_db={sir_db} snr_db={snr_db}")
    print(f"sigma_w2 (composite noise) : {_fmt(noise.sigma_w2)}")
    print(f"sigma_n2 (AWGN floor)      : {_fmt(noise.sigma_n2)}")
    print(f"N0 = {n0}")
    if n0 > k:
        at_prev = predicted_residual_power(k, noise.sigma_w2, n0 - 1)
        print(f"predicted residual power at n={n0 - 1}: {_fmt(at_prev)} (>= floor)")
    at_n0 = predicted_residual_power(k, noise.sigma_w2, n0)
    print(f"predicted residual power at n={n0}: {_fmt(at_n0)} (< floor)")
    return 0


def run(argv: Sequence[str]) -> int:
    """Entry point; returns the process exit code instead of raising."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.subcommand in _SWEEP_RUNNERS:
            return _run_sweep(args)
        if args.subcommand == "estimate":
            return _run_estimate(args)
        return _run_threshold(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except SweepCellError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except SingularGramError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        # bad parameter values surfacing from the library (config error)
        print(f"error: {err}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
