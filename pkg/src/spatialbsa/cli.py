"""Command-line front end: single analyzer runs, quality sweeps, sessions.

Three subcommands share one seeding convention: every command accepts
``--seed``, and when it is absent a seed is drawn from the system entropy
source and recorded in the output metadata, so any emitted file can be
reproduced exactly.

Exit codes: 0 success, 1 usage or configuration errors, 2 when a session
aborts its channel check.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bsa import DetectorPair, analyze, quality
from .cavity import operating_point
from .qsdc import ChannelModel, EveModel, QsdcConfig, run_session
from .register import BellState

OUT_DIR_ENV = "SPATIALBSA_OUT_DIR"

CSV_HEADER = "g_over_ktot,ks_over_k,abs_r0,abs_rh,F1,eta1,F2,eta2"

_EPILOG = (
    "Configuration precedence: command-line flags override config-file values, "
    "which override built-in defaults.  If the environment variable "
    f"{OUT_DIR_ENV} is set, relative --out paths are resolved inside it."
)


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that reserves exit code 1 for usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def draw_seed() -> int:
    """Fresh 64-bit seed from the system entropy source."""
    return int.from_bytes(os.urandom(8), "big")


def resolve_out(path_text: str | None) -> Path | None:
    """Map an --out value to a path, or None for stdout."""
    if path_text is None or path_text == "-":
        return None
    path = Path(path_text)
    out_dir = os.environ.get(OUT_DIR_ENV)
    if out_dir and not path.is_absolute():
        path = Path(out_dir) / path
    return path


def _emit(text: str, out: Path | None) -> int:
    if out is None:
        sys.stdout.write(text)
        return 0
    try:
        out.write_text(text)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return 1
    return 0


@dataclass(frozen=True)
class SweepSpec:
    """Grid of cavity operating points for a quality sweep."""

    g_min: float
    g_max: float
    steps: int
    ks_list: tuple[float, ...]
    gamma: float = 0.1
    detuning: float = 0.5

    def __post_init__(self):
        if self.steps < 2:
            raise ValueError("steps must be at least 2")
        for value in (self.g_min, self.g_max, self.gamma, self.detuning):
            if not math.isfinite(value):
                raise ValueError("sweep ranges must be finite")
        if not (self.g_min < self.g_max):
            raise ValueError("g range must satisfy min < max")
        if self.g_min < 0.0:
            raise ValueError("g must be nonnegative")
        if not self.ks_list:
            raise ValueError("at least one ks_over_k value is required")
        if any(not math.isfinite(ks) or ks < 0.0 for ks in self.ks_list):
            raise ValueError("ks_over_k values must be finite and nonnegative")


def sweep_points(spec: SweepSpec) -> list:
    """Evaluate the quality figures over the grid, rows ordered (ks, g).

    Grid points are independent pure evaluations, so they run concurrently;
    the output order is fixed by the task list, not by completion order.
    """
    grid = [
        (ks, float(g))
        for ks in sorted(spec.ks_list)
        for g in np.linspace(spec.g_min, spec.g_max, spec.steps)
    ]
    with ThreadPoolExecutor() as pool:
        return list(
            pool.map(
                lambda point: quality(
                    operating_point(point[1], point[0], spec.gamma, spec.detuning)
                ),
                grid,
            )
        )


def format_sweep_csv(points, spec: SweepSpec, seed: int) -> str:
    """Render sweep rows as CSV with metadata comments.

    Floats are printed with 17 significant digits, enough for an exact
    binary round trip through float().
    """
    lines = [
        "# spatial-mode analyzer quality sweep",
        f"# gamma={spec.gamma:.17g} detuning={spec.detuning:.17g} kappa=1",
        "# note: eta2 is emitted exactly as the even-round efficiency formula"
        " gives it; it is not a probability and reaches 1.5 at |r0|=|rh|=1",
        f"# seed={seed}",
        CSV_HEADER,
    ]
    for p in points:
        lines.append(
            ",".join(
                f"{v:.17g}"
                for v in (
                    p.g_over_ktot,
                    p.ks_over_k,
                    p.abs_r0,
                    p.abs_rh,
                    p.F1,
                    p.eta1,
                    p.F2,
                    p.eta2,
                )
            )
        )
    return "\n".join(lines) + "\n"


def parse_sweep_csv(text: str) -> list[dict]:
    """Parse an emitted sweep CSV back into one dict per row."""
    rows = []
    columns = CSV_HEADER.split(",")
    for line in text.splitlines():
        if not line or line.startswith("#") or line == CSV_HEADER:
            continue
        values = [float(v) for v in line.split(",")]
        rows.append(dict(zip(columns, values)))
    return rows


def cmd_bsa(args) -> int:
    seed = args.seed if args.seed is not None else draw_seed()
    rng = np.random.default_rng(seed)
    label = BellState.from_string(args.state)
    params = operating_point(args.g_over_ktot, args.ks_over_k, args.gamma, args.detuning)
    counts = {m.value: 0 for m in BellState}
    detector_counts = {d.value: 0 for d in DetectorPair}
    changed = 0
    success_total = 0.0
    for _ in range(args.trials):
        record = analyze(label, params=params, ideal=not args.lossy, rng=rng)
        counts[record.inferred.value] += 1
        detector_counts[record.detectors.value] += 1
        changed += 1 if record.spin_changed else 0
        success_total += record.success_probability
    report = {
        "command": "bsa",
        "state": label.value,
        "ideal": not args.lossy,
        "trials": args.trials,
        "seed": seed,
        "params": {
            "g_over_ktot": args.g_over_ktot,
            "ks_over_k": args.ks_over_k,
            "gamma": args.gamma,
            "detuning": args.detuning,
        },
        "counts": counts,
        "detectors": detector_counts,
        "spin_changed_count": changed,
        "mean_success_probability": success_total / args.trials,
    }
    return _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", resolve_out(args.out))


def cmd_sweep(args) -> int:
    seed = args.seed if args.seed is not None else draw_seed()
    try:
        ks_list = tuple(float(v) for v in args.ks.split(",") if v.strip())
        spec = SweepSpec(
            g_min=args.g_min,
            g_max=args.g_max,
            steps=args.steps,
            ks_list=ks_list,
            gamma=args.gamma,
            detuning=args.detuning,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = format_sweep_csv(sweep_points(spec), spec, seed)
    return _emit(text, resolve_out(args.out))


def _load_config_file(path_text: str) -> dict:
    data = json.loads(Path(path_text).read_text())
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    known = {
        "message_bits",
        "pair_count",
        "sample_fraction",
        "eve_model",
        "channel_model",
        "seed",
        "qber_abort_threshold",
    }
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return data


def _auto_pair_count(message_bits: str, sample_fraction: float) -> int:
    # Enough pairs that the message fits beside the security sample, with
    # about as many phase-2 check pairs as message pairs.
    need = 2 * (len(message_bits) // 2)
    return max(32, math.ceil(need / (1.0 - sample_fraction)))


def build_qsdc_config(args) -> QsdcConfig:
    """Assemble a QsdcConfig from defaults, config file, and flags."""
    merged: dict = {}
    if args.config is not None:
        merged = _load_config_file(args.config)

    eve_map = dict(merged.get("eve_model") or {})
    channel_map = dict(merged.get("channel_model") or {})
    if args.eve is not None:
        eve_map["kind"] = args.eve
    if args.eve_fraction is not None:
        eve_map["fraction"] = args.eve_fraction
    if args.mode_flip_prob is not None:
        channel_map["mode_flip_prob"] = args.mode_flip_prob
    if args.phase_flip_prob is not None:
        channel_map["phase_flip_prob"] = args.phase_flip_prob

    kind = eve_map.get("kind", "none")
    fraction = eve_map.get("fraction")
    if fraction is None:
        fraction = 1.0 if kind == "intercept_resend" else 0.0
    eve = EveModel(kind=kind, fraction=float(fraction))
    channel = ChannelModel(
        mode_flip_prob=float(channel_map.get("mode_flip_prob", 0.0)),
        phase_flip_prob=float(channel_map.get("phase_flip_prob", 0.0)),
    )

    message = args.message if args.message is not None else merged.get("message_bits")
    if message is None:
        raise ValueError("a message is required (--message or config file)")
    sample_fraction = (
        args.sample_fraction
        if args.sample_fraction is not None
        else float(merged.get("sample_fraction", 0.1))
    )
    pair_count = args.pairs if args.pairs is not None else merged.get("pair_count")
    if pair_count is None:
        pair_count = _auto_pair_count(str(message), sample_fraction)
    threshold = (
        args.qber_threshold
        if args.qber_threshold is not None
        else float(merged.get("qber_abort_threshold", 0.11))
    )
    seed = args.seed if args.seed is not None else merged.get("seed")
    if seed is None:
        seed = draw_seed()
    return QsdcConfig(
        message_bits=str(message),
        pair_count=int(pair_count),
        sample_fraction=float(sample_fraction),
        eve_model=eve,
        channel_model=channel,
        seed=int(seed),
        qber_abort_threshold=float(threshold),
    )


def cmd_qsdc(args) -> int:
    try:
        config = build_qsdc_config(args)
    except (OSError, json.JSONDecodeError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = run_session(config)
    payload = {
        "command": "qsdc",
        "config": {
            "message_bits": config.message_bits,
            "pair_count": config.pair_count,
            "sample_fraction": config.sample_fraction,
            "eve_model": {
                "kind": config.eve_model.kind,
                "fraction": config.eve_model.fraction,
            },
            "channel_model": {
                "mode_flip_prob": config.channel_model.mode_flip_prob,
                "phase_flip_prob": config.channel_model.phase_flip_prob,
            },
            "seed": config.seed,
            "qber_abort_threshold": config.qber_abort_threshold,
        },
        "report": {
            "phase1_qber": report.phase1_qber,
            "aborted": report.aborted,
            "decoded_bits": report.decoded_bits,
            "phase2_sample_error_rate": report.phase2_sample_error_rate,
            "transcript": report.transcript,
        },
    }
    status = _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", resolve_out(args.out))
    if status != 0:
        return status
    return 2 if report.aborted else 0


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> CliParser:
    parser = CliParser(prog="spatialbsa", description=__doc__, epilog=_EPILOG)
    sub = parser.add_subparsers(dest="command", required=True)

    bsa = sub.add_parser(
        "bsa",
        help="run repeated analyzer trials on one Bell state",
        epilog=_EPILOG,
    )
    bsa.add_argument("state", choices=[m.value for m in BellState])
    model = bsa.add_mutually_exclusive_group()
    model.add_argument("--ideal", action="store_true", help="ideal phases (default)")
    model.add_argument("--lossy", action="store_true", help="true cavity amplitudes")
    bsa.add_argument("--trials", type=_positive_int, default=100)
    bsa.add_argument("--g-over-ktot", type=float, default=2.4)
    bsa.add_argument("--ks-over-k", type=float, default=0.0)
    bsa.add_argument("--gamma", type=float, default=0.1)
    bsa.add_argument("--detuning", type=float, default=0.5)
    bsa.add_argument("--seed", type=int)
    bsa.add_argument("--out", help="output file ('-' or omitted: stdout)")
    bsa.set_defaults(func=cmd_bsa)

    sweep = sub.add_parser(
        "sweep",
        help="CSV of quality figures over a coupling/leakage grid",
        epilog=_EPILOG,
    )
    sweep.add_argument("--g-min", type=float, default=0.1)
    sweep.add_argument("--g-max", type=float, default=3.0)
    sweep.add_argument("--steps", type=int, default=30)
    sweep.add_argument("--ks", default="0,0.3,0.7", help="comma-separated ks/k values")
    sweep.add_argument("--gamma", type=float, default=0.1)
    sweep.add_argument("--detuning", type=float, default=0.5)
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--out", help="output file ('-' or omitted: stdout)")
    sweep.set_defaults(func=cmd_sweep)

    qsdc = sub.add_parser(
        "qsdc",
        help="run one direct-communication session",
        epilog=_EPILOG,
    )
    qsdc.add_argument("--config", help="JSON file with QsdcConfig fields")
    qsdc.add_argument("--message", help="bit string to send (even length)")
    qsdc.add_argument("--pairs", type=_positive_int, help="number of Bell pairs")
    qsdc.add_argument("--sample-fraction", type=float)
    qsdc.add_argument("--eve", choices=["none", "intercept_resend"])
    qsdc.add_argument("--eve-fraction", type=float)
    qsdc.add_argument("--mode-flip-prob", type=float)
    qsdc.add_argument("--phase-flip-prob", type=float)
    qsdc.add_argument("--qber-threshold", type=float)
    qsdc.add_argument("--seed", type=int)
    qsdc.add_argument("--out", help="output file ('-' or omitted: stdout)")
    qsdc.set_defaults(func=cmd_qsdc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
