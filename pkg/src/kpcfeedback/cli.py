"""Command-line front end: ``simulate``, ``quantize``, ``verify`` and ``bench``.

Exit codes: 0 success, 1 runtime failure, 2 usage or config error.
"""

import argparse
import datetime
import os
import sys

import numpy as np

from . import __version__
from .codebook import CodebookSpec
from .config import ConfigError, load_config, render_manifest
from .linklevel import records_to_csv, run_sweep
from .quantizer import beamforming_gain, quantize_csi
from .verification import benchmark_ncsd, run_verification

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def read_channel_file(path) -> np.ndarray:
    """One ``re,im`` pair per line; blank lines are skipped."""
    entries = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise UsageError(f"{path}:{lineno}: expected 're,im', got {line!r}")
            try:
                entries.append(complex(float(parts[0]), float(parts[1])))
            except ValueError:
                raise UsageError(f"{path}:{lineno}: not a number pair: {line!r}") from None
    if not entries:
        raise UsageError(f"{path}: no channel entries")
    return np.array(entries)


def cmd_simulate(args) -> int:
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.threads is not None:
        overrides["threads"] = args.threads
    try:
        run = load_config(args.config, overrides)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    except ConfigError as exc:
        raise UsageError(f"{args.config}: {exc}") from None

    records = []
    for cfg in run.sim_configs():
        records.extend(run_sweep(cfg))
    csv_text = records_to_csv(records)

    manifest_path = args.out + ".manifest"
    meta = {
        "tool_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "config_source": os.path.abspath(args.config),
        "csv": os.path.abspath(args.out),
        "manifest": os.path.abspath(manifest_path),
    }
    with open(args.out, "w") as fh:
        fh.write(csv_text)
    with open(manifest_path, "w") as fh:
        fh.write(render_manifest(run, meta))
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def cmd_quantize(args) -> int:
    try:
        spec = CodebookSpec(n_h=args.n_h, n_v=args.n_v, m_th=args.m_th, m_tv=args.m_tv)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        h = read_channel_file(args.channel_file)
    except OSError as exc:
        raise UsageError(f"cannot read channel file: {exc}") from None
    if h.size != spec.m_t:
        raise UsageError(f"channel has {h.size} entries, expected {spec.m_th}x{spec.m_tv}={spec.m_t}")
    q = quantize_csi(h, spec)
    g_h, g_v = q.beamformer.indices
    gain = beamforming_gain(h, q.beamformer.w)
    print(f"g_h={','.join(map(str, g_h))} g_v={','.join(map(str, g_v))} "
          f"bits={q.bits} gain={gain!r}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.max_len < 2 or args.max_const < 2:
        raise UsageError("--max-len and --max-const must be >= 2")
    report = run_verification(args.max_len, args.max_const, args.trials,
                              seed=0 if args.seed is None else args.seed)
    if report.ok:
        print(f"verify: {report.checks} checks passed")
        return EXIT_OK
    for name, details in report.failures:
        print(f"FAIL {name}: " + " ".join(f"{k}={v}" for k, v in details.items()))
    print(f"verify: {len(report.failures)} failures in {report.checks} checks")
    return EXIT_RUNTIME


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad --sizes {args.sizes!r}") from None
    if not sizes or min(sizes) < 2:
        raise UsageError("sizes must each be >= 2")
    sizes, medians, slope = benchmark_ncsd(sizes, reps=args.reps,
                                           seed=0 if args.seed is None else args.seed)
    print("length,median_ns")
    for size, med in zip(sizes, medians):
        print(f"{size},{med:.0f}")
    if slope is not None:
        print(f"slope={slope:.3f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kpcfeedback", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run BER sweeps from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="ber.csv")
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int, help="0 = one per CPU")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("quantize", help="quantize a channel vector read from a file")
    p.add_argument("channel_file")
    p.add_argument("--m-th", type=int, required=True)
    p.add_argument("--m-tv", type=int, required=True)
    p.add_argument("--n-h", type=int, default=4)
    p.add_argument("--n-v", type=int, default=4)
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("verify", help="randomized oracle and invariant checks")
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--max-const", type=int, default=8)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time the sequence detector")
    p.add_argument("--sizes", default="64,256,1024,4096")
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - contract: runtime failures exit 1
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
