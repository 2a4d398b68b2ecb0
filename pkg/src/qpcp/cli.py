"""Command-line interface: separate, evaluate, bench.

Exit codes follow the sysexits convention used by batch tools:
0 success, 1 benchmark criterion failed, 2 I/O problem, 64 usage error,
65 malformed data.  Flags beat the optional config file, which beats the
built-in defaults; every output file is written to a temp path first and
renamed into place so failures never leave partial files.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import bench as benchmod
from .metrics import ClipScores, aggregate, score_clip
from .pipeline import SeparationMode, separate
from .solver import SolverConfig
from .spectral import StftConfig
from .wavio import WavError, read_wav, write_wav

__all__ = ["main"]

EXIT_OK = 0
EXIT_CRITERION = 1
EXIT_IO = 2
EXIT_USAGE = 64
EXIT_DATA = 65

LONG_INPUT_WARNING_S = 60.0


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; route through our usage exit instead
    def error(self, message):
        raise UsageError(message)


# defaults shared by flags and the config file
_DEFAULTS = {
    "mode": "complex",
    "k": 1.0,
    "tol": 1e-7,
    "max_iters": 1000,
    "window": 1411,
    "hop": 353,
    "jobs": os.cpu_count() or 1,
}

_CONFIG_TYPES = {
    "mode": str,
    "k": float,
    "tol": float,
    "max_iters": int,
    "window": int,
    "hop": int,
    "jobs": int,
    "out": str,
}


def _read_config_file(path: str) -> dict:
    """Flat ``key = value`` pairs; blank lines and # comments ignored."""
    settings = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_TYPES:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            settings[key] = _CONFIG_TYPES[key](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {exc}")
    return settings


def _merge_settings(args: argparse.Namespace, keys) -> dict:
    """defaults < config file < explicit flags."""
    merged = {key: _DEFAULTS[key] for key in keys if key in _DEFAULTS}
    if getattr(args, "config", None):
        cfg = _read_config_file(args.config)
        merged.update({k: v for k, v in cfg.items() if k in keys})
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _atomic_write_text(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except Exception:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# separate
# ---------------------------------------------------------------------------

def _cmd_separate(args) -> int:
    opts = _merge_settings(args, ("mode", "k", "tol", "max_iters",
                                  "window", "hop", "out"))
    try:
        mode = SeparationMode(opts["mode"])
    except ValueError:
        raise UsageError(f"unknown mode {opts['mode']!r}")
    try:
        solver = SolverConfig(k=opts["k"], tol=opts["tol"],
                              max_iters=opts["max_iters"])
        stft_cfg = StftConfig(window_length=opts["window"], hop=opts["hop"])
    except ValueError as exc:
        raise UsageError(str(exc))

    in_path = Path(args.input)
    mixture = read_wav(in_path)
    if mixture.duration > LONG_INPUT_WARNING_S:
        print(f"warning: input is {mixture.duration:.0f} s; the whole "
              "spectrogram is decomposed in one piece, expect a long solve",
              file=sys.stderr)
    if mode == SeparationMode.QUATERNION and mixture.channels != 2:
        raise UsageError("quaternion mode requires a stereo input file")

    out_dir = Path(opts.get("out") or in_path.parent)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = in_path.stem

    start = time.perf_counter()
    result = separate(mixture, mode, solver, stft_cfg)
    elapsed = time.perf_counter() - start

    write_wav(out_dir / f"{stem}_voice.wav", result.voice)
    write_wav(out_dir / f"{stem}_accomp.wav", result.accompaniment)

    report = result.solver_report
    sidecar = {
        "mode": mode.value,
        "k": opts["k"],
        "lambda": report.lam,
        "iterations": report.iterations,
        "converged": report.converged,
        "residual": report.residuals[-1] if report.residuals else 0.0,
        "rank_A": report.rank_A,
        "nnz_E": report.nnz_E,
        "wall_time_s": elapsed,
    }
    if not report.converged:
        sidecar["warning"] = (f"solver stopped at max_iters="
                              f"{opts['max_iters']} before reaching tol")
    _atomic_write_text(out_dir / f"{stem}_separation.json",
                       json.dumps(sidecar, indent=2) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# evaluate
# ---------------------------------------------------------------------------

_MANIFEST_COLUMNS = ("estimate_voice", "estimate_accomp",
                     "ref_voice", "ref_accomp", "mixture")


def _score_row(row: dict, base: Path) -> ClipScores:
    clips = {}
    for column in _MANIFEST_COLUMNS:
        path = Path(row[column])
        if not path.is_absolute():
            path = base / path
        clips[column] = read_wav(path)
    lengths = {c.length for c in clips.values()}
    channels = {c.channels for c in clips.values()}
    if len(lengths) != 1 or len(channels) != 1:
        raise DataError(f"clip {row['mixture']}: all five files must share "
                        "length and channel count")
    try:
        return score_clip(clips["estimate_voice"], clips["estimate_accomp"],
                          clips["ref_voice"], clips["ref_accomp"],
                          clips["mixture"])
    except ValueError as exc:  # silent reference and friends
        raise DataError(f"clip {row['mixture']}: {exc}") from exc


def _cmd_evaluate(args) -> int:
    opts = _merge_settings(args, ("jobs", "out"))
    manifest = Path(args.manifest)
    try:
        with open(manifest, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise UsageError(f"{manifest}: empty manifest")
            missing = set(_MANIFEST_COLUMNS) - set(reader.fieldnames)
            if missing:
                raise UsageError(f"{manifest}: missing columns "
                                 f"{sorted(missing)}")
            rows = list(reader)
    except OSError as exc:
        raise WavError(f"cannot read manifest: {exc}") from exc
    if not rows:
        raise UsageError(f"{manifest}: no clips listed")

    base = manifest.parent
    jobs = max(1, int(opts["jobs"]))
    if jobs > 1 and len(rows) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            scores = list(pool.map(lambda r: _score_row(r, base), rows))
    else:
        scores = [_score_row(row, base) for row in rows]
    overall = aggregate(scores)

    out_dir = Path(opts.get("out") or base)
    out_dir.mkdir(parents=True, exist_ok=True)

    clip_names = [Path(row["mixture"]).stem for row in rows]
    payload = {
        "clips": [dict(clip=name, **dataclasses.asdict(score))
                  for name, score in zip(clip_names, scores)],
        "aggregate": dataclasses.asdict(overall),
    }
    _atomic_write_text(out_dir / "scores.json",
                       json.dumps(payload, indent=2) + "\n")

    header = ["clip", "length", "sdr_voice", "sdr_accomp",
              "nsdr_voice", "nsdr_accomp"]
    lines = [",".join(header)]
    for name, s in zip(clip_names, scores):
        lines.append(f"{name},{s.clip_length},{s.sdr_voice:.6f},"
                     f"{s.sdr_accomp:.6f},{s.nsdr_voice:.6f},"
                     f"{s.nsdr_accomp:.6f}")
    lines.append(f"AGGREGATE,{overall.total_length},{overall.gsdr_voice:.6f},"
                 f"{overall.gsdr_accomp:.6f},{overall.gnsdr_voice:.6f},"
                 f"{overall.gnsdr_accomp:.6f}")
    _atomic_write_text(out_dir / "scores.csv", "\n".join(lines) + "\n")
    print(f"evaluated {len(scores)} clip(s); GNSDR voice "
          f"{overall.gnsdr_voice:+.2f} dB, accompaniment "
          f"{overall.gnsdr_accomp:+.2f} dB")
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def _cmd_bench(args) -> int:
    opts = _merge_settings(args, ("jobs", "k"))
    fields = [args.field] if args.field else list(benchmod.FIELDS)
    if args.quick:
        specs = benchmod.quick_panel(fields)
    else:
        seeds = range(args.seeds)
        specs = benchmod.default_panel(tuple(seeds), fields)
    if args.seed is not None:
        specs = [dataclasses.replace(s, seed=args.seed) for s in specs]
        seen = set()
        specs = [s for s in specs if not (s in seen or seen.add(s))]
    overrides = {}
    if args.rank is not None:
        overrides["rank"] = args.rank
    if args.sparsity is not None:
        overrides["sparsity"] = args.sparsity
    if opts["k"] != 1.0:
        overrides["k"] = opts["k"]
    if overrides:
        try:
            specs = [dataclasses.replace(s, **overrides) for s in specs]
        except ValueError as exc:
            raise UsageError(str(exc))

    reports = benchmod.run_panel(specs, jobs=max(1, int(opts["jobs"])))
    if args.json:
        benchmod.reports_to_jsonl(reports, args.json)
    if args.csv:
        benchmod.reports_to_csv(reports, args.csv)

    verdict = benchmod.panel_success(reports)
    groups = benchmod.group_reports(reports)
    for key, ok in sorted(verdict.items()):
        wins = sum(r.success for r in groups[key])
        print(f"{'PASS' if ok else 'FAIL'} {key}: {wins}/{len(groups[key])} "
              f"seeds with rel_err_A <= {benchmod.REL_ERR_SUCCESS:g}")
    if all(verdict.values()):
        return EXIT_OK
    failing = [key for key, ok in verdict.items() if not ok]
    print(f"recovery criterion failed for: {', '.join(sorted(failing))}",
          file=sys.stderr)
    return EXIT_CRITERION


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> _Parser:
    parser = _Parser(prog="qpcp",
                     description="Principal component pursuit over R/C/H: "
                                 "voice separation, scoring, benchmarks")
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sep = sub.add_parser("separate", help="split a WAV into voice and "
                                            "accompaniment stems")
    p_sep.add_argument("input", help="input WAV (PCM16 or float32)")
    p_sep.add_argument("--mode", choices=[m.value for m in SeparationMode])
    p_sep.add_argument("--k", type=float, help="sparsity trade-off "
                                               "(lambda = k/sqrt(max(m,n)))")
    p_sep.add_argument("--tol", type=float)
    p_sep.add_argument("--max-iters", dest="max_iters", type=int)
    p_sep.add_argument("--window", type=int, help="STFT window length")
    p_sep.add_argument("--hop", type=int, help="STFT hop length")
    p_sep.add_argument("--out", help="output directory (default: next to "
                                     "the input)")
    p_sep.set_defaults(func=_cmd_separate)

    p_eval = sub.add_parser("evaluate", help="score separations listed in "
                                             "a manifest CSV")
    p_eval.add_argument("--manifest", required=True,
                        help="CSV with columns " + ", ".join(_MANIFEST_COLUMNS))
    p_eval.add_argument("--out", help="output directory (default: next to "
                                      "the manifest)")
    p_eval.add_argument("--jobs", type=int)
    p_eval.set_defaults(func=_cmd_evaluate)

    p_bench = sub.add_parser("bench", help="synthetic exact-recovery panel")
    p_bench.add_argument("--quick", action="store_true",
                         help="3 seeds at 50x50 instead of the full panel")
    p_bench.add_argument("--field", choices=list(benchmod.FIELDS))
    p_bench.add_argument("--rank", type=int)
    p_bench.add_argument("--sparsity", type=float)
    p_bench.add_argument("--seed", type=int, help="run a single seed")
    p_bench.add_argument("--seeds", type=int, default=20,
                         help="seeds per configuration (default 20)")
    p_bench.add_argument("--k", type=float)
    p_bench.add_argument("--json", help="write per-run reports as JSON lines")
    p_bench.add_argument("--csv", help="write per-run reports as CSV")
    p_bench.add_argument("--jobs", type=int)
    p_bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (WavError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
