"""``submfcc`` command line: extract, compare, report, fbdump, replay."""
import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .audio import AudioFormatError, read_audio, write_matrix
from .cepstrum import mfcc_analysis, original_bank, subsampled_bank
from .config import ConfigError, PipelineConfig, load_config
from .evaluate import AllFilesFailedError, DegenerateCorrelationError, collect_files, corpus_reports
from .resample import decimate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

CASE_CHOICES = {"1": ("I",), "2": ("II",), "both": ("I", "II")}


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _dump_json(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _write_manifest(out, command, argv, cfg, inputs, outputs):
    manifest = {
        "tool": "submfcc",
        "version": __version__,
        "command": command,
        "argv": list(argv),
        "config": cfg.to_dict(),
        "inputs": [{"path": str(p), "sha256": _sha256(p)} for p in inputs if Path(p).is_file()],
        "outputs": [{"path": str(p), "sha256": _sha256(p)} for p in outputs],
    }
    _dump_json(manifest, f"{out}.manifest.json")


def resolve_config(args):
    hop = {"half": dict(hop_fraction=0.5, hop_mode="half"),
           "paper-literal": dict(hop_fraction=0.5, hop_mode="paper-literal"),
           None: {}}[getattr(args, "hop", None)]
    return load_config(getattr(args, "config", None), alpha=getattr(args, "alpha", None),
                       window=getattr(args, "window", None), **hop)


def cmd_extract(args, cfg):
    if args.bank == "standard" and args.alpha not in (None, 1):
        raise ConfigError("alpha: --bank standard runs on full-rate audio and requires alpha = 1")
    signal = read_audio(args.input)
    logmel, coeffs, bank = mfcc_analysis(signal, cfg, subsampled=args.bank == "modified")
    write_matrix(coeffs, args.out)
    outputs = [args.out]
    if args.logmel_out:
        write_matrix(logmel, args.logmel_out)
        outputs.append(args.logmel_out)
    _write_manifest(args.out, "extract", args.argv, cfg, [args.input], outputs)
    print(f"{args.out}: {coeffs.shape[0]} x {coeffs.shape[1]} (active filters {bank.active_count})")
    return EXIT_OK


def _report_payload(cfg, reports):
    return {
        "alpha": cfg.alpha,
        "config": cfg.to_dict(),
        "reports": {case: rep.to_dict() for case, rep in reports.items()},
    }


def cmd_compare(args, cfg):
    signal = read_audio(args.input)
    reports = corpus_reports([args.input], cfg, CASE_CHOICES[args.case], reader=lambda _: signal)
    for rep in reports.values():
        if not rep.per_file:
            print(f"numeric error: {args.input}: case {rep.case}: {rep.skipped[0][1]}", file=sys.stderr)
            return EXIT_NUMERIC
    _dump_json(_report_payload(cfg, reports))
    return EXIT_OK


def cmd_report(args, cfg):
    files = collect_files(args.inputs)
    if not files:
        print("error: no audio files found", file=sys.stderr)
        return EXIT_IO
    try:
        reports = corpus_reports(files, cfg, CASE_CHOICES[args.case], jobs=args.jobs)
    except AllFilesFailedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for fid, reason in next(iter(exc.reports.values())).skipped:
            print(f"  {fid}: {reason}", file=sys.stderr)
        return EXIT_IO
    _dump_json(_report_payload(cfg, reports), args.out)
    _write_manifest(args.out, "report", args.argv, cfg, files, [args.out])
    for case, rep in reports.items():
        mean = "nan" if rep.mean is None else f"{rep.mean:.6f}"
        var = "nan" if rep.variance is None else f"{rep.variance:.6g}"
        print(f"case {case}: mean={mean} variance={var} n={len(rep.per_file)} skipped={len(rep.skipped)}")
    return EXIT_OK


def cmd_fbdump(args, cfg):
    rate = args.sample_rate
    signal = None
    if args.input:
        signal = read_audio(args.input)
        rate = signal.sample_rate
    if rate % cfg.alpha:
        raise ConfigError(f"alpha: sample rate {rate} is not divisible by {cfg.alpha}")
    prefix = args.out
    outputs = []
    banks = {"standard": original_bank(cfg, rate), "modified": subsampled_bank(cfg, rate // cfg.alpha)}
    for name, bank in banks.items():
        csv_path = f"{prefix}_{name}.csv"
        write_matrix(bank.weights, csv_path)
        _dump_json(bank.to_dict(), f"{prefix}_{name}.json")
        outputs += [csv_path, f"{prefix}_{name}.json"]
    if signal is not None:
        orig_logmel = mfcc_analysis(signal, cfg)[0]
        sub_logmel = mfcc_analysis(decimate(signal, cfg.alpha), cfg, subsampled=True)[0]
        for name, mat in (("original", orig_logmel), ("modified", sub_logmel)):
            path = f"{prefix}_logmel_{name}.csv"
            write_matrix(mat, path)
            outputs.append(path)
    _write_manifest(prefix, "fbdump", args.argv, cfg, [args.input] if args.input else [], outputs)
    for path in outputs:
        print(path)
    return EXIT_OK


def cmd_replay(args, _cfg):
    manifest = json.loads(Path(args.manifest).read_text())
    for entry in manifest["inputs"]:
        if _sha256(entry["path"]) != entry["sha256"]:
            print(f"error: input changed since manifest was written: {entry['path']}", file=sys.stderr)
            return EXIT_IO
    cfg = PipelineConfig(**manifest["config"])
    sub_args = build_parser().parse_args(manifest["argv"])
    sub_args.argv = manifest["argv"]
    code = COMMANDS[sub_args.command](sub_args, cfg)
    if code != EXIT_OK:
        return code
    mismatched = [o["path"] for o in manifest["outputs"] if _sha256(o["path"]) != o["sha256"]]
    if mismatched:
        print(f"error: replay produced different outputs: {mismatched}", file=sys.stderr)
        return EXIT_NUMERIC
    print("replay ok: outputs match manifest")
    return EXIT_OK


COMMANDS = {
    "extract": cmd_extract,
    "compare": cmd_compare,
    "report": cmd_report,
    "fbdump": cmd_fbdump,
    "replay": cmd_replay,
}


def _common(p, bank=False, case=False):
    p.add_argument("--config", help="flat 'key = value' file of PipelineConfig fields")
    p.add_argument("--alpha", type=int, help="integer subsampling factor (default 2)")
    p.add_argument("--window", choices=["standard", "paper-literal"])
    p.add_argument("--hop", choices=["half", "paper-literal"],
                   help="half: N/2; paper-literal: N/2 - 1")
    p.add_argument("--backend", choices=["auto", "cython", "python"], default=None)
    if bank:
        p.add_argument("--bank", choices=["standard", "modified"], default="standard")
    if case:
        p.add_argument("--case", choices=list(CASE_CHOICES), default="both")


def build_parser():
    parser = argparse.ArgumentParser(prog="submfcc", description=__doc__)
    parser.add_argument("--version", action="version", version=f"submfcc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="MFCCs of one file (CSV or JSON by extension)")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--logmel-out", help="also write the (filled) log-Mel spectrum")
    _common(p, bank=True)

    p = sub.add_parser("compare", help="Pearson comparison for one full-rate file (JSON on stdout)")
    p.add_argument("input")
    _common(p, case=True)

    p = sub.add_parser("report", help="corpus-level Case I / Case II statistics")
    p.add_argument("inputs", nargs="+", help="audio files, directories or .txt/.lst file lists")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    _common(p, case=True)

    p = sub.add_parser("fbdump", help="dump standard and modified filter banks (and log-Mel traces)")
    p.add_argument("--out", default="fbank", help="output path prefix")
    p.add_argument("--input", help="optional full-rate file for log-Mel traces")
    p.add_argument("--sample-rate", type=int, default=16000)
    _common(p)

    p = sub.add_parser("replay", help="rerun a command from its manifest and verify outputs")
    p.add_argument("manifest")
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    try:
        if getattr(args, "backend", None):
            kernels.active = kernels.select(args.backend)
        cfg = None if args.command == "replay" else resolve_config(args)
        return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, AudioFormatError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DegenerateCorrelationError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
