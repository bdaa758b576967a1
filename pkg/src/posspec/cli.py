"""Command line: ``posspec validate|verify|generate|report``.

Exit codes: 0 when every check passes, 1 when some check fails, 2 when the
input is malformed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .harness import VerificationConfig, generate_corpus, render_text, verify
from .measurable import AtomSpace
from .report import Report
from .serialization import (REPORT_SCHEMA, SUITES, MalformedInputError, check_schema, dump_json,
                            parse_lch_representation, parse_measure, read_json, shipped,
                            write_json)
from .spectral import PositiveSpectralMeasure, validate

EXIT_OK, EXIT_FAIL, EXIT_MALFORMED = 0, 1, 2


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _render_check_report(report: Report, fmt: str) -> str:
    if fmt == "json":
        return dump_json(report.to_json())
    lines = [f"{report.name}: {'PASS' if report.passed else 'FAIL'}"]
    for c in report.checks:
        line = f"  {'ok  ' if c.passed else 'FAIL'} {c.name}"
        if c.witness is not None:
            line += f"  witness={c.to_json()['witness']}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def _parse_suites(text: Optional[str]) -> Optional[List[str]]:
    if text is None:
        return None
    suites = [s.strip() for s in text.split(",") if s.strip()]
    unknown = sorted(set(suites) - set(SUITES))
    if unknown:
        raise MalformedInputError(f"unknown suites: {', '.join(unknown)}")
    return suites


def _measure_from_spec(data) -> PositiveSpectralMeasure:
    """A spectral measure spec, or a C_0 representation spec (point labels only)."""
    if isinstance(data, dict) and "lch" in data:
        labels = {a.get("label") for a in data.get("atoms", []) if isinstance(a, dict)}
        if "tail" not in labels:
            rep = parse_lch_representation(data)
            points = AtomSpace(tuple(str(i) for i in range(rep.lch.cutoff)))
            return PositiveSpectralMeasure(points, rep.ctx, rep.point_images)
    return parse_measure(data)


def cmd_validate(args: argparse.Namespace) -> int:
    p = _measure_from_spec(read_json(args.spec))
    report = validate(p, args.tolerance, seed=args.seed or 0)
    _emit(_render_check_report(report, args.format), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def _load_config(args: argparse.Namespace) -> VerificationConfig:
    path = args.config or shipped("default_config.json")
    cfg = VerificationConfig.from_json(read_json(path))
    try:
        return cfg.with_overrides(args.seed, args.tolerance, _parse_suites(args.suites))
    except ValueError as exc:
        raise MalformedInputError(str(exc)) from None


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    report = verify(cfg)
    data = report.to_json()
    _emit(dump_json(data) if args.format == "json" else render_text(data), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_generate(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = generate_corpus(cfg)
    for name, data in files.items():
        write_json(out / name, data)
    sys.stdout.write(f"wrote {len(files)} specs to {out}\n")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    data = read_json(args.report)
    check_schema(data, REPORT_SCHEMA, "report")
    _emit(dump_json(data) if args.format == "json" else render_text(data), args.out)
    return EXIT_OK if data["summary"]["failed"] == 0 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posspec",
        description="Validate and verify positive spectral measures on finite Banach lattices.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, fmt_default: str) -> None:
        p.add_argument("--seed", type=int, default=None, help="override the random seed")
        p.add_argument("--tolerance", type=float, default=None,
                       help="override the comparison tolerance")
        p.add_argument("--out", default=None, help="write output here instead of stdout")
        p.add_argument("--format", choices=("json", "text"), default=fmt_default)

    p = sub.add_parser("validate", help="validate a spectral measure or representation spec")
    p.add_argument("spec")
    common(p, "json")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("verify", help="run verification suites from a config")
    p.add_argument("config", nargs="?", default=None,
                   help="config JSON (defaults to the shipped default config)")
    p.add_argument("--suites", default=None, help="comma-separated subset of suites")
    common(p, "json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="write the corpus specs of a config")
    p.add_argument("config", nargs="?", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_generate, tolerance=None, suites=None)

    p = sub.add_parser("report", help="render a verification report")
    p.add_argument("report")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MalformedInputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
