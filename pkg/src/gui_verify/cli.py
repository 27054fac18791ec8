"""Command-line driver.

Exit status: 0 when the implementation conforms, 1 when violations were
found, 2 on any error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .config import Config, load_config
from .errors import GuiVerifyError
from .fixture import login_screen
from .model import Origin, load_screen_pair
from .report import current_timestamp, render_html, to_json
from .selftest import run_selftest
from .violations import ViolationCategory, run_detection

EXIT_OK, EXIT_VIOLATIONS, EXIT_ERROR = 0, 1, 2

log = logging.getLogger("gui_verify")


def _error(msg: str) -> int:
    print(f"gui-verify: error: {msg}", file=sys.stderr)
    return EXIT_ERROR


def _compare_files(mock_img, mock_meta, impl_img, impl_meta, cfg: Config, timestamp=None):
    mock = load_screen_pair(mock_img, mock_meta, Origin.MOCKUP)
    impl = load_screen_pair(impl_img, impl_meta, Origin.IMPLEMENTATION)
    report = run_detection(mock, impl, cfg, mockup_source=str(mock_img), impl_source=str(impl_img),
                           timestamp=timestamp)
    return report, mock, impl


def cmd_compare(args) -> int:
    try:
        cfg = load_config(args.config)
        report, mock, impl = _compare_files(args.mock_img, args.mock_meta, args.impl_img, args.impl_meta, cfg)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_bytes(to_json(report))
        if args.html:
            render_html(report, mock.image, impl.image, out)
    except (GuiVerifyError, OSError) as exc:
        return _error(str(exc))
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"{len(report.violations)} violation(s); report written to {out / 'report.json'}")
    return EXIT_VIOLATIONS if report.violations else EXIT_OK


def _read_manifest(path: Path) -> list[dict]:
    try:
        doc = json.loads(path.read_bytes())
    except (OSError, json.JSONDecodeError) as exc:
        raise GuiVerifyError(f"cannot read manifest {path}: {exc}") from exc
    records = doc.get("pairs") if isinstance(doc, dict) else doc
    if not isinstance(records, list):
        raise GuiVerifyError("manifest must be a list of pair records or {\"pairs\": [...]}")
    names = set()
    keys = ("name", "mock_img", "mock_meta", "impl_img", "impl_meta")
    for k, rec in enumerate(records):
        if not isinstance(rec, dict) or not all(isinstance(rec.get(key), str) for key in keys):
            raise GuiVerifyError(f"manifest record {k} must have string fields {', '.join(keys)}")
        name = rec["name"]
        if not name or "/" in name or "\\" in name or name in (".", "..") or name == "summary":
            raise GuiVerifyError(f"manifest record {k}: unusable name {name!r}")
        if name in names:
            raise GuiVerifyError(f"manifest record {k}: duplicate name {name!r}")
        names.add(name)
    return records


def cmd_batch(args) -> int:
    manifest = Path(args.manifest)
    out = Path(args.out)
    try:
        cfg = load_config(args.config)
        records = _read_manifest(manifest)
        out.mkdir(parents=True, exist_ok=True)
    except (GuiVerifyError, OSError) as exc:
        return _error(str(exc))

    base = manifest.parent
    timestamp = current_timestamp()

    def run_one(rec: dict) -> dict:
        entry = {"name": rec["name"], "status": "ok", "violations": None, "report": None, "error": None}
        try:
            paths = [base / rec[key] for key in ("mock_img", "mock_meta", "impl_img", "impl_meta")]
            report, _, _ = _compare_files(*paths, cfg, timestamp=timestamp)
            report_name = f"{rec['name']}.json"
            (out / report_name).write_bytes(to_json(report))
            entry.update(violations=len(report.violations), report=report_name)
        except (GuiVerifyError, OSError) as exc:
            entry.update(status="error", error=str(exc))
        return entry

    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        entries = list(pool.map(run_one, records))

    errors = sum(e["status"] == "error" for e in entries)
    flagged = sum(bool(e["violations"]) for e in entries)
    summary = {
        "tool_version": __version__,
        "pairs": entries,
        "totals": {"pairs": len(entries), "ok": len(entries) - errors, "errors": errors,
                   "with_violations": flagged},
    }
    try:
        (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        return _error(str(exc))
    for e in entries:
        if e["status"] == "error":
            print(f"gui-verify: {e['name']}: {e['error']}", file=sys.stderr)
    print(f"{len(entries)} pair(s): {errors} error(s), {flagged} with violations")
    if errors:
        return EXIT_ERROR
    return EXIT_VIOLATIONS if flagged else EXIT_OK


def cmd_selftest(args) -> int:
    try:
        cfg = load_config(args.config)
        if args.img or args.meta:
            if not (args.img and args.meta):
                raise GuiVerifyError("--img and --meta must be given together")
            clean = load_screen_pair(args.img, args.meta)
        else:
            clean = login_screen()
        counts = {c: args.per_category for c in ViolationCategory}
        result = run_selftest(clean, counts, args.seed, cfg)
        if args.suite_out:
            from .injector import generate_suite, write_suite

            write_suite(generate_suite(clean, counts, args.seed), args.suite_out)
    except (GuiVerifyError, OSError) as exc:
        return _error(str(exc))
    for line in result.lines():
        print(line)
    return EXIT_OK if result.passed else EXIT_VIOLATIONS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gui-verify", description="Report GUI design violations between a mock-up and its implementation."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log parser warnings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", help="compare one mock-up against one implementation screen")
    p.add_argument("--mock-img", required=True)
    p.add_argument("--mock-meta", required=True)
    p.add_argument("--impl-img", required=True)
    p.add_argument("--impl-meta", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--html", action="store_true", help="also write the HTML evidence report")
    p.add_argument("--config", help="config JSON (default: $GUI_VERIFY_CONFIG)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("batch", help="compare every pair listed in a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--config")
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("selftest", help="inject known violations and measure recovery")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--per-category", type=int, default=10)
    p.add_argument("--config")
    p.add_argument("--img", help="clean screenshot to use instead of the bundled fixture")
    p.add_argument("--meta", help="metadata for --img")
    p.add_argument("--suite-out", help="also write the generated suite and its manifest here")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; keep --help/--version at 0
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR,
                        format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
