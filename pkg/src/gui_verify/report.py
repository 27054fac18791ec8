"""Report serialization (canonical JSON) and the static HTML evidence report."""

from __future__ import annotations

import datetime as dt
import html
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import MalformedDocument, ReportIOError, UnknownCategory, VersionMismatch
from .model import BoundingBox, ScreenImage, crop, encode_png
from .violations import Violation, ViolationCategory, round_sig

STROKE_WIDTH = 3
FAMILY_COLORS = {
    "layout": (255, 0, 0),
    "text": (255, 165, 0),
    "resource": (128, 0, 128),
}


def current_timestamp() -> dt.datetime:
    """Now, in UTC; pinned by ``SOURCE_DATE_EPOCH`` when set, for reproducible output."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch:
        return dt.datetime.fromtimestamp(int(epoch), tz=dt.timezone.utc)
    return dt.datetime.now(dt.timezone.utc)


def _normalize(value):
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return round_sig(value)
    if isinstance(value, dict):
        return {str(k): _normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_normalize(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


@dataclass(frozen=True)
class ViolationReport:
    timestamp: dt.datetime
    mockup_source: str = ""
    impl_source: str = ""
    config_echo: dict = field(default_factory=dict)
    match_stats: dict = field(default_factory=dict)
    violations: tuple[Violation, ...] = ()
    warnings: tuple[str, ...] = ()
    tool_version: str = __version__

    def __post_init__(self):
        ts = self.timestamp
        if ts.tzinfo is None:
            ts = ts.replace(tzinfo=dt.timezone.utc)
        object.__setattr__(self, "timestamp", ts.astimezone(dt.timezone.utc))
        object.__setattr__(self, "config_echo", _normalize(dict(self.config_echo)))
        object.__setattr__(self, "match_stats", {k: int(v) for k, v in self.match_stats.items()})
        object.__setattr__(self, "violations", tuple(self.violations))
        object.__setattr__(self, "warnings", tuple(self.warnings))

    @property
    def conforms(self) -> bool:
        return not self.violations


# --------------------------------------------------------------------------
# JSON

def _format_timestamp(ts: dt.datetime) -> str:
    return ts.strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def _violation_doc(v: Violation) -> dict:
    return {
        "category": v.category.value,
        "mockup_id": v.mockup_id,
        "impl_id": v.impl_id,
        "severity": v.severity,
        "metrics": {k: v.metrics[k] for k in sorted(v.metrics)},
        "evidence": {"mockup": v.evidence[0].as_list(), "impl": v.evidence[1].as_list()},
    }


def to_document(r: ViolationReport) -> dict:
    return {
        "tool_version": r.tool_version,
        "timestamp": _format_timestamp(r.timestamp),
        "mockup_source": r.mockup_source,
        "impl_source": r.impl_source,
        "config": r.config_echo,
        "match_stats": {
            k: r.match_stats.get(k, 0) for k in ("matched", "unmatched_mockup", "unmatched_impl")
        },
        "violations": [_violation_doc(v) for v in r.violations],
        "warnings": list(r.warnings),
    }


def to_json(r: ViolationReport) -> bytes:
    """Canonical, byte-deterministic serialization; keys in fixed order."""
    return (json.dumps(_normalize(to_document(r)), indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _major(version: str) -> str:
    return str(version).split(".", 1)[0]


def _box(raw) -> BoundingBox:
    if not isinstance(raw, list) or len(raw) != 4 or not all(isinstance(v, int) for v in raw):
        raise MalformedDocument(f"evidence box must be four integers, got {raw!r}")
    return BoundingBox(*raw)


def from_json(data: bytes | str) -> ViolationReport:
    try:
        doc = json.loads(data)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedDocument(str(exc)) from exc
    if not isinstance(doc, dict):
        raise MalformedDocument("report must be a JSON object")
    try:
        version = doc["tool_version"]
        if _major(version) != _major(__version__):
            raise VersionMismatch(f"report version {version} is incompatible with {__version__}")
        violations = []
        for raw in doc["violations"]:
            try:
                category = ViolationCategory(raw["category"])
            except ValueError as exc:
                raise UnknownCategory(f"unknown violation category {raw['category']!r}") from exc
            violations.append(Violation(
                category, raw["mockup_id"], raw["impl_id"], raw["metrics"], raw["severity"],
                (_box(raw["evidence"]["mockup"]), _box(raw["evidence"]["impl"])),
            ))
        ts = dt.datetime.strptime(doc["timestamp"], "%Y-%m-%dT%H:%M:%S.%fZ")
        return ViolationReport(
            timestamp=ts.replace(tzinfo=dt.timezone.utc),
            mockup_source=doc["mockup_source"],
            impl_source=doc["impl_source"],
            config_echo=doc["config"],
            match_stats=doc["match_stats"],
            violations=tuple(violations),
            warnings=tuple(doc["warnings"]),
            tool_version=version,
        )
    except (VersionMismatch, UnknownCategory, MalformedDocument):
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MalformedDocument(f"invalid report document: {exc!r}") from exc


# --------------------------------------------------------------------------
# Images and HTML

def stroke_rect(pixels: np.ndarray, box: BoundingBox, color, width: int = STROKE_WIDTH) -> None:
    """Stroke the inside edge of ``box`` in place, clipped to the array."""
    h, w = pixels.shape[:2]
    x0, y0 = max(0, box.x), max(0, box.y)
    x1, y1 = min(w, box.x2), min(h, box.y2)
    if x0 >= x1 or y0 >= y1:
        return
    t = min(width, box.w, box.h)
    pixels[y0:min(y1, box.y + t), x0:x1] = color
    pixels[max(y0, box.y2 - t):y1, x0:x1] = color
    pixels[y0:y1, x0:min(x1, box.x + t)] = color
    pixels[y0:y1, max(x0, box.x2 - t):x1] = color


def annotate_image(img: ScreenImage, violations, side: str = "mockup") -> ScreenImage:
    """Copy of ``img`` with each violation's evidence box stroked, in list order.

    ``side`` picks which half of the evidence pair to draw: ``"mockup"`` or ``"impl"``.
    """
    idx = {"mockup": 0, "impl": 1}[side]
    pixels = img.pixels.copy()
    for v in violations:
        stroke_rect(pixels, v.evidence[idx], FAMILY_COLORS[v.category.family])
    return ScreenImage(pixels)


_PAGE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>GUI design violation report</title>
</head>
<body style="font-family: sans-serif; margin: 24px; color: #222;">
<h1 style="margin-bottom: 4px;">GUI design violation report</h1>
<p style="color: #666; margin-top: 0;">{meta}</p>
{summary}
<p>Legend:
<span style="color: rgb(255,0,0); font-weight: bold;">&#9632; layout</span>
<span style="color: rgb(255,165,0); font-weight: bold;">&#9632; text</span>
<span style="color: rgb(128,0,128); font-weight: bold;">&#9632; resource</span>
</p>
<div style="display: flex; gap: 24px; margin-bottom: 32px;">
<figure style="margin: 0;"><img src="annotated_mockup.png" style="max-height: 640px; border: 1px solid #ccc;"><figcaption>Mock-up</figcaption></figure>
<figure style="margin: 0;"><img src="annotated_impl.png" style="max-height: 640px; border: 1px solid #ccc;"><figcaption>Implementation</figcaption></figure>
</div>
{rows}
</body>
</html>
"""

_ROW = """<div style="border: 1px solid #ddd; border-left: 6px solid rgb{color}; padding: 12px; margin-bottom: 16px;">
<h3 style="margin: 0 0 8px 0;">#{index} {category} <span style="font-weight: normal; color: #666;">severity {severity}</span></h3>
<p style="margin: 4px 0;">mock-up id: <code>{mockup_id}</code> &middot; implementation id: <code>{impl_id}</code></p>
<p style="margin: 4px 0;">{metrics}</p>
<div style="display: flex; gap: 16px; align-items: flex-start;">
<figure style="margin: 0;"><img src="evidence/{index}_mock.png" style="max-width: 360px; border: 1px solid #ccc;"><figcaption>mock-up {mock_box}</figcaption></figure>
<figure style="margin: 0;"><img src="evidence/{index}_impl.png" style="max-width: 360px; border: 1px solid #ccc;"><figcaption>implementation {impl_box}</figcaption></figure>
</div>
</div>
"""


def _render_index(r: ViolationReport) -> str:
    esc = html.escape
    meta = esc(
        f"{r.mockup_source or 'mock-up'} vs {r.impl_source or 'implementation'} · "
        f"{_format_timestamp(r.timestamp)} · version {r.tool_version}"
    )
    stats = r.match_stats
    if r.conforms:
        summary = ('<p style="font-size: 1.2em; color: #2a7a2a;"><strong>The implementation conforms '
                   'to the mock-up: no design violations found.</strong></p>')
    else:
        summary = (f'<p style="font-size: 1.2em;"><strong>{len(r.violations)} design violation(s) found'
                   f'</strong>, listed by severity.</p>')
    summary += (f"<p>matched components: {stats.get('matched', 0)}, unmatched in mock-up: "
                f"{stats.get('unmatched_mockup', 0)}, unmatched in implementation: "
                f"{stats.get('unmatched_impl', 0)}</p>")
    if r.warnings:
        summary += "<ul>" + "".join(f"<li>{esc(w)}</li>" for w in r.warnings) + "</ul>"
    rows = []
    for k, v in enumerate(r.violations):
        metrics = ", ".join(f"{esc(name)} = {value:g}" for name, value in v.metrics.items())
        rows.append(_ROW.format(
            color=FAMILY_COLORS[v.category.family],
            index=k,
            category=esc(v.category.value),
            severity=f"{v.severity:.3f}",
            mockup_id=esc(v.mockup_id or "(none)"),
            impl_id=esc(v.impl_id or "(none)"),
            metrics=metrics or "no metrics",
            mock_box=v.evidence[0].as_list(),
            impl_box=v.evidence[1].as_list(),
        ))
    return _PAGE.format(meta=meta, summary=summary, rows="".join(rows))


def render_html(r: ViolationReport, mock_img: ScreenImage, impl_img: ScreenImage, outdir) -> list[Path]:
    """Write ``index.html``, both annotated screenshots and per-violation evidence crops.

    Returns the written paths. Any filesystem failure raises :class:`ReportIOError`.
    """
    out = Path(outdir)
    written = []

    def write(path: Path, data: bytes):
        path.write_bytes(data)
        written.append(path)

    try:
        out.mkdir(parents=True, exist_ok=True)
        write(out / "index.html", _render_index(r).encode("utf-8"))
        write(out / "annotated_mockup.png", encode_png(annotate_image(mock_img, r.violations, "mockup")))
        write(out / "annotated_impl.png", encode_png(annotate_image(impl_img, r.violations, "impl")))
        if r.violations:
            (out / "evidence").mkdir(exist_ok=True)
        for k, v in enumerate(r.violations):
            write(out / "evidence" / f"{k}_mock.png", encode_png(crop(mock_img, v.evidence[0])))
            write(out / "evidence" / f"{k}_impl.png", encode_png(crop(impl_img, v.evidence[1])))
    except OSError as exc:
        raise ReportIOError(f"cannot write report to {out}: {exc}") from exc
    return written
