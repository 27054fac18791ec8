"""Violation taxonomy, per-pair detectors, and the end-to-end detection run.

The taxonomy has nine categories in three families:

* layout: ``LAYOUT_TRANSLATION``, ``LAYOUT_RESIZE``
* text: ``TEXT_CONTENT``, ``TEXT_COLOR``, ``TEXT_SIZE``
* resource: ``RESOURCE_MISSING``, ``RESOURCE_EXTRA``, ``RESOURCE_COLOR``, ``RESOURCE_IMAGE``
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from .config import Config
from .matching import MatchResult, match_components, text_similarity
from .model import (
    TEXT_BEARING,
    BoundingBox,
    GuiComponent,
    ScreenImage,
    ScreenPair,
    crop,
    leaf_components,
)
from .percept import (
    color_histogram,
    delta_e_rgb,
    dominant_color,
    perceptual_region_diff,
    secondary_color,
)


class ViolationCategory(str, enum.Enum):
    LAYOUT_TRANSLATION = "LAYOUT_TRANSLATION"
    LAYOUT_RESIZE = "LAYOUT_RESIZE"
    TEXT_CONTENT = "TEXT_CONTENT"
    TEXT_COLOR = "TEXT_COLOR"
    TEXT_SIZE = "TEXT_SIZE"
    RESOURCE_MISSING = "RESOURCE_MISSING"
    RESOURCE_EXTRA = "RESOURCE_EXTRA"
    RESOURCE_COLOR = "RESOURCE_COLOR"
    RESOURCE_IMAGE = "RESOURCE_IMAGE"

    @property
    def family(self) -> str:
        return self.value.split("_", 1)[0].lower()


_CATEGORY_ORDER = {c: k for k, c in enumerate(ViolationCategory)}

# Metric names each detector emits, per category.
CATEGORY_METRICS: dict[ViolationCategory, tuple[str, ...]] = {
    ViolationCategory.LAYOUT_TRANSLATION: ("dx", "dy"),
    ViolationCategory.LAYOUT_RESIZE: ("dh", "dw"),
    ViolationCategory.TEXT_CONTENT: ("text_sim",),
    ViolationCategory.TEXT_COLOR: ("delta_e",),
    ViolationCategory.TEXT_SIZE: ("ratio_deviation",),
    ViolationCategory.RESOURCE_MISSING: (),
    ViolationCategory.RESOURCE_EXTRA: (),
    ViolationCategory.RESOURCE_COLOR: ("delta_e",),
    ViolationCategory.RESOURCE_IMAGE: ("differing_fraction", "mean_delta_e"),
}


def round_sig(x: float, digits: int = 6) -> float:
    """Round to ``digits`` significant digits (the report's float precision)."""
    return float(f"{float(x):.{digits}g}")


@dataclass(frozen=True)
class Violation:
    """One categorized discrepancy.

    ``evidence`` holds the region to inspect in the mock-up screenshot and in
    the implementation screenshot. Reals are stored at report precision so a
    violation survives serialization unchanged.
    """

    category: ViolationCategory
    mockup_id: str | None
    impl_id: str | None
    metrics: Mapping[str, float]
    severity: float
    evidence: tuple[BoundingBox, BoundingBox]

    def __post_init__(self):
        cat = ViolationCategory(self.category)
        object.__setattr__(self, "category", cat)
        if cat is ViolationCategory.RESOURCE_MISSING:
            ok = self.mockup_id is not None and self.impl_id is None
        elif cat is ViolationCategory.RESOURCE_EXTRA:
            ok = self.mockup_id is None and self.impl_id is not None
        else:
            ok = self.mockup_id is not None and self.impl_id is not None
        if not ok:
            raise ValueError(f"{cat.value}: invalid id combination {self.mockup_id!r}/{self.impl_id!r}")
        if set(self.metrics) != set(CATEGORY_METRICS[cat]):
            raise ValueError(f"{cat.value}: metrics must be {CATEGORY_METRICS[cat]}, got {sorted(self.metrics)}")
        if not 0.0 <= self.severity <= 1.0:
            raise ValueError(f"severity {self.severity} outside [0, 1]")
        metrics = {k: round_sig(self.metrics[k]) for k in sorted(self.metrics)}
        object.__setattr__(self, "metrics", metrics)
        object.__setattr__(self, "severity", round_sig(self.severity))
        object.__setattr__(self, "evidence", tuple(self.evidence))


def _ramp(excess: float, scale: float) -> float:
    return min(1.0, max(0.0, excess / scale))


def detect_layout(m: GuiComponent, i: GuiComponent, cfg: Config | None = None) -> list[Violation]:
    cfg = cfg or Config()
    mb, ib = m.bounds, i.bounds
    out = []
    dx, dy = ib.x - mb.x, ib.y - mb.y
    shift = max(abs(dx), abs(dy))
    if shift > cfg.pos_tol:
        out.append(Violation(
            ViolationCategory.LAYOUT_TRANSLATION, m.id, i.id, {"dx": dx, "dy": dy},
            _ramp(shift - cfg.pos_tol, cfg.layout_severity_scale), (mb, ib),
        ))
    dw, dh = ib.w - mb.w, ib.h - mb.h
    stretch = max(abs(dw), abs(dh))
    if stretch > cfg.size_tol:
        out.append(Violation(
            ViolationCategory.LAYOUT_RESIZE, m.id, i.id, {"dw": dw, "dh": dh},
            _ramp(stretch - cfg.size_tol, cfg.layout_severity_scale), (mb, ib),
        ))
    return out


def detect_text(
    m: GuiComponent, i: GuiComponent, crop_m: ScreenImage, crop_i: ScreenImage, cfg: Config | None = None
) -> list[Violation]:
    """Text-family checks. The foreground color is approximated by the second
    most populated histogram bin, the dominant bin being the background."""
    cfg = cfg or Config()
    evidence = (m.bounds, i.bounds)
    out = []

    sim = text_similarity(m.text, i.text)
    if sim < 1.0:
        out.append(Violation(
            ViolationCategory.TEXT_CONTENT, m.id, i.id, {"text_sim": sim},
            _ramp(1.0 - sim, cfg.text_content_severity_scale), evidence,
        ))

    fg_m = secondary_color(color_histogram(crop_m))
    fg_i = secondary_color(color_histogram(crop_i))
    de = delta_e_rgb(fg_m, fg_i)
    if de > cfg.text_color_tol:
        out.append(Violation(
            ViolationCategory.TEXT_COLOR, m.id, i.id, {"delta_e": de},
            _ramp(de - cfg.text_color_tol, cfg.color_severity_scale), evidence,
        ))

    deviation = abs(i.bounds.h / m.bounds.h - 1.0)
    if deviation > cfg.text_size_tol:
        out.append(Violation(
            ViolationCategory.TEXT_SIZE, m.id, i.id, {"ratio_deviation": deviation},
            _ramp(deviation - cfg.text_size_tol, cfg.text_size_severity_scale), evidence,
        ))
    return out


def detect_resource(
    m: GuiComponent, i: GuiComponent, crop_m: ScreenImage, crop_i: ScreenImage, cfg: Config | None = None
) -> list[Violation]:
    cfg = cfg or Config()
    evidence = (m.bounds, i.bounds)
    de = delta_e_rgb(dominant_color(color_histogram(crop_m)), dominant_color(color_histogram(crop_i)))
    if de > cfg.color_tol:
        # a color shift explains the pixel difference too; report it once
        return [Violation(
            ViolationCategory.RESOURCE_COLOR, m.id, i.id, {"delta_e": de},
            _ramp(de - cfg.color_tol, cfg.color_severity_scale), evidence,
        )]
    diff = perceptual_region_diff(crop_m, crop_i, cfg.jnd)
    if diff.differing_fraction > cfg.image_tol:
        return [Violation(
            ViolationCategory.RESOURCE_IMAGE, m.id, i.id,
            {"differing_fraction": diff.differing_fraction, "mean_delta_e": diff.mean_delta_e},
            _ramp(diff.differing_fraction - cfg.image_tol, cfg.image_severity_scale), evidence,
        )]
    return []


def _fit(box: BoundingBox, size: tuple[int, int] | None) -> BoundingBox:
    """Clamp a box onto a screen of ``size``; a box entirely off it collapses to the corner pixel."""
    if size is None:
        return box
    w, h = size
    x0, y0 = min(box.x, w - 1), min(box.y, h - 1)
    return BoundingBox(x0, y0, max(1, min(box.x2, w) - x0), max(1, min(box.y2, h) - y0))


def detect_presence(
    match_result: MatchResult,
    mock_leaves: Mapping[str, GuiComponent] | None = None,
    impl_leaves: Mapping[str, GuiComponent] | None = None,
    screen_sizes: tuple[tuple[int, int], tuple[int, int]] | None = None,
) -> list[Violation]:
    """Missing and extra components.

    The evidence region is the component's own box, reused on the other
    screenshot (clamped to it when ``screen_sizes`` is given). Without leaf
    lookups a 1x1 box at the origin stands in.
    """
    placeholder = BoundingBox(0, 0, 1, 1)
    mock_size, impl_size = screen_sizes or (None, None)
    out = []
    for mid in match_result.unmatched_mockup:
        box = mock_leaves[mid].bounds if mock_leaves else placeholder
        out.append(Violation(
            ViolationCategory.RESOURCE_MISSING, mid, None, {}, 1.0, (box, _fit(box, impl_size))
        ))
    for iid in match_result.unmatched_impl:
        box = impl_leaves[iid].bounds if impl_leaves else placeholder
        out.append(Violation(
            ViolationCategory.RESOURCE_EXTRA, None, iid, {}, 1.0, (_fit(box, mock_size), box)
        ))
    return out


def detect_pair(
    m: GuiComponent, i: GuiComponent, mock_img: ScreenImage, impl_img: ScreenImage, cfg: Config
) -> list[Violation]:
    """All per-pair detectors for one matched pair."""
    found = detect_layout(m, i, cfg)
    crop_m, crop_i = crop(mock_img, m.bounds), crop(impl_img, i.bounds)
    if m.ctype in TEXT_BEARING:
        found += detect_text(m, i, crop_m, crop_i, cfg)
    else:
        found += detect_resource(m, i, crop_m, crop_i, cfg)
    return found


@dataclass
class Detection:
    """Everything one comparison produced, before it becomes a report."""

    match_result: MatchResult
    violations: list[Violation] = field(default_factory=list)


def detect(mock: ScreenPair, impl: ScreenPair, cfg: Config | None = None) -> Detection:
    cfg = cfg or Config()
    mock_leaves = leaf_components(mock.hierarchy)
    impl_leaves = leaf_components(impl.hierarchy)
    result = match_components(mock_leaves, impl_leaves, cfg)

    m_by_id = {c.id: c for c in mock_leaves}
    i_by_id = {c.id: c for c in impl_leaves}
    violations = []
    for pair in result.matches:
        violations += detect_pair(m_by_id[pair.mockup_id], i_by_id[pair.impl_id], mock.image, impl.image, cfg)
    sizes = (
        (mock.hierarchy.screen_w, mock.hierarchy.screen_h),
        (impl.hierarchy.screen_w, impl.hierarchy.screen_h),
    )
    violations += detect_presence(result, m_by_id, i_by_id, sizes)

    m_rank = {c.id: k for k, c in enumerate(mock_leaves)}
    i_rank = {c.id: len(mock_leaves) + k for k, c in enumerate(impl_leaves)}

    def order(v: Violation):
        pos = m_rank[v.mockup_id] if v.mockup_id is not None else i_rank[v.impl_id]
        return (-v.severity, pos, _CATEGORY_ORDER[v.category])

    violations.sort(key=order)
    return Detection(result, violations)


def run_detection(
    mock: ScreenPair,
    impl: ScreenPair,
    cfg: Config | None = None,
    *,
    mockup_source: str = "",
    impl_source: str = "",
    timestamp=None,
):
    """Compare two validated screens and build a :class:`~gui_verify.report.ViolationReport`."""
    from .report import ViolationReport, current_timestamp

    cfg = cfg or Config()
    detection = detect(mock, impl, cfg)
    warnings = [f"mockup: {w}" for w in mock.hierarchy.warnings]
    warnings += [f"impl: {w}" for w in impl.hierarchy.warnings]
    return ViolationReport(
        timestamp=timestamp or current_timestamp(),
        mockup_source=str(mockup_source),
        impl_source=str(impl_source),
        config_echo=cfg.to_dict(),
        match_stats=detection.match_result.stats(),
        violations=tuple(detection.violations),
        warnings=tuple(warnings),
    )
