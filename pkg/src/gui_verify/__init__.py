"""Detect GUI design violations between a screen mock-up and its implementation.

Both screens arrive as a PNG screenshot plus a JSON component hierarchy. The
hierarchies are matched leaf by leaf, each matched pair is compared
geometrically and perceptually (CIE L*a*b*, delta-E), and every discrepancy is
classified into a fixed nine-category taxonomy and written to a report.
"""

__version__ = "0.1.0"

from .config import Config, load_config, parse_config
from .errors import GuiVerifyError
from .matching import ComponentMatch, MatchResult, iou, match_components, similarity, text_similarity
from .model import (
    BoundingBox,
    ComponentType,
    GuiComponent,
    Origin,
    ScreenHierarchy,
    ScreenImage,
    ScreenPair,
    crop,
    leaf_components,
    load_screen_image,
    load_screen_pair,
    parse_screen_meta,
    validate_pair,
)
from .percept import (
    LabColor,
    color_histogram,
    delta_e,
    dominant_color,
    histogram_intersection,
    perceptual_region_diff,
    srgb_to_lab,
)
from .violations import Violation, ViolationCategory, run_detection
from .report import ViolationReport, annotate_image, from_json, render_html, to_json

__all__ = [
    "BoundingBox",
    "ComponentMatch",
    "ComponentType",
    "Config",
    "GuiComponent",
    "GuiVerifyError",
    "LabColor",
    "MatchResult",
    "Origin",
    "ScreenHierarchy",
    "ScreenImage",
    "ScreenPair",
    "Violation",
    "ViolationCategory",
    "ViolationReport",
    "annotate_image",
    "color_histogram",
    "crop",
    "delta_e",
    "dominant_color",
    "from_json",
    "histogram_intersection",
    "iou",
    "leaf_components",
    "load_config",
    "load_screen_image",
    "load_screen_pair",
    "match_components",
    "parse_config",
    "parse_screen_meta",
    "perceptual_region_diff",
    "render_html",
    "run_detection",
    "similarity",
    "srgb_to_lab",
    "text_similarity",
    "to_json",
    "validate_pair",
]
