"""Ground-truth corpora: inject known violations into a clean screen.

The mock-up side of every case is the clean screen, untouched; the
implementation side is a copy with one (or, via :func:`inject_many`, a few)
category-specific mutations applied to its hierarchy and pixels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .config import Config
from .errors import InsufficientTargets, MutationOutOfBounds, TargetNotFound
from .fixture import render_placeholder_text
from .model import (
    TEXT_BEARING,
    BoundingBox,
    ComponentType,
    GuiComponent,
    Origin,
    ScreenHierarchy,
    ScreenImage,
    ScreenPair,
    dump_screen_meta,
    encode_png,
    leaf_components,
)
from .percept import (
    bin_centroid,
    bin_index,
    color_histogram,
    delta_e_rgb,
    dominant_color,
    resize_nearest,
    srgb_to_lab_array,
)
from .violations import ViolationCategory as VC

RESOURCE_TYPES = frozenset({ComponentType.IMAGE, ComponentType.OTHER})
# Minimum clearance between a relocated or cloned component and other leaves.
CLEARANCE = 8


@dataclass(frozen=True)
class InjectionSpec:
    category: VC
    target_id: str
    # Pixels for layout, delta-E for color, pixel fraction for image, height
    # ratio for text size, fraction of rewritten characters for text content.
    # None means "tolerance x margin".
    magnitude: float | None = None


@dataclass(frozen=True)
class GroundTruth:
    category: VC
    mockup_id: str | None
    impl_id: str | None

    def as_dict(self) -> dict:
        return {"category": self.category.value, "mockup_id": self.mockup_id, "impl_id": self.impl_id}


@dataclass(frozen=True)
class InjectedCase:
    mockup: ScreenPair
    impl: ScreenPair
    ground_truth: tuple[GroundTruth, ...]
    # Screen regions whose pixels may differ from the clean screen.
    regions: tuple[BoundingBox, ...] = ()
    name: str = ""


def default_magnitude(category: VC, cfg: Config | None = None, margin: float = 2.0) -> float:
    """Injection strength that clears the detector tolerance by ``margin``."""
    cfg = cfg or Config()
    if category is VC.LAYOUT_TRANSLATION:
        return max(1, math.ceil(margin * cfg.pos_tol))
    if category is VC.LAYOUT_RESIZE:
        return max(1, math.ceil(margin * cfg.size_tol))
    if category is VC.TEXT_COLOR:
        return margin * cfg.text_color_tol
    if category is VC.RESOURCE_COLOR:
        return margin * cfg.color_tol
    if category is VC.RESOURCE_IMAGE:
        return min(1.0, margin * cfg.image_tol)
    if category is VC.TEXT_SIZE:
        return min(0.9, margin * cfg.text_size_tol)
    if category is VC.TEXT_CONTENT:
        return 0.25
    return 1.0


# --------------------------------------------------------------------------
# hierarchy edits

def _edit(node: GuiComponent, target: str, fn) -> GuiComponent | None:
    if node.id == target:
        return fn(node)
    if not node.children:
        return node
    children = []
    for child in node.children:
        new = _edit(child, target, fn)
        if new is None:
            continue
        # a container emptied by the edit would turn into a spurious leaf
        if child.children and not new.children:
            continue
        children.append(new)
    return GuiComponent(node.id, node.ctype, node.bounds, node.text, tuple(children))


def _with_bounds(c: GuiComponent, box: BoundingBox, text=None) -> GuiComponent:
    return GuiComponent(c.id, c.ctype, box, c.text if text is None else text, c.children)


def _ranked_colors(region: np.ndarray) -> list[tuple[int, int, int]]:
    """Exact colors of ``region`` by frequency, ties by packed value."""
    packed = (region[..., 0].astype(np.int64) << 16) | (region[..., 1].astype(np.int64) << 8) | region[..., 2]
    values, counts = np.unique(packed.ravel(), return_counts=True)
    order = np.lexsort((values, -counts))
    return [(int(v >> 16), int((v >> 8) & 255), int(v & 255)) for v in values[order]]


def _text_colors(region: np.ndarray):
    ranked = _ranked_colors(region)
    return ranked[0], ranked[1] if len(ranked) > 1 else ranked[0]


def _redraw(px: np.ndarray, comp: GuiComponent, box: BoundingBox, text: str | None = None) -> None:
    """Redraw ``comp`` into ``box``; text as placeholder glyphs, anything else by resampling."""
    old = px[comp.bounds.y:comp.bounds.y2, comp.bounds.x:comp.bounds.x2].copy()
    if comp.ctype in TEXT_BEARING:
        bg, fg = _text_colors(old)
        render_placeholder_text(px[box.y:box.y2, box.x:box.x2], comp.text if text is None else text, bg, fg)
    else:
        px[box.y:box.y2, box.x:box.x2] = resize_nearest(old, box.h, box.w)


def _pick_color(rng, avoid_bins: set[int], away_from: Sequence, min_de: float) -> tuple[int, int, int]:
    """A bin-centroid color outside ``avoid_bins`` at least ``min_de`` from every color in ``away_from``."""
    for index in rng.permutation(4096):
        if int(index) in avoid_bins:
            continue
        color = bin_centroid(int(index))
        if all(delta_e_rgb(color, c) >= min_de for c in away_from):
            return color
    raise MutationOutOfBounds(f"no color at delta-E >= {min_de} from {list(away_from)}")


def _perturb_within_bin(region: np.ndarray) -> np.ndarray:
    """Push each channel to the far end of its 4-bit bin; the histogram is unchanged."""
    low = region & 0x0F
    return np.where(low < 8, region | 0x0F, region & 0xF0).astype(np.uint8)


def _free_positions(h: ScreenHierarchy, w: int, hgt: int, exclude: str | None = None, step: int = 8):
    """Top-left corners on a grid where a ``w`` x ``hgt`` box clears every leaf."""
    if w > h.screen_w or hgt > h.screen_h:
        return np.empty((0, 2), dtype=int)
    xs = np.arange(0, h.screen_w - w + 1, step)
    ys = np.arange(0, h.screen_h - hgt + 1, step)
    free = np.ones((len(ys), len(xs)), dtype=bool)
    for leaf in leaf_components(h):
        if leaf.id == exclude:
            continue
        b = leaf.bounds
        x_hit = (xs < b.x2 + CLEARANCE) & (xs + w > b.x - CLEARANCE)
        y_hit = (ys < b.y2 + CLEARANCE) & (ys + hgt > b.y - CLEARANCE)
        free &= ~(y_hit[:, None] & x_hit[None, :])
    yi, xi = np.nonzero(free)
    return np.stack([xs[xi], ys[yi]], axis=1)


def _clear_of_leaves(h: ScreenHierarchy, box: BoundingBox, exclude: str) -> bool:
    return not any(leaf.id != exclude and leaf.bounds.intersects(box) for leaf in leaf_components(h))


# --------------------------------------------------------------------------
# injection

def _target(h: ScreenHierarchy, target_id: str) -> GuiComponent:
    node = h.find(target_id)
    if node is None:
        raise TargetNotFound(f"no component '{target_id}'")
    if node.is_container or node is h.root:
        raise TargetNotFound(f"component '{target_id}' is not a leaf")
    return node


def _require_type(comp: GuiComponent, category: VC, allowed) -> None:
    if comp.ctype not in allowed:
        raise TargetNotFound(f"{category.value} needs a {'/'.join(t.value for t in allowed)} target, "
                             f"'{comp.id}' is {comp.ctype.value}")


def _apply(h: ScreenHierarchy, px: np.ndarray, spec: InjectionSpec, rng, cfg: Config, margin: float):
    """Mutate ``px`` in place; return (new hierarchy, ground truth, regions)."""
    cat = VC(spec.category)
    comp = _target(h, spec.target_id)
    mag = default_magnitude(cat, cfg, margin) if spec.magnitude is None else spec.magnitude
    b = comp.bounds
    bg_screen = dominant_color(color_histogram(ScreenImage(px)))
    gt = [GroundTruth(cat, comp.id, comp.id)]

    def set_bounds(box, text=None):
        return ScreenHierarchy(h.screen_w, h.screen_h, _edit(h.root, comp.id, lambda c: _with_bounds(c, box, text)))

    if cat is VC.LAYOUT_TRANSLATION:
        shift = int(round(mag))
        if not 0 <= b.x + shift <= h.screen_w - b.w:
            raise MutationOutOfBounds(f"shifting '{comp.id}' by {shift}px leaves the screen")
        nb = BoundingBox(b.x + shift, b.y, b.w, b.h)
        pixels = px[b.y:b.y2, b.x:b.x2].copy()
        px[b.y:b.y2, b.x:b.x2] = bg_screen
        px[nb.y:nb.y2, nb.x:nb.x2] = pixels
        return set_bounds(nb), gt, (b, nb)

    if cat is VC.LAYOUT_RESIZE:
        shrink = int(round(mag))
        if b.w - shrink < 1:
            raise MutationOutOfBounds(f"cannot shrink '{comp.id}' ({b.w}px wide) by {shrink}px")
        nb = BoundingBox(b.x, b.y, b.w - shrink, b.h)
        _redraw(px, comp, nb)
        px[b.y:b.y2, nb.x2:b.x2] = bg_screen
        return set_bounds(nb), gt, (b,)

    if cat is VC.TEXT_SIZE:
        _require_type(comp, cat, TEXT_BEARING)
        new_h = int(round(b.h * (1.0 - mag)))
        if new_h < 1:
            raise MutationOutOfBounds(f"cannot shrink '{comp.id}' height {b.h} by ratio {mag}")
        nb = BoundingBox(b.x, b.y, b.w, new_h)
        _redraw(px, comp, nb)
        px[nb.y2:b.y2, b.x:b.x2] = bg_screen
        if abs(new_h - b.h) > cfg.size_tol:
            # the text box itself shrinks, which the layout detector sees too
            gt.append(GroundTruth(VC.LAYOUT_RESIZE, comp.id, comp.id))
        return set_bounds(nb), gt, (b,)

    if cat is VC.TEXT_CONTENT:
        _require_type(comp, cat, TEXT_BEARING)
        text = comp.text or ""
        if not text:
            raise TargetNotFound(f"'{comp.id}' has no text to rewrite")
        chars = list(text)
        n_edit = max(1, int(round(mag * len(chars))))
        for pos in rng.choice(len(chars), size=min(n_edit, len(chars)), replace=False):
            options = [c for c in "abcdefghijklmnopqrstuvwxyz" if c != chars[pos].lower()]
            chars[pos] = options[int(rng.integers(len(options)))]
        new_text = "".join(chars)
        _redraw(px, comp, b, new_text)
        return set_bounds(b, new_text), gt, (b,)

    region = px[b.y:b.y2, b.x:b.x2]
    bins = bin_index(region)
    present = set(np.unique(bins).tolist())

    if cat is VC.TEXT_COLOR:
        _require_type(comp, cat, TEXT_BEARING)
        ranked = color_histogram(ScreenImage(region)).ranked_bins()
        if len(ranked) < 2:
            raise TargetNotFound(f"'{comp.id}' has no foreground color")
        fg_bin, bg_bin = int(ranked[1]), int(ranked[0])
        color = _pick_color(rng, present, [bin_centroid(fg_bin), bin_centroid(bg_bin)], mag)
        region[bins == fg_bin] = color
        return h, gt, (b,)

    if cat is VC.RESOURCE_COLOR:
        _require_type(comp, cat, RESOURCE_TYPES)
        dom = int(color_histogram(ScreenImage(region)).ranked_bins()[0])
        color = _pick_color(rng, present, [bin_centroid(dom)], mag)
        region[bins == dom] = color
        return h, gt, (b,)

    if cat is VC.RESOURCE_IMAGE:
        _require_type(comp, cat, RESOURCE_TYPES)
        altered = _perturb_within_bin(region)
        de = np.sqrt(((srgb_to_lab_array(region) - srgb_to_lab_array(altered)) ** 2).sum(axis=-1))
        eligible = np.flatnonzero(de.ravel() > cfg.jnd)
        need = int(math.ceil(mag * b.area))
        if len(eligible) < need:
            raise MutationOutOfBounds(f"'{comp.id}' has only {len(eligible)} alterable pixels, need {need}")
        chosen = np.sort(rng.choice(eligible, size=need, replace=False))
        flat = region.reshape(-1, 3).copy()
        flat[chosen] = altered.reshape(-1, 3)[chosen]
        region[...] = flat.reshape(region.shape)
        return h, gt, (b,)

    if cat is VC.RESOURCE_MISSING:
        px[b.y:b.y2, b.x:b.x2] = bg_screen
        root = _edit(h.root, comp.id, lambda c: None)
        return ScreenHierarchy(h.screen_w, h.screen_h, root), [GroundTruth(cat, comp.id, None)], (b,)

    if cat is VC.RESOURCE_EXTRA:
        spots = _free_positions(h, b.w, b.h)
        if len(spots) == 0:
            raise MutationOutOfBounds(f"no free space for a copy of '{comp.id}'")
        x, y = (int(v) for v in spots[int(rng.integers(len(spots)))])
        nb = BoundingBox(x, y, b.w, b.h)
        px[nb.y:nb.y2, nb.x:nb.x2] = px[b.y:b.y2, b.x:b.x2].copy()
        new_id = f"{comp.id}_extra"
        while h.find(new_id) is not None:
            new_id += "_"
        clone = GuiComponent(new_id, comp.ctype, nb, comp.text)
        root = GuiComponent(h.root.id, h.root.ctype, h.root.bounds, h.root.text, h.root.children + (clone,))
        return ScreenHierarchy(h.screen_w, h.screen_h, root), [GroundTruth(cat, None, new_id)], (nb,)

    raise ValueError(f"unsupported category {cat}")


def inject_many(clean: ScreenPair, specs: Sequence[InjectionSpec], seed: int,
                cfg: Config | None = None, margin: float = 2.0, name: str = "") -> InjectedCase:
    """Apply several mutations, in order, to one copy of ``clean``."""
    cfg = cfg or Config()
    rng = np.random.default_rng(seed)
    h = clean.hierarchy
    px = clean.image.pixels.copy()
    truth, regions = [], []
    for spec in specs:
        h, gt, touched = _apply(h, px, spec, rng, cfg, margin)
        truth += gt
        regions += touched
    mock = ScreenPair(clean.hierarchy, clean.image, Origin.MOCKUP)
    impl = ScreenPair(h, ScreenImage(px), Origin.IMPLEMENTATION)
    return InjectedCase(mock, impl, tuple(truth), tuple(regions), name)


def inject(clean: ScreenPair, spec: InjectionSpec, seed: int, cfg: Config | None = None,
           margin: float = 2.0, name: str = "") -> InjectedCase:
    """Inject one violation. ``cfg`` sets the magnitudes (tolerance x ``margin``)."""
    return inject_many(clean, [spec], seed, cfg, margin, name)


# --------------------------------------------------------------------------
# suites

def eligible_targets(clean: ScreenPair, category: VC, cfg: Config | None = None,
                     margin: float = 2.0) -> list[str]:
    """Leaves that ``category`` can be injected into without disturbing any other leaf."""
    cfg = cfg or Config()
    h = clean.hierarchy
    mag = default_magnitude(category, cfg, margin)
    out = []
    for leaf in leaf_components(h):
        b = leaf.bounds
        if category is VC.LAYOUT_TRANSLATION:
            nb_x = b.x + int(round(mag))
            ok = nb_x + b.w <= h.screen_w and _clear_of_leaves(h, BoundingBox(nb_x, b.y, b.w, b.h), leaf.id)
        elif category is VC.LAYOUT_RESIZE:
            ok = b.w > 2 * mag
        elif category in (VC.TEXT_SIZE, VC.TEXT_CONTENT):
            ok = leaf.ctype in TEXT_BEARING and bool(leaf.text and leaf.text.strip()) and b.h * (1 - mag) >= 1
            if category is VC.TEXT_SIZE:
                ok = ok and abs(round(b.h * (1 - mag)) / b.h - 1) > cfg.text_size_tol
        elif category is VC.TEXT_COLOR:
            region = clean.image.pixels[b.y:b.y2, b.x:b.x2]
            ok = leaf.ctype in TEXT_BEARING and len(color_histogram(ScreenImage(region)).ranked_bins()) >= 2
        elif category is VC.RESOURCE_COLOR:
            ok = leaf.ctype in RESOURCE_TYPES
        elif category is VC.RESOURCE_IMAGE:
            region = clean.image.pixels[b.y:b.y2, b.x:b.x2]
            altered = _perturb_within_bin(region)
            de = np.sqrt(((srgb_to_lab_array(region) - srgb_to_lab_array(altered)) ** 2).sum(axis=-1))
            ok = leaf.ctype in RESOURCE_TYPES and (de > cfg.jnd).sum() >= math.ceil(mag * b.area)
        elif category is VC.RESOURCE_MISSING:
            ok = True
        elif category is VC.RESOURCE_EXTRA:
            ok = len(_free_positions(h, b.w, b.h)) > 0
        else:
            ok = False
        if ok:
            out.append(leaf.id)
    return out


def generate_suite(clean: ScreenPair, counts: Mapping, seed: int, cfg: Config | None = None,
                   margin: float = 2.0) -> list[InjectedCase]:
    """One single-mutation case per requested count, deterministic in ``seed``.

    Within a category, targets are drawn without replacement from the
    eligible leaves.
    """
    cfg = cfg or Config()
    rng = np.random.default_rng(seed)
    cases = []
    for category in VC:
        n = int(counts.get(category, counts.get(category.value, 0)))
        if n <= 0:
            continue
        pool = eligible_targets(clean, category, cfg, margin)
        if len(pool) < n:
            raise InsufficientTargets(
                f"{category.value}: {n} cases requested but only {len(pool)} eligible leaves"
            )
        targets = [pool[k] for k in rng.choice(len(pool), size=n, replace=False)]
        for k, target in enumerate(targets):
            case_seed = int(rng.integers(2**32))
            name = f"{category.value.lower()}_{k:02d}_{target}"
            cases.append(inject(clean, InjectionSpec(category, target), case_seed, cfg, margin, name))
    return cases


def write_suite(cases: Sequence[InjectedCase], outdir) -> Path:
    """Write every case's screens plus a ``manifest.json`` usable by ``batch``."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    records = []
    for k, case in enumerate(cases):
        name = case.name or f"case_{k:03d}"
        case_dir = out / name
        case_dir.mkdir(exist_ok=True)
        files = {
            "mock_img": ("mock.png", encode_png(case.mockup.image)),
            "mock_meta": ("mock.json", dump_screen_meta(case.mockup.hierarchy)),
            "impl_img": ("impl.png", encode_png(case.impl.image)),
            "impl_meta": ("impl.json", dump_screen_meta(case.impl.hierarchy)),
        }
        record = {"name": name}
        for key, (fname, data) in files.items():
            (case_dir / fname).write_bytes(data)
            record[key] = f"{name}/{fname}"
        record["ground_truth"] = [g.as_dict() for g in case.ground_truth]
        records.append(record)
    manifest = out / "manifest.json"
    manifest.write_text(json.dumps({"pairs": records}, indent=2) + "\n")
    return manifest
