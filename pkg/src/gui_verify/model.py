"""Screen data model: component hierarchies, screenshots, and their pairing.

A screen is described by two inputs, a PNG screenshot and a JSON metadata
document listing the component tree with pixel bounding boxes::

    {"screen": {"width": 1080, "height": 1920,
                "root": {"id": "root", "type": "CONTAINER",
                         "bounds": [0, 0, 1080, 1920],
                         "children": [...]}}}
"""

from __future__ import annotations

import enum
import io
import json
import logging
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from PIL import Image

from .errors import (
    DecodeError,
    DimensionMismatch,
    EmptyScreen,
    MalformedDocument,
    OutOfBounds,
    SchemaViolation,
    ZeroDimension,
)

log = logging.getLogger(__name__)


class ComponentType(str, enum.Enum):
    TEXT = "TEXT"
    BUTTON = "BUTTON"
    IMAGE = "IMAGE"
    INPUT = "INPUT"
    CONTAINER = "CONTAINER"
    OTHER = "OTHER"

    @classmethod
    def from_label(cls, label) -> "ComponentType":
        """Map a metadata label onto the closed set; unknown labels become OTHER."""
        if isinstance(label, str):
            try:
                return cls(label.strip().upper())
            except ValueError:
                pass
        return cls.OTHER


TEXT_BEARING = frozenset({ComponentType.TEXT, ComponentType.BUTTON, ComponentType.INPUT})


class Origin(str, enum.Enum):
    MOCKUP = "MOCKUP"
    IMPLEMENTATION = "IMPLEMENTATION"


@dataclass(frozen=True)
class BoundingBox:
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise SchemaViolation(f"bounding box {self.as_list()} has nonpositive size")
        if self.x < 0 or self.y < 0:
            raise SchemaViolation(f"bounding box {self.as_list()} has negative origin")

    @property
    def x2(self) -> int:
        return self.x + self.w

    @property
    def y2(self) -> int:
        return self.y + self.h

    @property
    def area(self) -> int:
        return self.w * self.h

    def as_list(self) -> list[int]:
        return [self.x, self.y, self.w, self.h]

    def within(self, width: int, height: int) -> bool:
        return self.x >= 0 and self.y >= 0 and self.x2 <= width and self.y2 <= height

    def intersects(self, other: "BoundingBox") -> bool:
        return (
            self.x < other.x2 and other.x < self.x2 and self.y < other.y2 and other.y < self.y2
        )


@dataclass(frozen=True)
class GuiComponent:
    id: str
    ctype: ComponentType
    bounds: BoundingBox
    text: str | None = None
    children: tuple["GuiComponent", ...] = ()

    @property
    def is_container(self) -> bool:
        return len(self.children) > 0

    def iter_preorder(self) -> Iterator["GuiComponent"]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


@dataclass(frozen=True)
class ScreenHierarchy:
    screen_w: int
    screen_h: int
    root: GuiComponent
    # Non-fatal notes produced while parsing, e.g. clamped bounds.
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def iter_preorder(self) -> Iterator[GuiComponent]:
        return self.root.iter_preorder()

    def node_count(self) -> int:
        return sum(1 for _ in self.iter_preorder())

    def find(self, component_id: str) -> GuiComponent | None:
        for node in self.iter_preorder():
            if node.id == component_id:
                return node
        return None


class ScreenImage:
    """Immutable RGB8 screenshot backed by a read-only ``(height, width, 3)`` array."""

    __slots__ = ("pixels",)

    def __init__(self, pixels):
        arr = np.array(pixels, dtype=np.uint8, copy=True)
        if arr.ndim != 3 or arr.shape[2] != 3:
            raise ValueError(f"expected an (h, w, 3) array, got shape {arr.shape}")
        if arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ZeroDimension(f"image has zero dimension {arr.shape[1]}x{arr.shape[0]}")
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ScreenImage is immutable")

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScreenImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and np.array_equal(self.pixels, other.pixels)

    def __hash__(self):
        return hash((self.pixels.shape, self.pixels.tobytes()))

    def __repr__(self) -> str:
        return f"ScreenImage({self.width}x{self.height})"

    @classmethod
    def filled(cls, width: int, height: int, rgb=(255, 255, 255)) -> "ScreenImage":
        arr = np.empty((height, width, 3), dtype=np.uint8)
        arr[...] = rgb
        return cls(arr)


@dataclass(frozen=True)
class ScreenPair:
    hierarchy: ScreenHierarchy
    image: ScreenImage
    origin: Origin = Origin.MOCKUP

    def __post_init__(self):
        h, img = self.hierarchy, self.image
        if (h.screen_w, h.screen_h) != (img.width, img.height):
            raise DimensionMismatch(
                f"hierarchy is {h.screen_w}x{h.screen_h} but image is {img.width}x{img.height}",
                hierarchy_size=(h.screen_w, h.screen_h),
                image_size=(img.width, img.height),
            )


# --------------------------------------------------------------------------
# Metadata parsing

def _require_int(value, what: str) -> int:
    if isinstance(value, bool):
        raise SchemaViolation(f"{what} must be an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise SchemaViolation(f"{what} must be an integer, got {value!r}")


class _Parser:
    def __init__(self, width: int, height: int):
        self.width = width
        self.height = height
        self.seen: set[str] = set()
        self.warnings: list[str] = []

    def component(self, doc, path: str, is_root: bool = False) -> GuiComponent | None:
        if not isinstance(doc, dict):
            raise SchemaViolation(f"{path}: component must be an object")
        visible = doc.get("visible", True)
        if not isinstance(visible, bool):
            raise SchemaViolation(f"{path}: 'visible' must be a boolean")
        cid = doc.get("id")
        if not isinstance(cid, str) or not cid:
            raise SchemaViolation(f"{path}: missing or empty 'id'")
        if not visible:
            if is_root:
                raise EmptyScreen("root component is not visible")
            return None
        if cid in self.seen:
            raise SchemaViolation(f"{path}: duplicate id '{cid}'")
        self.seen.add(cid)

        ctype = ComponentType.from_label(doc.get("type"))
        bounds = self.bounds(doc.get("bounds"), cid, is_root)

        text = doc.get("text")
        if text is not None and not isinstance(text, str):
            raise SchemaViolation(f"component '{cid}': 'text' must be a string")
        if ctype not in TEXT_BEARING:
            text = None

        raw_children = doc.get("children", [])
        if raw_children is None:
            raw_children = []
        if not isinstance(raw_children, list):
            raise SchemaViolation(f"component '{cid}': 'children' must be a list")
        children = []
        for k, child_doc in enumerate(raw_children):
            child = self.component(child_doc, f"{path}.children[{k}]")
            if child is not None:
                children.append(child)
        return GuiComponent(cid, ctype, bounds, text, tuple(children))

    def bounds(self, raw, cid: str, is_root: bool) -> BoundingBox:
        if not isinstance(raw, list) or len(raw) != 4:
            raise SchemaViolation(f"component '{cid}': 'bounds' must be [x, y, w, h]")
        x, y, w, h = (_require_int(v, f"component '{cid}' bounds") for v in raw)
        if w < 1 or h < 1:
            raise SchemaViolation(f"component '{cid}': nonpositive size {w}x{h}")
        if is_root:
            if (x, y, w, h) != (0, 0, self.width, self.height):
                raise SchemaViolation(
                    f"root bounds {[x, y, w, h]} must cover the screen "
                    f"[0, 0, {self.width}, {self.height}]"
                )
            return BoundingBox(x, y, w, h)
        x0, y0 = max(0, x), max(0, y)
        x1, y1 = min(self.width, x + w), min(self.height, y + h)
        if x1 - x0 < 1 or y1 - y0 < 1:
            raise SchemaViolation(f"component '{cid}': bounds {[x, y, w, h]} lie off-screen")
        clamped = BoundingBox(x0, y0, x1 - x0, y1 - y0)
        if clamped.as_list() != [x, y, w, h]:
            msg = f"component '{cid}': bounds {[x, y, w, h]} clamped to {clamped.as_list()}"
            log.warning(msg)
            self.warnings.append(msg)
        return clamped


def parse_screen_meta(data: bytes | str) -> ScreenHierarchy:
    """Parse and validate a metadata document into a :class:`ScreenHierarchy`.

    Components marked ``"visible": false`` are dropped along with their
    subtrees. Child bounds that stick out of the screen are clamped and a
    warning is recorded on the hierarchy.
    """
    try:
        text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
        doc = json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedDocument(str(exc)) from exc

    if not isinstance(doc, dict) or not isinstance(doc.get("screen"), dict):
        raise SchemaViolation("document must contain a 'screen' object")
    screen = doc["screen"]
    width = _require_int(screen.get("width"), "screen width")
    height = _require_int(screen.get("height"), "screen height")
    if width < 1 or height < 1:
        raise SchemaViolation(f"screen size {width}x{height} must be positive")
    if screen.get("root") is None:
        raise EmptyScreen("screen has no root component")

    parser = _Parser(width, height)
    root = parser.component(screen["root"], "screen.root", is_root=True)
    return ScreenHierarchy(width, height, root, tuple(parser.warnings))


def _component_doc(c: GuiComponent) -> dict:
    doc = {"id": c.id, "type": c.ctype.value, "bounds": c.bounds.as_list()}
    if c.text is not None:
        doc["text"] = c.text
    if c.children:
        doc["children"] = [_component_doc(ch) for ch in c.children]
    return doc


def dump_screen_meta(h: ScreenHierarchy) -> bytes:
    """Inverse of :func:`parse_screen_meta`."""
    doc = {"screen": {"width": h.screen_w, "height": h.screen_h, "root": _component_doc(h.root)}}
    return json.dumps(doc, indent=1).encode("utf-8")


# --------------------------------------------------------------------------
# Images

def composite_over_white(rgba: np.ndarray) -> np.ndarray:
    """Blend an RGBA8 array over white, rounding half up."""
    rgba = rgba.astype(np.int64)
    a = rgba[..., 3:4]
    num = a * rgba[..., :3] + (255 - a) * 255
    return ((2 * num + 255) // 510).astype(np.uint8)


def load_screen_image(data: bytes) -> ScreenImage:
    try:
        with Image.open(io.BytesIO(data)) as im:
            if im.format != "PNG":
                raise DecodeError(f"expected PNG data, got {im.format}")
            im.load()
            if im.width == 0 or im.height == 0:
                raise ZeroDimension("image has zero dimension")
            has_alpha = im.mode in ("RGBA", "LA", "PA") or "transparency" in im.info
            if has_alpha:
                arr = composite_over_white(np.asarray(im.convert("RGBA")))
            else:
                arr = np.asarray(im.convert("RGB"))
    except (DecodeError, ZeroDimension):
        raise
    except Exception as exc:  # PIL raises a zoo of exception types on bad data
        raise DecodeError(f"cannot decode PNG: {exc}") from exc
    return ScreenImage(arr)


def encode_png(img: ScreenImage) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(np.ascontiguousarray(img.pixels), mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def validate_pair(h: ScreenHierarchy, img: ScreenImage, origin=Origin.MOCKUP) -> ScreenPair:
    return ScreenPair(h, img, Origin(origin))


def leaf_components(h: ScreenHierarchy) -> list[GuiComponent]:
    """Leaves of the hierarchy in pre-order. A bare root yields ``[]``."""
    if not h.root.is_container:
        return []
    return [node for node in h.iter_preorder() if not node.is_container]


def crop(img: ScreenImage, b: BoundingBox) -> ScreenImage:
    if not b.within(img.width, img.height):
        raise OutOfBounds(f"box {b.as_list()} exceeds image {img.width}x{img.height}")
    return ScreenImage(img.pixels[b.y:b.y2, b.x:b.x2])


def load_screen_pair(img_path, meta_path, origin=Origin.MOCKUP) -> ScreenPair:
    """Read a (PNG, metadata) pair from disk and validate it."""
    with open(meta_path, "rb") as fh:
        hierarchy = parse_screen_meta(fh.read())
    with open(img_path, "rb") as fh:
        image = load_screen_image(fh.read())
    return validate_pair(hierarchy, image, origin)
