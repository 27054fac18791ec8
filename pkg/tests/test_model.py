import io
import json
from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from PIL import Image

from conftest import meta_bytes, meta_doc
from gui_verify import errors
from gui_verify.fixture import random_screen
from gui_verify.model import (
    BoundingBox,
    ComponentType,
    Origin,
    ScreenImage,
    crop,
    dump_screen_meta,
    encode_png,
    leaf_components,
    load_screen_image,
    parse_screen_meta,
    validate_pair,
)


def text_child(cid="t1", bounds=(40, 80, 200, 48), **extra):
    return {"id": cid, "type": "TEXT", "bounds": list(bounds), "text": "hello", **extra}


def png_bytes(arr, mode=None):
    buf = io.BytesIO()
    Image.fromarray(np.asarray(arr, dtype=np.uint8), mode=mode).save(buf, format="PNG")
    return buf.getvalue()


class TestParseScreenMeta:
    def test_minimal_document(self):
        h = parse_screen_meta(meta_bytes(1080, 1920, [text_child()]))
        assert h.node_count() == 2
        leaves = leaf_components(h)
        assert [c.id for c in leaves] == ["t1"]
        assert leaves[0].bounds == BoundingBox(40, 80, 200, 48)
        assert leaves[0].text == "hello"
        assert h.warnings == ()

    def test_duplicate_id(self):
        data = meta_bytes(1080, 1920, [text_child("t1"), text_child("t1", (300, 80, 10, 10))])
        with pytest.raises(errors.SchemaViolation):
            parse_screen_meta(data)

    def test_clamped_bounds(self):
        h = parse_screen_meta(meta_bytes(1080, 1920, [text_child(bounds=(1000, 1900, 200, 100))]))
        assert h.find("t1").bounds == BoundingBox(1000, 1900, 80, 20)
        assert len(h.warnings) == 1 and "clamped" in h.warnings[0]

    def test_negative_origin_clamped(self):
        h = parse_screen_meta(meta_bytes(100, 100, [text_child(bounds=(-10, -5, 30, 30))]))
        assert h.find("t1").bounds == BoundingBox(0, 0, 20, 25)

    def test_clamp_collapsing_to_zero_is_rejected(self):
        with pytest.raises(errors.SchemaViolation):
            parse_screen_meta(meta_bytes(100, 100, [text_child(bounds=(100, 10, 5, 5))]))

    @pytest.mark.parametrize("payload", [b"{", b"not json", b"\xff\xfe"])
    def test_malformed(self, payload):
        with pytest.raises(errors.MalformedDocument):
            parse_screen_meta(payload)

    @pytest.mark.parametrize("child", [
        {"type": "TEXT", "bounds": [0, 0, 5, 5]},
        {"id": "x", "type": "TEXT"},
        {"id": "x", "type": "TEXT", "bounds": [0, 0, 0, 5]},
        {"id": "x", "type": "TEXT", "bounds": [0, 0, 5, -1]},
        {"id": "x", "type": "TEXT", "bounds": [0, 0, 5]},
        {"id": "x", "type": "TEXT", "bounds": [0, 0, "5", 5]},
        {"id": "x", "type": "TEXT", "bounds": [0, 0, 5, 5], "text": 3},
    ])
    def test_schema_violations(self, child):
        with pytest.raises(errors.SchemaViolation):
            parse_screen_meta(meta_bytes(100, 100, [child]))

    def test_missing_root(self):
        with pytest.raises(errors.EmptyScreen):
            parse_screen_meta(json.dumps({"screen": {"width": 10, "height": 10}}).encode())

    def test_missing_screen(self):
        with pytest.raises(errors.SchemaViolation):
            parse_screen_meta(b"{}")

    def test_root_must_cover_screen(self):
        doc = meta_doc(100, 100)
        doc["screen"]["root"]["bounds"] = [0, 0, 50, 100]
        with pytest.raises(errors.SchemaViolation):
            parse_screen_meta(json.dumps(doc).encode())

    def test_invisible_components_dropped(self):
        hidden = {"id": "box", "type": "CONTAINER", "bounds": [0, 0, 50, 50], "visible": False,
                  "children": [text_child("inner", (0, 0, 10, 10))]}
        h = parse_screen_meta(meta_bytes(100, 100, [hidden, text_child("t1", (0, 60, 10, 10))]))
        assert [c.id for c in h.iter_preorder()] == ["root", "t1"]

    def test_unknown_type_maps_to_other(self):
        child = {"id": "w", "type": "android.widget.Switch", "bounds": [0, 0, 5, 5], "text": "on"}
        h = parse_screen_meta(meta_bytes(10, 10, [child]))
        assert h.find("w").ctype is ComponentType.OTHER
        assert h.find("w").text is None

    def test_type_labels_case_insensitive(self):
        child = {"id": "b", "type": "button", "bounds": [0, 0, 5, 5], "text": "Go"}
        assert parse_screen_meta(meta_bytes(10, 10, [child])).find("b").ctype is ComponentType.BUTTON

    def test_round_trip_through_dump(self, clean):
        h = clean.hierarchy
        assert parse_screen_meta(dump_screen_meta(h)) == h

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**31))
    def test_deterministic(self, seed):
        data = dump_screen_meta(random_screen(seed).hierarchy)
        assert parse_screen_meta(data) == parse_screen_meta(data)


class TestLoadScreenImage:
    def test_white_png(self):
        img = load_screen_image(png_bytes(np.full((2, 2, 3), 255)))
        assert (img.width, img.height) == (2, 2)
        assert img.pixels.reshape(-1, 3).tolist() == [[255, 255, 255]] * 4

    def test_truncated(self):
        data = png_bytes(np.zeros((8, 8, 3)))
        with pytest.raises(errors.DecodeError):
            load_screen_image(data[: len(data) // 2])

    def test_not_png(self):
        buf = io.BytesIO()
        Image.new("RGB", (2, 2)).save(buf, format="BMP")
        with pytest.raises(errors.DecodeError):
            load_screen_image(buf.getvalue())

    def test_alpha_composited_over_white(self):
        img = load_screen_image(png_bytes([[[255, 0, 0, 128]]], mode="RGBA"))

        def oracle(c, a):
            alpha = Fraction(a, 255)
            value = alpha * c + (1 - alpha) * 255
            return math.floor(value + Fraction(1, 2))

        expected = [oracle(c, 128) for c in (255, 0, 0)]
        assert expected == [255, 127, 127]
        assert img.pixels[0, 0].tolist() == expected

    def test_alpha_rounding_matches_oracle_everywhere(self):
        a, c = np.meshgrid(np.arange(256), np.arange(256))
        rgba = np.stack([c, c, c, a], axis=-1).astype(np.uint8)
        got = load_screen_image(png_bytes(rgba, mode="RGBA")).pixels[..., 0]
        for ai, ci in [(0, 0), (1, 7), (128, 0), (128, 255), (200, 33), (255, 91), (77, 150)]:
            expected = math.floor(Fraction(ai, 255) * ci + (1 - Fraction(ai, 255)) * 255 + Fraction(1, 2))
            assert got[ci, ai] == expected

    def test_grayscale_png(self):
        img = load_screen_image(png_bytes(np.full((3, 4), 9), mode="L"))
        assert img.pixels.shape == (3, 4, 3) and (img.pixels == 9).all()

    def test_encode_round_trip(self, rng):
        img = ScreenImage(rng.integers(0, 256, (5, 7, 3)))
        assert load_screen_image(encode_png(img)) == img


class TestValidatePair:
    def test_matching_dimensions(self):
        h = parse_screen_meta(meta_bytes(1080, 1920))
        pair = validate_pair(h, ScreenImage.filled(1080, 1920), Origin.MOCKUP)
        assert pair.origin is Origin.MOCKUP

    def test_mismatch(self):
        h = parse_screen_meta(meta_bytes(1080, 1920))
        with pytest.raises(errors.DimensionMismatch) as info:
            validate_pair(h, ScreenImage.filled(1080, 1921), "IMPLEMENTATION")
        assert info.value.details == {"hierarchy_size": (1080, 1920), "image_size": (1080, 1921)}

    def test_degenerate_single_pixel(self):
        h = parse_screen_meta(meta_bytes(1, 1))
        assert validate_pair(h, ScreenImage.filled(1, 1), Origin.IMPLEMENTATION).image.width == 1


class TestLeaves:
    def test_flat(self):
        h = parse_screen_meta(meta_bytes(100, 100, [text_child("t1", (0, 0, 5, 5)),
                                                    {"id": "img1", "type": "IMAGE", "bounds": [10, 0, 5, 5]}]))
        assert [c.id for c in leaf_components(h)] == ["t1", "img1"]

    def test_nested(self):
        box = {"id": "box", "type": "CONTAINER", "bounds": [0, 0, 50, 50],
               "children": [text_child("t2", (0, 0, 10, 10))]}
        assert [c.id for c in leaf_components(parse_screen_meta(meta_bytes(100, 100, [box])))] == ["t2"]

    def test_bare_root(self):
        assert leaf_components(parse_screen_meta(meta_bytes(100, 100))) == []

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**31))
    def test_leaf_container_partition(self, seed):
        h = random_screen(seed).hierarchy
        leaves = leaf_components(h)
        containers = [n for n in h.iter_preorder() if n.is_container]
        assert len({c.id for c in leaves}) == len(leaves)
        if h.root.is_container:
            assert len(leaves) + len(containers) == h.node_count()
        for leaf in leaves:
            assert leaf.bounds.within(h.screen_w, h.screen_h)


class TestCrop:
    def test_identity(self, clean):
        assert crop(clean.image, clean.hierarchy.root.bounds) == clean.image

    def test_single_pixel(self):
        out = crop(ScreenImage.filled(4, 4), BoundingBox(0, 0, 1, 1))
        assert out.pixels.tolist() == [[[255, 255, 255]]]

    def test_gradient_interior(self):
        grid = np.zeros((4, 4, 3), dtype=np.uint8)
        for r in range(4):
            for c in range(4):
                grid[r, c] = (r * 10 + c, r, c)
        out = crop(ScreenImage(grid), BoundingBox(1, 1, 2, 2))
        assert out.pixels[..., 0].tolist() == [[11, 12], [21, 22]]

    def test_out_of_bounds(self):
        with pytest.raises(errors.OutOfBounds):
            crop(ScreenImage.filled(4, 4), BoundingBox(3, 3, 2, 2))

    def test_images_are_immutable(self):
        img = ScreenImage.filled(2, 2)
        with pytest.raises(ValueError):
            img.pixels[0, 0] = 0
        out = crop(img, BoundingBox(0, 0, 1, 1))
        assert not out.pixels.flags.writeable
