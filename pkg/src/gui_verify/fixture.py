"""Procedurally drawn screens: the bundled login-screen fixture and random screens.

Text is drawn as placeholder glyphs, one solid block per non-space character,
so rendering never depends on a font stack.
"""

from __future__ import annotations

import string

import numpy as np

from .model import (
    BoundingBox,
    ComponentType,
    GuiComponent,
    Origin,
    ScreenHierarchy,
    ScreenImage,
    ScreenPair,
)

T = ComponentType


def render_placeholder_text(region: np.ndarray, text: str | None, bg, fg) -> None:
    """Fill ``region`` (an ``(h, w, 3)`` view) with ``bg`` and draw ``text`` as glyph blocks.

    Glyphs cover at most 36% of the region, so the background stays the
    dominant color.
    """
    region[...] = bg
    if not text:
        return
    h, w = region.shape[:2]
    n = len(text)
    cell = min(h * 0.5, w / n)
    block_w = max(1, int(cell * 0.6))
    block_h = max(1, int(h * 0.6))
    x_start = (w - n * cell) / 2
    y0 = (h - block_h) // 2
    for k, ch in enumerate(text):
        if ch.isspace():
            continue
        x = int(x_start + k * cell + cell * 0.2)
        region[y0:y0 + block_h, x:min(w, x + block_w)] = fg


# --------------------------------------------------------------------------
# Login screen

SCREEN_W, SCREEN_H = 1080, 1920
BACKGROUND = (250, 250, 250)
INK = (33, 33, 33)
MUTED = (117, 117, 117)
PRIMARY = (25, 118, 210)
FIELD = (236, 239, 241)
STATUS_BAR = (38, 50, 56)
WHITE = (255, 255, 255)


def _leaf(cid, ctype, box, text=None):
    return GuiComponent(cid, ctype, BoundingBox(*box), text)


def _container(cid, box, children):
    return GuiComponent(cid, T.CONTAINER, BoundingBox(*box), None, tuple(children))


def login_hierarchy() -> ScreenHierarchy:
    status = _container("status_bar", (0, 0, 1080, 72), [
        _leaf("clock", T.TEXT, (24, 16, 120, 40), "9:41"),
        _leaf("wifi_icon", T.IMAGE, (900, 18, 36, 36)),
        _leaf("battery_icon", T.IMAGE, (960, 18, 48, 36)),
    ])
    header = _container("header", (0, 160, 1080, 420), [
        _leaf("logo", T.IMAGE, (440, 180, 200, 200)),
        _leaf("title", T.TEXT, (140, 420, 800, 80), "Welcome back"),
        _leaf("subtitle", T.TEXT, (190, 510, 700, 50), "Sign in to continue"),
    ])
    form = _container("form", (40, 600, 1000, 640), [
        _leaf("email_label", T.TEXT, (80, 620, 200, 40), "Email"),
        _leaf("email_input", T.INPUT, (80, 670, 920, 110), "you@example.com"),
        _leaf("password_label", T.TEXT, (80, 820, 260, 40), "Password"),
        _leaf("password_input", T.INPUT, (80, 870, 820, 110), "********"),
        _leaf("eye_icon", T.IMAGE, (930, 895, 60, 60)),
        _leaf("remember_check", T.OTHER, (80, 1010, 44, 44)),
        _leaf("remember_text", T.TEXT, (140, 1012, 300, 40), "Remember me"),
        _leaf("forgot_link", T.TEXT, (620, 1012, 380, 40), "Forgot password?"),
        _leaf("login_button", T.BUTTON, (80, 1100, 920, 120), "Log in"),
    ])
    divider = _container("divider", (40, 1260, 1000, 60), [
        _leaf("divider_left", T.OTHER, (80, 1290, 380, 6)),
        _leaf("or_text", T.TEXT, (510, 1272, 60, 40), "or"),
        _leaf("divider_right", T.OTHER, (620, 1290, 380, 6)),
    ])
    social = _container("social", (140, 1340, 800, 160), [
        _leaf("google_button", T.IMAGE, (180, 1360, 120, 120)),
        _leaf("facebook_button", T.IMAGE, (480, 1360, 120, 120)),
        _leaf("apple_button", T.IMAGE, (780, 1360, 120, 120)),
    ])
    signup = _container("signup", (160, 1540, 760, 80), [
        _leaf("signup_text", T.TEXT, (200, 1560, 260, 44), "New here?"),
        _leaf("signup_link", T.TEXT, (480, 1560, 380, 44), "Create account"),
    ])
    footer = _container("footer", (0, 1740, 1080, 120), [
        _leaf("footer_logo", T.IMAGE, (80, 1760, 100, 60)),
        _leaf("terms_text", T.TEXT, (220, 1770, 480, 40), "Terms and privacy"),
        _leaf("help_icon", T.IMAGE, (920, 1760, 80, 80)),
    ])
    root = _container("root", (0, 0, SCREEN_W, SCREEN_H),
                      [status, header, form, divider, social, signup, footer])
    return ScreenHierarchy(SCREEN_W, SCREEN_H, root)


def _disc(region, color, inset=0):
    h, w = region.shape[:2]
    yy, xx = np.mgrid[0:h, 0:w]
    cy, cx = (h - 1) / 2, (w - 1) / 2
    r = min(h, w) / 2 - inset
    region[(yy - cy) ** 2 + (xx - cx) ** 2 <= r * r] = color


def _draw_login(h: ScreenHierarchy) -> np.ndarray:
    px = np.empty((h.screen_h, h.screen_w, 3), dtype=np.uint8)
    px[...] = BACKGROUND
    px[0:72, :] = STATUS_BAR

    def region(cid):
        b = h.find(cid).bounds
        return px[b.y:b.y2, b.x:b.x2]

    text_style = {
        "clock": (STATUS_BAR, WHITE),
        "title": (BACKGROUND, INK),
        "subtitle": (BACKGROUND, MUTED),
        "email_label": (BACKGROUND, MUTED),
        "email_input": (FIELD, INK),
        "password_label": (BACKGROUND, MUTED),
        "password_input": (FIELD, INK),
        "remember_text": (BACKGROUND, INK),
        "forgot_link": (BACKGROUND, PRIMARY),
        "login_button": (PRIMARY, WHITE),
        "or_text": (BACKGROUND, MUTED),
        "signup_text": (BACKGROUND, MUTED),
        "signup_link": (BACKGROUND, PRIMARY),
        "terms_text": (BACKGROUND, MUTED),
    }
    for cid, (bg, fg) in text_style.items():
        render_placeholder_text(region(cid), h.find(cid).text, bg, fg)

    r = region("wifi_icon"); r[...] = STATUS_BAR; r[20:36, 4:32] = WHITE; r[8:20, 12:24] = WHITE
    r = region("battery_icon"); r[...] = STATUS_BAR; r[6:30, 2:42] = WHITE; r[12:24, 42:46] = WHITE
    r = region("logo"); r[...] = PRIMARY; r[40:160, 60:90] = WHITE; r[130:160, 60:140] = WHITE
    r = region("eye_icon"); r[...] = BACKGROUND; _disc(r, MUTED, inset=6); r[24:36, 24:36] = BACKGROUND
    r = region("remember_check"); r[...] = PRIMARY; r[6:38, 6:38] = WHITE; r[14:30, 14:30] = PRIMARY
    region("divider_left")[...] = (224, 224, 224)
    region("divider_right")[...] = (224, 224, 224)
    r = region("google_button"); r[...] = (234, 67, 53); r[30:90, 30:90] = WHITE; r[50:70, 60:90] = (234, 67, 53)
    r = region("facebook_button"); r[...] = (59, 89, 152); r[20:120, 55:75] = WHITE; r[45:60, 40:95] = WHITE
    r = region("apple_button"); r[...] = (0, 0, 0); _disc(r[20:110, 20:100], (255, 255, 255), inset=8)
    r = region("footer_logo"); r[...] = (200, 200, 200); r[10:50, 10:40] = PRIMARY; r[10:50, 60:90] = INK
    r = region("help_icon"); r[...] = BACKGROUND; _disc(r, PRIMARY); r[20:60, 34:46] = WHITE
    return px


def login_screen(origin=Origin.MOCKUP) -> ScreenPair:
    """The bundled 1080x1920 login screen (26 leaves), drawn deterministically."""
    h = login_hierarchy()
    return ScreenPair(h, ScreenImage(_draw_login(h)), Origin(origin))


# --------------------------------------------------------------------------
# Random screens

_LEAF_TYPES = [T.TEXT, T.BUTTON, T.IMAGE, T.INPUT, T.OTHER]
_ALPHABET = string.ascii_letters + string.digits + "    "


def _random_box(rng, parent: BoundingBox) -> BoundingBox:
    w = int(rng.integers(1, max(2, parent.w // 2) + 1))
    h = int(rng.integers(1, max(2, parent.h // 4) + 1))
    w, h = min(w, parent.w), min(h, parent.h)
    x = parent.x + int(rng.integers(0, parent.w - w + 1))
    y = parent.y + int(rng.integers(0, parent.h - h + 1))
    return BoundingBox(x, y, w, h)


def _random_color(rng):
    return tuple(int(v) for v in rng.integers(0, 256, size=3))


def random_screen(seed, width: int = 360, height: int = 640, n_leaves: int | None = None,
                  origin=Origin.MOCKUP) -> ScreenPair:
    """A random but valid screen: nested containers, overlapping leaves of every
    type, placeholder text, flat fills and noise textures."""
    rng = np.random.default_rng(seed)
    n_leaves = int(rng.integers(0, 25)) if n_leaves is None else n_leaves
    screen = BoundingBox(0, 0, width, height)
    n_groups = int(rng.integers(1, 5))
    groups = [_random_box(rng, screen) for _ in range(n_groups)]

    px = np.empty((height, width, 3), dtype=np.uint8)
    px[...] = _random_color(rng)
    for g in groups:
        px[g.y:g.y2, g.x:g.x2] = _random_color(rng)

    members: list[list[GuiComponent]] = [[] for _ in range(n_groups + 1)]
    for k in range(n_leaves):
        slot = int(rng.integers(0, n_groups + 1))
        parent = groups[slot] if slot < n_groups else screen
        box = _random_box(rng, parent)
        ctype = _LEAF_TYPES[int(rng.integers(0, len(_LEAF_TYPES)))]
        text = None
        region = px[box.y:box.y2, box.x:box.x2]
        if ctype in (T.TEXT, T.BUTTON, T.INPUT):
            text = "".join(rng.choice(list(_ALPHABET), size=int(rng.integers(0, 16))))
            render_placeholder_text(region, text, _random_color(rng), _random_color(rng))
        elif rng.random() < 0.5:
            region[...] = rng.integers(0, 256, size=region.shape)
        else:
            region[...] = _random_color(rng)
        members[slot].append(GuiComponent(f"leaf{k}", ctype, box, text))

    children = [
        GuiComponent(f"group{j}", T.CONTAINER, g, None, tuple(members[j]))
        for j, g in enumerate(groups)
        if members[j]
    ]
    children += members[n_groups]
    root = GuiComponent("root", T.CONTAINER, screen, None, tuple(children))
    return ScreenPair(ScreenHierarchy(width, height, root), ScreenImage(px), Origin(origin))
