import json

import numpy as np
import pytest

from gui_verify.fixture import login_screen
from gui_verify.model import dump_screen_meta, encode_png


@pytest.fixture(scope="session")
def clean():
    return login_screen()


def meta_doc(width, height, children=(), root_id="root"):
    return {
        "screen": {
            "width": width,
            "height": height,
            "root": {"id": root_id, "type": "CONTAINER", "bounds": [0, 0, width, height],
                     "children": list(children)},
        }
    }


def meta_bytes(*args, **kwargs) -> bytes:
    return json.dumps(meta_doc(*args, **kwargs)).encode()


def write_pair(directory, stem, pair):
    """Write a ScreenPair as ``<stem>.png`` + ``<stem>.json``; return both paths."""
    directory.mkdir(parents=True, exist_ok=True)
    img, meta = directory / f"{stem}.png", directory / f"{stem}.json"
    img.write_bytes(encode_png(pair.image))
    meta.write_bytes(dump_screen_meta(pair.hierarchy))
    return img, meta


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
