"""Correspondence between mock-up leaves and implementation leaves.

Each candidate pair is scored by a weighted blend of box overlap, type
agreement, and text similarity; pairs are then accepted greedily from the
highest score down.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .config import Config
from .model import BoundingBox, GuiComponent


@dataclass(frozen=True)
class ComponentMatch:
    mockup_id: str
    impl_id: str
    score: float


@dataclass(frozen=True)
class MatchResult:
    matches: tuple[ComponentMatch, ...] = ()
    unmatched_mockup: tuple[str, ...] = ()
    unmatched_impl: tuple[str, ...] = ()

    def stats(self) -> dict:
        return {
            "matched": len(self.matches),
            "unmatched_mockup": len(self.unmatched_mockup),
            "unmatched_impl": len(self.unmatched_impl),
        }


def iou(a: BoundingBox, b: BoundingBox) -> float:
    iw = min(a.x2, b.x2) - max(a.x, b.x)
    ih = min(a.y2, b.y2) - max(a.y, b.y)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    return inter / (a.area + b.area - inter)


def edit_distance(s1: str, s2: str) -> int:
    """Levenshtein distance with unit costs, two-row DP."""
    if len(s1) < len(s2):
        s1, s2 = s2, s1
    prev = list(range(len(s2) + 1))
    for i, c1 in enumerate(s1, 1):
        cur = [i]
        for j, c2 in enumerate(s2, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (c1 != c2)))
        prev = cur
    return prev[-1]


def text_similarity(s1: str | None, s2: str | None) -> float:
    if s1 is None and s2 is None:
        return 1.0
    if s1 is None or s2 is None:
        return 0.0
    longest = max(len(s1), len(s2))
    if longest == 0:
        return 1.0
    return 1.0 - edit_distance(s1, s2) / longest


def similarity(a: GuiComponent, b: GuiComponent, cfg: Config | None = None) -> float:
    cfg = cfg or Config()
    score = (
        cfg.w_spatial * iou(a.bounds, b.bounds)
        + cfg.w_type * (a.ctype == b.ctype)
        + cfg.w_text * text_similarity(a.text, b.text)
    )
    return min(1.0, max(0.0, score))


def greedy_assign(scores, threshold: float, taken_rows=(), taken_cols=()) -> list[tuple[int, int, float]]:
    """Greedy maximum-score assignment over a dense score matrix.

    Candidates are visited by descending score, ties broken by row then
    column index. Returns accepted ``(row, col, score)`` triples in
    acceptance order.
    """
    candidates = sorted(
        (-s, r, c) for r, row in enumerate(scores) for c, s in enumerate(row) if s >= threshold
    )
    used_r, used_c = set(taken_rows), set(taken_cols)
    accepted = []
    for neg, r, c in candidates:
        if r in used_r or c in used_c:
            continue
        used_r.add(r)
        used_c.add(c)
        accepted.append((r, c, -neg))
    return accepted


def match_components(
    mock: Sequence[GuiComponent], impl: Sequence[GuiComponent], cfg: Config | None = None
) -> MatchResult:
    cfg = cfg or Config()
    pairs: list[tuple[int, int, float]] = []

    if cfg.match_by_id:
        # Exact-id fast path: equal ids pair up first, whatever their score.
        impl_index = {c.id: j for j, c in enumerate(impl)}
        for i, m in enumerate(mock):
            j = impl_index.get(m.id)
            if j is not None:
                pairs.append((i, j, similarity(m, impl[j], cfg)))

    scores = [[similarity(m, c, cfg) for c in impl] for m in mock]
    pairs += greedy_assign(
        scores, cfg.match_threshold, taken_rows=[p[0] for p in pairs], taken_cols=[p[1] for p in pairs]
    )
    pairs.sort()

    used_m = {p[0] for p in pairs}
    used_i = {p[1] for p in pairs}
    return MatchResult(
        matches=tuple(ComponentMatch(mock[i].id, impl[j].id, s) for i, j, s in pairs),
        unmatched_mockup=tuple(m.id for k, m in enumerate(mock) if k not in used_m),
        unmatched_impl=tuple(c.id for k, c in enumerate(impl) if k not in used_i),
    )
