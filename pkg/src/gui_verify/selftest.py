"""Injection-recovery harness: per-category precision and recall on a synthetic suite."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .config import Config
from .injector import InjectedCase, generate_suite
from .model import ScreenPair
from .violations import ViolationCategory, detect

MIN_PRECISION = 0.95
MIN_RECALL = 0.95


@dataclass
class CategoryScore:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float:
        # no detections at all counts as vacuously precise
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 1.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 1.0

    @property
    def passed(self) -> bool:
        return self.precision >= MIN_PRECISION and self.recall >= MIN_RECALL


@dataclass
class SelftestResult:
    scores: dict[ViolationCategory, CategoryScore] = field(
        default_factory=lambda: {c: CategoryScore() for c in ViolationCategory}
    )
    n_cases: int = 0
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.scores.values())

    def lines(self) -> list[str]:
        out = [f"{'category':<20} {'tp':>4} {'fp':>4} {'fn':>4} {'precision':>10} {'recall':>8}  status"]
        for cat, s in self.scores.items():
            out.append(
                f"{cat.value:<20} {s.tp:>4} {s.fp:>4} {s.fn:>4} {s.precision:>10.3f} {s.recall:>8.3f}  "
                f"{'ok' if s.passed else 'FAIL'}"
            )
        verdict = "PASS" if self.passed else "FAIL"
        if self.n_cases == 0:
            verdict += " (vacuous: no cases requested)"
        out.append(f"{self.n_cases} cases in {self.elapsed:.2f}s: {verdict}")
        return out


def score_cases(cases: Sequence[InjectedCase], cfg: Config | None = None) -> SelftestResult:
    start = time.perf_counter()
    result = SelftestResult(n_cases=len(cases))
    for case in cases:
        found = {(v.category, v.mockup_id, v.impl_id) for v in detect(case.mockup, case.impl, cfg).violations}
        truth = {(g.category, g.mockup_id, g.impl_id) for g in case.ground_truth}
        for key in found:
            if key in truth:
                result.scores[key[0]].tp += 1
            else:
                result.scores[key[0]].fp += 1
        for key in truth - found:
            result.scores[key[0]].fn += 1
    result.elapsed = time.perf_counter() - start
    return result


def run_selftest(clean: ScreenPair, counts: Mapping, seed: int, cfg: Config | None = None) -> SelftestResult:
    """Generate the suite with default-tolerance magnitudes, then detect with ``cfg``.

    Injection strength never follows ``cfg``, so a misconfigured detector
    shows up as lost recall rather than as a differently sized corpus.
    """
    start = time.perf_counter()
    cases = generate_suite(clean, counts, seed, Config())
    result = score_cases(cases, cfg)
    result.elapsed = time.perf_counter() - start
    return result
