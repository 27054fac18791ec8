"""
Measuring the detector with injected violations
===============================================

There is no public ground truth for design violations, so we make our own:
mutate a clean screen in a known way, then check the detector reports exactly
that mutation and nothing else.
"""

from gui_verify.config import Config
from gui_verify.fixture import login_screen
from gui_verify.injector import eligible_targets, generate_suite
from gui_verify.selftest import run_selftest, score_cases
from gui_verify.violations import ViolationCategory as VC

clean = login_screen()

###############################################################################
# Not every leaf suits every mutation. A text-size change needs text, and a
# shift needs free space to move into.

for category in VC:
    print(f"{category.value:<20} {len(eligible_targets(clean, category))} eligible leaves")

###############################################################################
# Each injection is sized at twice the detector tolerance, so a correct
# detector should score perfectly.

result = run_selftest(clean, {c: 10 for c in VC}, seed=42)
print("\n".join(result.lines()))

###############################################################################
# Loosen the position tolerance far enough and shifts go unnoticed. Recall
# for translations collapses while the other categories are unaffected.

suite = generate_suite(clean, {c: 3 for c in VC}, seed=1)
blind = score_cases(suite, Config(pos_tol=10_000))
print("\n".join(blind.lines()))
