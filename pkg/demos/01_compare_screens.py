"""
Comparing a mock-up against an implementation
=============================================

Build a clean login screen, break it in two places, and let the detector
find both breaks.
"""

from gui_verify import leaf_components, run_detection, to_json
from gui_verify.fixture import login_screen
from gui_verify.injector import InjectionSpec, inject_many
from gui_verify.violations import ViolationCategory as VC

###############################################################################
# The bundled fixture is a 1080x1920 login screen. Its leaves are the units
# that get matched and checked; containers only give structure.

mock = login_screen()
leaves = leaf_components(mock.hierarchy)
print(f"{len(leaves)} leaves, e.g. {[c.id for c in leaves[:5]]}")

###############################################################################
# Derive an "implementation" that shifts the logo 14 px to the right and
# drops the help icon.

case = inject_many(mock, [InjectionSpec(VC.LAYOUT_TRANSLATION, "logo", 14),
                          InjectionSpec(VC.RESOURCE_MISSING, "help_icon")], seed=0)

###############################################################################
# Detection matches leaves across the two screens, then runs the layout, text
# and resource checks on every matched pair.

report = run_detection(case.mockup, case.impl)
print(report.match_stats)
for v in report.violations:
    print(f"{v.category.value:<20} {v.mockup_id!s:<10} severity={v.severity:.2f} {v.metrics}")

###############################################################################
# The report serializes to canonical JSON. Comparing a screen to itself is
# the baseline and must stay empty.

print(to_json(report).decode()[:400], "...")
assert run_detection(mock, mock).conforms
