"""
An HTML evidence report
=======================

Write the static report a reviewer would open: both screenshots with every
violation outlined, plus side-by-side crops.
"""

import sys
import tempfile
from pathlib import Path

from gui_verify import render_html, run_detection
from gui_verify.fixture import login_screen
from gui_verify.injector import InjectionSpec, inject_many
from gui_verify.violations import ViolationCategory as VC

out = Path(sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="gui-verify-"))

mock = login_screen()
case = inject_many(mock, [InjectionSpec(VC.TEXT_COLOR, "title"),
                          InjectionSpec(VC.RESOURCE_COLOR, "logo"),
                          InjectionSpec(VC.LAYOUT_RESIZE, "login_button")], seed=3)
report = run_detection(case.mockup, case.impl)

###############################################################################
# Outlines are colored by family: red for layout, orange for text, purple for
# resources.

for path in render_html(report, case.mockup.image, case.impl.image, out):
    print(path)
print(f"open {out / 'index.html'}")
