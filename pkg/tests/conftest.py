import os
import sys

from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None)
settings.load_profile("default")

# acceptance outcomes, filled in by test_acceptance.py: criterion -> [(part, ok, detail)]
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[crit]
        ok = all(p[1] for p in parts)
        bad = "; ".join(f"{name}: {detail}" for name, passed, detail in parts if not passed)
        terminalreporter.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'}" + (f"  ({bad})" if bad else ""))
