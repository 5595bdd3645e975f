"""Collects acceptance-criterion outcomes and prints one line per criterion."""

from collections import defaultdict

# criterion number -> list of (ok, detail) from every check that feeds it
ACCEPTANCE = defaultdict(list)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[number]
        ok = all(p[0] for p in parts)
        failing = [d for good, d in parts if not good]
        detail = "; ".join(failing) if failing else "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
