import json
import sys
from pathlib import Path

DATA = Path(__file__).parent / "data"
FIGURES = json.loads((DATA / "figures.json").read_text())

sys.path.insert(0, str(Path(__file__).parent))

# criterion id -> "PASS ..." / "FAIL ..." line, filled by test_acceptance
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
