import sys
from pathlib import Path

# so test modules can import the sibling oracles module under plain pytest
sys.path.insert(0, str(Path(__file__).parent))

_CRITERION_PREFIX = "test_criterion_"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    verdicts: dict[str, str] = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            name = nodeid.split("::")[-1]
            if not name.startswith(_CRITERION_PREFIX):
                continue
            label = name[len(_CRITERION_PREFIX):]
            if outcome == "passed" and verdicts.get(label) == "FAIL":
                continue
            verdicts[label] = "PASS" if outcome == "passed" else "FAIL"
    if verdicts:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for label in sorted(verdicts):
            terminalreporter.write_line(f"  criterion {label}: {verdicts[label]}")
