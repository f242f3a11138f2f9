import re

ACCEPTANCE_FILE = "test_acceptance.py"


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, in criterion order."""
    results = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if ACCEPTANCE_FILE not in nodeid or getattr(rep, "when", "call") != "call" and outcome == "passed":
                continue
            m = re.search(r"test_criterion_(\d+)_(\w+)", nodeid)
            if m:
                results[int(m.group(1))] = (m.group(2), "PASS" if outcome == "passed" else "FAIL")
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        name, status = results[n]
        terminalreporter.write_line(f"criterion {n:2d} {status}  {name.replace('_', ' ')}")
