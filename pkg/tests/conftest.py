import re

ACCEPTANCE = "test_acceptance.py"
_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+)")


def pytest_collection_modifyitems(session, config, items):
    # acceptance runs last so the dimension inequalities see every space computed by the suite
    items.sort(key=lambda item: ACCEPTANCE in item.nodeid)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if ACCEPTANCE not in getattr(rep, "nodeid", ""):
                continue
            m = _CRITERION.search(rep.nodeid)
            if not m:
                continue
            n = int(m.group(1))
            ok = outcome == "passed"
            if n in lines and not ok:
                lines[n] = (False, m.group(2))
            lines.setdefault(n, (ok, m.group(2)))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        ok, name = lines[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {name.replace('_', ' ')}")
