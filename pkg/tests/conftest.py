import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results):
        ok, title, detail = results[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  [{key:>2}] {title}: {detail}")
