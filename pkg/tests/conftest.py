import sys

ACCEPTANCE_MODULE = "test_acceptance"


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get(ACCEPTANCE_MODULE) or sys.modules.get(f"tests.{ACCEPTANCE_MODULE}")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda k: (int(k.split(".")[0].rstrip("abc")), k)):
        ok, detail = results[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
