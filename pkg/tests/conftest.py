import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

_criteria: list[tuple[str, str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    status = "PASS" if report.outcome == "passed" else "FAIL"
    _criteria.append((props["criterion"], status, props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in sorted(_criteria, key=lambda c: int(c[0].split()[0])):
        line = f"{status} criterion {name}"
        terminalreporter.write_line(f"{line}: {detail}" if detail else line)
