"""Collects the acceptance verdicts and prints them after the run."""

VERDICTS: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    VERDICTS[criterion] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(VERDICTS):
        terminalreporter.write_line(VERDICTS[c])
