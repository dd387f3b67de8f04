"""Shared test plumbing: collects acceptance-criterion verdicts so the
terminal summary shows one pass/fail line per criterion."""

ACCEPTANCE_LINES = []


def record_criterion(num: int, passed: bool, note: str = "") -> None:
    verdict = "PASS" if passed else "FAIL"
    line = f"acceptance criterion {num}: {verdict}"
    if note:
        line += f"  ({note})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
