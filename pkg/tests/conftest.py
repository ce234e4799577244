"""Shared pytest hooks: the acceptance criteria print one PASS/FAIL line each."""

_acceptance_results: list[tuple[str, bool, str]] = []


def record_acceptance(name: str, passed: bool, detail: str = "") -> None:
    _acceptance_results.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _acceptance_results:
        line = f"ACCEPTANCE {name}: {'PASS' if passed else 'FAIL'}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
