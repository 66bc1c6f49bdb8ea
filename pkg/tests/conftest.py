"""Shared test configuration.

The acceptance tests (test_acceptance.py) register a one-line verdict per
criterion; the terminal summary prints them all, pass or fail, so a single
glance shows which guarantees hold.
"""

from hypothesis import settings

settings.register_profile("suite", max_examples=60, deadline=None,
                          derandomize=True)
settings.load_profile("suite")

_ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_acceptance(name: str, ok: bool, detail: str) -> None:
    _ACCEPTANCE_RESULTS.append((name, ok, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE_RESULTS:
        verdict = "PASS" if ok else "FAIL"
        tr.write_line(f"[{verdict}] {name}: {detail}")
