import pytest

ACCEPTANCE_RESULTS: dict[int, tuple[str, bool, float, float]] = {}


def record_acceptance(number: int, title: str, ok: bool, elapsed: float, limit: float) -> None:
    ACCEPTANCE_RESULTS[number] = (title, ok, elapsed, limit)


@pytest.fixture
def acceptance_recorder():
    return record_acceptance


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, ok, elapsed, limit = ACCEPTANCE_RESULTS[number]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(
            f"[{verdict}] criterion {number:2d}: {title} ({elapsed:.3f}s, limit {limit:g}s)")
