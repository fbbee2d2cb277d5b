import numpy as np
import pytest

_ACCEPTANCE: list = []


@pytest.fixture
def acceptance():
    """Record one acceptance line: ``acceptance(number, title, passed, detail)``."""

    def record(number: int, title: str, passed: bool, detail: str = ""):
        _ACCEPTANCE.append((number, title, bool(passed), detail))
        return passed

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        tag = "PASS" if passed else "FAIL"
        line = f"[{tag}] {number:>2}. {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
