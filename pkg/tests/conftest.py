import pytest
from hypothesis import HealthCheck, settings

from torusfill.constructions import load_filling_pair

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def pair():
    return load_filling_pair()


@pytest.fixture
def report():
    """Record one PASS/FAIL line for the acceptance summary."""

    def record(criterion: int, ok: bool, detail: str) -> bool:
        _ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        print(_ACCEPTANCE[-1])
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
