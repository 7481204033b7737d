import pytest

from genlambda.lambda_fn import LambdaSpec
from genlambda.modpoly import modular_polynomial

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def record_acceptance(number: int, title: str, passed: bool, detail: str = "") -> None:
    _ACCEPTANCE[number] = (title, ("PASS" if passed else "FAIL") + (f"  {detail}" if detail else ""))


@pytest.fixture
def acceptance():
    return record_acceptance


@pytest.fixture(scope="session")
def phi_7_3():
    return modular_polynomial(LambdaSpec(3, 7))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, line = _ACCEPTANCE[n]
        terminalreporter.write_line(f"[{n}] {title}: {line}")
