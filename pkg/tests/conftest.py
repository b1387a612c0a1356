import pytest

from hsss import dealer
from hsss.entropy import Entropy

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def rng():
    return Entropy(1234)


@pytest.fixture
def instance(rng):
    """groups [2,2], two secrets."""
    secrets = [b"launch code alpha", b"vault password \x00\xff beta"]
    state, bundle, vault = dealer.setup(2, [2, 2], secrets, rng)
    return state, bundle, vault, secrets


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0].rstrip("."))):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
