import numpy as np
import pytest

from nverc import SystemParams

# acceptance-criterion results collected by tests/test_acceptance.py
ACCEPTANCE_RESULTS: list[tuple[str, str, bool, str]] = []


def random_plain_params(rng, n, d=500.0, margin=1.05, omega_max_factor=8.0):
    """Sample resonant-regime systems, drive safely above the threshold."""
    out = []
    for _ in range(n):
        muB = rng.uniform(0.05, 2.0)
        omega = muB * rng.uniform(2.0 * margin, omega_max_factor)
        out.append(SystemParams(D=d, muB=muB, omega_x=omega))
    return out


def haar_unitary3(rng):
    z = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q @ np.diag(np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit, name, ok, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if ok else "FAIL"
        line = f"criterion {crit:>2} {name}: {status}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
