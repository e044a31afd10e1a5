import sys

import numpy as np
import pytest


def random_spd(rng, k, spread=1.0):
    G = rng.standard_normal((k, k))
    return G @ G.T + spread * np.eye(k)


def random_orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def projector(B):
    return B @ np.linalg.solve(B.T @ B, B.T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[num])
