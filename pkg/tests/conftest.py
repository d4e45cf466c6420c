"""Independent dense oracles built from Kronecker products."""
from functools import reduce

import numpy as np
import pytest

I2 = np.eye(2)
PX = np.array([[0, 1], [1, 0]], dtype=complex)
PY = np.array([[0, -1j], [1j, 0]])
PZ = np.diag([1.0, -1.0]).astype(complex)


def kron_op(n, factors):
    """Tensor product with ``factors[q]`` on qubit q (qubit 0 leftmost)."""
    return reduce(np.kron, [factors.get(q, I2) for q in range(n)])


def kron_hamiltonian(n, lam):
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i in range(n - 1):
        h += kron_op(n, {i: PX, i + 1: PX})
    string = {q: PZ for q in range(1, n - 1)}
    string.update({0: PY, n - 1: PY})
    h += kron_op(n, string)
    for i in range(n):
        h += lam * kron_op(n, {i: PZ})
    return h


def embed(matrix, targets, n):
    """Full matrix of a gate on arbitrary targets (first target is the MSB)."""
    k = len(targets)
    u = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for col in range(2 ** n):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        sub = sum(bits[t] << (k - 1 - i) for i, t in enumerate(targets))
        for r in range(2 ** k):
            nb = list(bits)
            for i, t in enumerate(targets):
                nb[t] = (r >> (k - 1 - i)) & 1
            row = sum(b << (n - 1 - q) for q, b in enumerate(nb))
            u[row, col] += matrix[r, sub]
    return u


def random_state(rng, n):
    v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
