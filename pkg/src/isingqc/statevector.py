"""Dense statevector simulation.

Amplitudes are indexed so that the leftmost character of a bitstring is the
most significant bit: ``"b0 b1 ... b(n-1)"`` maps to ``sum_j b_j 2**(n-1-j)``.
Qubit 0 is therefore the leftmost site.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, expand_fermionic, Op
from .exceptions import InvalidArgumentError, ResourceLimitError
from .gatelib import Gate
from .validation import (MAX_DENSE_QUBITS, MAX_SIM_QUBITS, check_bitstring,
                         check_qubit_count, check_qubit_index, check_shots)

NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class State:
    """Normalised pure state on ``n`` qubits.

    Attributes
    ----------
    n : int
    amps : ndarray of complex, shape (2**n,)
        Read-only amplitude vector.
    """

    n: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_qubit_count(self.n, MAX_SIM_QUBITS)
        a = np.array(self.amps, dtype=complex).reshape(-1)
        if a.size != 2 ** self.n:
            raise InvalidArgumentError(f"expected {2 ** self.n} amplitudes, got {a.size}")
        norm = np.linalg.norm(a)
        if abs(norm - 1) > NORM_TOL:
            raise InvalidArgumentError(f"state is not normalised (norm {norm:.3g})")
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @classmethod
    def from_amplitudes(cls, amps, normalize: bool = False) -> "State":
        a = np.asarray(amps, dtype=complex).reshape(-1)
        n = int(round(np.log2(a.size)))
        if normalize:
            a = a / np.linalg.norm(a)
        return cls(n, a)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def __len__(self) -> int:
        return self.amps.size


@dataclass(frozen=True)
class ShotCounts:
    """Outcome histogram of ``shots`` projective measurements."""

    shots: int
    counts: dict

    def frequencies(self) -> dict:
        return {k: v / self.shots for k, v in self.counts.items()}


def index_of(b: str) -> int:
    return int(b, 2)


def bitstring_of(i: int, n: int) -> str:
    return format(i, f"0{n}b")


def init_basis(n: int, b) -> State:
    """Computational basis state ``|b>``."""
    n = check_qubit_count(n, MAX_SIM_QUBITS)
    b = check_bitstring(b, n)
    a = np.zeros(2 ** n, dtype=complex)
    a[index_of(b)] = 1.0
    return State(n, a)


def apply_matrix(psi: np.ndarray, n: int, matrix: np.ndarray, targets) -> np.ndarray:
    """Apply a ``2**k``-dimensional matrix to wires ``targets``.

    ``psi`` has shape ``(2**n,)`` or ``(2**n, m)``; trailing axes are batched.
    """
    k = len(targets)
    batch = psi.shape[1:]
    t = psi.reshape((2,) * n + batch)
    g = np.asarray(matrix).reshape((2,) * (2 * k))
    # contract gate inputs with target axes; outputs land in front
    t = np.tensordot(g, t, axes=(list(range(k, 2 * k)), list(targets)))
    t = np.moveaxis(t, list(range(k)), list(targets))
    return t.reshape(psi.shape)


def _check_targets(n, gate: Gate, targets) -> tuple:
    targets = tuple(targets)
    if len(targets) != gate.arity:
        raise InvalidArgumentError(f"{gate.name} needs {gate.arity} target(s), got {len(targets)}")
    for q in targets:
        check_qubit_index(q, n)
    if len(set(targets)) != len(targets):
        raise InvalidArgumentError(f"targets must be distinct, got {targets}")
    return targets


def _run_ops(psi: np.ndarray, c: Circuit) -> np.ndarray:
    for op in expand_fermionic(c).ops:
        psi = apply_matrix(psi, c.n, op.gate.matrix, op.targets)
    return psi


def apply(s: State, g: Gate, targets) -> State:
    """Return ``g`` applied to ``s`` on ``targets`` (first target is the MSB of ``g``)."""
    targets = _check_targets(s.n, g, targets)
    psi = _run_ops(s.amps.copy(), Circuit(s.n, (Op(g, targets),)))
    return State(s.n, psi)


def run_circuit(c: Circuit, s: State | str | None = None) -> State:
    """Simulate ``c`` starting from ``s`` (a State, a bitstring, or all-zeros)."""
    if s is None:
        s = "0" * c.n
    if isinstance(s, str):
        s = init_basis(c.n, s)
    if s.n != c.n:
        raise InvalidArgumentError(f"state has {s.n} qubits, circuit has {c.n}")
    return State(c.n, _run_ops(s.amps.copy(), c))


def run_circuit_batch(c: Circuit, amps: np.ndarray) -> np.ndarray:
    """Apply ``c`` to every column of ``amps`` (shape ``(2**n, m)``)."""
    return _run_ops(np.array(amps, dtype=complex), c)


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Full ``2**n x 2**n`` unitary of ``c``."""
    if c.n > MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"dense unitary limited to {MAX_DENSE_QUBITS} qubits")
    return run_circuit_batch(c, np.eye(2 ** c.n, dtype=complex))


def _z_signs(n: int, site: int) -> np.ndarray:
    return 1 - 2 * ((np.arange(2 ** n) >> (n - 1 - site)) & 1)


def expval_z(s: State, site: int) -> float:
    """``<Z_site>``: +1 for bit 0, -1 for bit 1."""
    site = check_qubit_index(site, s.n)
    return float(np.dot(s.probabilities(), _z_signs(s.n, site)))


def expval_z_avg(s: State) -> float:
    """Site-averaged ``<Z>``."""
    return float(np.mean([expval_z(s, q) for q in range(s.n)]))


def expval_x(s: State, site: int) -> float:
    site = check_qubit_index(site, s.n)
    t = s.amps.reshape(2 ** site, 2, -1)
    return float(2 * np.real(np.vdot(t[:, 0, :], t[:, 1, :])))


def expval_staggered_x(s: State) -> float:
    """``sum_q (-1)**q <X_q>`` with qubit 0 carrying sign +1."""
    return float(sum((-1) ** q * expval_x(s, q) for q in range(s.n)))


def sample(s: State, shots: int, seed=None) -> ShotCounts:
    """Draw ``shots`` computational-basis outcomes from ``|amps|**2``."""
    shots = check_shots(shots)
    rng = np.random.default_rng(seed)
    p = s.probabilities()
    idx = rng.choice(p.size, size=shots, p=p / p.sum())
    vals, cnt = np.unique(idx, return_counts=True)
    counts = {bitstring_of(int(v), s.n): int(c) for v, c in zip(vals, cnt)}
    return ShotCounts(shots, counts)


def overlap(a: State, b: State) -> complex:
    """``<a|b>``."""
    if a.n != b.n:
        raise InvalidArgumentError(f"qubit counts differ: {a.n} vs {b.n}")
    return complex(np.vdot(a.amps, b.amps))
