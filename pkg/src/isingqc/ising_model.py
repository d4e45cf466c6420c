"""Transverse-field Ising chain with its free-fermion solution.

The Hamiltonian on ``n`` spins is

    H = sum_{i<n-1} X_i X_{i+1} + Y_0 Z_1 ... Z_{n-2} Y_{n-1} + lam * sum_i Z_i

The string term replaces the periodic ``X_{n-1} X_0`` bond so that, after
Jordan-Wigner, the fermions see exactly periodic boundary conditions and the
momenta ``k = 2 pi j / n`` are good quantum numbers.

Momentum modes are labelled ``j = 0 .. n-1`` (``j`` and ``j - n`` are the
same mode). Modes ``0`` and ``n/2`` are unmixed; every other ``j`` is paired
with ``n - j`` by the Bogoliubov rotation.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np
import scipy.sparse as sp

from .exceptions import DegenerateAngleError, InvalidArgumentError, ResourceLimitError, CriticalPointWarning
from .validation import (MAX_DENSE_QUBITS, MAX_SIM_QUBITS, check_bitstring,
                         check_chain_size, check_real, is_power_of_two)

CRITICAL_TOL = 1e-12


@dataclass(frozen=True)
class IsingSpec:
    """Chain size and transverse field.

    Parameters
    ----------
    n : int
        Number of spins, a power of two and at least 4.
    lam : float
        Transverse field strength.
    """

    n: int
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "n", check_chain_size(self.n))
        object.__setattr__(self, "lam", check_real(self.lam, "lam"))


# ------------------------------------------------------------------ Hamiltonian

def _pauli_string_terms(n: int, lam: float):
    """Yield ``(flip_mask, phase_vector)`` pairs so that H = sum P_mask * diag(phase)."""
    idx = np.arange(2 ** n)
    bits = [(idx >> (n - 1 - q)) & 1 for q in range(n)]
    for i in range(n - 1):
        mask = (1 << (n - 1 - i)) | (1 << (n - 2 - i))
        yield mask, np.ones(2 ** n)
    # Y_0 Z...Z Y_{n-1}:  Y|b> = i(-1)^b |~b>, so the product picks up -(-1)^popcount
    parity = reduce(np.bitwise_xor, bits)
    yield (1 << (n - 1)) | 1, -(1.0 - 2.0 * parity)
    yield 0, lam * sum(1.0 - 2.0 * b for b in bits)


def hamiltonian_sparse(spec: IsingSpec) -> sp.csr_matrix:
    """Sparse Hamiltonian, usable up to the simulator limit."""
    n = spec.n
    if n > MAX_SIM_QUBITS:
        raise ResourceLimitError(f"n={n} exceeds the simulation limit {MAX_SIM_QUBITS}")
    dim = 2 ** n
    cols = np.arange(dim)
    rows_all, cols_all, vals_all = [], [], []
    for mask, vals in _pauli_string_terms(n, spec.lam):
        rows_all.append(cols ^ mask)
        cols_all.append(cols)
        vals_all.append(vals.astype(complex))
    h = sp.coo_matrix((np.concatenate(vals_all), (np.concatenate(rows_all), np.concatenate(cols_all))),
                      shape=(dim, dim))
    return h.tocsr()


def hamiltonian_matrix(spec: IsingSpec) -> np.ndarray:
    """Dense Hamiltonian (oracle use, ``n <= 12``)."""
    if spec.n > MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"dense Hamiltonian limited to n <= {MAX_DENSE_QUBITS}")
    return hamiltonian_sparse(spec).toarray()


# ------------------------------------------------------------ single particle

def _check_momentum(n: int, k: int) -> int:
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise InvalidArgumentError(f"momentum index must be an integer, got {k!r}")
    if not -n // 2 + 1 <= k <= n // 2:
        raise InvalidArgumentError(f"k must lie in [{-n // 2 + 1}, {n // 2}], got {k}")
    return int(k)


def dispersion(n: int, k: int, lam: float) -> float:
    """Quasiparticle energy ``sqrt((lam - cos q)^2 + sin^2 q)`` with ``q = 2 pi k / n``."""
    k = _check_momentum(n, k)
    q = 2 * math.pi * k / n
    return math.hypot(lam - math.cos(q), math.sin(q))


def bogoliubov_angle(n: int, k: int, lam: float) -> float:
    """Mixing angle ``arccos((lam - cos q) / omega)`` in ``[0, pi]``.

    Raises
    ------
    DegenerateAngleError
        When ``omega == 0`` (an unmixed mode exactly at ``lam = cos q``).
    """
    k = _check_momentum(n, k)
    q = 2 * math.pi * k / n
    c, s = math.cos(q), math.sin(q)
    if abs(s) < 1e-14:
        s = 0.0
    w = math.hypot(lam - c, s)
    if w == 0.0:
        raise DegenerateAngleError(f"angle undefined for n={n}, k={k}, lam={lam}")
    return math.acos(max(-1.0, min(1.0, (lam - c) / w)))


def signed_momentum(n: int, j: int) -> int:
    """Map a mode label ``0..n-1`` to ``(-n/2, n/2]``."""
    j %= n
    return j - n if j > n // 2 else j


def is_unmixed(n: int, j: int) -> bool:
    return j % n in (0, n // 2)


def mode_energy(n: int, j: int, lam: float) -> float:
    """Single-mode energy: ``omega`` for paired modes, ``lam - cos q`` for unmixed ones."""
    j %= n
    if is_unmixed(n, j):
        return lam - math.cos(2 * math.pi * j / n)
    return dispersion(n, signed_momentum(n, j), lam)


def _bitrev(x: int, bits: int) -> int:
    return int(format(x, f"0{bits}b")[::-1], 2) if bits else 0


@lru_cache(maxsize=None)
def fourier_output_modes(m: int) -> tuple:
    """Momentum carried by each wire at the output of the size-``m`` Fourier network."""
    if not is_power_of_two(m):
        raise InvalidArgumentError(f"size must be a power of two, got {m}")
    b = m.bit_length() - 1
    return tuple((-1 - _bitrev(w, b)) % m for w in range(m))


@lru_cache(maxsize=None)
def mode_layout(n: int) -> tuple:
    """Momentum on each wire where the Bogoliubov layer acts.

    Partner modes ``j`` and ``n - j`` sit on neighbouring wires; unmixed
    modes take a wire of their own. This is the mode-to-qubit map used for
    diagonal-basis labels.
    """
    placed, out = set(), []
    for j in fourier_output_modes(n):
        if j in placed:
            continue
        out.append(j)
        placed.add(j)
        partner = (-j) % n
        if partner != j:
            out.append(partner)
            placed.add(partner)
    return tuple(out)


def unmixed_wire(n: int, j: int = 0) -> int:
    return mode_layout(n).index(j % n)


# ------------------------------------------------------------------- spectrum

class SpectrumTable:
    """Energies of diagonal-basis labels.

    ``E(b) = offset + sum_w 2 * eps_w * (b_w xor f_w)`` where ``eps_w`` is the
    energy of the mode sitting on wire ``w`` and ``f`` is a flip mask (nonzero
    only when the builder relabels wires with extra bit flips). The offset
    ``-sum_w eps_w`` makes the spectrum traceless, like the Hamiltonian.

    Parameters
    ----------
    spec : IsingSpec
    flip_mask : tuple of int, optional
        Per-wire 0/1 relabelling.
    """

    def __init__(self, spec: IsingSpec, flip_mask=None):
        self.spec = spec
        n = spec.n
        self.wire_modes = mode_layout(n)
        self.mode_energies = np.array([mode_energy(n, j, spec.lam) for j in self.wire_modes])
        self.flip_mask = tuple(int(x) for x in (flip_mask or (0,) * n))
        if len(self.flip_mask) != n:
            raise InvalidArgumentError("flip mask length must equal n")
        self.offset = float(-self.mode_energies.sum())
        self._energies = None

    @property
    def n(self) -> int:
        return self.spec.n

    def __len__(self) -> int:
        return 2 ** self.n

    def energy(self, b) -> float:
        b = check_bitstring(b, self.n)
        occ = np.array([int(c) ^ f for c, f in zip(b, self.flip_mask)])
        return float(self.offset + 2 * np.dot(self.mode_energies, occ))

    def energies(self) -> np.ndarray:
        """All ``2**n`` energies, indexed by basis index."""
        if self._energies is None:
            n = self.n
            if n > MAX_SIM_QUBITS:
                raise ResourceLimitError(f"cannot tabulate 2**{n} energies")
            idx = np.arange(2 ** n)
            e = np.full(2 ** n, self.offset)
            for w in range(n):
                occ = ((idx >> (n - 1 - w)) & 1) ^ self.flip_mask[w]
                e += 2 * self.mode_energies[w] * occ
            e.setflags(write=False)
            self._energies = e
        return self._energies

    @property
    def entries(self) -> dict:
        e = self.energies()
        return {format(i, f"0{self.n}b"): float(v) for i, v in enumerate(e)}

    def ground_bitstring(self, tol: float = CRITICAL_TOL) -> str:
        """Lowest-energy label; ties resolved to the lexicographically smallest."""
        bits = []
        for eps, f in zip(self.mode_energies, self.flip_mask):
            occupy = eps < -tol
            bits.append(str(int(occupy) ^ f) if abs(eps) > tol else str(0))
        return "".join(bits)

    def min_energy(self) -> float:
        return float(self.offset + 2 * np.minimum(self.mode_energies, 0).sum())

    def __repr__(self):
        return f"SpectrumTable(n={self.n}, lam={self.spec.lam}, offset={self.offset:.6g})"


def spectrum_table(spec: IsingSpec, flip_mask=None) -> SpectrumTable:
    return SpectrumTable(spec, flip_mask)


def diagonal_energy(spec: IsingSpec, b) -> float:
    """Energy of the eigenstate labelled ``b``."""
    return SpectrumTable(spec).energy(b)


def ground_bitstring(spec: IsingSpec) -> str:
    """Label of the ground state: ``"0...0"`` for ``lam > 1``, ``"0...01"`` for ``lam < 1``.

    At ``lam == 1`` the unmixed mode is at zero energy; a
    :class:`CriticalPointWarning` is issued and the smaller label returned.
    """
    table = SpectrumTable(spec)
    if any(abs(e) <= CRITICAL_TOL for e in table.mode_energies):
        warnings.warn("ground state is degenerate at the critical point; "
                      "returning the lexicographically smallest label", CriticalPointWarning,
                      stacklevel=2)
    return table.ground_bitstring()


def ground_state_analytic_n4(lam: float):
    """Closed-form ground state of the four-site chain.

    With ``a = lam - sqrt(1 + lam^2)`` the state is a one/three-excitation
    superposition for ``lam < 1`` and a zero/two/four-excitation superposition
    for ``lam >= 1``; both are normalised by ``2 sqrt(2) sqrt(1 + lam a)``.
    """
    from .statevector import State
    lam = check_real(lam, "lam")
    a = lam - math.sqrt(1 + lam * lam)
    norm = 2 * math.sqrt(2) * math.sqrt(1 + lam * a)
    if lam < 1:
        terms = [("0001", a), ("0010", -a), ("0100", a), ("1000", -a),
                 ("0111", 1), ("1011", -1), ("1101", 1), ("1110", -1)]
    else:
        terms = [("0011", a), ("0110", -a), ("1001", a), ("1100", a), ("1111", 2)]
    v = np.zeros(16, dtype=complex)
    for b, c in terms:
        v[int(b, 2)] = c
    v /= norm
    # the normalisation is exact only up to rounding; tidy it
    return State(4, v / np.linalg.norm(v))


def site_average_z_analytic_n4(lam: float) -> float:
    """Site-averaged ``<Z>`` of :func:`ground_state_analytic_n4` in closed form."""
    a = lam - math.sqrt(1 + lam * lam)
    if lam < 1:
        return 2 * (a * a - 1) / (8 * (1 + lam * a))
    return -1 / (2 * (1 + lam * a))
