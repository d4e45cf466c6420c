"""Named gates, their exact matrices, and decompositions into native sets.

Two-qubit matrices are written in the basis ``|ab>`` with the first target
``a`` as the most significant bit. Rotations follow the sign conventions

    RX(t) = exp(+i t X / 2),  RY(t) = exp(-i t Y / 2),  RZ(t) = exp(+i t Z / 2)

and the IBM-style gates are parametrised as

    U1(l)       = diag(1, e^{il})
    U2(l, p)    = [[1, -e^{il}], [e^{ip}, e^{i(l+p)}]] / sqrt(2)
    U3(t, l, p) = [[cos(t/2), -e^{il} sin(t/2)], [e^{ip} sin(t/2), e^{i(l+p)} cos(t/2)]]

Every decomposition is correct up to a single global phase.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import (InvalidArgumentError, ResourceLimitError,
                         UnsupportedDecompositionError)
from .validation import MAX_DENSE_QUBITS, is_power_of_two

_S2 = 1.0 / math.sqrt(2.0)
_PX = np.array([[0, 1], [1, 0]], dtype=complex)
_PY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_PZ = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


def _rot(pauli, sign):
    def build(theta):
        # exp(i s t P / 2) for a Pauli P
        return math.cos(theta / 2) * _I2 + 1j * sign * math.sin(theta / 2) * pauli
    return build


def _u3(theta, lam, phi):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -np.exp(1j * lam) * s],
                     [np.exp(1j * phi) * s, np.exp(1j * (lam + phi)) * c]])


def _controlled(u):
    m = np.eye(4, dtype=complex)
    m[2:, 2:] = u
    return m


def _fourier(n, k):
    w = np.exp(2j * math.pi * k / n)
    return np.array([[1, 0, 0, 0],
                     [0, _S2, w * _S2, 0],
                     [0, _S2, -w * _S2, 0],
                     [0, 0, 0, -w]], dtype=complex)


def _bogoliubov(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, 0, 0, 1j * s],
                     [0, 1, 0, 0],
                     [0, 0, 1, 0],
                     [1j * s, 0, 0, c]], dtype=complex)


# name -> (arity, n_params, matrix builder, fermionic)
_REGISTRY: dict[str, tuple[int, int, Callable[..., np.ndarray], bool]] = {
    "I": (1, 0, lambda: _I2, False),
    "X": (1, 0, lambda: _PX, False),
    "Y": (1, 0, lambda: _PY, False),
    "Z": (1, 0, lambda: _PZ, False),
    "H": (1, 0, lambda: np.array([[1, 1], [1, -1]], dtype=complex) * _S2, False),
    "S": (1, 0, lambda: np.diag([1, 1j]), False),
    "SDG": (1, 0, lambda: np.diag([1, -1j]), False),
    "T": (1, 0, lambda: np.diag([1, np.exp(1j * math.pi / 4)]), False),
    "TDG": (1, 0, lambda: np.diag([1, np.exp(-1j * math.pi / 4)]), False),
    "PH": (1, 1, lambda p: np.diag([1, np.exp(1j * p)]), False),
    "RX": (1, 1, _rot(_PX, +1), False),
    "RY": (1, 1, _rot(_PY, -1), False),
    "RZ": (1, 1, _rot(_PZ, +1), False),
    "U1": (1, 1, lambda lam: np.diag([1, np.exp(1j * lam)]), False),
    "U2": (1, 2, lambda lam, phi: _u3(math.pi / 2, lam, phi), False),
    "U3": (1, 3, _u3, False),
    "CNOT": (2, 0, lambda: _controlled(_PX), False),
    "CZ": (2, 0, lambda: np.diag([1, 1, 1, -1]).astype(complex), False),
    "SWAP": (2, 0, lambda: np.eye(4, dtype=complex)[[0, 2, 1, 3]], False),
    "CH": (2, 0, lambda: _controlled(np.array([[1, 1], [1, -1]]) * _S2), False),
    "CRX": (2, 1, lambda t: _controlled(_rot(_PX, +1)(t)), False),
    "FSWAP": (2, 0, lambda: np.diag([1, 1, 1, -1]).astype(complex)[[0, 2, 1, 3]], True),
    "F": (2, 2, lambda n, k: _fourier(n, k), True),
    "FDG": (2, 2, lambda n, k: _fourier(n, k).conj().T, True),
    "B": (2, 1, _bogoliubov, True),
}

_SELF_INVERSE = {"I", "X", "Y", "Z", "H", "CNOT", "CZ", "SWAP", "CH", "FSWAP"}


@dataclass(frozen=True)
class Gate:
    """An immutable named gate.

    Equality and hashing use ``(name, params)`` only; the matrix is derived.

    Attributes
    ----------
    name : str
        Upper-case identifier, e.g. ``"CNOT"`` or ``"F"``.
    params : tuple of float
        Real parameters. For ``F``/``FDG`` these are ``(n, k)``.
    fermionic : bool
        True for gates acting on fermionic modes (Fourier, Bogoliubov,
        fSWAP). Such gates placed on non-adjacent wires are interpreted
        with the Jordan-Wigner string between them.
    """

    name: str
    params: tuple = ()
    matrix: np.ndarray = field(default=None, compare=False, repr=False)
    fermionic: bool = field(default=False, compare=False)

    @property
    def arity(self) -> int:
        return 1 if self.matrix.shape[0] == 2 else 2

    def plain(self) -> "Gate":
        """Same matrix with plain qubit semantics on any pair of wires."""
        return Gate(self.name, self.params, self.matrix, False) if self.fermionic else self

    def dagger(self) -> "Gate":
        d = self._adjoint()
        return d if self.fermionic else d.plain()

    def _adjoint(self) -> "Gate":
        n, p = self.name, self.params
        if n in _SELF_INVERSE:
            return self
        if n in ("S", "SDG", "T", "TDG"):
            return make_gate({"S": "SDG", "SDG": "S", "T": "TDG", "TDG": "T"}[n])
        if n in ("PH", "RX", "RY", "RZ", "U1", "CRX", "B"):
            return make_gate(n, -p[0])
        if n == "U2":
            return make_gate("U3", -math.pi / 2, -p[1], -p[0])
        if n == "U3":
            return make_gate("U3", -p[0], -p[2], -p[1])
        if n == "F":
            return make_gate("FDG", *p)
        if n == "FDG":
            return make_gate("F", *p)
        raise UnsupportedDecompositionError(f"no inverse rule for {n}")  # pragma: no cover


def make_gate(name: str, *params) -> Gate:
    """Construct a library gate by name, e.g. ``make_gate("RY", 0.3)``."""
    key = name.upper()
    if key not in _REGISTRY:
        raise InvalidArgumentError(f"unknown gate {name!r}")
    arity, npar, build, ferm = _REGISTRY[key]
    if len(params) != npar:
        raise InvalidArgumentError(f"{key} takes {npar} parameter(s), got {len(params)}")
    params = tuple(float(x) for x in params)
    m = np.array(build(*params), dtype=complex)
    m.setflags(write=False)
    return Gate(key, params, m, ferm)


def gate_names() -> list[str]:
    return sorted(_REGISTRY)


def gate_arity(name: str) -> int:
    return _REGISTRY[name.upper()][0]


def gate_param_count(name: str) -> int:
    return _REGISTRY[name.upper()][1]


def fswap() -> Gate:
    """Fermionic SWAP: SWAP with a -1 on ``|11>``."""
    return make_gate("FSWAP")


def fourier_gate(n: int, k: int) -> Gate:
    """Two-mode Fourier block with twiddle ``exp(2 pi i k / n)``.

    Parameters
    ----------
    n : int
        Size of the (sub-)transform, a power of two.
    k : int
        Layer-local index, ``0 <= k < n/2``.
    """
    if not is_power_of_two(n) or n < 2:
        raise InvalidArgumentError(f"transform size must be a power of two >= 2, got {n!r}")
    if not 0 <= k < max(n // 2, 1):
        raise InvalidArgumentError(f"k must lie in [0, {n // 2}), got {k}")
    return make_gate("F", n, k)


def bogoliubov_gate(n: int, k: int, lam: float) -> Gate:
    """Bogoliubov mode mixer for the pair ``(k, -k)`` at field ``lam``."""
    from .ising_model import bogoliubov_angle
    return make_gate("B", bogoliubov_angle(n, k, lam))


class NativeBasis(enum.Enum):
    """Target gate set for rewriting."""

    IBM = "ibm"
    RIGETTI = "rigetti"
    GENERIC = "generic"

    @property
    def gates(self) -> frozenset:
        if self is NativeBasis.IBM:
            return frozenset({"U1", "U2", "U3", "CNOT"})
        if self is NativeBasis.RIGETTI:
            return frozenset({"RX", "RY", "RZ", "CZ"})
        return frozenset(_REGISTRY)

    @classmethod
    def parse(cls, value) -> "NativeBasis":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidArgumentError(f"unknown basis {value!r}; use ibm, rigetti or generic")


# ---------------------------------------------------------------- decomposition

_ATOL = 1e-10


def _wrap(a: float) -> float:
    """Map an angle to (-pi, pi], snapping values near zero."""
    a = math.remainder(a, 2 * math.pi)
    if a <= -math.pi + 1e-12:
        a += 2 * math.pi
    return 0.0 if abs(a) < 1e-13 else a


def u3_angles(u: np.ndarray) -> tuple[float, float, float]:
    """Return ``(theta, lam, phi)`` with ``U3(theta, lam, phi)`` equal to ``u`` up to phase."""
    a, b = abs(u[0, 0]), abs(u[1, 0])
    theta = 2 * math.atan2(b, a)
    if a > 1e-9:
        ref = np.angle(u[0, 0])
        if b > 1e-9:
            phi = np.angle(u[1, 0]) - ref
            lam = np.angle(-u[0, 1]) - ref
        else:
            phi, lam = 0.0, np.angle(u[1, 1]) - ref
    else:
        ref = np.angle(u[1, 0])
        phi, lam = 0.0, np.angle(-u[0, 1]) - ref
    return theta, _wrap(lam), _wrap(phi)


def _one_qubit_native(u: np.ndarray, basis: NativeBasis) -> list[Gate]:
    theta, lam, phi = u3_angles(u)
    if basis is NativeBasis.IBM:
        if abs(theta) < 1e-12:
            tot = _wrap(lam + phi)
            return [] if tot == 0.0 else [make_gate("U1", tot)]
        if abs(theta - math.pi / 2) < 1e-12:
            return [make_gate("U2", lam, phi)]
        return [make_gate("U3", theta, lam, phi)]
    # U3(t, l, p) = RZ(-p) RY(t) RZ(-l) up to phase, rightmost first
    out = []
    if abs(theta) < 1e-12:
        tot = _wrap(-(lam + phi))
        return [] if tot == 0.0 else [make_gate("RZ", tot)]
    if lam != 0.0:
        out.append(make_gate("RZ", _wrap(-lam)))
    out.append(make_gate("RY", theta))
    if phi != 0.0:
        out.append(make_gate("RZ", _wrap(-phi)))
    return out


def _block_rule(g: Gate) -> list[tuple[Gate, tuple[int, ...]]] | None:
    """One-level textbook decomposition on local wires ``(0, 1)``, or None."""
    n, p = g.name, g.params
    cx, cxr = (make_gate("CNOT"), (0, 1)), (make_gate("CNOT"), (1, 0))
    h1 = (make_gate("H"), (1,))
    if n == "FSWAP":
        return [cx, cxr, cx, h1, cx, h1]
    if n == "CH":
        return [(make_gate("SDG"), (1,)), h1, (make_gate("TDG"), (1,)), cx,
                (make_gate("T"), (1,)), h1, (make_gate("S"), (1,))]
    if n == "CRX":
        t = p[0]
        return [(make_gate("RZ", math.pi / 2), (1,)), (make_gate("RY", t / 2), (1,)), cx,
                (make_gate("RY", -t / 2), (1,)), cx, (make_gate("RZ", -math.pi / 2), (1,))]
    if n == "F":
        size, k = p
        return [(make_gate("PH", 2 * math.pi * k / size), (0,)), cx,
                (make_gate("CH"), (1, 0)), cx, (make_gate("CZ"), (0, 1))]
    if n == "FDG":
        fwd = _block_rule(make_gate("F", *p))
        return [(gg.dagger(), t) for gg, t in reversed(fwd)]
    if n == "B":
        x1 = (make_gate("X"), (1,))
        return [x1, cxr, (make_gate("CRX", p[0]), (0, 1)), cxr, x1]
    if n == "SWAP":
        return [cx, cxr, cx]
    return None


def _expand(g: Gate, targets: tuple[int, ...], basis: NativeBasis) -> list:
    allowed = basis.gates
    if basis is NativeBasis.GENERIC:
        return [(g, targets)]
    if g.arity == 1:
        return [(x, targets) for x in _one_qubit_native(g.matrix, basis)]
    a, b = targets
    if g.name in allowed:
        return [(g, targets)]
    if g.name == "CNOT" and basis is NativeBasis.RIGETTI:
        h = make_gate("H")
        seq = [(h, (b,)), (make_gate("CZ"), (a, b)), (h, (b,))]
    elif g.name == "CZ" and basis is NativeBasis.IBM:
        h = make_gate("H")
        seq = [(h, (b,)), (make_gate("CNOT"), (a, b)), (h, (b,))]
    else:
        rule = _block_rule(g)
        if rule is None:
            raise UnsupportedDecompositionError(f"cannot decompose {g.name} into {basis.value}")
        seq = [(gg, tuple(targets[i] for i in t)) for gg, t in rule]
    out = []
    for gg, tt in seq:
        out.extend(_expand(gg, tt, basis))
    return out


def decompose(g: Gate, basis: NativeBasis | str = NativeBasis.GENERIC):
    """Decompose ``g`` into gates of ``basis``.

    With ``GENERIC`` the textbook one-level decomposition is returned
    (fSWAP into CNOTs and Hadamards, Fourier block into phase, CNOT, CH and
    CZ, Bogoliubov block into CNOTs around a controlled-RX, and so on);
    primitive gates come back unchanged. Native bases are reached
    recursively and one-qubit gates are converted by Euler angles.

    Returns
    -------
    Circuit
        On ``g.arity`` qubits, equal to ``g`` up to a global phase.
    """
    from .circuit import Circuit, Op
    basis = NativeBasis.parse(basis)
    local = tuple(range(g.arity))
    if basis is NativeBasis.GENERIC:
        rule = _block_rule(g)
        seq = rule if rule is not None else [(g, local)]
    else:
        try:
            seq = _expand(g, local, basis)
        except RecursionError:  # pragma: no cover
            raise UnsupportedDecompositionError(g.name)
    return Circuit(g.arity, tuple(Op(gg, t, "decomp") for gg, t in seq))


def phase_between(a: np.ndarray, b: np.ndarray, atol: float = 1e-9):
    """Return ``z`` with ``a = z b`` and ``|z| = 1`` if it exists, else None."""
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) < 1e-12:
        return None
    z = a[idx] / b[idx]
    if abs(abs(z) - 1) > atol or not np.allclose(a, z * b, atol=atol, rtol=0):
        return None
    return complex(z / abs(z))


def equiv_up_to_phase(a, b, n: int | None = None, atol: float = 1e-9):
    """Compare two circuits as full unitaries modulo a global phase.

    Returns
    -------
    (bool, complex or None)
        Whether they agree, and the phase ``z`` with ``U(a) = z U(b)``.
    """
    from .statevector import circuit_unitary
    n = n if n is not None else max(a.n, b.n)
    if a.n != b.n or a.n != n:
        raise InvalidArgumentError("circuits act on different qubit counts")
    if n > MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"dense comparison limited to {MAX_DENSE_QUBITS} qubits")
    z = phase_between(circuit_unitary(a), circuit_unitary(b), atol)
    return z is not None, z
