"""Oracle checks run by ``isingqc verify``.

Each check compares the circuits against an independent dense computation
and reports its largest residual.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .circuit import Circuit, Op
from .circuit_builder import BuildOptions, build_udis
from .dynamics import prepare_evolved_circuit, sigma_z_of_t
from .gatelib import decompose, make_gate, phase_between
from .ising_model import (IsingSpec, SpectrumTable, ground_bitstring, ground_state_analytic_n4,
                          hamiltonian_matrix)
from .statevector import circuit_unitary, expval_z_avg, overlap, run_circuit

Builder = Callable[[IsingSpec, BuildOptions], Circuit]


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<32s} max residual {self.residual:.3e}  (tol {self.tolerance:.0e})"


def fields_off_critical(count: int = 20, hi: float = 3.0) -> np.ndarray:
    """``count`` evenly spaced fields in ``[0, hi]`` that avoid ``lam = 1``."""
    grid = np.linspace(0, hi, count)
    assert not np.any(np.isclose(grid, 1.0))
    return grid


def check_diagonalization(builder: Builder = build_udis, sizes=(4, 8),
                          fields=(0.2, 0.5, 1.5, 2.0)) -> CheckResult:
    worst = 0.0
    for n in sizes:
        for lam in fields:
            spec = IsingSpec(n, lam)
            u = circuit_unitary(builder(spec, BuildOptions()))
            d = u.conj().T @ hamiltonian_matrix(spec) @ u
            diag = np.diag(d).real
            off = np.max(np.abs(d - np.diag(np.diag(d))))
            shift = np.mean(diag - SpectrumTable(spec).energies())
            worst = max(worst, off, np.max(np.abs(diag - SpectrumTable(spec).energies() - shift)))
    return CheckResult("diagonalization", float(worst), 1e-9)


def check_ground_state(builder: Builder = build_udis) -> CheckResult:
    worst = 0.0
    for lam in fields_off_critical():
        spec = IsingSpec(4, lam)
        s = run_circuit(builder(spec, BuildOptions()), ground_bitstring(spec))
        worst = max(worst, 1 - abs(overlap(ground_state_analytic_n4(lam), s)))
    return CheckResult("ground state (n=4)", float(worst), 1e-9)


def check_time_evolution(fields=(0, 0.5, 1, 1.5, 2), points: int = 50) -> CheckResult:
    worst = 0.0
    for lam in fields:
        for t in np.linspace(0, 2 * math.pi, points):
            s = run_circuit(prepare_evolved_circuit(lam, t))
            worst = max(worst, abs(expval_z_avg(s) - sigma_z_of_t(lam, t)))
    return CheckResult("time evolution closed form", float(worst), 1e-9)


def check_spectrum(sizes=(4, 8), fields=(0, 0.5, 1, 1.5, 2)) -> CheckResult:
    worst = 0.0
    for n in sizes:
        for lam in fields:
            spec = IsingSpec(n, lam)
            ev = np.linalg.eigvalsh(hamiltonian_matrix(spec))
            tab = np.sort(SpectrumTable(spec).energies())
            shift = np.mean(ev - tab)
            worst = max(worst, np.max(np.abs(ev - tab - shift)))
    return CheckResult("spectrum multiset", float(worst), 1e-9)


def _decomp_residual(gate) -> float:
    u = circuit_unitary(decompose(gate))
    z = phase_between(u, gate.matrix)
    if z is None:
        return float("inf")
    return float(np.max(np.abs(u - z * gate.matrix)))


def check_decompositions(angles: int = 24) -> CheckResult:
    gates = [make_gate("FSWAP"), make_gate("CH")]
    for t in np.linspace(-math.pi, math.pi, angles):
        gates += [make_gate("CRX", t), make_gate("B", t)]
    for n in (2, 4, 8, 16):
        for k in range(max(n // 2, 1)):
            gates += [make_gate("F", n, k), make_gate("FDG", n, k)]
    return CheckResult("gate decompositions", max(_decomp_residual(g) for g in gates), 1e-10)


def check_gate_identities(angles: int = 24) -> CheckResult:
    worst = 0.0

    def res(a, b):
        z = phase_between(a.matrix, b.matrix)
        return float("inf") if z is None else float(np.max(np.abs(a.matrix - z * b.matrix)))

    for t in np.linspace(-math.pi, math.pi, angles):
        worst = max(worst,
                    res(make_gate("RX", t), make_gate("U3", t, -math.pi / 2, math.pi / 2)),
                    res(make_gate("RY", t), make_gate("U3", t, 0, 0)),
                    res(make_gate("RZ", t), make_gate("U1", -t)))
    worst = max(worst, res(make_gate("PH", math.pi / 2), make_gate("S")),
                res(make_gate("PH", math.pi / 4), make_gate("T")))
    return CheckResult("native gate identities", worst, 1e-10)


def run_checks(builder: Builder = build_udis) -> list[CheckResult]:
    """Run every oracle check; ``builder`` may be swapped for a negative control."""
    return [
        check_diagonalization(builder),
        check_ground_state(builder),
        check_time_evolution(),
        check_spectrum(),
        check_decompositions(),
        check_gate_identities(),
    ]


def corrupted_builder(spec: IsingSpec, opts: BuildOptions) -> Circuit:
    """U_dis with every Bogoliubov angle sign flipped (negative control)."""
    c = build_udis(spec, opts)
    ops = tuple(Op(make_gate("B", -op.gate.params[0]), op.targets, op.tag)
                if op.gate.name == "B" else op for op in c.ops)
    return Circuit(c.n, ops)
