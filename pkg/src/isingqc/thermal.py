"""Finite-temperature expectation values from eigenstate circuits.

Two estimators are provided. The exact one simulates ``U_dis|b>`` for every
label ``b`` and averages the per-state expectations with Boltzmann weights.
The sampled one draws labels from the Boltzmann distribution and records one
measurement shot of ``U_dis|b>`` per draw, so ``N`` draws cost ``N`` circuit
runs and carry a statistical error of order ``1/sqrt(N)``.

Energies are shifted by their minimum before exponentiation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .circuit_builder import BuildOptions, build_udis, spectrum_for
from .exceptions import InvalidArgumentError, ResourceLimitError
from .ising_model import IsingSpec, SpectrumTable
from .statevector import apply_matrix, run_circuit_batch
from .validation import MAX_DENSE_QUBITS, check_grid, check_nonnegative, check_shots

OBSERVABLES = ("sigma_z", "staggered_x")


@dataclass(frozen=True)
class ThermalConfig:
    """Settings for a thermal estimate.

    Attributes
    ----------
    beta : float
        Inverse temperature (``k_B = 1``).
    method : {"exact", "sampled"}
    shots : int
        Number of Boltzmann draws in sampled mode.
    seed : int or None
    """

    beta: float
    method: str = "exact"
    shots: int = 4096
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "beta", check_nonnegative(self.beta, "beta"))
        if self.method not in ("exact", "sampled"):
            raise InvalidArgumentError(f"method must be 'exact' or 'sampled', got {self.method!r}")
        object.__setattr__(self, "shots", check_shots(self.shots))


def _check_observable(observable: str) -> str:
    if observable not in OBSERVABLES:
        raise InvalidArgumentError(f"observable must be one of {OBSERVABLES}, got {observable!r}")
    return observable


def boltzmann_weights(beta: float, table: SpectrumTable) -> np.ndarray:
    """Normalised probabilities ``exp(-beta E_b) / Z`` indexed by basis index."""
    beta = check_nonnegative(beta, "beta")
    e = table.energies()
    w = np.exp(-beta * (e - e.min()))
    return w / w.sum()


def log_partition_function(beta: float, table: SpectrumTable) -> float:
    beta = check_nonnegative(beta, "beta")
    e = table.energies()
    emin = float(e.min())
    return -beta * emin + math.log(float(np.exp(-beta * (e - emin)).sum()))


def partition_function(beta: float, table: SpectrumTable) -> float:
    """``Z = sum_b exp(-beta E_b)``; may overflow to ``inf`` for huge ``beta``."""
    return math.exp(log_partition_function(beta, table))


def _shot_values(n: int, observable: str) -> np.ndarray:
    """Per-outcome value of the observable for measured bitstrings."""
    idx = np.arange(2 ** n)
    bits = np.array([(idx >> (n - 1 - q)) & 1 for q in range(n)])
    signs = 1 - 2 * bits
    if observable == "sigma_z":
        return signs.mean(axis=0)
    return ((-1) ** np.arange(n)) @ signs


@lru_cache(maxsize=256)
def _outcome_table(n: int, lam: float, observable: str, with_fswaps: bool,
                   include_b0: bool) -> np.ndarray:
    """Row ``b`` holds the measurement distribution of ``U_dis|b>``.

    For ``staggered_x`` every qubit is rotated by a Hadamard before readout.
    """
    if n > MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"thermal averages need n <= {MAX_DENSE_QUBITS}")
    spec = IsingSpec(n, lam)
    psi = run_circuit_batch(build_udis(spec, BuildOptions(with_fswaps, include_b0)),
                            np.eye(2 ** n, dtype=complex))
    if observable == "staggered_x":
        h = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        for q in range(n):
            psi = apply_matrix(psi, n, h, (q,))
    probs = np.abs(psi.T) ** 2
    probs.setflags(write=False)
    return probs


def basis_expectations(spec: IsingSpec, observable: str = "sigma_z",
                       opts: BuildOptions | None = None) -> np.ndarray:
    """``<E_b|O|E_b>`` for every label, computed once per ``(n, lam)`` and cached."""
    opts = opts or BuildOptions()
    observable = _check_observable(observable)
    probs = _outcome_table(spec.n, spec.lam, observable, opts.with_fswaps, opts.include_b0)
    return probs @ _shot_values(spec.n, observable)


def thermal_expectation_exact(beta: float, spec: IsingSpec, observable: str = "sigma_z",
                              opts: BuildOptions | None = None) -> float:
    """Boltzmann-weighted average of the per-eigenstate expectations."""
    w = boltzmann_weights(beta, spectrum_for(spec, opts))
    return float(np.dot(w, basis_expectations(spec, observable, opts)))


class BoltzmannSampler:
    """Iterator of labels drawn with probability ``exp(-beta E_b) / Z``."""

    def __init__(self, beta: float, table: SpectrumTable, seed=None, chunk: int = 4096):
        self.table = table
        self.p = boltzmann_weights(beta, table)
        self.rng = np.random.default_rng(seed)
        self.chunk = chunk
        self._buf: list = []

    def draw_indices(self, size: int) -> np.ndarray:
        return self.rng.choice(self.p.size, size=size, p=self.p)

    def draw(self, size: int) -> list[str]:
        n = self.table.n
        return [format(int(i), f"0{n}b") for i in self.draw_indices(size)]

    def __iter__(self) -> Iterator[str]:
        return self

    def __next__(self) -> str:
        if not self._buf:
            self._buf = self.draw(self.chunk)[::-1]
        return self._buf.pop()


def boltzmann_sampler(beta: float, table: SpectrumTable, seed=None) -> BoltzmannSampler:
    """Endless, seeded stream of Boltzmann-distributed labels."""
    return BoltzmannSampler(beta, table, seed)


def thermal_expectation_sampled(cfg: ThermalConfig, spec: IsingSpec,
                                observable: str = "sigma_z",
                                opts: BuildOptions | None = None) -> tuple[float, float]:
    """Mean and standard error over ``cfg.shots`` draws, one readout shot each."""
    opts = opts or BuildOptions()
    observable = _check_observable(observable)
    table = spectrum_for(spec, opts)
    probs = _outcome_table(spec.n, spec.lam, observable, opts.with_fswaps, opts.include_b0)
    values = _shot_values(spec.n, observable)
    rng = np.random.default_rng(cfg.seed)
    labels = BoltzmannSampler(cfg.beta, table, rng).draw_indices(cfg.shots)
    # one shot per drawn label: inverse-CDF on that label's readout distribution
    cdf = np.cumsum(probs[labels], axis=1)
    u = rng.random(cfg.shots)[:, None] * cdf[:, -1:]
    outcomes = np.minimum((cdf < u).sum(axis=1), probs.shape[1] - 1)
    x = values[outcomes]
    err = float(x.std(ddof=1) / math.sqrt(cfg.shots)) if cfg.shots > 1 else float("nan")
    return float(x.mean()), err


def thermal_expectation(cfg: ThermalConfig, spec: IsingSpec, observable: str = "sigma_z",
                        opts: BuildOptions | None = None) -> tuple[float, float]:
    """Dispatch on ``cfg.method``; the exact method reports zero error."""
    if cfg.method == "exact":
        return thermal_expectation_exact(cfg.beta, spec, observable, opts), 0.0
    return thermal_expectation_sampled(cfg, spec, observable, opts)


def thermal_map(betas, lams, n: int = 4, observable: str = "sigma_z", method: str = "exact",
                shots: int = 4096, seed=None) -> tuple[np.ndarray, np.ndarray]:
    """Values and standard errors on the ``(beta, lam)`` grid, shape ``(len(betas), len(lams))``.

    Each grid point in sampled mode gets its own child seed, so results do
    not depend on evaluation order.
    """
    betas, lams = check_grid(betas, "betas"), check_grid(lams, "lams")
    vals = np.zeros((betas.size, lams.size))
    errs = np.zeros_like(vals)
    children = np.random.SeedSequence(seed).spawn(vals.size)
    for i, b in enumerate(betas):
        for j, lam in enumerate(lams):
            cfg = ThermalConfig(b, method, shots, children[i * lams.size + j])
            vals[i, j], errs[i, j] = thermal_expectation(cfg, IsingSpec(n, lam), observable)
    return vals, errs
