"""scikit-learn style wrappers around the functional API."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .circuit_builder import BuildOptions, build_udis, spectrum_for
from .exceptions import InvalidArgumentError
from .ising_model import IsingSpec
from .statevector import run_circuit_batch
from .thermal import OBSERVABLES, ThermalConfig, thermal_expectation
from .validation import check_bitstring


def check_labels(X, n: int) -> np.ndarray:
    """Coerce bitstrings, or an ``(m, n)`` 0/1 array, to an int array of shape ``(m, n)``."""
    if isinstance(X, str):
        X = [X]
    X = list(X) if not isinstance(X, np.ndarray) else X
    if len(X) and isinstance(X[0], str):
        X = [[int(c) for c in check_bitstring(b, n)] for b in X]
    arr = check_array(X, dtype=np.int64, ensure_2d=True)
    if arr.shape[1] != n:
        raise InvalidArgumentError(f"labels must have {n} bits, got {arr.shape[1]}")
    if np.any((arr != 0) & (arr != 1)):
        raise InvalidArgumentError("labels must contain only 0 and 1")
    return arr


def _indices(labels: np.ndarray) -> np.ndarray:
    n = labels.shape[1]
    return labels @ (1 << np.arange(n - 1, -1, -1))


class IsingDisentangler(TransformerMixin, BaseEstimator):
    """Maps diagonal-basis labels to eigenstates of the transverse-field chain.

    ``fit`` builds the disentangling circuit; ``transform`` returns the
    amplitude vectors of ``U_dis|b>`` row by row; ``predict`` returns their
    energies; ``inverse_transform`` maps amplitude rows back to the
    diagonal basis.

    Parameters
    ----------
    n : int, default=4
    lam : float, default=1.5
    with_fswaps : bool, default=True
    include_b0 : bool, default=False

    Attributes
    ----------
    circuit_ : Circuit
    spectrum_ : SpectrumTable
    ground_bitstring_ : str
    n_features_in_ : int
    """

    def __init__(self, n=4, lam=1.5, with_fswaps=True, include_b0=False):
        self.n = n
        self.lam = lam
        self.with_fswaps = with_fswaps
        self.include_b0 = include_b0

    def fit(self, X=None, y=None):
        spec = IsingSpec(self.n, self.lam)
        opts = BuildOptions(bool(self.with_fswaps), bool(self.include_b0))
        self.spec_ = spec
        self.circuit_ = build_udis(spec, opts)
        self.spectrum_ = spectrum_for(spec, opts)
        self.ground_bitstring_ = self.spectrum_.ground_bitstring()
        self.n_features_in_ = spec.n
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "circuit_")
        labels = check_labels(X, self.spec_.n)
        cols = np.zeros((2 ** self.spec_.n, labels.shape[0]), dtype=complex)
        cols[_indices(labels), np.arange(labels.shape[0])] = 1
        return run_circuit_batch(self.circuit_, cols).T

    def inverse_transform(self, X) -> np.ndarray:
        check_is_fitted(self, "circuit_")
        psi = np.atleast_2d(np.asarray(X, dtype=complex))
        if psi.shape[1] != 2 ** self.spec_.n:
            raise InvalidArgumentError(f"rows must have {2 ** self.spec_.n} amplitudes")
        return run_circuit_batch(self.circuit_.inverse(), psi.T).T

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "spectrum_")
        labels = check_labels(X, self.spec_.n)
        return self.spectrum_.energies()[_indices(labels)]


class ThermalMagnetization(BaseEstimator):
    """Thermal expectation of an observable as a function of the field.

    ``predict`` takes a column (or 1-D list) of field values and returns the
    thermal averages at fixed ``beta``. After ``predict`` the standard
    errors of the last call are stored in ``stderr_``.

    Parameters
    ----------
    n : int, default=4
    beta : float, default=1.0
    observable : {"sigma_z", "staggered_x"}, default="sigma_z"
    method : {"exact", "sampled"}, default="exact"
    shots : int, default=4096
    random_state : int or None
    """

    def __init__(self, n=4, beta=1.0, observable="sigma_z", method="exact", shots=4096,
                 random_state=None):
        self.n = n
        self.beta = beta
        self.observable = observable
        self.method = method
        self.shots = shots
        self.random_state = random_state

    def fit(self, X=None, y=None):
        if self.observable not in OBSERVABLES:
            raise InvalidArgumentError(f"observable must be one of {OBSERVABLES}")
        self.config_ = ThermalConfig(self.beta, self.method, self.shots, self.random_state)
        IsingSpec(self.n, 0.0)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "config_")
        lams = check_array(np.asarray(X, dtype=float).reshape(-1, 1), ensure_2d=True)[:, 0]
        seeds = np.random.SeedSequence(self.random_state).spawn(lams.size)
        out, err = [], []
        for lam, sq in zip(lams, seeds):
            cfg = ThermalConfig(self.beta, self.method, self.shots, sq)
            v, e = thermal_expectation(cfg, IsingSpec(self.n, lam), self.observable)
            out.append(v)
            err.append(e)
        self.stderr_ = np.array(err)
        return np.array(out)
