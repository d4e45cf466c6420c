"""Input validation helpers in the spirit of ``sklearn.utils.validation``."""
from __future__ import annotations

import numbers

import numpy as np

from .exceptions import InvalidArgumentError, ResourceLimitError

MAX_SIM_QUBITS = 24
MAX_DENSE_QUBITS = 12


def is_power_of_two(n) -> bool:
    return isinstance(n, numbers.Integral) and n >= 1 and (n & (n - 1)) == 0


def check_chain_size(n, minimum=4):
    """Validate a chain length: an integer power of two, at least ``minimum``."""
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise InvalidArgumentError(f"chain size must be an integer, got {n!r}")
    if not is_power_of_two(n) or n < minimum:
        raise InvalidArgumentError(
            f"chain size must be a power of two >= {minimum}, got {n}")
    return int(n)


def check_qubit_count(n, limit=None):
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 1:
        raise InvalidArgumentError(f"qubit count must be a positive integer, got {n!r}")
    if limit is not None and n > limit:
        raise ResourceLimitError(f"{n} qubits exceeds the limit of {limit}")
    return int(n)


def check_bitstring(b, n=None) -> str:
    """Normalise ``b`` (str, sequence of 0/1, or array) to a '0'/'1' string."""
    if isinstance(b, str):
        s = b
    else:
        try:
            s = "".join(str(int(x)) for x in b)
        except (TypeError, ValueError) as exc:
            raise InvalidArgumentError(f"not a bitstring: {b!r}") from exc
    if not s or set(s) - {"0", "1"}:
        raise InvalidArgumentError(f"bitstring must be over {{0,1}}, got {b!r}")
    if n is not None and len(s) != n:
        raise InvalidArgumentError(f"bitstring {s!r} has length {len(s)}, expected {n}")
    return s


def check_qubit_index(q, n) -> int:
    if isinstance(q, bool) or not isinstance(q, numbers.Integral) or not 0 <= q < n:
        raise InvalidArgumentError(f"qubit index {q!r} out of range for {n} qubits")
    return int(q)


def check_real(x, name="value") -> float:
    try:
        v = float(x)
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"{name} must be real, got {x!r}") from exc
    if not np.isfinite(v):
        raise InvalidArgumentError(f"{name} must be finite, got {x!r}")
    return v


def check_nonnegative(x, name="value") -> float:
    v = check_real(x, name)
    if v < 0:
        raise InvalidArgumentError(f"{name} must be >= 0, got {x!r}")
    return v


def check_shots(shots) -> int:
    if isinstance(shots, bool) or not isinstance(shots, numbers.Integral) or shots < 1:
        raise InvalidArgumentError(f"shots must be a positive integer, got {shots!r}")
    return int(shots)


def check_grid(values, name="grid") -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidArgumentError(f"{name} must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} contains non-finite values")
    return arr
