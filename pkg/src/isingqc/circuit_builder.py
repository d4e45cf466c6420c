"""Construction of the disentangling circuit U_dis.

U_dis maps the computational basis state ``|b>`` to the Hamiltonian
eigenstate with energy ``SpectrumTable.energy(b)``. In time order it is

1. an X on every wire, so that the all-zeros label is the vacuum of
   quasiparticles (``prep``);
2. one Bogoliubov block per ``(j, n - j)`` momentum pair on neighbouring
   wires (``bogoliubov``);
3. an fSWAP network taking partner-adjacent order to the order in which
   the Fourier network produces momenta (``fswap``);
4. the inverse fermionic fast Fourier transform, built recursively from
   two-mode Fourier blocks and interleaving fSWAP networks (``fourier``).

For ``n = 4`` the last three steps are exactly one Bogoliubov block, four
Fourier blocks and two fSWAPs.
"""
from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, Op
from .exceptions import InvalidArgumentError
from .gatelib import fswap, make_gate
from .ising_model import (IsingSpec, SpectrumTable, bogoliubov_angle, fourier_output_modes,
                          is_unmixed, mode_layout, signed_momentum, unmixed_wire)
from .validation import is_power_of_two


@dataclass(frozen=True)
class BuildOptions:
    """Builder switches.

    Attributes
    ----------
    with_fswaps : bool
        If False the Fourier stage omits its interleaving networks and the
        Fourier blocks act directly on non-neighbouring wires (fermionic
        semantics, see :mod:`isingqc.circuit`). Intended for all-to-all
        hardware; the unitary is unchanged.
    include_b0 : bool
        For ``lam < 1`` add a bit flip on the wire of the zero-momentum mode,
        which makes the all-zeros label the ground state on both sides of
        the transition.
    """

    with_fswaps: bool = True
    include_b0: bool = False


def sort_network(current, target) -> list[int]:
    """Odd-even transposition sort; returns neighbour-swap positions (left wire)."""
    pos = {v: i for i, v in enumerate(target)}
    a = [pos[v] for v in current]
    swaps = []
    for r in range(len(a)):
        for i in range(r % 2, len(a) - 1, 2):
            if a[i] > a[i + 1]:
                a[i], a[i + 1] = a[i + 1], a[i]
                swaps.append(i)
    return swaps


def _twiddle(p: int, m: int) -> int:
    return 0 if m == 2 else fourier_output_modes(m // 2)[p]


def _fourier_ops(wires: list, with_fswaps: bool) -> list:
    m = len(wires)
    if m == 1:
        return []
    ops = [Op(make_gate("FDG", m, _twiddle(p, m)), (wires[2 * p], wires[2 * p + 1]), "fourier")
          for p in range(m // 2)]
    if m == 2:
        return ops
    if not with_fswaps:
        return ops + _fourier_ops(wires[0::2], False) + _fourier_ops(wires[1::2], False)
    fs = fswap()
    # separate even and odd positions, recurse on the halves, interleave back
    split = [(i % 2) * m + i // 2 for i in range(m)]
    ops += [Op(fs, (wires[i], wires[i + 1]), "fswap") for i in sort_network(split, sorted(split))]
    ops += _fourier_ops(wires[: m // 2], True)
    ops += _fourier_ops(wires[m // 2:], True)
    merged = [2 * i for i in range(m // 2)] + [2 * i + 1 for i in range(m // 2)]
    ops += [Op(fs, (wires[i], wires[i + 1]), "fswap") for i in sort_network(merged, sorted(merged))]
    return ops


def _check_size(n):
    if not is_power_of_two(n) or n < 2:
        raise InvalidArgumentError(f"n must be a power of two >= 2, got {n!r}")


def build_fourier_layer(n: int, with_fswaps: bool = True) -> Circuit:
    """Fourier stage of U_dis on ``n`` wires: ``log2(n)`` rounds of Fourier blocks."""
    _check_size(n)
    return Circuit(n, tuple(_fourier_ops(list(range(n)), with_fswaps)))


def bogoliubov_sign(n: int, top_mode: int) -> int:
    """Sign applied to the mixing angle of the block whose upper wire holds ``top_mode``."""
    return 1 if signed_momentum(n, top_mode) > 0 else -1


def build_bogoliubov_layer(spec: IsingSpec, include_b0: bool = False) -> Circuit:
    """One Bogoliubov block per momentum pair on its (neighbouring) wires."""
    n, layout = spec.n, mode_layout(spec.n)
    ops = []
    for w in range(n - 1):
        j = layout[w]
        if is_unmixed(n, j) or layout[w + 1] != (-j) % n:
            continue
        k = signed_momentum(n, j)
        theta = bogoliubov_sign(n, j) * bogoliubov_angle(n, k, spec.lam)
        ops.append(Op(make_gate("B", theta), (w, w + 1), "bogoliubov"))
    if include_b0 and spec.lam < 1:
        ops.append(Op(make_gate("X"), (unmixed_wire(n, 0),), "bogoliubov"))
    return Circuit(n, tuple(ops))


def build_pairing_network(n: int) -> Circuit:
    """fSWAPs reordering partner-adjacent modes into Fourier output order."""
    _check_size(n)
    fs = fswap()
    swaps = sort_network(mode_layout(n), fourier_output_modes(n))
    return Circuit(n, tuple(Op(fs, (i, i + 1), "fswap") for i in swaps))


def build_udis(spec: IsingSpec, opts: BuildOptions | None = None) -> Circuit:
    """Circuit mapping diagonal-basis label ``|b>`` to the eigenstate of energy ``E(b)``."""
    opts = opts or BuildOptions()
    n = spec.n
    x = make_gate("X")
    prep = Circuit(n, tuple(Op(x, (q,), "prep") for q in range(n)))
    return (prep + build_bogoliubov_layer(spec, opts.include_b0) + build_pairing_network(n)
            + build_fourier_layer(n, opts.with_fswaps))


def build_udis_core(spec: IsingSpec, opts: BuildOptions | None = None) -> Circuit:
    """U_dis without the leading X layer (acts on complemented labels)."""
    c = build_udis(spec, opts)
    return Circuit(c.n, tuple(op for op in c.ops if op.tag != "prep"))


def spectrum_for(spec: IsingSpec, opts: BuildOptions | None = None) -> SpectrumTable:
    """SpectrumTable matching the labels of ``build_udis(spec, opts)``."""
    opts = opts or BuildOptions()
    mask = [0] * spec.n
    if opts.include_b0 and spec.lam < 1:
        mask[unmixed_wire(spec.n, 0)] = 1
    return SpectrumTable(spec, mask)
