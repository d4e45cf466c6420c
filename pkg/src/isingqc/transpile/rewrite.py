"""Native-basis rewriting with one-qubit gate fusion."""
from __future__ import annotations

import numpy as np

from ..circuit import Circuit, Op, expand_fermionic
from ..gatelib import NativeBasis, _expand, _one_qubit_native
from .routing import RoutedCircuit, orient_cnots, route
from .topology import DeviceTopology


def rewrite_basis(c, basis: NativeBasis | str):
    """Rewrite every op into ``basis``.

    Non-adjacent fermionic ops are first expanded into fSWAP chains, since
    their decompositions assume neighbouring modes. Runs of one-qubit gates
    on a wire are multiplied together and re-emitted as at most one native
    gate (IBM) or one Euler triple (Rigetti); runs equal to the identity
    disappear. Accepts a Circuit or RoutedCircuit and returns the same kind.
    """
    basis = NativeBasis.parse(basis)
    rc = c if isinstance(c, RoutedCircuit) else None
    circ = expand_fermionic(rc.circuit if rc else c)
    pending: dict[int, np.ndarray] = {}
    out: list[Op] = []

    def flush(q):
        u = pending.pop(q, None)
        if u is None:
            return
        if basis is NativeBasis.GENERIC:
            # generic keeps the gates as written; only identities are dropped
            return
        out.extend(Op(g, (q,), "decomp") for g in _one_qubit_native(u, basis))

    for op in circ.ops:
        if basis is NativeBasis.GENERIC:
            if op.gate.name != "I":
                out.append(op)
            continue
        for g, t in _expand(op.gate.plain(), op.targets, basis):
            if len(t) == 1:
                q = t[0]
                pending[q] = g.matrix @ pending.get(q, np.eye(2, dtype=complex))
            else:
                for q in t:
                    flush(q)
                out.append(Op(g, t, op.tag))
    for q in sorted(pending):
        flush(q)
    new = Circuit(circ.n, tuple(out))
    if rc is None:
        return new
    return RoutedCircuit(new, rc.layout, rc.stats, basis, rc.topology).with_circuit(new)


def transpile(c: Circuit, topo: DeviceTopology, layout=None, basis=None,
              swap_kind: str = "fswap") -> RoutedCircuit:
    """Route, rewrite into the device basis, then fix CNOT directions."""
    basis = NativeBasis.parse(basis if basis is not None else topo.basis)
    rc = route(c, topo, layout, swap_kind)
    rc = rewrite_basis(rc, basis)
    return orient_cnots(rc, topo, basis)
