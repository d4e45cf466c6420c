"""Routing onto a coupling graph and CNOT orientation.

The logical layout is fixed for the whole circuit: logical wire ``i`` lives
on physical qubit ``layout[i]``, and by default the layout follows a simple
path through the coupling graph so that logical neighbours are physical
neighbours. Every inserted exchange is undone right after the op that
needed it.

Fermionic ops (Fourier, Bogoliubov and fSWAP blocks) between non-neighbouring
logical wires are brought together with fSWAP chains along the path, which
keeps the Jordan-Wigner signs right. Plain qubit gates on uncoupled qubits
use SWAP chains along a shortest path.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import networkx as nx

from ..circuit import Circuit, Op, fermionic_chain, gate_stats
from ..exceptions import InvalidArgumentError, RoutingInfeasibleError
from ..gatelib import NativeBasis, fswap, make_gate
from .topology import DeviceTopology


@dataclass(frozen=True)
class RoutedCircuit:
    """A circuit on physical qubits together with its logical layout.

    Attributes
    ----------
    circuit : Circuit
        Width equals the device qubit count; ops use plain qubit semantics.
    layout : tuple of int
        ``layout[i]`` is the physical qubit holding logical wire ``i``.
    stats : dict
        ``inserted_fswaps``, ``inserted_swaps``, ``inverted_cnots``, ``count``
        and ``depth``.
    basis : NativeBasis
    topology : str
    """

    circuit: Circuit
    layout: tuple
    stats: dict = field(default_factory=dict)
    basis: NativeBasis = NativeBasis.GENERIC
    topology: str = ""

    def with_circuit(self, c: Circuit, **stat_updates) -> "RoutedCircuit":
        stats = dict(self.stats)
        stats.update(stat_updates)
        stats.update({k: v for k, v in gate_stats(c).items() if k in ("count", "depth")})
        return replace(self, circuit=c, stats=stats)


def find_path_layout(topo: DeviceTopology, n: int) -> tuple:
    """First simple path of ``n`` live qubits found by depth-first search.

    Neighbours are tried in increasing index order, so the result is
    deterministic.
    """
    g = topo.graph()
    adj = {q: sorted(g.neighbors(q)) for q in g.nodes}

    def extend(path, seen):
        if len(path) == n:
            return path
        for nb in adj[path[-1]]:
            if nb not in seen:
                seen.add(nb)
                got = extend(path + [nb], seen)
                if got:
                    return got
                seen.discard(nb)
        return None

    for start in sorted(g.nodes):
        got = extend([start], {start})
        if got:
            return tuple(got)
    raise RoutingInfeasibleError(f"no simple path of {n} live qubits in {topo.name}")


def _check_layout(layout, n: int, topo: DeviceTopology) -> tuple:
    layout = tuple(int(q) for q in layout)
    if len(layout) != n or len(set(layout)) != n:
        raise InvalidArgumentError(f"layout must list {n} distinct physical qubits")
    live = set(topo.live_qubits)
    for q in layout:
        if q not in live:
            raise InvalidArgumentError(f"layout uses qubit {q}, which is not a live qubit")
    return layout


def route(c: Circuit, topo: DeviceTopology, layout=None, swap_kind: str = "fswap") -> RoutedCircuit:
    """Place ``c`` on ``topo`` so that every two-qubit op acts on a coupled pair.

    Parameters
    ----------
    layout : sequence of int, optional
        Logical-to-physical map. Defaults to :func:`find_path_layout`.
    swap_kind : {"fswap", "swap"}
        Exchange gate used for fermionic chains. ``"swap"`` is wrong for
        fermionic modes and exists only to demonstrate that.
    """
    if swap_kind not in ("fswap", "swap"):
        raise InvalidArgumentError(f"swap_kind must be 'fswap' or 'swap', got {swap_kind!r}")
    n = c.n
    if n > len(topo.live_qubits):
        raise RoutingInfeasibleError(f"{n} logical qubits but only {len(topo.live_qubits)} live")
    phys = find_path_layout(topo, n) if layout is None else _check_layout(layout, n, topo)
    g = topo.graph()
    exch = fswap().plain() if swap_kind == "fswap" else make_gate("SWAP")
    swap = make_gate("SWAP")
    out: list[Op] = []
    n_fs = n_sw = 0

    def need_edge(p, q):
        if not g.has_edge(p, q):
            raise RoutingInfeasibleError(
                f"fermionic chain needs coupled qubits {p} and {q}; use a path layout")

    for op in c.ops:
        gate = op.gate.plain()
        if len(op.targets) == 1:
            out.append(Op(gate, (phys[op.targets[0]],), op.tag))
            continue
        a, b = op.targets
        if op.gate.fermionic:
            chain, land = fermionic_chain(a, b) if abs(a - b) > 1 else ([], b)
            moves = [(phys[u], phys[v]) for u, v in chain]
            for p, q in moves:
                need_edge(p, q)
            need_edge(phys[a], phys[land])
            out.extend(Op(exch, m, "routing") for m in moves)
            out.append(Op(gate, (phys[a], phys[land]), op.tag))
            out.extend(Op(exch, m, "routing") for m in reversed(moves))
            n_fs += 2 * len(moves)
            continue
        pa, pb = phys[a], phys[b]
        if g.has_edge(pa, pb):
            out.append(Op(gate, (pa, pb), op.tag))
            continue
        try:
            path = nx.shortest_path(g, pb, pa)
        except nx.NetworkXNoPath:
            raise RoutingInfeasibleError(f"qubits {pa} and {pb} are not connected")
        moves = list(zip(path[:-2], path[1:-1]))
        out.extend(Op(swap, m, "routing") for m in moves)
        out.append(Op(gate, (pa, path[-2]), op.tag))
        out.extend(Op(swap, m, "routing") for m in reversed(moves))
        n_sw += 2 * len(moves)

    routed = Circuit(topo.qubits, tuple(out))
    stats = {"inserted_fswaps": n_fs if swap_kind == "fswap" else 0,
             "inserted_swaps": n_sw + (n_fs if swap_kind == "swap" else 0),
             "inverted_cnots": 0}
    stats.update({k: v for k, v in gate_stats(routed).items() if k in ("count", "depth")})
    return RoutedCircuit(routed, phys, stats, NativeBasis.GENERIC, topo.name)


def _hadamard_for(basis: NativeBasis):
    if basis is NativeBasis.IBM:
        return make_gate("U2", 3.141592653589793, 0.0)
    return make_gate("H")


def orient_cnots(c, topo: DeviceTopology, basis: NativeBasis | str | None = None):
    """Flip CNOTs that oppose a directed coupling using ``(H x H) CNOT (H x H)``.

    Accepts a Circuit or RoutedCircuit and returns the same kind. CZ
    couplings are symmetric and never trigger a flip. The Hadamards are
    emitted as ``U2(pi, 0)`` when ``basis`` is IBM-style.
    """
    rc = c if isinstance(c, RoutedCircuit) else None
    circ = rc.circuit if rc else c
    if basis is None:
        basis = rc.basis if rc else NativeBasis.GENERIC
    h = _hadamard_for(NativeBasis.parse(basis))
    out, flipped = [], 0
    for op in circ.ops:
        if op.gate.name == "CNOT" and topo.has_edge(*op.targets) and not topo.cnot_native(*op.targets):
            a, b = op.targets
            out += [Op(h, (a,), "orient"), Op(h, (b,), "orient"),
                    Op(op.gate, (b, a), op.tag),
                    Op(h, (a,), "orient"), Op(h, (b,), "orient")]
            flipped += 1
        else:
            out.append(op)
    new = Circuit(circ.n, tuple(out))
    if rc is None:
        return new
    return rc.with_circuit(new, inverted_cnots=rc.stats.get("inverted_cnots", 0) + flipped)


def compact(rc: RoutedCircuit) -> Circuit:
    """Restrict a routed circuit to the qubits it touches, layout first."""
    touched = {t for op in rc.circuit.ops for t in op.targets}
    order = list(rc.layout) + sorted(touched - set(rc.layout))
    index = {q: i for i, q in enumerate(order)}
    return Circuit(len(order), tuple(Op(op.gate, tuple(index[t] for t in op.targets), op.tag)
                                     for op in rc.circuit.ops))


def routed_equivalent(original: Circuit, rc: RoutedCircuit, atol: float = 1e-9):
    """Check ``rc`` against ``original`` up to the layout relabelling and a global phase.

    Qubits touched only by routing must come back to where they started, so
    the original is padded with identities on them.
    """
    from ..gatelib import equiv_up_to_phase
    small = compact(rc)
    padded = Circuit(small.n, original.ops)
    return equiv_up_to_phase(small, padded, small.n, atol)
