"""Device coupling graphs, loaded from JSON or generated from a family name."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources

import networkx as nx

from ..exceptions import TopologyError
from ..gatelib import NativeBasis

EDGE_KINDS = ("cnot", "cz")


@dataclass(frozen=True)
class DeviceTopology:
    """Coupling graph of a device.

    Attributes
    ----------
    name : str
    qubits : int
    edges : tuple of (int, int, str)
        ``(a, b, "cnot")`` means a CNOT with control ``a`` and target ``b``
        is native; ``(a, b, "cz")`` is a symmetric CZ coupling.
    offline : frozenset of int
    basis : NativeBasis
    """

    name: str
    qubits: int
    edges: tuple
    offline: frozenset = field(default_factory=frozenset)
    basis: NativeBasis = NativeBasis.IBM

    def __post_init__(self):
        if not isinstance(self.qubits, int) or self.qubits < 1:
            raise TopologyError(f"qubits must be a positive integer, got {self.qubits!r}")
        offline = frozenset(int(q) for q in self.offline)
        for q in offline:
            if not 0 <= q < self.qubits:
                raise TopologyError(f"offline qubit {q} out of range")
        edges = []
        for i, e in enumerate(self.edges):
            if len(e) != 3:
                raise TopologyError(f"edges[{i}]: expected [a, b, kind], got {list(e)!r}")
            a, b, kind = e
            if not (isinstance(a, int) and isinstance(b, int)):
                raise TopologyError(f"edges[{i}]: qubit indices must be integers")
            if kind not in EDGE_KINDS:
                raise TopologyError(f"edges[{i}]: kind must be one of {EDGE_KINDS}, got {kind!r}")
            if a == b:
                raise TopologyError(f"edges[{i}]: self-loop on qubit {a}")
            for q in (a, b):
                if not 0 <= q < self.qubits:
                    raise TopologyError(f"edges[{i}]: dangling qubit {q} (device has {self.qubits})")
                if q in offline:
                    raise TopologyError(f"edges[{i}]: qubit {q} is offline")
            edges.append((a, b, kind))
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "offline", offline)
        object.__setattr__(self, "basis", NativeBasis.parse(self.basis))

    @property
    def live_qubits(self) -> list[int]:
        return [q for q in range(self.qubits) if q not in self.offline]

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.live_qubits)
        g.add_edges_from((a, b) for a, b, _ in self.edges)
        return g

    def edge_kind(self, a: int, b: int) -> str | None:
        for x, y, kind in self.edges:
            if {x, y} == {a, b}:
                return kind
        return None

    def has_edge(self, a: int, b: int) -> bool:
        return self.edge_kind(a, b) is not None

    def cnot_native(self, control: int, target: int) -> bool:
        """True if a CNOT in this direction needs no Hadamard conjugation."""
        for x, y, kind in self.edges:
            if {x, y} == {control, target}:
                return kind == "cz" or (x, y) == (control, target)
        return False

    def to_dict(self) -> dict:
        return {"name": self.name, "qubits": self.qubits, "offline": sorted(self.offline),
                "basis": self.basis.value, "edges": [list(e) for e in self.edges]}


def line(n: int, kind: str = "cnot", basis=None) -> DeviceTopology:
    """Open chain ``0 - 1 - ... - n-1``."""
    basis = basis or (NativeBasis.IBM if kind == "cnot" else NativeBasis.RIGETTI)
    return DeviceTopology(f"line{n}", n, tuple((i, i + 1, kind) for i in range(n - 1)),
                          basis=basis)


def ladder(w: int, h: int) -> DeviceTopology:
    """``h`` rungs of width ``w``; qubit ``r*w + c`` sits in row ``r``, column ``c``.

    Edges are directed CNOTs. Rung directions alternate from row to row and
    legs point down, so both orientations occur.
    """
    if w < 1 or h < 1:
        raise TopologyError("ladder dimensions must be positive")
    edges = []
    for r in range(h):
        for c in range(w - 1):
            a, b = r * w + c, r * w + c + 1
            edges.append((a, b, "cnot") if r % 2 == 0 else (b, a, "cnot"))
    for r in range(h - 1):
        for c in range(w):
            edges.append((r * w + c, (r + 1) * w + c, "cnot"))
    return DeviceTopology(f"ladder{w}x{h}", w * h, tuple(edges), basis=NativeBasis.IBM)


def zigzag(n: int, offline=()) -> DeviceTopology:
    """Chain ``i - i+1`` plus shortcuts ``i - i+3`` for ``i % 4 == 0``; symmetric CZ couplings."""
    if n < 2:
        raise TopologyError("zigzag needs at least two qubits")
    off = set(offline)
    pairs = [(i, i + 1) for i in range(n - 1)] + [(i, i + 3) for i in range(0, n - 3, 4)]
    edges = tuple((a, b, "cz") for a, b in sorted(pairs) if a not in off and b not in off)
    return DeviceTopology(f"zigzag{n}", n, edges, frozenset(off), NativeBasis.RIGETTI)


_FAMILIES = {"ladder": (ladder, ("w", "h")), "zigzag": (zigzag, ("n",)), "line": (line, ("n",))}


def _from_dict(doc: dict) -> DeviceTopology:
    if not isinstance(doc, dict):
        raise TopologyError("topology document must be a JSON object")
    if "family" in doc:
        fam = doc["family"]
        if fam not in _FAMILIES:
            raise TopologyError(f"unknown family {fam!r}; expected one of {sorted(_FAMILIES)}")
        fn, keys = _FAMILIES[fam]
        missing = [k for k in keys if k not in doc]
        if missing:
            raise TopologyError(f"family {fam!r} requires field(s) {missing}")
        kwargs = {k: doc[k] for k in keys}
        if fam == "zigzag" and "offline" in doc:
            kwargs["offline"] = doc["offline"]
        return fn(**kwargs)
    missing = [k for k in ("qubits", "edges") if k not in doc]
    if missing:
        raise TopologyError(f"missing field(s) {missing}")
    edges = doc["edges"]
    if not isinstance(edges, list):
        raise TopologyError("edges must be a list")
    return DeviceTopology(
        name=str(doc.get("name", "custom")),
        qubits=doc["qubits"],
        edges=tuple(tuple(e) if isinstance(e, list) else e for e in edges),
        offline=frozenset(doc.get("offline", [])),
        basis=doc.get("basis", "ibm"),
    )


def bundled_topologies() -> list[str]:
    root = resources.files(__package__) / "configs"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_topology(source) -> DeviceTopology:
    """Load a topology.

    Parameters
    ----------
    source : dict, str or path
        A parsed document, a JSON string, a file path, the name of a bundled
        config (see :func:`bundled_topologies`), or a shorthand such as
        ``"ladder(2,8)"``, ``"zigzag(19)"`` or ``"line(4)"``.
    """
    if isinstance(source, DeviceTopology):
        return source
    if isinstance(source, dict):
        return _from_dict(source)
    s = os.fspath(source)
    text = s.strip()
    if text.startswith("{"):
        try:
            return _from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise TopologyError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    for fam, (fn, keys) in _FAMILIES.items():
        if text.startswith(fam + "(") and text.endswith(")"):
            try:
                args = [int(x) for x in text[len(fam) + 1:-1].split(",")]
            except ValueError:
                raise TopologyError(f"bad shorthand {text!r}")
            if len(args) != len(keys):
                raise TopologyError(f"{fam} takes {len(keys)} argument(s)")
            return fn(*args)
    if text in bundled_topologies():
        ref = resources.files(__package__) / "configs" / f"{text}.json"
        return _from_dict(json.loads(ref.read_text()))
    if os.path.exists(s):
        with open(s) as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise TopologyError(f"{s}: line {exc.lineno}, column {exc.colno}: {exc.msg}")
        return _from_dict(doc)
    raise TopologyError(f"cannot interpret topology source {s!r}")
