"""Immutable circuit container shared by the builder, simulator and transpiler."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .exceptions import InvalidArgumentError
from .gatelib import Gate, fswap
from .validation import check_qubit_count

TAGS = ("prep", "bogoliubov", "fswap", "fourier", "routing", "orient", "decomp", "user")


@dataclass(frozen=True)
class Op:
    """A gate placed on concrete wires, with a provenance tag."""

    gate: Gate
    targets: tuple
    tag: str = "user"

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if len(self.targets) != self.gate.arity:
            raise InvalidArgumentError(
                f"{self.gate.name} needs {self.gate.arity} target(s), got {self.targets}")
        if len(set(self.targets)) != len(self.targets):
            raise InvalidArgumentError(f"repeated target in {self.targets}")

    @property
    def is_nonlocal_fermionic(self) -> bool:
        return (self.gate.fermionic and len(self.targets) == 2
                and abs(self.targets[0] - self.targets[1]) > 1)

    def span(self) -> range:
        lo, hi = min(self.targets), max(self.targets)
        return range(lo, hi + 1)


@dataclass(frozen=True)
class Circuit:
    """Ordered list of ops on ``n`` wires. Wire 0 is the most significant bit.

    Fermionic gates (Fourier, Bogoliubov and fSWAP blocks) on wires that are
    not neighbours act on the modes with the Jordan-Wigner string in between;
    see :func:`expand_fermionic`. All other gates are plain qubit gates.
    """

    n: int
    ops: tuple = field(default=())

    def __post_init__(self):
        check_qubit_count(self.n)
        ops = tuple(self.ops)
        for op in ops:
            if not isinstance(op, Op):
                raise InvalidArgumentError(f"expected Op, got {type(op).__name__}")
            if any(t < 0 or t >= self.n for t in op.targets):
                raise InvalidArgumentError(f"target {op.targets} out of range for n={self.n}")
        object.__setattr__(self, "ops", ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[Op]:
        return iter(self.ops)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n != self.n:
            raise InvalidArgumentError("cannot concatenate circuits of different width")
        return Circuit(self.n, self.ops + other.ops)

    def append(self, gate: Gate, targets: Iterable[int], tag: str = "user") -> "Circuit":
        return Circuit(self.n, self.ops + (Op(gate, tuple(targets), tag),))

    def inverse(self) -> "Circuit":
        """Reverse the op order and take the adjoint of each gate."""
        return Circuit(self.n, tuple(Op(op.gate.dagger(), op.targets, op.tag)
                                     for op in reversed(self.ops)))

    def count_ops(self) -> dict:
        out: dict = {}
        for op in self.ops:
            out[op.gate.name] = out.get(op.gate.name, 0) + 1
        return dict(sorted(out.items()))

    def draw(self) -> str:
        return draw(self)


def fermionic_chain(a: int, b: int) -> tuple[list[tuple[int, int]], int]:
    """fSWAP positions that bring mode ``b`` next to ``a``.

    Returns the ordered list of neighbour pairs and the wire ``b`` lands on.
    """
    if b > a:
        return [(w - 1, w) for w in range(b, a + 1, -1)], a + 1
    return [(w, w + 1) for w in range(b, a - 1)], a - 1


def expand_fermionic(c: Circuit) -> Circuit:
    """Rewrite non-adjacent fermionic ops as fSWAP chain, local op, chain back."""
    if not any(op.is_nonlocal_fermionic for op in c.ops):
        return c
    fs = fswap()
    out = []
    for op in c.ops:
        if not op.is_nonlocal_fermionic:
            out.append(op)
            continue
        a, b = op.targets
        chain, landing = fermionic_chain(a, b)
        out.extend(Op(fs, p, "fswap") for p in chain)
        out.append(Op(op.gate, (a, landing), op.tag))
        out.extend(Op(fs, p, "fswap") for p in reversed(chain))
    return Circuit(c.n, tuple(out))


def gate_stats(c: Circuit) -> dict:
    """Op count, greedy-layer depth and two-qubit op count.

    Composite blocks count as one op. A non-adjacent fermionic op occupies
    every wire in its span, since the string acts on them.
    """
    level = [0] * c.n
    two = 0
    for op in c.ops:
        wires = op.span() if op.is_nonlocal_fermionic else op.targets
        d = 1 + max(level[w] for w in wires)
        for w in wires:
            level[w] = d
        two += len(op.targets) == 2
    return {"count": len(c.ops), "depth": max(level, default=0), "two_qubit_count": two}


def _label(op: Op) -> str:
    if not op.gate.params:
        return op.gate.name
    return op.gate.name + "(" + ",".join(f"{p:.3g}" for p in op.gate.params) + ")"


def draw(c: Circuit) -> str:
    """Plain-text diagram, one column per op. Not a stable format."""
    rows = [[f"q{q}: "] for q in range(c.n)]
    pad = max(len(r[0]) for r in rows)
    for r in rows:
        r[0] = r[0].ljust(pad)
    for op in c.ops:
        lab = _label(op)
        w = len(lab) + 2
        lo, hi = min(op.targets), max(op.targets)
        for q in range(c.n):
            if q == op.targets[0]:
                cell = lab.center(w, "-")
            elif len(op.targets) == 2 and q == op.targets[1]:
                cell = "*".center(w, "-")
            elif lo < q < hi:
                cell = "|".center(w, "-")
            else:
                cell = "-" * w
            rows[q].append(cell)
    return "\n".join("".join(r) for r in rows)
