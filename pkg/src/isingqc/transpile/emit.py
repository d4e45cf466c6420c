"""Deterministic text emission and parsing.

qasm-like::

    OPENQASM 2.0;
    include "qelib1.inc";
    qreg q[N];
    u3(THETA,PHI,LAMBDA) q[i];
    cx q[i],q[j];

quil-like::

    DECLARE ro BIT[N]
    RX(THETA) i
    CNOT i j

One instruction per line, floats printed with 12 significant digits. Angles
are written in the toolchain conventions (``rx(t) = exp(-i t X / 2)`` and
``u3(t, phi, lam)`` in qelib argument order), so the package's ``RX`` and
``RZ`` appear with negated angles. Only fixed-name standard gates and the
native rotation sets are accepted; composite blocks must be rewritten first.
"""
from __future__ import annotations

import re

from ..circuit import Circuit, Op
from ..exceptions import EmitRefusedError, InvalidArgumentError, ParseError
from ..gatelib import make_gate
from .routing import RoutedCircuit

FORMATS = ("qasm", "quil")

# package name -> (qasm name, quil name)
_FIXED = {
    "X": ("x", "X"), "Y": ("y", "Y"), "Z": ("z", "Z"), "H": ("h", "H"),
    "S": ("s", "S"), "SDG": ("sdg", "DAGGER S"), "T": ("t", "T"), "TDG": ("tdg", "DAGGER T"),
    "CNOT": ("cx", "CNOT"), "CZ": ("cz", "CZ"), "SWAP": ("swap", "SWAP"),
}
_PARAM = {"RX": ("rx", "RX"), "RY": ("ry", "RY"), "RZ": ("rz", "RZ"),
          "U1": ("u1", "PHASE"), "U2": ("u2", "U2"), "U3": ("u3", "U3")}


def emittable() -> frozenset:
    return frozenset(_FIXED) | frozenset(_PARAM)


def _fmt(x: float) -> str:
    x = float(x)
    if x == 0:
        x = 0.0
    return format(x, ".12g")


def _to_text_params(name: str, p: tuple) -> list[float]:
    if name in ("RX", "RZ"):
        return [-p[0]]
    if name == "U2":
        lam, phi = p
        return [phi, lam]
    if name == "U3":
        theta, lam, phi = p
        return [theta, phi, lam]
    return list(p)


def _from_text_params(name: str, v: list[float]) -> tuple:
    if name in ("RX", "RZ"):
        return (-v[0],)
    if name == "U2":
        phi, lam = v
        return (lam, phi)
    if name == "U3":
        theta, phi, lam = v
        return (theta, lam, phi)
    return tuple(v)


def emit(rc, format: str = "qasm") -> str:
    """Render a circuit (or routed circuit) as text.

    Raises
    ------
    EmitRefusedError
        If any gate is not in :func:`emittable`.
    """
    if format not in FORMATS:
        raise InvalidArgumentError(f"format must be one of {FORMATS}, got {format!r}")
    c = rc.circuit if isinstance(rc, RoutedCircuit) else rc
    col = 0 if format == "qasm" else 1
    lines = ([f"OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.n}];"] if col == 0
             else [f"DECLARE ro BIT[{c.n}]"])
    for i, op in enumerate(c.ops):
        name = op.gate.name
        if name in _FIXED:
            word, args = _FIXED[name][col], ""
        elif name in _PARAM:
            word = _PARAM[name][col]
            args = "(" + ",".join(_fmt(v) for v in _to_text_params(name, op.gate.params)) + ")"
        else:
            raise EmitRefusedError(f"op {i}: gate {name} is not native; rewrite the basis first")
        if col == 0:
            qs = ",".join(f"q[{t}]" for t in op.targets)
            lines.append(f"{word}{args} {qs};")
        else:
            lines.append(f"{word}{args} " + " ".join(str(t) for t in op.targets))
    return "\n".join(lines) + "\n"


_QASM_INSTR = re.compile(r"^([a-z][a-z0-9]*)(?:\(([^)]*)\))?\s+(q\[\d+\](?:\s*,\s*q\[\d+\])*)\s*;$")
_QUIL_INSTR = re.compile(r"^((?:DAGGER\s+)?[A-Z][A-Z0-9]*)(?:\(([^)]*)\))?((?:\s+\d+)+)$")


def _lookup(word: str, col: int) -> str | None:
    for table in (_FIXED, _PARAM):
        for name, words in table.items():
            if words[col] == word:
                return name
    return None


def _parse_params(text, lineno) -> list[float]:
    if text is None:
        return []
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise ParseError(f"bad parameter list ({text})", lineno)


def parse(text: str, format: str = "qasm") -> Circuit:
    """Inverse of :func:`emit`. Errors carry 1-based line numbers."""
    if format not in FORMATS:
        raise InvalidArgumentError(f"format must be one of {FORMATS}, got {format!r}")
    col = 0 if format == "qasm" else 1
    comment = "//" if col == 0 else "#"
    n = None
    ops = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split(comment, 1)[0].strip()
        if not line:
            continue
        if col == 0:
            if line in ("OPENQASM 2.0;", 'include "qelib1.inc";'):
                continue
            m = re.fullmatch(r"qreg\s+q\[(\d+)\];", line)
            if m:
                n = int(m.group(1))
                continue
        else:
            m = re.fullmatch(r"DECLARE\s+ro\s+BIT\[(\d+)\]", line)
            if m:
                n = int(m.group(1))
                continue
        if n is None:
            raise ParseError("instruction before register declaration", lineno)
        m = (_QASM_INSTR if col == 0 else _QUIL_INSTR).fullmatch(line)
        if not m:
            raise ParseError(f"cannot parse {line!r}", lineno)
        word = re.sub(r"\s+", " ", m.group(1))
        name = _lookup(word, col)
        if name is None:
            raise ParseError(f"unknown gate {word!r}", lineno)
        qs = ([int(x) for x in re.findall(r"\d+", m.group(3))])
        params = _parse_params(m.group(2), lineno)
        try:
            gate = make_gate(name, *_from_text_params(name, params)) if name in _PARAM \
                else make_gate(name, *params)
            ops.append(Op(gate, tuple(qs), "user"))
        except (InvalidArgumentError, ValueError) as exc:
            raise ParseError(str(exc), lineno)
        if any(q >= n for q in qs):
            raise ParseError(f"qubit index out of range for {n} qubits", lineno)
    if n is None:
        raise ParseError("missing register declaration")
    return Circuit(n, tuple(ops))
