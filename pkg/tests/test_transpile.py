import json
import math
import re

import numpy as np
import pytest

from isingqc.circuit import Circuit, Op
from isingqc.circuit_builder import BuildOptions, build_udis
from isingqc.exceptions import (EmitRefusedError, ParseError, RoutingInfeasibleError,
                                TopologyError, UnsupportedDecompositionError)
from isingqc.gatelib import NativeBasis, make_gate, phase_between
from isingqc.ising_model import IsingSpec, ground_bitstring, ground_state_analytic_n4
from isingqc.statevector import circuit_unitary, overlap, run_circuit
from isingqc.transpile import (DeviceTopology, bundled_topologies, compact, emit, ladder, line,
                               load_topology, orient_cnots, parse, rewrite_basis, route,
                               routed_equivalent, transpile, zigzag)

NO_FSWAPS = BuildOptions(with_fswaps=False)


def edge_legal(rc, topo):
    return all(topo.has_edge(*op.targets) for op in rc.circuit if len(op.targets) == 2)


class TestTopology:
    def test_ladder_square(self):
        t = load_topology("ladder(2,2)")
        assert t.qubits == 4 and len(t.edges) == 4
        assert {k for *_, k in t.edges} == {"cnot"}

    def test_zigzag(self):
        t = load_topology({"family": "zigzag", "n": 19})
        assert t.qubits == 19 and {k for *_, k in t.edges} == {"cz"}
        assert t.basis is NativeBasis.RIGETTI

    def test_ladder_family_document(self):
        t = load_topology({"family": "ladder", "w": 2, "h": 8})
        assert t.qubits == 16 and len(t.edges) == 8 + 2 * 7

    def test_bundled(self):
        names = bundled_topologies()
        assert {"ibmqx4_like", "ladder16_like", "zigzag20_like"} <= set(names)
        for name in names:
            load_topology(name)
        assert 3 in load_topology("zigzag20_like").offline

    def test_json_string_and_file(self, tmp_path):
        doc = {"name": "tri", "qubits": 3, "basis": "rigetti",
               "edges": [[0, 1, "cz"], [1, 2, "cz"]]}
        p = tmp_path / "tri.json"
        p.write_text(json.dumps(doc))
        assert load_topology(str(p)) == load_topology(json.dumps(doc))

    @pytest.mark.parametrize("doc,where", [
        ({"qubits": 3, "offline": [2], "edges": [[0, 1, "cnot"], [1, 2, "cnot"]]}, "edges[1]"),
        ({"qubits": 3, "edges": [[0, 5, "cz"]]}, "edges[0]"),
        ({"qubits": 3, "edges": [[1, 1, "cz"]]}, "edges[0]"),
        ({"qubits": 3, "edges": [[0, 1, "iswap"]]}, "edges[0]"),
        ({"qubits": 3, "edges": [[0, 1]]}, "edges[0]"),
        ({"qubits": 3}, "edges"),
    ])
    def test_validation_errors(self, doc, where):
        with pytest.raises(TopologyError, match=re.escape(where)):
            load_topology(doc)

    def test_malformed_json_location(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"qubits": 3,\n "edges": [}')
        with pytest.raises(TopologyError, match="line 2"):
            load_topology(str(p))

    def test_unknown_source(self):
        with pytest.raises(TopologyError):
            load_topology("no_such_device")


class TestRoute:
    def test_fig1_on_ladder_needs_no_fswaps(self):
        rc = route(build_udis(IsingSpec(4, 0.5)), load_topology("ladder(2,2)"))
        assert rc.stats["inserted_fswaps"] == 0
        assert edge_legal(rc, load_topology("ladder(2,2)"))

    def test_fig1_on_line_needs_no_fswaps(self):
        # the builder already places every block on neighbouring wires
        assert route(build_udis(IsingSpec(4, 0.5)), line(4)).stats["inserted_fswaps"] == 0

    def test_all_to_all_build_on_line(self):
        c = build_udis(IsingSpec(4, 0.5), NO_FSWAPS)
        rc = route(c, line(4))
        assert rc.stats["inserted_fswaps"] > 0
        assert routed_equivalent(c, rc)[0]

    @pytest.mark.parametrize("n", [4, 8, 16])
    def test_fswap_overhead_bound(self, n):
        rc = route(build_udis(IsingSpec(n, 0.5), NO_FSWAPS), line(n))
        assert rc.stats["inserted_fswaps"] <= n * n

    def test_frozen_overheads(self):
        got = [route(build_udis(IsingSpec(n, 0.5), NO_FSWAPS), line(n)).stats["inserted_fswaps"]
               for n in (4, 8, 16)]
        assert got == [4, 32, 176]

    def test_too_few_qubits(self):
        with pytest.raises(RoutingInfeasibleError):
            route(build_udis(IsingSpec(8, 0.5)), line(4))

    def test_no_path(self):
        star = DeviceTopology("star", 5, ((0, 1, "cz"), (0, 2, "cz"), (0, 3, "cz"), (0, 4, "cz")))
        with pytest.raises(RoutingInfeasibleError):
            route(build_udis(IsingSpec(4, 0.5)), star)

    def test_disconnected_plain_gate(self):
        topo = DeviceTopology("split", 4, ((0, 1, "cz"), (2, 3, "cz")))
        c = Circuit(4, (Op(make_gate("CZ"), (0, 3)),))
        with pytest.raises(RoutingInfeasibleError):
            route(c, topo, layout=(0, 1, 2, 3))

    def test_plain_gate_uses_swaps(self):
        c = Circuit(4, (Op(make_gate("CNOT"), (0, 3)),))
        rc = route(c, line(4))
        assert rc.stats["inserted_swaps"] == 4 and rc.stats["inserted_fswaps"] == 0
        assert routed_equivalent(c, rc)[0]

    def test_explicit_layout(self):
        c = build_udis(IsingSpec(4, 1.5))
        rc = route(c, line(4), layout=(3, 2, 1, 0))
        assert rc.layout == (3, 2, 1, 0) and routed_equivalent(c, rc)[0]


class TestOrient:
    def test_aligned_unchanged(self):
        c = Circuit(2, (Op(make_gate("CNOT"), (0, 1)),))
        assert orient_cnots(c, line(2)) == c

    def test_against_edge(self):
        c = Circuit(2, (Op(make_gate("CNOT"), (1, 0)),))
        out = orient_cnots(c, line(2))
        assert [op.gate.name for op in out] == ["H", "H", "CNOT", "H", "H"]
        np.testing.assert_allclose(circuit_unitary(out), circuit_unitary(c), atol=1e-14)

    def test_cz_never_inverted(self):
        topo = zigzag(8)
        rc = transpile(build_udis(IsingSpec(8, 0.5)), topo)
        assert rc.stats["inverted_cnots"] == 0
        assert "CNOT" not in rc.circuit.count_ops()

    def test_idempotent(self):
        topo = load_topology("ibmqx4_like")
        rc = transpile(build_udis(IsingSpec(4, 0.5)), topo)
        again = orient_cnots(rc, topo)
        assert again.circuit == rc.circuit
        assert all(topo.cnot_native(*op.targets) for op in rc.circuit if op.gate.name == "CNOT")


class TestRewrite:
    def test_hadamard_ibm(self):
        out = rewrite_basis(Circuit(1, (Op(make_gate("H"), (0,)),)), "ibm")
        assert [op.gate.name for op in out] == ["U2"]
        assert phase_between(circuit_unitary(out), make_gate("H").matrix) is not None

    def test_identity_vanishes(self):
        for basis in ("ibm", "rigetti", "generic"):
            assert len(rewrite_basis(Circuit(1, (Op(make_gate("I"), (0,)),)), basis)) == 0

    def test_fswap_rigetti(self):
        c = Circuit(2, (Op(make_gate("FSWAP"), (0, 1)),))
        out = rewrite_basis(c, "rigetti")
        assert out.count_ops()["CZ"] == 4
        assert set(out.count_ops()) <= NativeBasis.RIGETTI.gates
        assert phase_between(circuit_unitary(out), circuit_unitary(c)) is not None

    def test_unknown_basis(self):
        with pytest.raises(ValueError):
            rewrite_basis(Circuit(1), "ionq")


TOPOLOGIES = {
    "line": lambda n: line(n),
    "line-cz": lambda n: line(n, "cz"),
    "ladder": lambda n: ladder(2, n // 2),
    "zigzag": lambda n: load_topology("zigzag20_like"),
    "ibmqx4": lambda n: load_topology("ibmqx4_like"),
}


@pytest.mark.parametrize("n", [4, 8])
@pytest.mark.parametrize("topo_name", list(TOPOLOGIES))
@pytest.mark.parametrize("opts", [BuildOptions(), NO_FSWAPS], ids=["fswaps", "all-to-all"])
@pytest.mark.parametrize("basis", [None, "ibm", "rigetti"])
def test_semantic_preservation(n, topo_name, opts, basis):
    topo = TOPOLOGIES[topo_name](n)
    if n > len(topo.live_qubits):
        pytest.skip("device too small")
    c = build_udis(IsingSpec(n, 0.6), opts)
    rc = transpile(c, topo, basis=basis)
    assert edge_legal(rc, topo)
    assert set(rc.circuit.count_ops()) <= rc.basis.gates
    if rc.basis is NativeBasis.IBM:
        assert all(topo.cnot_native(*op.targets) for op in rc.circuit if op.gate.name == "CNOT")
    ok, _ = routed_equivalent(c, rc, atol=1e-9)
    assert ok


class TestNegativeSwap:
    def test_plain_swaps_break_ground_state(self):
        spec = IsingSpec(4, 0.0)
        c = build_udis(spec, NO_FSWAPS)
        want = ground_state_analytic_n4(0.0)
        good = route(c, line(4))
        bad = route(c, line(4), swap_kind="swap")
        assert bad.stats["inserted_swaps"] == good.stats["inserted_fswaps"] > 0
        b = ground_bitstring(spec)
        ov_good = abs(overlap(want, run_circuit(compact(good), b)))
        ov_bad = abs(overlap(want, run_circuit(compact(bad), b)))
        assert ov_good > 1 - 1e-9
        assert ov_bad < 1 - 1e-6
        assert not routed_equivalent(c, bad)[0]


class TestEmit:
    def test_single_x(self):
        c = Circuit(1, (Op(make_gate("X"), (0,)),))
        assert emit(c, "qasm").splitlines()[-1] == "x q[0];"
        assert emit(c, "quil").splitlines()[-1] == "X 0"

    def test_headers(self):
        c = Circuit(3)
        assert emit(c, "qasm") == 'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[3];\n'
        assert emit(c, "quil") == "DECLARE ro BIT[3]\n"

    def test_float_format(self):
        c = Circuit(1, (Op(make_gate("U3", math.pi, 0.1, -0.0), (0,)),))
        assert emit(c, "qasm").splitlines()[-1] == "u3(3.14159265359,0,0.1) q[0];"

    def test_rotation_sign_convention(self):
        c = Circuit(1, (Op(make_gate("RX", 0.5), (0,)), Op(make_gate("RZ", -0.25), (0,)),
                        Op(make_gate("RY", 0.5), (0,))))
        assert emit(c, "quil").splitlines()[1:] == ["RX(-0.5) 0", "RZ(0.25) 0", "RY(0.5) 0"]

    def test_refuses_non_native(self):
        c = build_udis(IsingSpec(4, 0.5))
        with pytest.raises(EmitRefusedError):
            emit(c)

    @pytest.mark.parametrize("fmt", ["qasm", "quil"])
    @pytest.mark.parametrize("topo", ["ladder(2,2)", "line(4)", "zigzag(8)", "ibmqx4_like"])
    def test_round_trip(self, fmt, topo):
        rc = transpile(build_udis(IsingSpec(4, 0.3), NO_FSWAPS), load_topology(topo))
        text = emit(rc, fmt)
        back = parse(text, fmt)
        assert emit(back, fmt) == text
        assert len(text.splitlines()) - (3 if fmt == "qasm" else 1) == rc.stats["count"]
        np.testing.assert_allclose(circuit_unitary(compact(rc.with_circuit(back))),
                                   circuit_unitary(compact(rc)), atol=1e-10)

    def test_dagger_words(self):
        c = Circuit(1, (Op(make_gate("SDG"), (0,)), Op(make_gate("TDG"), (0,))))
        assert emit(c, "quil").splitlines()[1:] == ["DAGGER S 0", "DAGGER T 0"]
        back = parse(emit(c, "quil"), "quil")
        assert [op.gate for op in back] == [op.gate for op in c]

    @pytest.mark.parametrize("text,fmt,line_no", [
        ("OPENQASM 2.0;\nqreg q[2];\nfoo q[0];\n", "qasm", 3),
        ("OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[5];\n", "qasm", 3),
        ("x q[0];\n", "qasm", 1),
        ("DECLARE ro BIT[2]\nRX(abc) 0\n", "quil", 2),
        ("DECLARE ro BIT[2]\n\nCNOT 0\n", "quil", 3),
    ])
    def test_parse_errors_have_lines(self, text, fmt, line_no):
        with pytest.raises(ParseError) as err:
            parse(text, fmt)
        assert err.value.line == line_no
