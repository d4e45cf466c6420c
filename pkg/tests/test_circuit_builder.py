import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PZ, embed, kron_hamiltonian
from isingqc.circuit import Circuit, Op, expand_fermionic, fermionic_chain, gate_stats
from isingqc.circuit_builder import (BuildOptions, build_bogoliubov_layer, build_fourier_layer,
                                     build_udis, build_udis_core, spectrum_for)
from isingqc.exceptions import InvalidArgumentError
from isingqc.gatelib import equiv_up_to_phase, make_gate
from isingqc.ising_model import IsingSpec, SpectrumTable, ground_bitstring, ground_state_analytic_n4
from isingqc.statevector import circuit_unitary, init_basis, overlap, run_circuit

ALL_OPTS = [BuildOptions(a, b) for a in (True, False) for b in (False, True)]


def conjugated(spec, opts=BuildOptions()):
    u = circuit_unitary(build_udis(spec, opts))
    return u.conj().T @ kron_hamiltonian(spec.n, spec.lam) @ u


class TestDiagonalization:
    @pytest.mark.parametrize("n", [4, 8])
    @pytest.mark.parametrize("lam", [0.2, 0.5, 1.5, 2.0])
    @pytest.mark.parametrize("opts", ALL_OPTS, ids=str)
    def test_conjugation(self, n, lam, opts):
        spec = IsingSpec(n, lam)
        d = conjugated(spec, opts)
        assert np.max(np.abs(d - np.diag(np.diag(d)))) < 1e-9
        np.testing.assert_allclose(np.diag(d).real, spectrum_for(spec, opts).energies(), atol=1e-9)

    def test_critical_field_still_diagonal(self):
        d = conjugated(IsingSpec(8, 1.0))
        assert np.max(np.abs(d - np.diag(np.diag(d)))) < 1e-9

    def test_eigenstate_property(self):
        spec = IsingSpec(4, 1.5)
        h, c, tab = kron_hamiltonian(4, 1.5), build_udis(spec), SpectrumTable(spec)
        for i in range(16):
            b = format(i, "04b")
            v = run_circuit(c, b).amps
            assert np.linalg.norm(h @ v - tab.energy(b) * v) < 1e-9

    @pytest.mark.parametrize("lam", [0.0, 0.3, 1.5, 3.0])
    def test_ground_state(self, lam):
        spec = IsingSpec(4, lam)
        s = run_circuit(build_udis(spec), ground_bitstring(spec))
        assert abs(overlap(ground_state_analytic_n4(lam), s)) > 1 - 1e-9

    @pytest.mark.parametrize("lam", [0.3, 1.5])
    def test_include_b0_zero_label_is_ground(self, lam):
        spec = IsingSpec(8, lam)
        opts = BuildOptions(include_b0=True)
        assert spectrum_for(spec, opts).ground_bitstring() == "0" * 8
        e0 = np.linalg.eigvalsh(kron_hamiltonian(8, lam))[0]
        v = run_circuit(build_udis(spec, opts), "0" * 8).amps
        assert np.vdot(v, kron_hamiltonian(8, lam) @ v).real == pytest.approx(e0, abs=1e-9)


class TestStructure:
    def test_four_site_fixture(self):
        c = build_udis(IsingSpec(4, 1.5))
        got = [(op.gate.name, op.targets, op.tag) for op in c]
        assert got == [
            ("X", (0,), "prep"), ("X", (1,), "prep"), ("X", (2,), "prep"), ("X", (3,), "prep"),
            ("B", (0, 1), "bogoliubov"),
            ("FDG", (0, 1), "fourier"), ("FDG", (2, 3), "fourier"),
            ("FSWAP", (1, 2), "fswap"),
            ("FDG", (0, 1), "fourier"), ("FDG", (2, 3), "fourier"),
            ("FSWAP", (1, 2), "fswap")]
        assert [op.gate.params for op in c if op.gate.name == "FDG"] == [
            (4, 1), (4, 0), (2, 0), (2, 0)]
        assert c.count_ops() == {"B": 1, "FDG": 4, "FSWAP": 2, "X": 4}
        assert gate_stats(c) == {"count": 11, "depth": 6, "two_qubit_count": 7}

    def test_bogoliubov_angle_sign(self):
        b = build_bogoliubov_layer(IsingSpec(4, 0.5)).ops[0].gate
        assert b.params[0] == pytest.approx(-math.acos(0.5 / math.sqrt(0.25 + 1)))

    def test_three_bogoliubov_blocks_n8(self):
        layer = build_bogoliubov_layer(IsingSpec(8, 0.5))
        assert [op.gate.name for op in layer] == ["B", "B", "B"]
        assert all(op.targets[1] == op.targets[0] + 1 for op in layer)

    def test_b0_substitute(self):
        assert len(build_bogoliubov_layer(IsingSpec(4, 0.5), include_b0=True)) == 2
        assert len(build_bogoliubov_layer(IsingSpec(4, 1.5), include_b0=True)) == 1

    @pytest.mark.parametrize("n", [2, 4, 8, 16, 32])
    def test_fourier_stage_count(self, n):
        c = build_fourier_layer(n)
        sizes = sorted({op.gate.params[0] for op in c if op.gate.name == "FDG"})
        assert len(sizes) == int(math.log2(n))
        assert sum(op.gate.name == "FDG" for op in c) == (n // 2) * int(math.log2(n))

    def test_fourier_base_case(self):
        c = build_fourier_layer(2)
        assert len(c) == 1 and c.ops[0].gate.name == "FDG"

    def test_without_fswaps_has_no_fourier_networks(self):
        c = build_fourier_layer(8, with_fswaps=False)
        assert "FSWAP" not in c.count_ops()
        assert any(op.is_nonlocal_fermionic for op in c)

    def test_with_fswaps_is_local(self):
        for n in (4, 8, 16):
            assert not any(op.is_nonlocal_fermionic for op in build_udis(IsingSpec(n, 0.5)))

    def test_invalid_size(self):
        with pytest.raises(InvalidArgumentError):
            build_fourier_layer(6)
        with pytest.raises(InvalidArgumentError):
            build_udis(IsingSpec(6, 1.0))


class TestEquivalences:
    @pytest.mark.parametrize("n", [4, 8])
    def test_with_and_without_fswaps(self, n):
        spec = IsingSpec(n, 0.7)
        ok, _ = equiv_up_to_phase(build_udis(spec), build_udis(spec, BuildOptions(False)), n)
        assert ok

    def test_inverse(self):
        c = build_udis(IsingSpec(8, 0.4))
        np.testing.assert_allclose(circuit_unitary(c.inverse()) @ circuit_unitary(c), np.eye(256),
                                   atol=1e-12)

    def test_large_field_layer_is_identity(self):
        ok, _ = equiv_up_to_phase(build_bogoliubov_layer(IsingSpec(8, 1e9)), Circuit(8), 8,
                                  atol=1e-7)
        assert ok

    def test_core_is_udis_without_prep(self):
        spec = IsingSpec(4, 2.0)
        flip = "".join("1" if c == "0" else "0" for c in "0110")
        np.testing.assert_allclose(run_circuit(build_udis(spec), "0110").amps,
                                   run_circuit(build_udis_core(spec), flip).amps, atol=1e-14)


class TestFermionicSemantics:
    def _jw_oracle(self, g, a, b, n):
        # a parity-even two-mode gate on non-neighbouring modes picks up a sign
        # on its off-diagonal entries for each occupied mode strictly between them
        lo, hi = sorted((a, b))
        zg = np.kron(PZ, np.eye(2)) @ g.matrix @ np.kron(PZ, np.eye(2))
        even, odd = embed(g.matrix, (a, b), n), embed(zg, (a, b), n)
        idx = np.arange(2 ** n)
        par = np.zeros(2 ** n, dtype=int)
        for q in range(lo + 1, hi):
            par ^= (idx >> (n - 1 - q)) & 1
        return np.where(par[None, :] == 1, odd, even)

    @pytest.mark.parametrize("name,params", [("FDG", (8, 3)), ("F", (4, 1)), ("B", (0.9,)),
                                             ("FSWAP", ())])
    @pytest.mark.parametrize("a,b", [(0, 2), (0, 4), (4, 1), (3, 0), (1, 2)])
    def test_nonlocal_matches_jordan_wigner(self, name, params, a, b):
        g = make_gate(name, *params)
        c = Circuit(5, (Op(g, (a, b)),))
        np.testing.assert_allclose(circuit_unitary(c), self._jw_oracle(g, a, b, 5), atol=1e-12)
        np.testing.assert_allclose(circuit_unitary(expand_fermionic(c)),
                                   self._jw_oracle(g, a, b, 5), atol=1e-12)

    @given(st.integers(0, 7), st.integers(0, 7))
    def test_chain_lands_next_to_first(self, a, b):
        if a == b:
            return
        pairs, landing = fermionic_chain(a, b)
        assert abs(landing - a) == 1
        assert len(pairs) == abs(b - a) - 1
        assert all(q == p + 1 for p, q in pairs)


class TestStats:
    def test_empty(self):
        assert gate_stats(Circuit(4)) == {"count": 0, "depth": 0, "two_qubit_count": 0}

    @pytest.mark.parametrize("n", [4, 8, 16, 32, 64])
    def test_scaling_bounds(self, n):
        s = gate_stats(build_udis(IsingSpec(n, 0.5)))
        assert s["count"] <= 4 * n * n
        assert s["depth"] <= 8 * n * math.log2(n)

    def test_count_ratio_bounded(self):
        ratios = [gate_stats(build_udis(IsingSpec(n, 0.5)))["count"] / n ** 2
                  for n in (4, 8, 16, 32, 64)]
        assert max(ratios) < 1.0

    def test_depth_layering(self):
        c = Circuit(3, (Op(make_gate("X"), (0,)), Op(make_gate("X"), (2,)),
                        Op(make_gate("CNOT"), (0, 1)), Op(make_gate("H"), (2,))))
        assert gate_stats(c) == {"count": 4, "depth": 2, "two_qubit_count": 1}

    def test_nonlocal_op_occupies_span(self):
        c = Circuit(3, (Op(make_gate("FSWAP"), (0, 2)), Op(make_gate("X"), (1,))))
        assert gate_stats(c)["depth"] == 2

    def test_draw_mentions_every_block(self):
        text = build_udis(IsingSpec(4, 1.5)).draw()
        for word in ("B", "FDG", "FSWAP"):
            assert word in text
