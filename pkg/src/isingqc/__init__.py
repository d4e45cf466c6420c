"""Exact simulation of the transverse-field Ising chain with disentangling circuits."""
from .circuit import Circuit, Op, gate_stats
from .circuit_builder import (BuildOptions, build_bogoliubov_layer, build_fourier_layer,
                              build_udis, spectrum_for)
from .dynamics import (TimeSeries, diagonal_rep_of_all_up, evolve_diagonal,
                       prepare_evolved_circuit, sigma_z_of_t, time_series)
from .estimators import IsingDisentangler, ThermalMagnetization
from .exceptions import (CriticalPointWarning, DegenerateAngleError, EmitRefusedError,
                         InvalidArgumentError, IsingQCError, ParseError, ResourceLimitError,
                         RoutingInfeasibleError, TopologyError, UnsupportedDecompositionError)
from .gatelib import (Gate, NativeBasis, bogoliubov_gate, decompose, equiv_up_to_phase,
                      fourier_gate, fswap, make_gate)
from .ising_model import (IsingSpec, SpectrumTable, bogoliubov_angle, diagonal_energy,
                          dispersion, ground_bitstring, ground_state_analytic_n4,
                          hamiltonian_matrix)
from .statevector import (ShotCounts, State, apply, expval_staggered_x, expval_z, init_basis,
                          overlap, run_circuit, sample)
from .thermal import (ThermalConfig, boltzmann_sampler, partition_function,
                      thermal_expectation_exact, thermal_expectation_sampled, thermal_map)

__version__ = "0.1.0"
