"""Algorithm kernels: QFT, phase estimation, Grover, walks, order finding and HHL."""

from .grover import GroverPlan, diffusion_matrix, grover_search, oracle_matrix, rotation_model
from .hhl import HHLInstance, hhl_solve, phase_scale
from .qft import circuit_unitary, controlled_phase, qft_apply, qft_circuit, qft_matrix
from .qpe import eigenphase, qpe_estimate, qpe_kernel
from .shor import (FactoringInstance, control_distribution, convergents, factors_from_order, modmul_gate,
                   modmul_permutation, order_from_sample, shor_order_find)
from .walks import (ballistic_exponent, block_phases, ctqw_run, cycle_laplacian, cycle_shifts, dtqw_run,
                    dtqw_step, grover_coin, hadamard_coin, internal_reduced, momentum_blocks,
                    position_distribution, position_variance, shift_matrix, time_averaged)

__all__ = [name for name in dir() if not name.startswith("_")]
