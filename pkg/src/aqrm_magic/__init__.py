"""Magic-resource analysis of the asymmetric quantum Rabi model."""

__version__ = "0.1.0"

from .model import (HermitianOperator, ModelParams, TruncatedBasis,  # noqa: E402
                    build_excitation_number, build_hamiltonian, build_ladder_operators,
                    build_parity, jc_doublet_oracle, polaron_hamiltonian)
from .qudit import (MANA_H, MagicReport, dai_fu_luo, discrete_wigner_qubit,  # noqa: E402
                    discrete_wigner_qudit, heisenberg_weyl, magic_report, mana,
                    reference_states, sum_negativity, von_neumann_entropy,
                    witness_entropy_relation)
from .reduction import (BlochVector, bloch_vector, mean_boson_number,  # noqa: E402
                        trace_out_boson, trace_out_qubit)
from .spectral import (EigenSolution, check_convergence, diagonalize,  # noqa: E402
                       parity_label, solve, solve_adaptive)
from .wigner import (PhaseSpaceGrid, WignerField, bosonic_mana,  # noqa: E402
                     wigner_log_negativity, wigner_of_density, wigner_transition)
