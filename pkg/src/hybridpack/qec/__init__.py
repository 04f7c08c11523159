"""Error-correcting codes on hybrid qudits."""

from ._stabilizer import (
    CodeInstance,
    Recovery,
    WeylCheck,
    all_commute,
    apply_error,
    code_projector,
    exhaustive_single_errors,
    lookup_correct,
    measure_syndrome,
    single_site_errors,
)
from .magic import inject_theta, injection_branches, magic_state
from .shor import shor_build, shor_codeword, shor_correct, shor_encode
from .steane import steane_build, steane_codeword, steane_correct, transversal_h
from .surface import (
    Lattice,
    LayerProblem,
    monte_carlo_logical_rate,
    single_edge_report,
    surface_build,
    surface_decode,
)

__all__ = [
    "CodeInstance", "Recovery", "WeylCheck", "all_commute", "code_projector", "exhaustive_single_errors",
    "measure_syndrome", "apply_error", "lookup_correct", "single_site_errors", "inject_theta", "injection_branches", "magic_state", "shor_build", "shor_codeword",
    "shor_correct", "shor_encode", "steane_build", "steane_codeword", "steane_correct", "transversal_h",
    "Lattice", "LayerProblem", "monte_carlo_logical_rate", "single_edge_report", "surface_build", "surface_decode",
]
