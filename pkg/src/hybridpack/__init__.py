"""Simulation toolkit for hybrid-packaged qudits.

A hybrid qudit is a ``d``-level gauge-locked internal factor times a
``D``-level external factor, ``N = dD`` computational labels per site.
"""

from . import algorithms, bases, compiler, gates, hilbert, metrology, noise, protocols, qec, state
from .errors import ContractViolation, InvalidArgumentError
from .hilbert import ChargeAssignment, HybridDims, make_dims
from .kernels import BACKEND
from .state import RegisterState, basis_state, from_amplitudes

__version__ = "0.1.0"

__all__ = [
    "algorithms", "bases", "compiler", "gates", "hilbert", "metrology", "noise", "protocols", "qec", "state",
    "ContractViolation", "InvalidArgumentError", "ChargeAssignment", "HybridDims", "make_dims", "BACKEND",
    "RegisterState", "basis_state", "from_amplitudes", "__version__",
]
