"""Communication and cryptography protocols returning :class:`ExperimentReport`."""

from .cglmp import (cglmp_bell, cglmp_coefficients, cglmp_value, claimed_quantum_value, h_N, key_rate,
                    lhv_maximum, optimal_labelling, reference_settings, probability_table)
from .qkd import b92, qkd_reduce, qkd_six_state, run_mub_qkd, six_state_eve_reference
from .qsdc import qsdc_run
from .randomness import min_entropy, randomness_expand
from .report import ExperimentReport, ProtocolConfig, binomial_sigma, sigma_distance
from .secret_sharing import correlation_table, secret_share
from .teleport import (superdense, superdense_capacity, superdense_report, teleport, teleport_branch,
                       teleport_correction)

__all__ = [name for name in dir() if not name.startswith("_")]
