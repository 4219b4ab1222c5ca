"""Exact finite-sample Kolmogorov-type three-layer networks for arbitrary functions."""

from .condition_z import IncidenceSystem, ZReport, brute_force_z, build_incidence, check_z, minimal_violation
from .errors import (
    DomainError,
    FormatError,
    GroupingAmbiguity,
    InvalidWitness,
    NumericalRankWarning,
    SizeError,
    Unrepresentable,
)
from .inner import InnerFunction, eval_phi, verify_monotone_lipschitz
from .network import KolmogorovNetwork, load, save
from .numeric import NumericMode
from .representer import LookupTable, SampleSet, annihilate, fit, predict, residual_report
from .transfer import TransferStack, default_stack, sigma, sigma_inv, w_eval, z_eval

__version__ = "0.1.0"
