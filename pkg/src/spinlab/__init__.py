"""Simulator of a three-qubit NMR implementation of the Deutsch-Jozsa algorithm."""

from .algebra import BasisExpansion, Term, delta_block, expand, fidelity, matrix_exponential, product_operator, spin_operator
from .ideal import observable_signature, pseudo_pure_output, run_pure, thermal_output
from .oracle import BooleanFunction, FunctionClass, PAPER_FUNCTIONS, classify, experimental_unitary, oracle_unitary, phase_correction
from .pulses import HardPulse, SoftPulse, SpinSystem, experiment_schedule, simulate
from .spectrum import AcquisitionParams, percent_report, restore_experiment, run_experiment, run_suite

__version__ = "0.1.0"

__all__ = [
    "AcquisitionParams",
    "BasisExpansion",
    "BooleanFunction",
    "FunctionClass",
    "HardPulse",
    "PAPER_FUNCTIONS",
    "SoftPulse",
    "SpinSystem",
    "Term",
    "classify",
    "delta_block",
    "expand",
    "experiment_schedule",
    "experimental_unitary",
    "fidelity",
    "matrix_exponential",
    "observable_signature",
    "oracle_unitary",
    "percent_report",
    "phase_correction",
    "product_operator",
    "pseudo_pure_output",
    "restore_experiment",
    "run_experiment",
    "run_pure",
    "run_suite",
    "simulate",
    "spin_operator",
    "thermal_output",
]
