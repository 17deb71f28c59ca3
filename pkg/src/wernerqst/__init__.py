"""Simulated SIC-POVM tomography and entanglement detection for two-qubit Werner states."""
from .metrics import concurrence, fidelity, purity
from .povm import born_probabilities, sic_povm, two_qubit_povm
from .reconstruct import EstimatorConfig, estimate
from .simulate import expected_counts, random_source, simulate_counts
from .states import werner_two_qubit

__version__ = "0.1.0"
