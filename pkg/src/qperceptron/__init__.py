"""Grover-search perceptron training on a statevector simulator."""

__version__ = "0.1.0"

from .circuit import Circuit, RegisterLayout, compose, inverse, simulate, stats
from .dataset import Dataset, example_dataset, load_dataset
from .estimator import GroverPerceptron
from .exceptions import (
    BudgetError,
    CapacityError,
    DatasetError,
    EncodingError,
    InvariantViolation,
    NoSolutionError,
    QPerceptronError,
    StructuralError,
)
from .grover import GroverRunner, analytic_success, grover_circuit, optimal_iterations, train
from .oracle import encode_dataset, marked_codes, oracle_circuit, oracle_response
from .qft_arith import FixedPointSpec
from .statevector import Statevector, apply_gate, init_basis_state, measure_counts
from .version_space import brute_force_separators, classical_search, separates

__all__ = [
    "BudgetError", "CapacityError", "Circuit", "Dataset", "DatasetError", "EncodingError",
    "FixedPointSpec", "GroverPerceptron", "GroverRunner", "InvariantViolation",
    "NoSolutionError", "QPerceptronError", "RegisterLayout", "Statevector", "StructuralError",
    "analytic_success", "apply_gate", "brute_force_separators", "classical_search", "compose",
    "encode_dataset", "example_dataset", "grover_circuit", "init_basis_state", "inverse",
    "load_dataset", "marked_codes", "measure_counts", "optimal_iterations", "oracle_circuit",
    "oracle_response", "separates", "simulate", "stats", "train",
]
