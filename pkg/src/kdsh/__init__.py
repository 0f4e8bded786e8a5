"""Planted k-densest sub-hypergraph recovery toolkit."""

from .instance import (
    PlantedInstance,
    ProblemParams,
    beta_to_gamma,
    gamma_to_beta,
    generate_instance,
    overlap,
    rate,
    sample_signal,
)
from .tensor import SymTensor, contract_map, elementwise_square, inner_with_power

__all__ = [
    "PlantedInstance",
    "ProblemParams",
    "SymTensor",
    "beta_to_gamma",
    "contract_map",
    "elementwise_square",
    "gamma_to_beta",
    "generate_instance",
    "inner_with_power",
    "overlap",
    "rate",
    "sample_signal",
]

__version__ = "0.1.0"
