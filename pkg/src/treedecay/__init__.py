"""Exact small-box checks of tree decay for truncated Ising correlations."""
from .errors import DomainError, ResourceError
from .lattice import Box, Face
from .polynomial import GibbsPolynomial, GibbsRatio
from .spin import SpinConfig, partition_function
from .replica import ReplicaConfig, CyclicAction

__version__ = "0.1.0"
