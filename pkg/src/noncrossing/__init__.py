"""Statistics of uniform random non-crossing partitions.

Exact rational formulas, Catalan-structure bijections, exactly uniform
sampling, limit-law evaluators, and a Monte Carlo harness that turns the
advertised laws into pass/fail checks.
"""

from .structures import (
    BinaryTree,
    DyckPath,
    NCPairing,
    NCPartition,
    PlanarTree,
    ValidationError,
    enumerate_dyck,
    enumerate_nc,
    is_noncrossing,
)
from .sampling import RngState, sample_dyck, sample_nc_partition

__all__ = [
    "BinaryTree",
    "DyckPath",
    "NCPairing",
    "NCPartition",
    "PlanarTree",
    "RngState",
    "ValidationError",
    "enumerate_dyck",
    "enumerate_nc",
    "is_noncrossing",
    "sample_dyck",
    "sample_nc_partition",
]
