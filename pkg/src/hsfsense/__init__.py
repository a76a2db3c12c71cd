"""Fragmentation-protected Ramsey sensing in the 2D transverse-field Ising
model, simulated exactly at small system size."""

from .lattice import Boundary, Lattice, SitePartition, canonical_partition, validate_partition
from .couplings import CouplingMap, homogeneous, k_ratio, sample_gaussian

__all__ = [
    "Boundary",
    "Lattice",
    "SitePartition",
    "canonical_partition",
    "validate_partition",
    "CouplingMap",
    "homogeneous",
    "k_ratio",
    "sample_gaussian",
]

__version__ = "0.1.0"
