"""Shared fixtures: small lattices, canonical partitions, coupling maps."""

import pytest

from hsfsense.couplings import homogeneous, sample_gaussian
from hsfsense.lattice import Lattice, canonical_partition


@pytest.fixture(scope="session")
def lat33():
    return Lattice(3, 3)


@pytest.fixture(scope="session")
def lat34():
    return Lattice(4, 3)


@pytest.fixture(scope="session")
def part33(lat33):
    return canonical_partition(lat33)


@pytest.fixture(scope="session")
def part34(lat34):
    return canonical_partition(lat34)


@pytest.fixture(scope="session")
def hom33(lat33):
    return homogeneous(lat33, 1.0)


@pytest.fixture(scope="session")
def dis33(lat33):
    return sample_gaussian(lat33, 1.0, 0.3, seed=7)
