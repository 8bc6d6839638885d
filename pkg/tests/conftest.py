"""Shared grids and field factories for the test suite."""

import pytest

from gevreyflow.grid import GridSpec
from gevreyflow.models import random_gevrey_field


@pytest.fixture(scope="session")
def grid2d():
    return GridSpec(d=2, n=16, cutoff=5)


@pytest.fixture(scope="session")
def grid3d():
    return GridSpec(d=3, n=16, cutoff=5)


def real_velocity(grid, seed, beta_decay=1.0):
    return random_gevrey_field(
        grid, grid.d, seed, beta_decay, hermitian=True, div_free=True
    )


def complex_velocity(grid, seed, beta_decay=1.0):
    return random_gevrey_field(
        grid, grid.d, seed, beta_decay, hermitian=False, div_free=True
    )


def real_scalar(grid, seed, beta_decay=1.0):
    return random_gevrey_field(grid, 1, seed, beta_decay, hermitian=True, div_free=False)


def complex_scalar(grid, seed, beta_decay=1.0):
    return random_gevrey_field(grid, 1, seed, beta_decay, hermitian=False, div_free=False)
