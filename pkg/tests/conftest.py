"""Shared fixtures: compile the jit kernels once so no test pays for it."""
import numpy as np
import pytest

from rrt_lab import kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    kernels.warmup()


@pytest.fixture()
def gen():
    """A throwaway deterministic generator for tests that just need noise."""
    return np.random.Generator(np.random.Philox(key=np.array([12345, 0], dtype=np.uint64)))
