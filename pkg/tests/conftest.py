"""Shared fixtures: a small generated dataset and a prepared linkage base.

The small base is sized so encode+block stays under a second; protocol
tests that need specific policies or strategies build their own owners
from the same records.
"""

import pytest

from layerlink.data import DatasetSpec, generate_dataset
from layerlink.protocol import DataOwner, prepare_base

SMALL_SECRET = b"\x11" * 32


@pytest.fixture(scope="session")
def small_dataset():
    return generate_dataset(DatasetSpec(size=250, overlap=0.3, seed=7))


@pytest.fixture(scope="session")
def small_base(small_dataset):
    records_a, records_b, truth = small_dataset
    owner_a = DataOwner("a", records_a, SMALL_SECRET)
    owner_b = DataOwner("b", records_b, SMALL_SECRET)
    return prepare_base(owner_a, owner_b, truth)
