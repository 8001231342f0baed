import os

import numpy as np
import pytest

from dsrg import DsrgParams, default_border
from dsrg.circulant import compactify, eval_at_one
from dsrg.formats import load_matrix_file
from dsrg.search import Stage1Solution

DATA = os.path.join(os.path.dirname(__file__), "..", "src", "dsrg", "data")


@pytest.fixture(scope="session")
def params22():
    return DsrgParams(22, 9, 6, 3, 4)


@pytest.fixture(scope="session")
def border22(params22):
    return default_border(params22, 3)


@pytest.fixture(scope="session")
def example_matrix():
    return load_matrix_file(os.path.join(DATA, "example22.txt"))


@pytest.fixture(scope="session")
def shrikhande_matrix():
    return load_matrix_file(os.path.join(DATA, "shrikhande16.txt"))


@pytest.fixture(scope="session")
def example_c1(example_matrix):
    dense = example_matrix.to_dense()
    return Stage1Solution.from_numpy(eval_at_one(compactify(dense[1:, 1:], 3)))


@pytest.fixture(scope="session")
def example_masks(example_matrix):
    cm = compactify(example_matrix.to_dense()[1:, 1:], 3)
    return tuple(
        tuple(sum(b << t for t, b in enumerate(cm[i, j].coeffs))
              for j in range(7))
        for i in range(7))


def random_circulant_block_matrix(rng, n, m):
    """Random binary matrix of n x n random circulant m-blocks."""
    v = n * m
    out = np.zeros((v, v), dtype=np.int64)
    for bi in range(n):
        for bj in range(n):
            first = rng.integers(0, 2, size=m)
            for r in range(m):
                for c in range(m):
                    out[bi * m + r, bj * m + c] = first[(c - r) % m]
    return out
