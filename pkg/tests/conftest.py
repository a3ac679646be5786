import random

import numpy as np
import pytest

from sdkx.algebra import DIM, ORDER, GRMatrix, GroupRingElem
from sdkx.paramgen import generate_params

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return random.Random(20240607)


@pytest.fixture(scope="session")
def params():
    return generate_params(random.Random(7))


@pytest.fixture(scope="session")
def params_pool():
    r = random.Random(99)
    return [generate_params(r) for _ in range(20)]


def random_gre(r: random.Random) -> GroupRingElem:
    return GroupRingElem([r.randrange(7) for _ in range(ORDER)])


def random_matrix(r: random.Random) -> GRMatrix:
    return GRMatrix([[random_gre(r) for _ in range(DIM)] for _ in range(DIM)])


def row_monomial_matrix(r: random.Random, zero_row_prob: float = 0.2) -> GRMatrix:
    """At most one nonzero monomial c*g per row; closed under products, so
    powers live in a small finite monoid and have short loops."""
    arr = np.zeros((DIM, DIM, ORDER), dtype=np.int64)
    for i in range(DIM):
        if r.random() < zero_row_prob:
            continue
        arr[i, r.randrange(DIM), r.randrange(ORDER)] = r.randrange(1, 7)
    return GRMatrix(arr)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
