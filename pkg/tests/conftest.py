import random

import pytest

from orthocount.lattice import QuadLattice


E8_GRAM = [
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, 0],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, -1],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, 0, 0, -1, 0, 0, 2],
]


@pytest.fixture
def e8():
    return QuadLattice.from_rows(E8_GRAM, positive_definite=True)


@pytest.fixture
def z8():
    return QuadLattice.from_rows([[2 if i == j else 0 for j in range(8)] for i in range(8)],
                                 positive_definite=True)


def random_posdef_gram(rng, rank, spread=3):
    """Random positive definite even gram: G = 2 B^T B + diag tweaks."""
    while True:
        B = [[rng.randint(-spread, spread) for _ in range(rank)] for _ in range(rank)]
        G = [[2 * sum(B[k][i] * B[k][j] for k in range(rank)) for j in range(rank)]
             for i in range(rank)]
        from orthocount.intmat import det_bareiss, leading_principal_minors
        if det_bareiss(G) != 0 and all(m > 0 for m in leading_principal_minors(G)):
            return G


def random_unimodular(rng, rank, steps=12):
    U = [[int(i == j) for j in range(rank)] for i in range(rank)]
    for _ in range(steps):
        i, j = rng.randrange(rank), rng.randrange(rank)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        for k in range(rank):
            U[i][k] += c * U[j][k]
    return U


@pytest.fixture
def rng():
    return random.Random(20250810)
