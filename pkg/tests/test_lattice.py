import itertools
import random

import pytest

from orthocount.intmat import mat_mul, transpose
from orthocount.lattice import (
    QuadLattice,
    SublatticeBasis,
    det_and_disc_group,
    identity_basis,
    intersect_and_index,
    is_maximal_at,
    lattice_from_json,
    lattice_to_json,
    p_diagonalize,
    rep_count,
    successive_minima,
    theta_table,
)

from conftest import random_posdef_gram, random_unimodular


X2Y2 = QuadLattice.from_rows([[2, 0], [0, 2]], positive_definite=True)
HYP = QuadLattice.from_rows([[0, 1], [1, 0]])


def brute_counts(L, bound, box):
    counts = [0] * (bound + 1)
    for v in itertools.product(range(-box, box + 1), repeat=L.rank):
        q = L.q_value(v)
        if 0 <= q <= bound:
            counts[q] += 1
    return counts


class TestInvariants:
    def test_det_disc_diag22(self):
        assert det_and_disc_group(X2Y2) == (4, 4)

    def test_det_disc_e8(self, e8):
        assert det_and_disc_group(e8) == (1, 1)

    def test_det_disc_hyperbolic(self):
        assert det_and_disc_group(HYP) == (-1, 1)

    def test_rejects_odd_diagonal(self):
        with pytest.raises(ValueError):
            QuadLattice.from_rows([[1, 0], [0, 2]])

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            QuadLattice.from_rows([[2, 1], [0, 2]])

    def test_rejects_singular(self):
        with pytest.raises(ValueError):
            QuadLattice.from_rows([[2, 2], [2, 2]])


class TestRepCount:
    def test_x2y2_m1(self):
        assert rep_count(X2Y2, 1) == 4

    def test_m0_is_one(self, e8):
        assert rep_count(X2Y2, 0) == 1
        assert rep_count(e8, 0) == 1

    def test_e8_roots(self, e8):
        assert rep_count(e8, 1) == 240

    def test_e8_240_sigma3(self, e8):
        sigma3 = lambda m: sum(d ** 3 for d in range(1, m + 1) if m % d == 0)
        table = theta_table(e8, 6)
        for m in range(1, 7):
            assert table[m] == 240 * sigma3(m)

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError):
            rep_count(HYP, 1)

    def test_against_box_enumeration(self, rng):
        for _ in range(8):
            rank = rng.randint(1, 4)
            L = QuadLattice.from_rows(random_posdef_gram(rng, rank, spread=2),
                                      positive_definite=True)
            bound = 12
            assert theta_table(L, bound) == brute_counts(L, bound, 14)

    def test_unimodular_invariance(self, rng):
        for _ in range(6):
            rank = rng.randint(2, 4)
            G = random_posdef_gram(rng, rank, spread=2)
            L = QuadLattice.from_rows(G, positive_definite=True)
            U = random_unimodular(rng, rank)
            G2 = mat_mul(mat_mul(transpose(U), G), U)
            L2 = QuadLattice.from_rows(G2, positive_definite=True)
            for m in range(0, 21, 4):
                assert rep_count(L, m) == rep_count(L2, m)

    def test_sweep_consistency(self, rng):
        # sum of per-m counts equals the count of enumerated vectors with Q <= M
        from orthocount._enum import short_vectors
        for _ in range(4):
            rank = rng.randint(2, 3)
            L = QuadLattice.from_rows(random_posdef_gram(rng, rank, spread=2),
                                      positive_definite=True)
            for M in (5, 30):
                total = sum(theta_table(L, M))
                vecs = short_vectors(L.gram_rows(), M)
                assert total == 2 * len(vecs) + 1


class TestSuccessiveMinima:
    def test_x2y2(self):
        mu_sq, a_sq = successive_minima(X2Y2)
        assert mu_sq == [1, 1] and a_sq == [1, 1]

    def test_x2_4y2(self):
        L = QuadLattice.from_rows([[2, 0], [0, 8]], positive_definite=True)
        mu_sq, a_sq = successive_minima(L)
        assert mu_sq == [1, 4] and a_sq == [1, 4]

    def test_rank_one(self):
        L = QuadLattice.from_rows([[2]], positive_definite=True)
        assert successive_minima(L) == ([1], [1])

    def test_mu1_is_min(self, rng):
        for _ in range(5):
            rank = rng.randint(2, 4)
            L = QuadLattice.from_rows(random_posdef_gram(rng, rank, spread=2),
                                      positive_definite=True)
            mu_sq, _ = successive_minima(L)
            m = 0
            while True:
                m += 1
                if rep_count(L, m) > 0:
                    break
            assert mu_sq[0] == m

    def test_hadamard_style_bound(self, rng):
        # a_rank^2 <= (4/3)^(r(r-1)/2) * det for the enumerator-derived bound
        from fractions import Fraction
        for _ in range(5):
            rank = rng.randint(2, 4)
            L = QuadLattice.from_rows(random_posdef_gram(rng, rank, spread=2),
                                      positive_definite=True)
            _, a_sq = successive_minima(L)
            det, _ = det_and_disc_group(L)
            assert a_sq[-1] <= Fraction(4, 3) ** (rank * (rank - 1) // 2) * det


class TestPDiagonalize:
    def test_unimodular(self):
        out = p_diagonalize(X2Y2, 5, 4)
        assert sorted(v for _, v in out) == [0, 0]

    def test_scaled_hyperbolic(self):
        # completing the square on x+y, x-y gives units u, -u: their residue
        # classes split iff -1 is a nonresidue, i.e. p = 3 mod 4
        from orthocount.arith import kronecker
        for p in (5, 7):
            L = QuadLattice.from_rows([[0, p], [p, 0]])
            out = p_diagonalize(L, p, 4)
            assert sorted(v for _, v in out) == [1, 1]
            us = [kronecker(u, p) for u, _ in out]
            assert us[0] * us[1] == kronecker(-1, p)
        out7 = p_diagonalize(QuadLattice.from_rows([[0, 7], [7, 0]]), 7, 4)
        assert sorted(kronecker(u, 7) for u, _ in out7) == [-1, 1]

    def test_ssp_local_block(self):
        # <e1,e1> = 2p, <f1,f1> = -2 lam^2 p with lam^2 a nonresidue: vals (1,1)
        p = 5
        lam2 = 2  # nonresidue mod 5
        L = QuadLattice.from_rows([[2 * p, 0], [0, -2 * lam2 * p]])
        out = p_diagonalize(L, p, 3)
        assert sorted(v for _, v in out) == [1, 1]

    def test_rejects_p2(self):
        with pytest.raises(ValueError):
            p_diagonalize(X2Y2, 2, 3)

    def test_valuation_multiset_invariance(self, rng):
        for _ in range(100):
            rank = rng.randint(2, 6)
            G = random_posdef_gram(rng, rank, spread=2)
            L = QuadLattice.from_rows(G, positive_definite=True)
            p = rng.choice([3, 5, 7])
            vals = sorted(v for _, v in p_diagonalize(L, p, 3))
            U = random_unimodular(rng, rank)
            G2 = mat_mul(mat_mul(transpose(U), G), U)
            L2 = QuadLattice.from_rows(G2, positive_definite=True)
            vals2 = sorted(v for _, v in p_diagonalize(L2, p, 3))
            assert vals == vals2


class TestMaximality:
    def test_e8(self, e8):
        assert is_maximal_at(e8, 3)

    def test_scaled_by_9(self):
        L = QuadLattice.from_rows([[18, 0], [0, 18]])
        assert not is_maximal_at(L, 3)

    def test_ssp_block_maximality_at_p(self):
        # n=1 block: Q/p = x^2 - lam^2 y^2 is anisotropic mod p, so maximal;
        # the n=2 block contains a hyperbolic pair scaled by p, so it is not.
        p = 5
        L1 = QuadLattice.from_rows([[2 * p, 0], [0, -2 * 2 * p]])
        assert is_maximal_at(L1, p)
        L2 = QuadLattice.from_rows([
            [2 * p, 0, 0, 0],
            [0, -2 * 2 * p, 0, 0],
            [0, 0, 0, p],
            [0, 0, p, 0],
        ])
        assert not is_maximal_at(L2, p)

    def test_quotient_search_matches_rescaling(self):
        # gram*ell^2 always has the obvious overlattice (the unscaled lattice)
        L = QuadLattice.from_rows([[2 * 49, 7 * 2], [7 * 2, 4 * 49]])
        assert not is_maximal_at(L, 7)


class TestIntersection:
    def test_identity(self):
        A = identity_basis(X2Y2)
        inter, idx = intersect_and_index(A, A)
        assert idx == 1
        assert inter.index_in_ambient() == 1

    def test_ambient_with_sub(self):
        A = identity_basis(X2Y2)
        B = SublatticeBasis.from_cols(X2Y2, [[5, 0], [0, 1]])
        inter, idx = intersect_and_index(A, B)
        assert idx == 5
        assert inter.index_in_ambient() == 5

    def test_two_sublattices(self):
        A = SublatticeBasis.from_cols(X2Y2, [[5, 0], [0, 1]])
        B = SublatticeBasis.from_cols(X2Y2, [[1, 0], [0, 5]])
        inter, idx = intersect_and_index(A, B)
        assert idx == 5
        assert inter.index_in_ambient() == 25

    def test_mismatched_ambient(self):
        A = identity_basis(X2Y2)
        B = identity_basis(QuadLattice.from_rows([[2, 1], [1, 2]]))
        with pytest.raises(ValueError):
            intersect_and_index(A, B)

    def test_membership_and_divisibility(self, rng):
        for _ in range(10):
            L = QuadLattice.from_rows(random_posdef_gram(rng, 3, spread=2),
                                      positive_definite=True)
            MA = random_unimodular(rng, 3)
            MB = random_unimodular(rng, 3)
            for i in range(3):
                ca, cb = rng.choice([1, 2, 3]), rng.choice([1, 2])
                MA[i] = [ca * x for x in MA[i]]
                MB[i] = [cb * x for x in MB[i]]
            A = SublatticeBasis.from_cols(L, [list(r) for r in zip(*MA)])
            B = SublatticeBasis.from_cols(L, [list(r) for r in zip(*MB)])
            inter, idx = intersect_and_index(A, B)
            for j in range(3):
                col = inter.col(j)
                assert A.contains(col) and B.contains(col)
            # A/(A cap B) embeds in ambient/B
            assert B.index_in_ambient() % idx == 0
            assert (A.index_in_ambient() * B.index_in_ambient()) % inter.index_in_ambient() == 0


def test_json_roundtrip(e8):
    assert lattice_from_json(lattice_to_json(e8)) == e8
