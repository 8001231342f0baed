"""Parameter validation, the two independent verifiers, and small-case
enumeration."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsrg.core import (AdjacencyMatrix, DsrgParams, complement,
                       complement_params, enumerate_small_dsrg, reverse,
                       verify_matrix_equations, verify_path_counts)
from dsrg.errors import (DimensionMismatch, DsrgError, NegativeParameter,
                         TooLarge)


class TestDsrgParams:
    def test_target_instance(self):
        p = DsrgParams(22, 9, 6, 3, 4)
        assert p.astuple() == (22, 9, 6, 3, 4)
        assert str(p) == "dsrg(22,9,6,3,4)"

    @pytest.mark.parametrize("bad", [
        (5, 0, 0, 0, 0),    # k = 0
        (5, 5, 1, 0, 1),    # k = v
        (6, 2, 3, 0, 1),    # t > k
        (6, 2, 1, 2, 1),    # lam >= k
        (6, 2, 1, 0, 3),    # mu > k
    ])
    def test_rejects(self, bad):
        with pytest.raises(DsrgError):
            DsrgParams(*bad)


class TestAdjacencyMatrix:
    def test_rejects_loops(self):
        with pytest.raises(DsrgError, match="loop"):
            AdjacencyMatrix(2, [1, 0])

    def test_rejects_stray_bits(self):
        with pytest.raises(DimensionMismatch):
            AdjacencyMatrix(2, [4, 0])

    def test_dense_round_trip(self):
        dense = np.array([[0, 1, 0], [0, 0, 1], [1, 1, 0]])
        a = AdjacencyMatrix.from_dense(dense)
        assert np.array_equal(a.to_dense(), dense)
        assert a.has_edge(2, 0) and not a.has_edge(0, 2)
        assert sorted(a.edges()) == [(0, 1), (1, 2), (2, 0), (2, 1)]

    def test_cols_transpose(self):
        dense = np.array([[0, 1], [0, 0]])
        a = AdjacencyMatrix.from_dense(dense)
        assert a.cols == (0, 1)


def _random_digraph(rng, v, k):
    """Random k-out-regular loop-free digraph (not a DSRG in general)."""
    dense = np.zeros((v, v), dtype=np.int64)
    for i in range(v):
        others = [j for j in range(v) if j != i]
        for j in rng.choice(others, size=k, replace=False):
            dense[i, j] = 1
    return AdjacencyMatrix.from_dense(dense)


class TestVerifiers:
    def test_example_passes_both(self, example_matrix, params22):
        assert verify_matrix_equations(example_matrix, params22).passed
        assert verify_path_counts(example_matrix, params22).passed

    def test_wrong_mu_fails_with_mu_counts(self, example_matrix):
        p = DsrgParams(22, 9, 6, 3, 5)
        rep = verify_matrix_equations(example_matrix, p)
        assert not rep.passed
        assert all(v.kind == "mu-count" for v in rep.violations)

    def test_order_mismatch(self, example_matrix):
        with pytest.raises(DimensionMismatch):
            verify_path_counts(example_matrix, DsrgParams(6, 2, 1, 0, 1))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_verifiers_agree_on_random_digraphs(self, seed):
        """The two verifiers never disagree, DSRG or not."""
        rng = np.random.default_rng(seed)
        v = int(rng.integers(4, 9))
        k = int(rng.integers(1, v - 1))
        a = _random_digraph(rng, v, k)
        p = DsrgParams(v, k, min(k, 1), 0, min(k, 1))
        r1 = verify_matrix_equations(a, p)
        r2 = verify_path_counts(a, p)
        assert r1.passed == r2.passed

    def test_directed_three_cycle(self):
        c3 = AdjacencyMatrix.from_dense(
            np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]]))
        p = DsrgParams(3, 1, 0, 0, 1)
        assert verify_matrix_equations(c3, p).passed
        assert verify_path_counts(c3, p).passed
        rep = verify_path_counts(c3, DsrgParams(3, 1, 1, 0, 1))
        assert not rep.passed
        viol = rep.violations[0]
        assert viol.kind == "t-count"
        assert (viol.expected, viol.actual) == (1, 0)

    def test_violation_cap(self):
        a = AdjacencyMatrix(6, [0] * 6)  # edgeless: everything violated
        rep = verify_path_counts(a, DsrgParams(6, 2, 1, 0, 1))
        assert not rep.passed
        assert rep.suppressed.get("mu-count", 0) > 0


class TestEnumerateSmall:
    def test_agreement_with_verifiers(self):
        p = DsrgParams(6, 2, 1, 0, 1)
        found = enumerate_small_dsrg(p)
        assert found, "dsrg(6,2,1,0,1) exists"
        for a in found:
            assert verify_matrix_equations(a, p).passed
            assert verify_path_counts(a, p).passed

    def test_lex_order_and_uniqueness(self):
        found = enumerate_small_dsrg(DsrgParams(6, 2, 1, 0, 1))
        rows = [a.rows for a in found]
        assert rows == sorted(rows)
        assert len(set(rows)) == len(rows)

    def test_guard(self):
        with pytest.raises(TooLarge):
            enumerate_small_dsrg(DsrgParams(22, 9, 6, 3, 4))

    def test_two_cycle_pairings(self):
        """With k = 1 and t = 1 every out-neighbor must return: the
        solutions are exactly the vertex-disjoint 2-cycle pairings."""
        found = enumerate_small_dsrg(DsrgParams(4, 1, 1, 0, 0))
        assert len(found) == 3           # perfect matchings of K_4
        for a in found:
            dense = a.to_dense()
            assert np.array_equal(dense, dense.T)
            assert np.array_equal(dense @ dense, np.eye(4))

    def test_both_directed_three_cycles(self):
        found = enumerate_small_dsrg(DsrgParams(3, 1, 0, 0, 1))
        rows = {a.rows for a in found}
        assert (0b010, 0b100, 0b001) in rows     # 0 -> 1 -> 2 -> 0
        assert (0b100, 0b001, 0b010) in rows     # 0 -> 2 -> 1 -> 0

    def test_nonexistent_params_empty(self):
        # v = 2k with t = mu fails the standard feasibility conditions
        assert enumerate_small_dsrg(DsrgParams(5, 2, 1, 0, 1)) == []


class TestComplement:
    def test_params_formula(self):
        assert complement_params(DsrgParams(6, 2, 1, 0, 1)).astuple() == \
            (6, 3, 2, 1, 2)
        assert complement_params(DsrgParams(22, 9, 6, 3, 4)).astuple() == \
            (22, 12, 9, 6, 7)

    def test_negative_parameter(self):
        with pytest.raises(NegativeParameter):
            complement_params(DsrgParams(4, 3, 3, 2, 3))

    def test_example_complement_verifies(self, example_matrix, params22):
        comp = complement(example_matrix)
        cp = complement_params(params22)
        assert verify_matrix_equations(comp, cp).passed
        assert verify_path_counts(comp, cp).passed

    def test_involution(self, example_matrix):
        assert complement(complement(example_matrix)) == example_matrix


def test_reverse_is_transpose(example_matrix):
    r = reverse(example_matrix)
    assert np.array_equal(r.to_dense(), example_matrix.to_dense().T)
    assert reverse(r) == example_matrix


def test_reverse_verifies_same_params(example_matrix, params22):
    r = reverse(example_matrix)
    assert verify_matrix_equations(r, params22).passed
    assert verify_path_counts(r, params22).passed
