"""Independent isomorphism oracle and certificate-driven classification."""

import math

import numpy as np
import pytest

from dsrg.core import AdjacencyMatrix, reverse
from dsrg.errors import CertificateOracleDisagreement, DimensionMismatch
from dsrg.iso import automorphism_count, classify, isomorphism
from dsrg.search import assemble, lift_masks


def _relabel(a, perm):
    return AdjacencyMatrix.from_dense(
        a.to_dense()[np.ix_(perm, perm)])


class TestIsomorphism:
    def test_identity(self, example_matrix):
        pi = isomorphism(example_matrix, example_matrix)
        assert pi is not None
        assert example_matrix == _relabel(example_matrix,
                                          np.argsort(np.array(pi)))

    def test_recovers_permutation(self, example_matrix):
        rng = np.random.default_rng(17)
        for _ in range(5):
            perm = rng.permutation(22)
            b = _relabel(example_matrix, perm)
            pi = isomorphism(example_matrix, b)
            assert pi is not None
            # pi is a genuine witness: b[pi(i), pi(j)] == a[i, j]
            assert all(b.has_edge(pi[i], pi[j]) == example_matrix.has_edge(i, j)
                       for i in range(22) for j in range(22))

    def test_example_not_isomorphic_to_reverse(self, example_matrix):
        assert isomorphism(example_matrix, reverse(example_matrix)) is None

    def test_distinguishes_nonisomorphic(self):
        # 3-cycle vs path on 3 vertices
        c3 = AdjacencyMatrix.from_dense(
            np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]]))
        p3 = AdjacencyMatrix.from_dense(
            np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]]))
        assert isomorphism(c3, p3) is None

    def test_order_mismatch(self, example_matrix):
        with pytest.raises(DimensionMismatch):
            isomorphism(example_matrix, AdjacencyMatrix(3, [0, 0, 0]))


class TestAutomorphismCount:
    def test_example_is_z3(self, example_matrix):
        assert automorphism_count(example_matrix) == 3

    def test_three_cycle(self):
        c3 = AdjacencyMatrix.from_dense(
            np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]]))
        assert automorphism_count(c3) == 3

    def test_edgeless_full_symmetric_group(self):
        assert automorphism_count(AdjacencyMatrix(22, [0] * 22)) == \
            math.factorial(22)

    def test_conjugation_invariance(self, example_matrix):
        rng = np.random.default_rng(23)
        b = _relabel(example_matrix, rng.permutation(22))
        assert automorphism_count(b) == 3


class TestClassify:
    def test_singleton(self, example_matrix):
        classes = classify([example_matrix])
        assert len(classes) == 1
        assert classes[0].members == (0,)
        assert classes[0].representative == 0
        assert classes[0].size == 1
        # the example is not self-reverse, so its reverse class is absent
        assert classes[0].reverse_class is None

    def test_relabelings_collapse(self, example_matrix):
        rng = np.random.default_rng(5)
        fam = [example_matrix] + [
            _relabel(example_matrix, rng.permutation(22)) for _ in range(3)]
        classes = classify(fam)
        assert len(classes) == 1
        assert sorted(classes[0].members) == [0, 1, 2, 3]

    def test_reverse_pairing(self, example_matrix):
        fam = [example_matrix, reverse(example_matrix)]
        classes = classify(fam)
        assert len(classes) == 2
        by_member = {c.members[0]: c for c in classes}
        a, b = by_member[0], by_member[1]
        assert a.reverse_class == b.index
        assert b.reverse_class == a.index

    def test_no_certificate_members(self):
        """Graphs without a Z_3 structure are placed by the oracle alone."""
        p3 = AdjacencyMatrix.from_dense(
            np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]]))
        p3b = _relabel(p3, np.array([2, 0, 1]))
        c3 = AdjacencyMatrix.from_dense(
            np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]]))
        classes = classify([p3, c3, p3b])
        sizes = sorted(c.size for c in classes)
        assert sizes == [1, 2]
        for c in classes:
            if c.size == 2:
                assert c.certificate is None
                assert sorted(c.members) == [0, 2]

    def test_example_orbit_representatives(self, params22, border22,
                                           example_c1):
        """The 23 orbit representatives over the example C(1) fall into
        exactly 12 isomorphism classes."""
        reps = [assemble(mm, params22, border22)
                for mm in lift_masks(example_c1, params22, border22,
                                     representatives=True)]
        classes = classify(reps)
        assert len(classes) == 12
        assert sum(c.size for c in classes) == 23
        for c in classes:
            assert c.representative in c.members

    def test_oracle_disagreement_aborts(self, example_matrix, monkeypatch):
        """If the certificate lies, classify must abort loudly."""
        import dsrg.iso as iso_mod
        monkeypatch.setattr(iso_mod, "_certificate_of", lambda a: b"same")
        with pytest.raises(CertificateOracleDisagreement):
            iso_mod.classify([example_matrix, reverse(example_matrix)])
