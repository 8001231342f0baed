"""Border pattern, the collapsed matrix H, and the stage-1 constraint
model."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsrg.border import (BorderPattern, default_border, h_compact,
                         stage1_constraints, sum_constraints)
from dsrg.core import DsrgParams
from dsrg.errors import DsrgError, IndivisibleParameters


class TestBorderPattern:
    def test_canonical_border(self, params22, border22):
        assert border22.b == (1,) * 9 + (0,) * 12
        assert border22.d == (1,) * 6 + (0,) * 3 + (1,) * 3 + (0,) * 9
        assert border22.n == 7
        border22.validate(params22)
        bb, db = border22.block_bits()
        assert bb == (1, 1, 1, 0, 0, 0, 0)
        assert db == (1, 1, 0, 1, 0, 0, 0)

    def test_dot_product_is_t(self, params22, border22):
        assert sum(x * y for x, y in
                   zip(border22.b, border22.d)) == params22.t

    def test_rejects_non_block_constant(self):
        b = (1, 0, 1) + (0,) * 18
        with pytest.raises(DsrgError, match="not constant"):
            BorderPattern(22, 3, b, (0,) * 21)

    def test_rejects_bad_length(self):
        with pytest.raises(DsrgError, match="length"):
            BorderPattern(22, 3, (1,) * 20, (0,) * 21)

    def test_validate_popcount(self, params22):
        border = BorderPattern(22, 3, (0,) * 21, (0,) * 21)
        with pytest.raises(DsrgError, match="popcount"):
            border.validate(params22)

    def test_indivisible_parameters(self):
        with pytest.raises(IndivisibleParameters):
            default_border(DsrgParams(22, 9, 5, 3, 4), 3)


class TestHCompact:
    def test_values(self, params22, border22):
        h = h_compact(params22, border22)
        expected = np.full((7, 7), 4, dtype=np.int64)
        for i in (0, 1, 3):
            expected[i, :3] = 3
        assert np.array_equal(h, expected)

    def test_expands_to_outer_product(self, params22, border22):
        """Blowing each entry up to an h * J_3 block gives mu*J - D.B."""
        h = h_compact(params22, border22)
        full = np.kron(h, np.ones((3, 3), dtype=np.int64))
        d = np.array(border22.d).reshape(-1, 1)
        b = np.array(border22.b).reshape(1, -1)
        assert np.array_equal(
            full, params22.mu * np.ones((21, 21), dtype=np.int64) - d @ b)


def test_h_compact_zero_d_gives_mu_j(params22):
    border = BorderPattern(22, 3, (1,) * 9 + (0,) * 12, (0,) * 21)
    assert np.array_equal(h_compact(params22, border),
                          np.full((7, 7), params22.mu))


class TestSumConstraints:
    def test_families(self, params22, border22):
        sc = sum_constraints(params22, border22)
        assert sc.s_b == (0, 1, 2)
        assert sc.s_d == (0, 1, 3)
        assert sc.col_in == (3, 3, 3, 4, 4, 4, 4)
        assert sc.col_out == (5, 5, 5, 5, 5, 5, 5)
        assert sc.row_in == (3, 3, 4, 3, 4, 4, 4)
        assert sc.row_out == (5, 5, 5, 5, 5, 5, 5)

    def test_check_collapse_soundness(self, params22, border22,
                                      example_c1):
        """The scalar row/column sum constraints of the full matrix hold
        exactly when the collapsed families hold on C(1)."""
        sc = sum_constraints(params22, border22)
        m = example_c1.to_numpy()
        assert sc.check(m)
        bad = m.copy()
        bad[0, 0] += 1
        assert not sc.check(bad)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_check_matches_direct_sums(self, seed):
        p = DsrgParams(22, 9, 6, 3, 4)
        border = default_border(p, 3)
        sc = sum_constraints(p, border)
        rng = np.random.default_rng(seed)
        m = rng.integers(0, 4, size=(7, 7))
        direct = (
            all(m[list(sc.s_b), j].sum() == sc.col_in[j] for j in range(7))
            and all(m[[i for i in range(7) if i not in sc.s_b], j].sum()
                    == sc.col_out[j] for j in range(7))
            and all(m[i, list(sc.s_d)].sum() == sc.row_in[i]
                    for i in range(7))
            and all(m[i, [j for j in range(7) if j not in sc.s_d]].sum()
                    == sc.row_out[i] for i in range(7))
        )
        assert sc.check(m) == direct


class TestStage1Constraints:
    def test_target_and_bounds(self, params22, border22):
        c = stage1_constraints(params22, border22)
        assert c.delta == 1
        assert c.diag_bound == 2
        assert c.offdiag_bound == 3
        assert c.target[0, 0] == 11          # (t - mu) + m * 3
        assert c.target[0, 3] == 12
        assert c.target[4, 4] == 14
        h = h_compact(params22, border22)
        assert np.array_equal(
            c.target, 2 * np.eye(7, dtype=np.int64) + 3 * h)

    def test_holds_on_example(self, params22, border22, example_c1):
        c = stage1_constraints(params22, border22)
        m = example_c1.to_numpy()
        assert c.holds(m)
        bad = m.copy()
        bad[2, 5] = 3 - bad[2, 5]
        assert not c.holds(bad)
