import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sketchout.sketching import (
    F_QUARTER,
    SampleBudget,
    f_jl,
    make_column_sampler,
    make_gaussian_sketch,
    make_probe_vector,
    make_row_subsampler,
    max_outliers,
    min_col_budget,
    min_gamma,
    min_row_budget,
)


class TestGaussianSketch:
    def test_zero_vector_maps_to_zero(self):
        op = make_gaussian_sketch(4, 4, seed=7)
        assert np.array_equal(op.apply(np.zeros(4)), np.zeros(4))

    def test_seeded_determinism(self):
        a = make_gaussian_sketch(33, 17, seed=123)
        b = make_gaussian_sketch(33, 17, seed=123)
        assert np.array_equal(a.matrix, b.matrix)

    def test_norm_preserving_in_expectation(self):
        op = make_gaussian_sketch(200, 50, seed=1)
        rng = np.random.Generator(np.random.Philox(key=99))
        v = rng.standard_normal((50, 1000))
        v /= np.linalg.norm(v, axis=0)
        sq = np.sum((op.matrix @ v) ** 2, axis=0)
        assert abs(sq.mean() - 1.0) < 0.05

    def test_rejects_zero_dimensions(self):
        with pytest.raises(ValueError):
            make_gaussian_sketch(0, 5, seed=0)
        with pytest.raises(ValueError):
            make_gaussian_sketch(5, 0, seed=0)

    @pytest.mark.parametrize("m,eps", [(100, 0.25), (100, 0.5)])
    def test_jl_tail_smoke(self, m, eps):
        # light version of the acceptance JL suite
        op = make_gaussian_sketch(m, 60, seed=5)
        rng = np.random.Generator(np.random.Philox(key=17))
        v = rng.standard_normal((60, 2000))
        v /= np.linalg.norm(v, axis=0)
        sq = np.sum((op.matrix @ v) ** 2, axis=0)
        freq = np.mean(np.abs(sq - 1.0) >= eps)
        bound = 2.0 * math.exp(-m * f_jl(eps))
        se = math.sqrt(bound * (1 - bound) / 2000) if bound < 1 else 0.0
        assert freq <= min(1.0, bound + 3 * se)


class TestColumnSampler:
    def test_gamma_one_selects_all(self):
        op = make_column_sampler(10, 1.0, seed=3)
        assert list(op.indices) == list(range(10))
        assert op.matrix.shape == (10, 10)

    def test_gamma_zero_is_empty_and_flagged(self):
        with pytest.warns(RuntimeWarning):
            op = make_column_sampler(10, 0.0, seed=3)
        assert op.indices.size == 0

    def test_indices_increasing_and_binary_matrix(self):
        op = make_column_sampler(100, 0.3, seed=11)
        assert np.all(np.diff(op.indices) > 0)
        assert set(np.unique(op.matrix)) <= {0.0, 1.0}
        assert np.array_equal(op.matrix.sum(axis=0), np.ones(op.indices.size))

    def test_cardinality_tail_bound(self):
        # over 500 seeds at (n2=1000, gamma=0.2), |S| > 300 has probability
        # below exp(-3 * 0.2 * 1000 / 28) ~ 5e-10: never observed
        sizes = np.array(
            [make_column_sampler(1000, 0.2, seed=s).indices.size for s in range(500)]
        )
        assert np.all(sizes <= 300)
        assert np.all(sizes >= 100)

    def test_per_index_draws_are_prefix_stable(self):
        small = make_column_sampler(100, 0.25, seed=9).indices
        large = make_column_sampler(250, 0.25, seed=9).indices
        assert np.array_equal(small, large[large < 100])


class TestRowSubsampler:
    def test_full_selection_is_identity_set(self):
        op = make_row_subsampler(5, 5, seed=42)
        assert list(op.indices) == list(range(5))

    def test_distinct_in_range(self):
        op = make_row_subsampler(100, 10, seed=3)
        assert op.indices.size == 10
        assert np.unique(op.indices).size == 10
        assert op.indices.max() < 100
        assert np.array_equal(op.matrix.sum(axis=1), np.ones(10))

    def test_seeded_determinism(self):
        a = make_row_subsampler(50, 7, seed=5)
        b = make_row_subsampler(50, 7, seed=5)
        assert np.array_equal(a.indices, b.indices)

    def test_oversampling_rejected(self):
        with pytest.raises(ValueError):
            make_row_subsampler(5, 6, seed=0)


class TestProbeVector:
    def test_single_entry_nonzero(self):
        assert make_probe_vector(1, seed=0).matrix[0, 0] != 0.0

    def test_linearity_on_zero(self):
        op = make_probe_vector(6, seed=2)
        assert op.apply(np.zeros(6)) == pytest.approx(0.0)

    def test_distinct_seeds_differ(self):
        a = make_probe_vector(8, seed=1)
        b = make_probe_vector(8, seed=2)
        assert not np.array_equal(a.matrix, b.matrix)


def _mp_budget_row(r, k, delta):
    num = 5 * (mpmath.mpf(r) + 1) + mpmath.log(k) + mpmath.log(2 / mpmath.mpf(delta))
    return num / (mpmath.mpf(1) / 64 - mpmath.mpf(1) / 384)


def _mp_budget_col(k, n2, delta):
    num = (
        11 * mpmath.mpf(k)
        + 2 * k * mpmath.log(mpmath.mpf(n2) / k)
        + mpmath.log(2 / mpmath.mpf(delta))
    )
    return num / (mpmath.mpf(1) / 64 - mpmath.mpf(1) / 384)


class TestBudgets:
    def test_f_quarter_is_five_384ths(self):
        assert math.isclose(F_QUARTER, 5.0 / 384.0, rel_tol=1e-15)
        assert f_jl(0.5) > 0 and f_jl(0.99) > 0

    def test_quarter_constant_arithmetic(self):
        # numerators 10 and 13 divided by f(1/4) reproduce the documented
        # reference counts 768 and 999
        assert math.ceil(10.0 / F_QUARTER) == 768
        assert math.ceil(13.0 / F_QUARTER) == 999

    def test_row_budget_reference_value(self):
        b = SampleBudget(n1=100, n2=1000, n_L=990, r=5, k=10, delta=0.1)
        assert min_row_budget(b) == 2711

    def test_col_budget_reference_value(self):
        b = SampleBudget(n1=100, n2=1000, n_L=990, r=5, k=10, delta=0.1)
        assert min_col_budget(b) == 15752

    def test_row_budget_no_outliers_flagged(self):
        b = SampleBudget(n1=10, n2=100, n_L=100, r=2, k=0, delta=0.5)
        with pytest.warns(RuntimeWarning):
            val = min_row_budget(b)
        assert val == math.ceil((15.0 + math.log(4.0)) / F_QUARTER)

    def test_col_budget_rejects_no_outliers(self):
        b = SampleBudget(n1=10, n2=100, n_L=100, r=2, k=0, delta=0.5)
        with pytest.raises(ValueError):
            min_col_budget(b)

    @settings(max_examples=60, deadline=None)
    @given(
        r=st.integers(1, 200),
        k=st.integers(1, 500),
        delta=st.floats(1e-4, 0.99),
    )
    def test_row_budget_matches_high_precision(self, r, k, delta):
        b = SampleBudget(n1=10, n2=1000, n_L=500, r=r, k=k, delta=delta)
        exact = _mp_budget_row(r, k, delta)
        if abs(exact - mpmath.nint(exact)) < 1e-9:
            return  # boundary between two ceilings; either answer is fine
        assert min_row_budget(b) == int(mpmath.ceil(exact))

    @settings(max_examples=60, deadline=None)
    @given(
        k=st.integers(1, 400),
        n2=st.integers(400, 100000),
        delta=st.floats(1e-4, 0.99),
    )
    def test_col_budget_matches_high_precision(self, k, n2, delta):
        b = SampleBudget(n1=10, n2=n2, n_L=n2 - k, r=1, k=k, delta=delta)
        exact = _mp_budget_col(k, n2, delta)
        if abs(exact - mpmath.nint(exact)) < 1e-9:
            return
        assert min_col_budget(b) == int(mpmath.ceil(exact))

    def test_row_budget_monotone(self):
        base = dict(n1=10, n2=1000, n_L=900, delta=0.1)
        vals = [min_row_budget(SampleBudget(r=r, k=5, **base)) for r in (1, 2, 4, 8)]
        assert vals == sorted(vals) and len(set(vals)) == 4
        vals = [min_row_budget(SampleBudget(r=3, k=k, **base)) for k in (1, 10, 100)]
        assert vals == sorted(vals)

    def test_col_budget_monotone_in_k(self):
        base = dict(n1=10, n2=100000, n_L=9000, r=1, delta=0.1)
        vals = [min_col_budget(SampleBudget(k=k, **base)) for k in (1, 5, 25, 125)]
        assert vals == sorted(vals) and len(set(vals)) == 4

    def test_gamma_floor_dominates_for_huge_sizes(self):
        b = SampleBudget(n1=100, n2=10**6, n_L=10**6, r=1, k=10, mu_L=1.0, delta=0.1)
        assert min_gamma(b) == pytest.approx(0.05)

    def test_gamma_infeasible_case(self):
        b = SampleBudget(n1=100, n2=10**4, n_L=10**4, r=100, k=10, mu_L=5.0, delta=0.1)
        g = min_gamma(b)
        assert g == pytest.approx(10 * 100 * 5 * math.log(5000) / 1e4, rel=1e-12)
        assert g > 1.0  # infeasible signal: caller must grow the problem

    def test_max_outliers_reference_values(self):
        assert max_outliers(SampleBudget(n1=10, n2=4880, n_L=100, r=1, k=1)) == 1
        assert max_outliers(SampleBudget(n1=10, n2=1000, n_L=100, r=1, k=1)) == 0

    @settings(max_examples=40, deadline=None)
    @given(r=st.integers(1, 50), mu=st.floats(1.0, 20.0), n2=st.integers(100, 10**6))
    def test_max_outliers_matches_formula_and_monotone(self, r, mu, n2):
        b = SampleBudget(n1=10, n2=n2, n_L=50, r=r, k=1, mu_L=mu)
        expect = int(mpmath.floor(mpmath.mpf(n2) / (40 * (1 + 121 * r * mu))))
        assert max_outliers(b) == expect
        bigger = SampleBudget(n1=10, n2=n2, n_L=50, r=r + 1, k=1, mu_L=mu)
        assert max_outliers(bigger) <= max_outliers(b)

    def test_budget_validation(self):
        with pytest.raises(ValueError):
            SampleBudget(n1=1, n2=1, n_L=1, r=0, k=1)
        with pytest.raises(ValueError):
            SampleBudget(n1=1, n2=1, n_L=1, r=1, k=1, delta=1.5)
        with pytest.raises(ValueError):
            SampleBudget(n1=1, n2=1, n_L=1, r=1, k=1, mu_L=0.5)
