import numpy as np
import pytest

from smoothschatten.errors import DimensionError, ParameterError
from smoothschatten.estimators import (
    BilinearCycleSketch,
    ExactGramSummary,
    estimate_all,
    median_of_means,
)
from smoothschatten.linalg import gram
from smoothschatten.schatten import schatten_norm, trace_power


def dense_blocks(sk, a):
    """Recompute every S_i = G_i^T (A^T A) G_{i+1} from scratch."""
    b = gram(a)
    g = sk.projections
    out = np.empty_like(sk.blocks)
    for rep in range(sk.reps):
        for i in range(sk.k):
            out[rep, i] = g[rep, i].T @ b @ g[rep, (i + 1) % sk.k]
    return out


class TestExact:
    @pytest.mark.parametrize("p", [0.5, 1, 2, 4])
    def test_orthonormal_rows(self, p):
        e = ExactGramSummary(2, p)
        e.ingest_row([1, 0])
        e.ingest_row([0, 1])
        np.testing.assert_array_equal(e.g, np.eye(2))
        assert e.estimate() == pytest.approx(2 ** (1 / p))

    def test_fresh_is_zero(self):
        assert ExactGramSummary(3, 2).estimate() == 0.0

    def test_diag_rows(self):
        e = ExactGramSummary(2, 2)
        for row in np.diag([3.0, 4.0]):
            e.ingest_row(row)
        assert e.estimate() == pytest.approx(5.0)

    def test_zero_row_noop(self, rng):
        e = ExactGramSummary(3, 3)
        for row in rng.standard_normal((4, 3)):
            e.ingest_row(row)
        before = e.estimate()
        e.ingest_row(np.zeros(3))
        assert e.estimate() == before

    @pytest.mark.parametrize("p", [0.5, 1, 2, 3, 4, 6])
    def test_stream_equals_batch(self, rng, p):
        for _ in range(10):
            a = rng.standard_normal((int(rng.integers(1, 120)), 5))
            e = ExactGramSummary(5, p)
            for row in a:
                e.ingest_row(row)
            assert e.estimate() == pytest.approx(schatten_norm(a, p), rel=1e-9)

    def test_monotone(self, rng):
        e = ExactGramSummary(4, 1.5)
        last = 0.0
        for row in rng.standard_normal((40, 4)):
            e.ingest_row(row)
            assert e.estimate() >= last - 1e-12
            last = e.estimate()

    def test_space_cells(self):
        assert ExactGramSummary(8, 2).space_cells() == 66

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            ExactGramSummary(3, 2).ingest_row([1, 2])

    def test_batched_estimates(self, rng):
        ests = [ExactGramSummary(4, 3) for _ in range(5)]
        for i, e in enumerate(ests):
            for row in rng.standard_normal((i, 4)):
                e.ingest_row(row)
        assert estimate_all(ests) == pytest.approx([e.estimate() for e in ests], rel=1e-12)


class TestSketch:
    def test_blocks_match_dense(self, rng):
        a = rng.standard_normal((30, 6))
        for p in (2, 4, 6):
            sk = BilinearCycleSketch(6, p, t=5, reps=3, seed=11)
            for row in a:
                sk.ingest_row(row)
            ref = dense_blocks(sk, a)
            assert np.max(np.abs(sk.blocks - ref)) <= 1e-10 * np.max(np.abs(ref))

    def test_zero_row(self, rng):
        sk = BilinearCycleSketch(4, 4, t=3, reps=2, seed=1)
        sk.ingest_row(rng.standard_normal(4))
        before = sk.blocks.copy()
        sk.ingest_row(np.zeros(4))
        np.testing.assert_array_equal(sk.blocks, before)

    def test_order_independent(self, rng):
        a = rng.standard_normal((12, 4))
        s1 = BilinearCycleSketch(4, 4, t=4, reps=2, seed=3)
        s2 = BilinearCycleSketch(4, 4, t=4, reps=2, seed=3)
        for row in a:
            s1.ingest_row(row)
        for row in a[rng.permutation(12)]:
            s2.ingest_row(row)
        np.testing.assert_allclose(s1.blocks, s2.blocks, rtol=1e-12, atol=1e-12)

    def test_single_row_p2(self, rng):
        r = rng.standard_normal(5)
        sk = BilinearCycleSketch(5, 2, t=7, reps=1, seed=2)
        sk.ingest_row(r)
        g = sk.projections[0, 0]
        assert sk.cycle_values()[0] == pytest.approx(np.sum((g.T @ r) ** 2) / 7, rel=1e-12)
        us = []
        for seed in range(2000):
            s = BilinearCycleSketch(5, 2, t=7, reps=1, seed=seed)
            s.ingest_row(r)
            us.append(s.cycle_values()[0])
        se = np.std(us) / np.sqrt(len(us))
        assert abs(np.mean(us) - r @ r) <= 4 * se

    def test_identity_p4_unbiased(self):
        m, t = 8, 16
        us = []
        for seed in range(2000):
            sk = BilinearCycleSketch(m, 4, t=t, reps=1, seed=seed)
            for row in np.eye(m):
                sk.ingest_row(row)
            us.append(sk.cycle_values()[0])
        assert np.mean(us) == pytest.approx(m, rel=0.05)

    def test_deterministic(self, rng):
        a = rng.standard_normal((20, 5))
        vals = []
        for _ in range(2):
            sk = BilinearCycleSketch(5, 4, t=8, reps=16, seed=np.random.SeedSequence([9, 4]))
            for row in a:
                sk.ingest_row(row)
            vals.append(sk.estimate())
        assert vals[0] == vals[1]

    @pytest.mark.parametrize("p", [1, 3, 2.5, 0])
    def test_rejects_non_even_p(self, p):
        with pytest.raises(ParameterError):
            BilinearCycleSketch(4, p)

    def test_fresh_is_zero(self):
        assert BilinearCycleSketch(3, 4).estimate() == 0.0

    def test_space_cells(self):
        sk = BilinearCycleSketch(8, 4, t=16, reps=4)
        assert sk.space_cells() == 4 * 2 * (16 * 16 + 8 * 16) + 4

    def test_estimate_tracks_truth(self, rng):
        a = rng.standard_normal((40, 2)) @ rng.standard_normal((2, 8))
        sk = BilinearCycleSketch(8, 4, t=64, reps=64, seed=5)
        for row in a:
            sk.ingest_row(row)
        assert sk.estimate() == pytest.approx(schatten_norm(a, 4), rel=0.2)
        assert trace_power(gram(a), 2) == pytest.approx(schatten_norm(a, 4) ** 4)


def test_median_of_means():
    vals = np.r_[np.ones(56), np.full(8, 1000.0)]
    assert median_of_means(vals) == 1.0
    assert median_of_means([3.0]) == 3.0
    assert median_of_means([1.0, 2.0, 3.0]) == 2.0
