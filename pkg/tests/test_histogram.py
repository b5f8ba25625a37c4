import math
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothschatten.errors import DimensionError, ParameterError
from smoothschatten.estimators import BilinearCycleSketch, ExactGramSummary
from smoothschatten.histogram import HistogramInstance, SmoothHistogram
from smoothschatten.schatten import schatten_norm, smoothness_params


def exact_hist(p, eps, window, dim, mode="oldest"):
    return SmoothHistogram(smoothness_params(p, eps), window,
                           lambda start: ExactGramSummary(dim, p), mode)


class Fixed:
    """Stand-in estimator with a preset value."""

    dim = 1

    def __init__(self, value):
        self.value = value

    def ingest_row(self, r):
        pass

    def estimate(self):
        return self.value

    def space_cells(self):
        return 1


def with_values(values, beta=0.1, window=100, position=None):
    h = SmoothHistogram(smoothness_params(1, beta), window, lambda s: Fixed(0.0))
    h.instances = [HistogramInstance(i + 1, Fixed(v), v) for i, v in enumerate(values)]
    h.position = position if position is not None else len(values)
    return h


def assert_invariants(h):
    starts = h.starts()
    assert all(a < b for a, b in zip(starts, starts[1:]))
    boundary = h.position - h.window + 1
    assert sum(s <= boundary for s in starts) <= 1
    if h.position >= h.window:
        assert starts[0] <= boundary
    vals = h.values()
    keep = 1 - h.params.beta
    for i in range(len(vals) - 2):
        assert keep * vals[i] > vals[i + 2]


class TestPrune:
    def test_close_triple(self):
        h = with_values([10, 9.99, 9.98])
        h.prune()
        assert h.values() == [10, 9.98]

    def test_spread_triple(self):
        h = with_values([10, 5, 1])
        h.prune()
        assert h.values() == [10, 5, 1]

    def test_zero_ties_collapse(self):
        h = with_values([0.0] * 6)
        h.prune()
        assert h.instance_count() == 2

    def test_random_monotone(self, rng):
        for _ in range(50):
            vals = sorted(rng.uniform(0, 100, size=int(rng.integers(1, 60))), reverse=True)
            h = with_values(vals, beta=float(rng.uniform(0.01, 0.5)))
            h.prune()
            assert_invariants(h)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.floats(0, 1e3), max_size=40), st.floats(0.001, 0.9))
def test_prune_reaches_fixpoint_on_any_values(values, beta):
    # sketch estimates need not be monotone in the suffix length
    h = with_values(values, beta=beta)
    survivors_before = set(h.starts())
    h.prune()
    vals = h.values()
    for i in range(len(vals) - 2):
        assert (1 - beta) * vals[i] > vals[i + 2]
    assert set(h.starts()) <= survivors_before
    if values:
        assert h.starts()[0] == 1 and h.starts()[-1] == len(values)


class TestExpire:
    def test_nothing_before_window(self):
        h = with_values([5, 4, 3], window=3, position=3)
        h.expire()
        assert h.starts() == [1, 2, 3]

    def test_boundary_instance_wins(self):
        h = with_values([5, 4], window=3, position=4)
        h.instances[1].start_index = 2
        h.expire()
        assert h.starts() == [2]

    def test_straddler_kept(self):
        h = with_values([5, 4, 3], window=3, position=4)
        h.instances[1].start_index = 3
        h.instances[2].start_index = 4
        h.expire()
        # boundary is 2; the instance at 1 is the only straddler
        assert h.starts() == [1, 3, 4]


class TestPushAndQuery:
    def test_first_row(self, rng):
        r = rng.standard_normal(4)
        h = exact_hist(3, 0.2, 10, 4)
        h.push_row(r)
        assert h.instance_count() == 1
        assert h.query() == pytest.approx(schatten_norm(r, 3))

    def test_empty_query(self):
        assert exact_hist(2, 0.1, 5, 2).query() == 0.0

    def test_zero_rows(self):
        h = exact_hist(2, 0.1, 50, 3)
        for _ in range(200):
            h.push_row(np.zeros(3))
            assert h.instance_count() <= 2
            assert h.query() == 0.0

    def test_dimension_mismatch(self):
        h = exact_hist(2, 0.1, 5, 2)
        h.push_row([1.0, 2.0])
        with pytest.raises(DimensionError):
            h.push_row([1.0, 2.0, 3.0])

    def test_bad_window(self):
        with pytest.raises(ParameterError):
            exact_hist(2, 0.1, 0, 2)

    def test_whole_stream_before_window(self, rng):
        h = exact_hist(4, 0.2, 500, 3)
        a = rng.standard_normal((100, 3))
        for i, row in enumerate(a, start=1):
            h.push_row(row)
            assert h.query() == pytest.approx(schatten_norm(a[:i], 4), rel=1e-9)


def simulate_unit_rows(beta, window, steps):
    """Arithmetic replay of the maintenance rules with f(suffix) = sqrt(length)."""
    starts, counts = [], []
    for pos in range(1, steps + 1):
        starts.append(pos)
        vals = [math.sqrt(pos - s + 1) for s in starts]
        i = 0
        while i + 2 < len(starts):
            if (1 - beta) * vals[i] <= vals[i + 2]:
                del starts[i + 1], vals[i + 1]
                i = max(i - 1, 0)
            else:
                i += 1
        inside = sum(s <= pos - window + 1 for s in starts)
        if inside > 1:
            del starts[:inside - 1]
        counts.append(len(starts))
    return counts


class TestUnitRows:
    @pytest.mark.parametrize("eps", [0.1, 0.3])
    def test_instance_count(self, eps):
        n, steps = 100, 400
        h = exact_hist(2, eps, n, 3)
        beta = h.params.beta
        expected = simulate_unit_rows(beta, n, steps)
        bound = math.ceil(2 / beta * math.log(n)) + 2
        for pos in range(steps):
            h.push_row([1.0, 0.0, 0.0])
            assert h.instance_count() == expected[pos]
            assert h.instance_count() <= bound

    def test_query_band(self):
        h = exact_hist(2, 0.2, 100, 2)
        for _ in range(1000):
            h.push_row([1.0, 0.0])
        assert 10 - 1e-9 <= h.query() <= 10 / 0.8 + 1e-9


@pytest.mark.parametrize("p,eps", [(1, 0.2), (2, 0.1), (4, 0.2), (0.5, 0.3), (3, 0.25)])
def test_sandwich_and_invariants(rng, p, eps):
    n, m = 64, 5
    h = exact_hist(p, eps, n, m)
    buf = deque(maxlen=n)
    scales = np.repeat(10.0 ** rng.uniform(-1, 1, size=8), 40)
    for t, row in enumerate(rng.standard_normal((320, m)) * scales[:, None], start=1):
        h.push_row(row)
        buf.append(row)
        assert_invariants(h)
        exact = schatten_norm(np.vstack(buf), p)
        q = h.query()
        assert exact * (1 - 1e-9) <= q <= exact / (1 - eps) + 1e-9


def test_second_mode_underestimates(rng):
    n, m, p, eps = 50, 4, 2, 0.2
    h = exact_hist(p, eps, n, m, mode="second")
    buf = deque(maxlen=n)
    for row in rng.standard_normal((300, m)):
        h.push_row(row)
        buf.append(row)
        exact = schatten_norm(np.vstack(buf), p)
        assert (1 - eps) * exact * (1 - 1e-9) <= h.query() <= exact * (1 + 1e-9)


def test_deterministic_with_sketch(rng):
    a = rng.standard_normal((150, 4))

    def run():
        h = SmoothHistogram(
            smoothness_params(4, 0.3), 40,
            lambda s: BilinearCycleSketch(4, 4, t=8, reps=8, seed=np.random.SeedSequence([1, s])))
        out = []
        for row in a:
            h.push_row(row)
            out.append((h.query(), tuple(h.starts())))
        return out

    assert run() == run()


def test_space_cells_sum(rng):
    h = exact_hist(2, 0.3, 20, 3)
    for row in rng.standard_normal((50, 3)):
        h.push_row(row)
    assert h.space_cells() == h.instance_count() * (9 + 2)
