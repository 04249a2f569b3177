"""Tests for Latin hypercube sampling and labeled random streams."""

import numpy as np
import pytest

from fedsurr.benchmarks import Bounds
from fedsurr.sampling import latin_hypercube, spawn_stream


def bin_counts(points: np.ndarray, b: Bounds) -> np.ndarray:
    """Occupancy of the n equal bins per dimension."""
    n, d = points.shape
    idx = np.floor((points - b.lower) / b.width * n).astype(int)
    idx = np.clip(idx, 0, n - 1)
    counts = np.zeros((n, d), dtype=int)
    for j in range(d):
        for i in idx[:, j]:
            counts[i, j] += 1
    return counts


class TestLatinHypercube:
    @pytest.mark.parametrize("n", [4, 5, 50])
    @pytest.mark.parametrize("d", [1, 3, 10])
    def test_exact_stratification(self, n, d):
        b = Bounds(-2.0, 3.0)
        pts = latin_hypercube(n, d, b, spawn_stream(17, f"lhs-{n}-{d}"))
        assert pts.shape == (n, d)
        assert np.all(bin_counts(pts, b) == 1)

    def test_unit_interval_example(self):
        # n=4 on [0, 4]: exactly one sample in each unit bin
        pts = latin_hypercube(4, 1, Bounds(0.0, 4.0), spawn_stream(0, "x"))
        got = sorted(int(v) for v in np.floor(pts[:, 0]))
        assert got == [0, 1, 2, 3]

    def test_single_point_inside_box(self):
        b = Bounds(-1.0, 1.0)
        pts = latin_hypercube(1, 7, b, spawn_stream(1, "single"))
        assert b.contains(pts[0])

    def test_points_within_bounds(self):
        b = Bounds(-5.12, 5.12)
        pts = latin_hypercube(50, 10, b, spawn_stream(2, "box"))
        assert np.all(pts >= b.lower) and np.all(pts <= b.upper)

    def test_invalid_sizes_rejected(self):
        b = Bounds(0.0, 1.0)
        with pytest.raises(ValueError):
            latin_hypercube(0, 3, b, spawn_stream(0, "a"))
        with pytest.raises(ValueError):
            latin_hypercube(3, 0, b, spawn_stream(0, "a"))

    def test_deterministic_given_stream(self):
        b = Bounds(0.0, 1.0)
        a = latin_hypercube(8, 4, b, spawn_stream(5, "same"))
        c = latin_hypercube(8, 4, b, spawn_stream(5, "same"))
        assert np.array_equal(a, c)


class TestSpawnStream:
    def test_same_label_same_stream(self):
        a = spawn_stream(42, "client-3").random(1000)
        b = spawn_stream(42, "client-3").random(1000)
        assert np.array_equal(a, b)

    def test_distinct_labels_differ(self):
        for seed in range(50):
            a = spawn_stream(seed, "client-1").random()
            b = spawn_stream(seed, "client-2").random()
            assert a != b

    def test_distinct_seeds_differ(self):
        assert spawn_stream(0, "ga").random() != spawn_stream(1, "ga").random()

    def test_zero_seed_valid(self):
        draws = spawn_stream(0, "anything").random(100)
        assert np.all((draws >= 0) & (draws < 1))
        assert len(np.unique(draws)) > 90

    def test_negative_seed_rejected(self):
        with pytest.raises(ValueError):
            spawn_stream(-1, "x")
