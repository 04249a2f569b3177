"""Tests for the benchmark objectives, noise wrapper, and feasibility model."""

import math

import numpy as np
import pytest

from fedsurr.benchmarks import (
    Bounds,
    NoiseSpec,
    ProblemId,
    bounds,
    evaluate,
    evaluate_noisy,
    is_feasible,
    optimum_point,
)
from fedsurr.sampling import spawn_stream


def reference_value(problem: ProblemId, x) -> float:
    """Independent plain-Python implementations used as oracles."""
    x = list(map(float, x))
    d = len(x)
    if problem is ProblemId.ELLIPSOID:
        return sum((i + 1) * v * v for i, v in enumerate(x))
    if problem is ProblemId.ACKLEY:
        s1 = math.sqrt(sum(v * v for v in x) / d)
        s2 = sum(math.cos(2 * math.pi * v) for v in x) / d
        return -20 * math.exp(-0.2 * s1) - math.exp(s2) + 20 + math.e
    if problem is ProblemId.RASTRIGIN:
        return sum(v * v - 10 * math.cos(2 * math.pi * v) + 10 for v in x)
    if problem is ProblemId.GRIEWANK:
        prod = 1.0
        for i, v in enumerate(x):
            prod *= math.cos(v / math.sqrt(i + 1))
        return 1 + sum(v * v for v in x) / 4000 - prod
    if problem is ProblemId.ROSENBROCK:
        return sum(100 * (x[i + 1] - x[i] ** 2) ** 2 + (1 - x[i]) ** 2 for i in range(d - 1))
    raise AssertionError(problem)


class TestEvaluate:
    def test_optimum_is_exactly_zero(self):
        for problem in ProblemId:
            for d in (2, 5, 10):
                assert evaluate(problem, optimum_point(problem, d)) == 0.0

    def test_ellipsoid_hand_value(self):
        assert evaluate(ProblemId.ELLIPSOID, np.array([1.0, 1.0])) == 3.0

    def test_rosenbrock_at_ones(self):
        assert evaluate(ProblemId.ROSENBROCK, np.ones(5)) == 0.0

    def test_rastrigin_at_zero_10d(self):
        assert evaluate(ProblemId.RASTRIGIN, np.zeros(10)) == 0.0

    @pytest.mark.parametrize("problem", list(ProblemId))
    def test_matches_reference_implementation(self, problem):
        rng = np.random.default_rng(42)
        b = bounds(problem)
        for _ in range(25):
            x = b.lower + rng.random(6) * b.width
            assert evaluate(problem, x) == pytest.approx(reference_value(problem, x), rel=1e-12)

    def test_deterministic(self):
        x = np.array([0.3, -1.2, 2.7])
        assert evaluate(ProblemId.ACKLEY, x) == evaluate(ProblemId.ACKLEY, x)

    @pytest.mark.parametrize(
        "problem", [ProblemId.ELLIPSOID, ProblemId.RASTRIGIN, ProblemId.GRIEWANK]
    )
    def test_non_negative(self, problem):
        rng = np.random.default_rng(7)
        b = bounds(problem)
        for _ in range(50):
            x = b.lower + rng.random(8) * b.width
            assert evaluate(problem, x) >= 0.0

    def test_empty_vector_rejected(self):
        with pytest.raises(ValueError):
            evaluate(ProblemId.ELLIPSOID, np.array([]))

    def test_out_of_bounds_rejected(self):
        with pytest.raises(ValueError):
            evaluate(ProblemId.RASTRIGIN, np.array([0.0, 6.0]))


class TestBounds:
    def test_standard_boxes(self):
        assert bounds(ProblemId.ELLIPSOID) == Bounds(-5.12, 5.12)
        assert bounds(ProblemId.RASTRIGIN) == Bounds(-5.12, 5.12)
        assert bounds(ProblemId.ACKLEY) == Bounds(-32.768, 32.768)
        assert bounds(ProblemId.GRIEWANK) == Bounds(-600.0, 600.0)
        assert bounds(ProblemId.ROSENBROCK) == Bounds(-2.048, 2.048)

    def test_invalid_interval_rejected(self):
        with pytest.raises(ValueError):
            Bounds(1.0, 1.0)

    def test_problem_names_case_insensitive(self):
        assert ProblemId.from_name("Rastrigin") is ProblemId.RASTRIGIN
        assert ProblemId.from_name("ACKLEY") is ProblemId.ACKLEY
        with pytest.raises(ValueError):
            ProblemId.from_name("sphere")


class TestEvaluateNoisy:
    def test_zero_alpha_is_exact(self):
        rng = spawn_stream(3, "noise")
        x = np.array([1.0, -2.0])
        assert evaluate_noisy(ProblemId.ELLIPSOID, x, NoiseSpec(0.0), rng) == evaluate(
            ProblemId.ELLIPSOID, x
        )

    def test_first_draw_matches_stream(self):
        # At the optimum the noiseless value is 0, so the noisy value is the
        # stream's first standard-normal draw.
        xi0 = float(spawn_stream(11, "noise").standard_normal())
        got = evaluate_noisy(
            ProblemId.RASTRIGIN, np.zeros(10), NoiseSpec(1.0), spawn_stream(11, "noise")
        )
        assert got == xi0

    def test_mean_converges_to_true_value(self):
        rng = spawn_stream(5, "lln")
        x = np.array([0.5, 0.5])
        true = evaluate(ProblemId.RASTRIGIN, x)
        n = 100_000
        values = [evaluate_noisy(ProblemId.RASTRIGIN, x, NoiseSpec(1.0), rng) for _ in range(n)]
        assert abs(np.mean(values) - true) < 3.0 / math.sqrt(n)

    def test_reproducible_for_fixed_seed(self):
        x = np.array([1.0, 1.0])
        a = evaluate_noisy(ProblemId.ACKLEY, x, NoiseSpec(0.7), spawn_stream(9, "n"))
        b = evaluate_noisy(ProblemId.ACKLEY, x, NoiseSpec(0.7), spawn_stream(9, "n"))
        assert a == b

    def test_alpha_range_validated(self):
        with pytest.raises(ValueError):
            NoiseSpec(1.5)
        with pytest.raises(ValueError):
            NoiseSpec(-0.1)


class TestIsFeasible:
    B = Bounds(-5.12, 5.12)

    def test_tau_zero_always_feasible(self):
        for k in (1, 50, 100):
            assert is_feasible(k, 0, np.array([-5.12]), 100, self.B, 0)

    def test_interval_arithmetic_example(self):
        # N=100 over [-5.12, 5.12] gives g = 0.1024; for k=1, tau=2 the
        # infeasible interval is [-5.12, -4.9152].
        x = np.full(3, -5.10)
        assert not is_feasible(1, 2, x, 100, self.B, 0)
        assert is_feasible(1, 2, np.full(3, -4.90), 100, self.B, 0)

    def test_gap_value(self):
        # boundary just inside/outside the k=1, tau=1 interval [-5.12, -5.0176]
        assert not is_feasible(1, 1, np.array([-5.0176]), 100, self.B, 0)
        assert is_feasible(1, 1, np.array([-5.0175]), 100, self.B, 0)

    def test_tau_one_tiles_the_box(self):
        n_clients = 10
        rng = np.random.default_rng(0)
        for _ in range(200):
            x = np.array([self.B.lower + rng.random() * self.B.width])
            infeasible_for = [
                k for k in range(1, n_clients + 1) if not is_feasible(k, 1, x, n_clients, self.B, 0)
            ]
            # interior points fall in exactly one interval; shared endpoints in two
            assert len(infeasible_for) in (1, 2)
            assert len(infeasible_for) >= 1

    def test_interval_clipped_at_upper_bound(self):
        # k=N with a wide tau still leaves everything below its own segment feasible
        assert is_feasible(10, 5, np.array([0.0]), 10, self.B, 0)
        assert not is_feasible(10, 5, np.array([5.0]), 10, self.B, 0)

    def test_designated_dimension_is_respected(self):
        x = np.array([-5.10, 0.0])
        assert not is_feasible(1, 2, x, 100, self.B, 0)
        assert is_feasible(1, 2, x, 100, self.B, 1)

    def test_client_index_validated(self):
        with pytest.raises(ValueError):
            is_feasible(0, 1, np.array([0.0]), 10, self.B, 0)
        with pytest.raises(ValueError):
            is_feasible(11, 1, np.array([0.0]), 10, self.B, 0)
