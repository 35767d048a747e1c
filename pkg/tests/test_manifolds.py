"""Tests for the five model geometries: distances, lifts, gradients."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hilbertsimplex.geometry import funk_distance, hilbert_distance
from hilbertsimplex.manifolds import (
    MANIFOLDS,
    accumulate_rows_grad,
    check_manifold,
    hyperboloid_lift,
    manifold_distance,
    manifold_distance_grad,
    pairwise_distances,
    rows_distances,
    to_manifold_point,
)

from helpers import grad_rel_error


def _non_tie_pair(rng, kind, d):
    """Sample a coordinate pair away from subgradient kinks."""
    while True:
        u = rng.normal(0.0, 1.0, d)
        w = rng.normal(0.0, 1.0, d)
        diff = np.sort(u - w)
        if kind in ("hilbert", "funk") and d >= 2 and diff[-1] - diff[-2] < 1e-4:
            continue
        if kind == "hilbert" and d >= 2 and diff[1] - diff[0] < 1e-4:
            continue
        if kind == "l1" and np.min(np.abs(u - w)) < 1e-4:
            continue
        if np.linalg.norm(u - w) < 1e-3:
            continue
        return u, w


class TestManifoldNames:
    def test_exactly_five(self):
        assert MANIFOLDS == ("euclidean", "l1", "hyperboloid", "hilbert", "funk")

    def test_unknown_rejected(self):
        with pytest.raises(ValueError):
            check_manifold("poincare")


class TestDistances:
    @pytest.mark.parametrize("kind", MANIFOLDS)
    def test_self_distance_vanishes(self, kind):
        rng = np.random.default_rng(0)
        u = rng.normal(0, 1, 4)
        # hyperboloid sits at its arcosh floor, ~5e-8
        assert manifold_distance(kind, u, u) <= 1e-7

    def test_euclidean_and_l1(self):
        u = np.array([1.0, -2.0])
        w = np.array([4.0, 2.0])
        assert_allclose(manifold_distance("euclidean", u, w), 5.0)
        assert_allclose(manifold_distance("l1", u, w), 7.0)

    def test_hilbert_variation_of_difference(self):
        assert_allclose(
            manifold_distance("hilbert", [1.0, -1.0, 0.0], [0.0, 0.0, 0.0]), 2.0
        )

    def test_hyperboloid_scalar_value(self):
        # arcosh(sqrt(2)) for a unit step from the apex, frozen from a
        # high-precision evaluation
        assert_allclose(
            manifold_distance("hyperboloid", [1.0, 0.0], [0.0, 0.0]),
            0.88137358701954302,
            rtol=1e-14,
        )

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            manifold_distance("euclidean", [1.0, 2.0], [1.0])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            manifold_distance("euclidean", [np.nan, 0.0], [0.0, 0.0])

    @pytest.mark.parametrize("kind", MANIFOLDS)
    def test_nonnegative(self, kind):
        rng = np.random.default_rng(1)
        for _ in range(500):
            u = rng.normal(0, 2, 3)
            w = rng.normal(0, 2, 3)
            assert manifold_distance(kind, u, w) >= 0.0

    @pytest.mark.parametrize("kind", ("euclidean", "l1", "hyperboloid", "hilbert"))
    def test_symmetry(self, kind):
        rng = np.random.default_rng(2)
        for _ in range(300):
            u = rng.normal(0, 1, 4)
            w = rng.normal(0, 1, 4)
            assert_allclose(
                manifold_distance(kind, u, w), manifold_distance(kind, w, u), rtol=1e-12
            )

    def test_funk_asymmetric(self):
        rng = np.random.default_rng(3)
        u = rng.normal(0, 1, 4)
        w = rng.normal(0, 1, 4)
        assert manifold_distance("funk", u, w) != manifold_distance("funk", w, u)

    @pytest.mark.parametrize("kind", MANIFOLDS)
    def test_triangle_inequality(self, kind):
        rng = np.random.default_rng(4)
        for _ in range(2000):
            d = int(rng.integers(2, 6))
            u, w, z = (rng.normal(0, 1.5, d) for _ in range(3))
            duw = manifold_distance(kind, u, w)
            duz = manifold_distance(kind, u, z)
            dzw = manifold_distance(kind, z, w)
            assert duw <= duz + dzw + 1e-9

    def test_hilbert_translation_invariance(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            u = rng.normal(0, 1, 5)
            w = rng.normal(0, 1, 5)
            c = rng.normal(0, 3)
            base = manifold_distance("hilbert", u, w)
            shifted = manifold_distance("hilbert", u + c, w + c)
            assert abs(base - shifted) <= 1e-12


class TestConsistencyWithSimplexDistances:
    def test_hilbert_matches_geometry_through_softmax(self):
        rng = np.random.default_rng(6)
        for _ in range(500):
            d = int(rng.integers(2, 8))
            u = rng.normal(0, 1, d)
            w = rng.normal(0, 1, d)
            ambient = manifold_distance("hilbert", u, w)
            simplex = hilbert_distance(to_manifold_point("hilbert", u), to_manifold_point("hilbert", w))
            assert abs(ambient - simplex) <= 1e-10

    def test_funk_matches_geometry_through_softmax(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            d = int(rng.integers(2, 8))
            u = rng.normal(0, 1, d)
            w = rng.normal(0, 1, d)
            ambient = manifold_distance("funk", u, w)
            simplex = funk_distance(to_manifold_point("funk", u), to_manifold_point("funk", w))
            assert abs(ambient - simplex) <= 1e-10


class TestLiftsAndPoints:
    def test_flat_kinds_return_input(self):
        u = np.array([0.5, -1.0])
        assert_allclose(to_manifold_point("euclidean", u), u)
        assert_allclose(to_manifold_point("l1", u), u)

    def test_softmax_of_zero_is_uniform(self):
        assert_allclose(to_manifold_point("hilbert", [0.0, 0.0]), [0.5, 0.5], rtol=1e-15)

    def test_hyperboloid_apex(self):
        assert_allclose(to_manifold_point("hyperboloid", [0.0, 0.0, 0.0]), [1.0, 0, 0, 0])

    def test_lift_has_unit_lorentz_norm(self):
        rng = np.random.default_rng(8)
        for _ in range(300):
            x = hyperboloid_lift(rng.normal(0, 2, int(rng.integers(1, 7))))
            lorentz = -x[0] * x[0] + np.sum(x[1:] * x[1:])
            assert abs(lorentz + 1.0) <= 1e-12


class TestGradients:
    def test_euclidean_unit_vector(self):
        gu, gw = manifold_distance_grad("euclidean", [1.0, 0.0], [0.0, 0.0])
        assert_allclose(gu, [1.0, 0.0])
        assert_allclose(gw, [-1.0, 0.0])

    def test_hilbert_gradient_is_argmax_minus_argmin(self):
        u = np.array([0.9, -1.2, 0.3])
        w = np.zeros(3)
        gu, gw = manifold_distance_grad("hilbert", u, w)
        assert_allclose(gu, [1.0, -1.0, 0.0])
        assert_allclose(gw, [-1.0, 1.0, 0.0])

    def test_euclidean_gradient_at_coincident_points_is_zero(self):
        gu, gw = manifold_distance_grad("euclidean", [1.0, 2.0], [1.0, 2.0])
        assert_allclose(gu, 0.0)
        assert_allclose(gw, 0.0)

    @pytest.mark.parametrize("kind", MANIFOLDS)
    def test_matches_central_differences(self, kind):
        rng = np.random.default_rng(9)
        h = 1e-6
        for _ in range(200):
            d = int(rng.integers(2, 6))
            u, w = _non_tie_pair(rng, kind, d)
            gu, gw = manifold_distance_grad(kind, u, w)
            fu = np.zeros(d)
            fw = np.zeros(d)
            for k in range(d):
                e = np.zeros(d)
                e[k] = h
                fu[k] = (manifold_distance(kind, u + e, w) - manifold_distance(kind, u - e, w)) / (2 * h)
                fw[k] = (manifold_distance(kind, u, w + e) - manifold_distance(kind, u, w - e)) / (2 * h)
            rel = grad_rel_error(np.concatenate([gu, gw]), np.concatenate([fu, fw]))
            assert rel <= 1e-5


class TestVectorizedForms:
    @pytest.mark.parametrize("kind", MANIFOLDS)
    def test_pairwise_matches_scalar(self, kind):
        rng = np.random.default_rng(10)
        Y = rng.normal(0, 1, (7, 3))
        R = pairwise_distances(kind, Y)
        for i in range(7):
            for j in range(7):
                assert_allclose(R[i, j], manifold_distance(kind, Y[i], Y[j]), atol=1e-12)

    @pytest.mark.parametrize("kind", MANIFOLDS)
    def test_rows_subset_matches_full(self, kind):
        rng = np.random.default_rng(11)
        Y = rng.normal(0, 1, (6, 2))
        rows = np.array([4, 1])
        assert_allclose(rows_distances(kind, Y, rows), pairwise_distances(kind, Y)[rows])

    @pytest.mark.parametrize("kind", MANIFOLDS)
    def test_accumulated_gradient_matches_pair_sums(self, kind):
        rng = np.random.default_rng(12)
        Y = rng.normal(0, 1, (5, 3))
        rows = np.array([0, 3])
        C = rng.normal(0, 1, (2, 5))
        G = accumulate_rows_grad(kind, Y, rows, C)
        expected = np.zeros_like(Y)
        for a, i in enumerate(rows):
            for j in range(5):
                if i == j:
                    continue
                gu, gw = manifold_distance_grad(kind, Y[i], Y[j])
                expected[i] += C[a, j] * gu
                expected[j] += C[a, j] * gw
        assert_allclose(G, expected, atol=1e-10)
