"""Funk and Hilbert distances on the open probability simplex.

The simplex carries two projective distances with O(d) closed forms:
the asymmetric Funk distance ``log max_i p_i/q_i`` and its
symmetrization, the Hilbert distance ``log (max_i p_i/q_i / min_i
p_i/q_i)``.  Points map isometrically to a zero-sum vector space where
the Hilbert distance becomes the variation norm (max minus min) of the
centered log representation; the Aitchison distance is the Euclidean
norm of the same representation.  This module provides those maps, the
log-sum-exp smoothed bounds used for gradient-based optimization, the
coarse-graining (bin merging) operator, and an independent cross-ratio
computation that recovers the Hilbert distance from the two boundary
intersections of a line through the simplex.

All functions are pure and operate on 1-D float arrays; vectors are
validated on entry (strictly positive coordinates, floor 1e-12).
"""

from __future__ import annotations

import numpy as np

from .validation import (
    check_log_point,
    check_partition,
    check_positive_vector,
    check_same_length,
    check_simplex_point,
    check_vector,
)

# Facets whose direction component is smaller than this are treated as
# parallel to the cut line and skipped by the cross-ratio computation.
_PARALLEL_TOL = 1e-14

__all__ = [
    "funk_distance",
    "hilbert_distance",
    "cross_ratio_distance",
    "variation_norm",
    "to_log_coordinates",
    "from_log_coordinates",
    "aitchison_distance",
    "lse_funk_upper",
    "lse_hilbert_surrogate",
    "coarse_grain",
]


def funk_distance(p, q) -> float:
    """Funk distance ``log max_i p_i / q_i`` between positive vectors.

    A weak metric: nonnegative on common-scale inputs, satisfies the
    triangle inequality, but is asymmetric.  Invariant under a common
    positive rescaling of both arguments.

    Parameters
    ----------
    p, q : array_like
        Strictly positive vectors of the same length >= 2.

    Returns
    -------
    float
        ``log max_i p_i/q_i``; 0 when ``p == q``.
    """
    p = check_positive_vector(p, "p", min_length=2)
    q = check_positive_vector(q, "q", min_length=2)
    check_same_length(p, q)
    if np.array_equal(p, q):
        return 0.0
    return float(np.log(np.max(p / q)))


def hilbert_distance(p, q) -> float:
    """Hilbert simplex distance between positive vectors, in O(d).

    Symmetrization of the Funk distance::

        log( max_i p_i/q_i / min_i p_i/q_i )

    It is a projective metric: zero iff ``p`` and ``q`` are positively
    proportional, and invariant to independent rescalings of ``p`` and
    ``q``.

    Parameters
    ----------
    p, q : array_like
        Strictly positive vectors of the same length >= 2.

    Returns
    -------
    float
        The Hilbert distance.
    """
    p = check_positive_vector(p, "p", min_length=2)
    q = check_positive_vector(q, "q", min_length=2)
    check_same_length(p, q)
    if np.array_equal(p, q):
        return 0.0
    ratios = p / q
    return float(np.log(ratios.max() / ratios.min()))


def _boundary_parameters(p: np.ndarray, q: np.ndarray) -> tuple[float, float]:
    """Parameters of the two boundary hits of the line through p, q.

    The line is ``x(t) = (1 - t) p + t q`` with ``x(0) = p`` and
    ``x(1) = q``; it stays in the sum-one hyperplane, so the boundary is
    hit where some coordinate vanishes.  Returns ``(t_minus, t_plus)``
    with ``t_minus < 0`` (beyond ``p``) and ``t_plus > 1`` (beyond
    ``q``).  Facets parallel to the line are skipped.
    """
    direction = q - p
    with np.errstate(divide="ignore"):
        t_hit = -p / direction
    decreasing = direction < -_PARALLEL_TOL
    increasing = direction > _PARALLEL_TOL
    if not decreasing.any() or not increasing.any():
        raise ValueError("line through p and q does not cross the simplex boundary")
    t_plus = float(t_hit[decreasing].min())
    t_minus = float(t_hit[increasing].max())
    return t_minus, t_plus


def cross_ratio_distance(p, q) -> float:
    """Hilbert distance computed from the cross-ratio of boundary hits.

    Intersects the line through two simplex points with the simplex
    boundary by solving, per facet, for the parameter at which that
    coordinate vanishes, then evaluates the log cross-ratio of the four
    collinear points.  Independent of the closed form in
    :func:`hilbert_distance`, which makes it a useful cross-check.

    Parameters
    ----------
    p, q : array_like
        Points of the open simplex, same length.

    Returns
    -------
    float
        ``log CR``; 0 when ``p == q`` by convention.
    """
    p = check_simplex_point(p, "p")
    q = check_simplex_point(q, "q")
    check_same_length(p, q)
    if np.array_equal(p, q):
        return 0.0
    t_minus, t_plus = _boundary_parameters(p, q)
    # Cross ratio of the collinear points at parameters t_minus, 0, 1, t_plus,
    # expressed directly in the affine parameter (norm independent).
    cross_ratio = (t_plus * (1.0 - t_minus)) / ((-t_minus) * (t_plus - 1.0))
    return float(np.log(cross_ratio))


def variation_norm(x) -> float:
    """Variation seminorm ``max_i x_i - min_i x_i``.

    A norm on the zero-sum subspace, a seminorm on the full space
    (constant vectors map to 0).
    """
    x = check_vector(x, "x", min_length=1)
    return float(x.max() - x.min())


def to_log_coordinates(p) -> np.ndarray:
    """Map a simplex point to its centered log (zero-sum) representation.

    ``v_i = log p_i - mean_j log p_j = log(p_i / G(p))`` with ``G`` the
    geometric mean.  This map is an isometry: the Hilbert distance of
    two simplex points equals the variation norm of the difference of
    their images, and the Aitchison distance equals the Euclidean norm
    of the same difference.
    """
    p = check_simplex_point(p, "p")
    logs = np.log(p)
    return logs - logs.mean()


def from_log_coordinates(v) -> np.ndarray:
    """Map a log-representation vector back to the simplex (softmax).

    ``p_i = exp(v_i) / sum_j exp(v_j)``, computed with max subtraction
    for overflow safety.  Adding a constant to every entry of ``v``
    leaves the result unchanged, so zero-sum input is not required.
    """
    v = check_vector(v, "v", min_length=2)
    shifted = np.exp(v - v.max())
    return check_simplex_point(shifted / shifted.sum(), "softmax output")


def aitchison_distance(p, q) -> float:
    """Aitchison distance: Euclidean norm in centered log coordinates.

    Parameters
    ----------
    p, q : array_like
        Points of the open simplex, same length.

    Returns
    -------
    float
        ``|| log(p/G(p)) - log(q/G(q)) ||_2``.
    """
    p = check_simplex_point(p, "p")
    q = check_simplex_point(q, "q")
    check_same_length(p, q)
    return float(np.linalg.norm(to_log_coordinates(p) - to_log_coordinates(q)))


def lse_funk_upper(p, q) -> float:
    """Smooth upper bound ``log sum_i p_i/q_i`` of the Funk distance.

    Replacing the max in the Funk distance by log-sum-exp yields a
    differentiable majorant within an additive ``log d``::

        funk(p, q) <= lse_funk_upper(p, q) <= funk(p, q) + log d
    """
    p = check_positive_vector(p, "p", min_length=2)
    q = check_positive_vector(q, "q", min_length=2)
    check_same_length(p, q)
    return float(np.log(np.sum(p / q)))


def lse_hilbert_surrogate(p, q) -> float:
    """Symmetrized smooth surrogate of the Hilbert distance.

    ``log[(sum_i p_i/q_i)(sum_i q_i/p_i)]``; symmetric, differentiable,
    and sandwiched as ``hilbert <= surrogate <= hilbert + 2 log d``.
    Note the surrogate of a point with itself is ``2 log d``, not 0.
    """
    p = check_positive_vector(p, "p", min_length=2)
    q = check_positive_vector(q, "q", min_length=2)
    check_same_length(p, q)
    ratios = p / q
    return float(np.log(ratios.sum()) + np.log((1.0 / ratios).sum()))


def coarse_grain(p, blocks) -> np.ndarray:
    """Merge simplex coordinates by a partition into block sums.

    Equivalent to applying the positive column-stochastic 0/1 matrix
    induced by the partition.  Both Funk and Hilbert distances (and,
    empirically, the Aitchison distance) never increase under this
    operation.  Block order in the output follows the given block
    order.

    Parameters
    ----------
    p : array_like
        Point of the open simplex.
    blocks : sequence of index sequences
        Disjoint nonempty index sets covering ``range(len(p))``.

    Returns
    -------
    numpy.ndarray
        Simplex point of length ``len(blocks)``.
    """
    p = check_simplex_point(p, "p")
    parts = check_partition(blocks, p.size)
    merged = np.array([p[idx].sum() for idx in parts])
    return merged
