"""Five embedding geometries behind one distance/gradient interface.

A point of a ``d``-dimensional model geometry is parametrized by an
unconstrained vector ``u`` of length ``d`` so that the optimizer never
needs projections or retractions:

* ``"euclidean"`` -- flat space, ``||u - w||_2``;
* ``"l1"``        -- flat space with the L1 norm;
* ``"hyperboloid"`` -- hyperbolic space via the Minkowski hyperboloid
  lift ``x = (sqrt(1 + ||u||^2), u)`` and ``arcosh(-<x, y>_L)`` with the
  Lorentz inner product ``<x, y>_L = -x_0 y_0 + sum_i x_i y_i``;
* ``"hilbert"``   -- open simplex with the Hilbert distance, reached by
  softmax; by the isometry to the variation-normed space the ambient
  distance is simply ``max_k(u_k - w_k) - min_k(u_k - w_k)``;
* ``"funk"``      -- open simplex with the asymmetric Funk distance,
  ``max_k(u_k - w_k) - LSE(u) + LSE(w)``.

Distances and analytic (sub)gradients are exposed both per pair and in
vectorized row-block form; the row-block form is what the stochastic
optimizer consumes.  Subgradients at max/min ties pick the lowest tied
index so that optimization traces are reproducible.
"""

from __future__ import annotations

import numpy as np

from .validation import check_vector

MANIFOLDS = ("euclidean", "l1", "hyperboloid", "hilbert", "funk")

# arcosh argument floor: keeps the hyperboloid distance real and its
# gradient bounded near coincident points.
_ACOSH_FLOOR = 1.0 + 1e-15

__all__ = [
    "MANIFOLDS",
    "check_manifold",
    "manifold_distance",
    "manifold_distance_grad",
    "to_manifold_point",
    "hyperboloid_lift",
    "softmax",
    "log_sum_exp",
    "rows_distances",
    "pairwise_distances",
    "accumulate_rows_grad",
]


def check_manifold(kind: str) -> str:
    """Validate a manifold name against the five supported geometries."""
    if not isinstance(kind, str) or kind.lower() not in MANIFOLDS:
        raise ValueError(f"unknown manifold {kind!r}; expected one of {MANIFOLDS}")
    return kind.lower()


def log_sum_exp(Y: np.ndarray) -> np.ndarray:
    """Row-wise ``log sum_k exp(Y_k)`` with max subtraction."""
    m = Y.max(axis=-1, keepdims=True)
    return (m + np.log(np.exp(Y - m).sum(axis=-1, keepdims=True)))[..., 0]


def softmax(u: np.ndarray) -> np.ndarray:
    """Row-wise stabilized softmax."""
    e = np.exp(u - u.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def hyperboloid_lift(u: np.ndarray) -> np.ndarray:
    """Lift ambient coordinates onto the unit hyperboloid sheet.

    Returns ``(sqrt(1 + ||u||^2), u)``, which satisfies
    ``<x, x>_L = -1``.
    """
    u = np.asarray(u, dtype=float)
    x0 = np.sqrt(1.0 + np.sum(u * u, axis=-1, keepdims=True))
    return np.concatenate([x0, u], axis=-1)


def to_manifold_point(kind: str, u) -> np.ndarray:
    """Map ambient coordinates to a displayable point of the geometry.

    Flat kinds return ``u`` itself, simplex kinds the softmax image, and
    the hyperboloid its lift.
    """
    kind = check_manifold(kind)
    u = check_vector(u, "u", min_length=1)
    if kind in ("euclidean", "l1"):
        return u.copy()
    if kind == "hyperboloid":
        return hyperboloid_lift(u)
    return softmax(u)


def _check_coords(Y) -> np.ndarray:
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2:
        raise ValueError(f"coordinates must be a 2-D array, got shape {Y.shape}")
    if not np.all(np.isfinite(Y)):
        raise ValueError("coordinates contain non-finite entries")
    return Y


def rows_distances(kind: str, Y, rows) -> np.ndarray:
    """Distances from selected rows to all points.

    Returns the (len(rows), n) block ``R[a, j] = rho(Y[rows[a]], Y[j])``.
    For the asymmetric Funk kind the first argument is the selected row.
    """
    kind = check_manifold(kind)
    Y = _check_coords(Y)
    rows = np.asarray(rows, dtype=int)

    if kind == "hyperboloid":
        x0 = np.sqrt(1.0 + np.sum(Y * Y, axis=1))
        s = np.outer(x0[rows], x0) - Y[rows] @ Y.T
        return np.arccosh(np.maximum(s, _ACOSH_FLOOR))
    if kind == "funk":
        lse = log_sum_exp(Y)
        diff = Y[rows][:, None, :] - Y[None, :, :]
        return diff.max(axis=-1) - lse[rows][:, None] + lse[None, :]

    diff = Y[rows][:, None, :] - Y[None, :, :]
    if kind == "euclidean":
        return np.sqrt(np.sum(diff * diff, axis=-1))
    if kind == "l1":
        return np.abs(diff).sum(axis=-1)
    # hilbert: variation seminorm of the coordinate difference
    return diff.max(axis=-1) - diff.min(axis=-1)


def pairwise_distances(kind: str, Y) -> np.ndarray:
    """Full (n, n) matrix of ambient distances."""
    Y = _check_coords(Y)
    return rows_distances(kind, Y, np.arange(Y.shape[0]))


def accumulate_rows_grad(kind: str, Y, rows, C) -> np.ndarray:
    """Chain per-pair loss sensitivities through the distance gradients.

    Given coefficients ``C[a, j] = dL / d rho(Y[rows[a]], Y[j])``,
    returns ``G`` of shape ``Y.shape`` with the accumulated gradient of
    ``L`` with respect to every point.  At max/min ties the lowest tied
    index receives the subgradient; the Euclidean gradient at coincident
    points is 0, and the hyperboloid gradient is 0 wherever the arcosh
    argument sits at its floor.
    """
    kind = check_manifold(kind)
    Y = _check_coords(Y)
    rows = np.asarray(rows, dtype=int)
    C = np.asarray(C, dtype=float)
    n, d = Y.shape
    G = np.zeros_like(Y)

    if kind == "hyperboloid":
        x0 = np.sqrt(1.0 + np.sum(Y * Y, axis=1))
        s = np.outer(x0[rows], x0) - Y[rows] @ Y.T
        active = s > _ACOSH_FLOOR
        s_clamped = np.maximum(s, _ACOSH_FLOOR)
        F = np.where(active, C / np.sqrt(s_clamped * s_clamped - 1.0), 0.0)
        # d rho / d u_i = (x0_j u_i / x0_i - u_j) / sqrt(s^2 - 1)
        np.add.at(G, rows, ((F * x0[None, :]).sum(axis=1) / x0[rows])[:, None] * Y[rows] - F @ Y)
        # d rho / d u_j = (x0_i u_j / x0_j - u_i) / sqrt(s^2 - 1)
        G += ((F.T @ x0[rows]) / x0)[:, None] * Y - F.T @ Y[rows]
        return G

    diff = Y[rows][:, None, :] - Y[None, :, :]
    idx_i = np.broadcast_to(rows[:, None], C.shape).ravel()
    idx_j = np.broadcast_to(np.arange(n)[None, :], C.shape).ravel()
    c = C.ravel()

    if kind in ("euclidean", "l1"):
        if kind == "euclidean":
            R = np.sqrt(np.sum(diff * diff, axis=-1))
            with np.errstate(invalid="ignore", divide="ignore"):
                W = np.where(R > 0.0, C / R, 0.0)
            T = W[:, :, None] * diff
        else:
            T = C[:, :, None] * np.sign(diff)
        np.add.at(G, rows, T.sum(axis=1))
        G -= T.sum(axis=0)
        return G

    amax = diff.argmax(axis=-1).ravel()
    if kind == "hilbert":
        amin = diff.argmin(axis=-1).ravel()
        np.add.at(G, (idx_i, amax), c)
        np.add.at(G, (idx_i, amin), -c)
        np.add.at(G, (idx_j, amax), -c)
        np.add.at(G, (idx_j, amin), c)
        return G

    # funk: d rho / d u_i = e_argmax - softmax(u_i); d rho / d u_j = -e_argmax + softmax(u_j)
    S = softmax(Y)
    np.add.at(G, (idx_i, amax), c)
    np.add.at(G, (idx_j, amax), -c)
    np.add.at(G, rows, -C.sum(axis=1)[:, None] * S[rows])
    G += C.sum(axis=0)[:, None] * S
    return G


def manifold_distance(kind: str, u, w) -> float:
    """Distance between two ambient points of the chosen geometry.

    All kinds are symmetric except ``"funk"``, which is a weak metric
    (triangle inequality without symmetry).
    """
    u = check_vector(u, "u", min_length=1)
    w = check_vector(w, "w", min_length=1)
    if u.shape != w.shape:
        raise ValueError(f"u and w must have the same length, got {u.size} and {w.size}")
    return float(rows_distances(kind, np.stack([u, w]), [0])[0, 1])


def manifold_distance_grad(kind: str, u, w) -> tuple[np.ndarray, np.ndarray]:
    """Analytic gradient pair ``(d rho/d u, d rho/d w)``.

    Subgradients at ties follow the lowest-index convention of
    :func:`accumulate_rows_grad`.
    """
    u = check_vector(u, "u", min_length=1)
    w = check_vector(w, "w", min_length=1)
    if u.shape != w.shape:
        raise ValueError(f"u and w must have the same length, got {u.size} and {w.size}")
    G = accumulate_rows_grad(kind, np.stack([u, w]), [0], np.array([[0.0, 1.0]]))
    return G[0], G[1]
