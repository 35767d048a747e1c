"""Input validation helpers shared across the package.

All public entry points funnel array-like inputs through these checks so
that the numerical routines can assume well-formed float64 arrays.
"""

from __future__ import annotations

import numpy as np

# Coordinates below this floor are rejected (not clamped): log-ratio
# distances would otherwise blow up silently.
POSITIVE_FLOOR = 1e-12

# Tolerance for "sums to one" / "sums to zero" invariants.
SUM_TOL = 1e-9


def check_vector(x, name: str = "x", min_length: int = 1) -> np.ndarray:
    """Return ``x`` as a finite 1-D float64 array of length >= ``min_length``."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be a 1-D vector, got shape {arr.shape}")
    if arr.size < min_length:
        raise ValueError(f"{name} must have length >= {min_length}, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_positive_vector(x, name: str = "x", min_length: int = 1) -> np.ndarray:
    """Validate a strictly positive vector (cone representative).

    Entries smaller than ``POSITIVE_FLOOR`` are rejected rather than
    clamped, so downstream log-ratio computations stay finite and
    deterministic.
    """
    arr = check_vector(x, name, min_length)
    if np.any(arr < POSITIVE_FLOOR):
        raise ValueError(
            f"{name} must be strictly positive (>= {POSITIVE_FLOOR}); "
            f"smallest entry is {arr.min():g}"
        )
    return arr


def check_simplex_point(p, name: str = "p", min_length: int = 2) -> np.ndarray:
    """Validate a point of the open probability simplex.

    Requires strictly positive coordinates (floor ``POSITIVE_FLOOR``)
    summing to one within ``SUM_TOL``.
    """
    arr = check_positive_vector(p, name, min_length)
    total = float(arr.sum())
    if abs(total - 1.0) > SUM_TOL:
        raise ValueError(f"{name} coordinates must sum to 1, got {total!r}")
    return arr


def check_log_point(v, name: str = "v") -> np.ndarray:
    """Validate a zero-sum vector (log-ratio representation)."""
    arr = check_vector(v, name, min_length=1)
    total = float(arr.sum())
    if abs(total) > SUM_TOL:
        raise ValueError(f"{name} coordinates must sum to 0, got {total!r}")
    return arr


def check_same_length(a: np.ndarray, b: np.ndarray, names: str = "p, q") -> None:
    if a.shape != b.shape:
        raise ValueError(f"{names} must have the same length, got {a.size} and {b.size}")


def check_partition(blocks, size: int) -> tuple[np.ndarray, ...]:
    """Validate a partition of ``range(size)`` into nonempty disjoint blocks.

    Returns the blocks as int arrays, preserving the given block order.
    """
    normalized = []
    seen = np.zeros(size, dtype=bool)
    if len(blocks) == 0:
        raise ValueError("partition must contain at least one block")
    if len(blocks) > size:
        raise ValueError(f"partition has {len(blocks)} blocks for only {size} indices")
    for k, block in enumerate(blocks):
        idx = np.asarray(block, dtype=int)
        if idx.ndim != 1 or idx.size == 0:
            raise ValueError(f"partition block {k} must be a nonempty 1-D index set")
        if np.any(idx < 0) or np.any(idx >= size):
            raise ValueError(f"partition block {k} has indices outside [0, {size})")
        if np.any(seen[idx]):
            raise ValueError(f"partition block {k} overlaps an earlier block")
        seen[idx] = True
        normalized.append(idx)
    if not seen.all():
        missing = int(np.flatnonzero(~seen)[0])
        raise ValueError(f"partition does not cover index {missing}")
    return tuple(normalized)


def check_square_matrix(M, name: str = "M") -> np.ndarray:
    arr = np.asarray(M, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_distance_matrix(D, name: str = "D") -> np.ndarray:
    """Validate a symmetric nonnegative matrix with zero diagonal."""
    arr = check_square_matrix(D, name)
    if np.any(arr < 0):
        raise ValueError(f"{name} must be nonnegative")
    if np.any(np.diag(arr) != 0):
        raise ValueError(f"{name} must have a zero diagonal")
    if not np.allclose(arr, arr.T, rtol=0, atol=1e-9):
        raise ValueError(f"{name} must be symmetric")
    return arr


def check_similarity_matrix(P, name: str = "P") -> np.ndarray:
    """Validate a row-stochastic nonnegative matrix with zero diagonal."""
    arr = check_square_matrix(P, name)
    if np.any(arr < 0):
        raise ValueError(f"{name} must be nonnegative")
    if np.any(np.diag(arr) != 0):
        raise ValueError(f"{name} must have a zero diagonal")
    sums = arr.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > SUM_TOL):
        bad = int(np.argmax(np.abs(sums - 1.0)))
        raise ValueError(f"{name} rows must sum to 1; row {bad} sums to {sums[bad]!r}")
    return arr


def matrix_kind(M) -> str:
    """Classify a square matrix as embedding target.

    Returns ``"distance"`` (symmetric, zero diagonal, nonnegative),
    ``"similarity"`` (row-stochastic, zero diagonal), ``"ambiguous"``
    (satisfies both) or ``"unknown"``.
    """
    arr = check_square_matrix(M)
    is_dist = True
    is_sim = True
    if np.any(arr < 0) or np.any(np.diag(arr) != 0):
        return "unknown"
    if not np.allclose(arr, arr.T, rtol=0, atol=1e-9):
        is_dist = False
    if np.any(np.abs(arr.sum(axis=1) - 1.0) > SUM_TOL):
        is_sim = False
    if is_dist and is_sim:
        return "ambiguous"
    if is_dist:
        return "distance"
    if is_sim:
        return "similarity"
    return "unknown"


def check_seed(seed, name: str = "seed") -> int:
    """Validate a nonnegative integer seed."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValueError(f"{name} must be an integer, got {type(seed).__name__}")
    if seed < 0:
        raise ValueError(f"{name} must be nonnegative, got {seed}")
    return int(seed)
