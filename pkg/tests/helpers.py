"""Shared helpers for the test suite."""

import numpy as np


def random_simplex(rng, m):
    """Random interior simplex point (uniform Dirichlet, floored away from 0)."""
    p = rng.dirichlet(np.ones(m))
    p = np.maximum(p, 1e-9)
    return p / p.sum()


def random_partition(rng, size, n_blocks):
    """Random partition of range(size) into n_blocks nonempty blocks."""
    labels = rng.integers(0, n_blocks, size=size)
    # guarantee every block nonempty
    labels[rng.permutation(size)[:n_blocks]] = np.arange(n_blocks)
    return [np.flatnonzero(labels == b) for b in range(n_blocks)]


def grad_rel_error(analytic, numeric, floor=1e-8):
    """Relative L2 error between gradient arrays with a zero-safe floor."""
    analytic = np.asarray(analytic).ravel()
    numeric = np.asarray(numeric).ravel()
    return np.linalg.norm(analytic - numeric) / max(np.linalg.norm(numeric), floor)


def central_difference(f, x, h=1e-6):
    """Central finite-difference gradient of scalar f at array x."""
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    flat = g.ravel()
    xf = x.ravel()
    for k in range(xf.size):
        step = np.zeros_like(xf)
        step[k] = h
        plus = f((xf + step).reshape(x.shape))
        minus = f((xf - step).reshape(x.shape))
        flat[k] = (plus - minus) / (2 * h)
    return g
