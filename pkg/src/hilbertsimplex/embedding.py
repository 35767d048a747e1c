"""Embedding losses and the stochastic optimizer behind them.

Two losses measure how well ``n`` free points ``Y`` on a model geometry
represent a target matrix:

* stress, for a distance matrix ``D``::

      (1/n^2) sum_ij (D_ij - rho(y_i, y_j))^2

* mean KL divergence, for a row-stochastic similarity matrix ``P``::

      (1/n) sum_i sum_{j != i} P_ij log(P_ij / q_ij),
      q_ij = exp(-rho(y_i, y_j)^2) / sum_{l != i} exp(-rho(y_i, y_l)^2)

Both are sample averages over rows, so mini-batches select rows and
keep every pair term of those rows (global normalization included);
summing batch gradients over an epoch partition recovers the full
gradient exactly.  The optimizer is plain SGD with momentum on the
unconstrained coordinates, with divergence guards, early stopping on
the running best, and best-iterate reporting.  ``random_search`` tunes
the learning rate (log-uniform) and batch size over a trial budget.

The module-level functions are the functional core;
:class:`ManifoldEmbedding` and :class:`TunedManifoldEmbedding` wrap
them in the scikit-learn estimator protocol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .manifolds import accumulate_rows_grad, check_manifold, rows_distances
from .seeding import derive_seed
from .validation import (
    check_distance_matrix,
    check_seed,
    check_similarity_matrix,
    matrix_kind,
)

LOSSES = ("stress", "kl")

# A full-data loss beyond this is treated as divergence.
_DIVERGENCE_CEILING = 1e12

LEARNING_RATE_RANGE = (5e-4, 5.0)
BATCH_SIZE_CHOICES = (16, 32, 48)

__all__ = [
    "LOSSES",
    "LEARNING_RATE_RANGE",
    "BATCH_SIZE_CHOICES",
    "EmbeddingConfig",
    "EmbeddingResult",
    "EmbeddingDiverged",
    "stress_loss",
    "kl_loss",
    "stress_gradient",
    "kl_gradient",
    "sgd_embed",
    "random_search",
    "ManifoldEmbedding",
    "TunedManifoldEmbedding",
]


class EmbeddingDiverged(RuntimeError):
    """Raised when an optimization run blows up (non-finite or huge loss)."""


@dataclass
class EmbeddingConfig:
    """Hyperparameters of one optimization run."""

    manifold: str
    n_components: int
    learning_rate: float
    batch_size: int
    momentum: float = 0.9
    max_epochs: int = 3000
    patience: int = 100
    min_rel_improvement: float = 1e-4
    init_scale: float = 1.0
    seed: int = 0


@dataclass
class EmbeddingResult:
    """Best iterate found by :func:`sgd_embed` and its loss history."""

    Y: np.ndarray
    final_loss: float
    loss_trace: np.ndarray  # entry 0 is the loss of the initial Y
    epochs_run: int


def _check_loss_name(loss: str) -> str:
    if loss not in LOSSES:
        raise ValueError(f"unknown loss {loss!r}; expected one of {LOSSES}")
    return loss


def _all_rows(n: int) -> np.ndarray:
    return np.arange(n)


def _stress_value(D, Y, kind, rows) -> float:
    R = rows_distances(kind, Y, rows)
    residual = D[rows] - R
    return float(np.sum(residual * residual)) / (D.shape[0] ** 2)


def _stress_grad(D, Y, kind, rows) -> np.ndarray:
    R = rows_distances(kind, Y, rows)
    C = (2.0 / D.shape[0] ** 2) * (R - D[rows])
    return accumulate_rows_grad(kind, Y, rows, C)


def _kl_q_rows(P, Y, kind, rows):
    """Per-row softmax of negated squared distances, self excluded."""
    R = rows_distances(kind, Y, rows)
    s = -(R * R)
    s[np.arange(len(rows)), rows] = -np.inf
    e = np.exp(s - s.max(axis=1, keepdims=True))
    q = e / e.sum(axis=1, keepdims=True)
    if np.any((q == 0.0) & (P[rows] > 0.0)):
        raise EmbeddingDiverged(
            "similarity q_ij underflowed to 0 on a pair with positive target mass"
        )
    return R, q


def _kl_value(P, Y, kind, rows) -> float:
    _, q = _kl_q_rows(P, Y, kind, rows)
    Prows = P[rows]
    mask = Prows > 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(mask, Prows * (np.log(np.where(mask, Prows, 1.0)) - np.log(np.where(q > 0.0, q, 1.0))), 0.0)
    return float(terms.sum()) / P.shape[0]


def _kl_grad(P, Y, kind, rows) -> np.ndarray:
    R, q = _kl_q_rows(P, Y, kind, rows)
    C = (2.0 / P.shape[0]) * R * (P[rows] - q)
    C[np.arange(len(rows)), rows] = 0.0
    return accumulate_rows_grad(kind, Y, rows, C)


def stress_loss(D, Y, kind: str) -> float:
    """Mean squared discrepancy between ``D`` and the pairwise distances of ``Y``.

    Every ordered pair appears, so the asymmetric Funk kind contributes
    both ``(i, j)`` and ``(j, i)`` residuals.
    """
    D, Y, kind = _check_target(D, Y, kind, "stress")
    return _stress_value(D, Y, kind, _all_rows(D.shape[0]))


def kl_loss(P, Y, kind: str) -> float:
    """Mean KL divergence between rows of ``P`` and the induced softmax rows.

    Terms with ``P_ij = 0`` contribute nothing; an underflowing ``q_ij``
    on a pair with positive mass raises :class:`EmbeddingDiverged`.
    """
    P, Y, kind = _check_target(P, Y, kind, "kl")
    return _kl_value(P, Y, kind, _all_rows(P.shape[0]))


def stress_gradient(D, Y, kind: str, rows=None) -> np.ndarray:
    """Gradient of the batch-restricted stress loss with respect to ``Y``.

    ``rows`` selects the batch (all pair terms of those rows, with the
    global ``1/n^2`` normalization kept); ``None`` means the full loss.
    """
    D, Y, kind = _check_target(D, Y, kind, "stress")
    rows = _all_rows(D.shape[0]) if rows is None else np.asarray(rows, dtype=int)
    return _stress_grad(D, Y, kind, rows)


def kl_gradient(P, Y, kind: str, rows=None) -> np.ndarray:
    """Gradient of the batch-restricted KL loss with respect to ``Y``."""
    P, Y, kind = _check_target(P, Y, kind, "kl")
    rows = _all_rows(P.shape[0]) if rows is None else np.asarray(rows, dtype=int)
    return _kl_grad(P, Y, kind, rows)


def _check_target(M, Y, kind, loss):
    kind = check_manifold(kind)
    _check_loss_name(loss)
    M = check_distance_matrix(M) if loss == "stress" else check_similarity_matrix(M)
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or Y.shape[0] != M.shape[0]:
        raise ValueError(
            f"Y must have shape (n, d) with n={M.shape[0]}, got {Y.shape}"
        )
    return M, Y, kind


def _check_config(config: EmbeddingConfig, n: int) -> EmbeddingConfig:
    check_manifold(config.manifold)
    if config.n_components < 1:
        raise ValueError(f"n_components must be >= 1, got {config.n_components}")
    if not (config.learning_rate > 0):
        raise ValueError(f"learning_rate must be > 0, got {config.learning_rate}")
    if not (1 <= config.batch_size <= n):
        raise ValueError(f"batch_size must be in [1, {n}], got {config.batch_size}")
    if not (0.0 <= config.momentum < 1.0):
        raise ValueError(f"momentum must be in [0, 1), got {config.momentum}")
    if config.max_epochs < 1:
        raise ValueError(f"max_epochs must be >= 1, got {config.max_epochs}")
    if config.patience < 1:
        raise ValueError(f"patience must be >= 1, got {config.patience}")
    if not (config.init_scale > 0):
        raise ValueError(f"init_scale must be > 0, got {config.init_scale}")
    check_seed(config.seed)
    return config


def sgd_embed(config: EmbeddingConfig, target, loss: str = "stress") -> EmbeddingResult:
    """Minimize an embedding loss with mini-batch SGD plus momentum.

    The initial coordinates are i.i.d. Gaussian with standard deviation
    ``init_scale``.  Each epoch shuffles the rows and walks them in
    mini-batches; a batch step follows the gradient of the loss
    restricted to its rows.  The full-data loss is recorded per epoch
    (entry 0 of the trace is the initial loss); optimization stops at
    ``max_epochs`` or once the running best has not improved by a
    relative ``min_rel_improvement`` within ``patience`` epochs.  The
    returned ``Y`` is the best iterate seen, not the last.

    Raises
    ------
    EmbeddingDiverged
        If the loss becomes non-finite or exceeds 1e12, with the
        offending epoch and learning rate in the message.
    """
    kind = check_manifold(config.manifold)
    _check_loss_name(loss)
    M = check_distance_matrix(target) if loss == "stress" else check_similarity_matrix(target)
    n = M.shape[0]
    config = _check_config(config, n)
    value_fn = _stress_value if loss == "stress" else _kl_value
    grad_fn = _stress_grad if loss == "stress" else _kl_grad
    full = _all_rows(n)

    rng = np.random.default_rng(config.seed)
    Y = rng.standard_normal((n, config.n_components)) * config.init_scale
    velocity = np.zeros_like(Y)

    def full_loss(epoch: int) -> float:
        try:
            value = value_fn(M, Y, kind, full)
        except EmbeddingDiverged as exc:
            raise EmbeddingDiverged(
                f"diverged at epoch {epoch} (learning_rate={config.learning_rate:g}): {exc}"
            ) from None
        if not math.isfinite(value) or value > _DIVERGENCE_CEILING:
            raise EmbeddingDiverged(
                f"loss {value:g} at epoch {epoch} (learning_rate={config.learning_rate:g})"
            )
        return value

    current = full_loss(0)
    trace = [current]
    best = current
    best_Y = Y.copy()
    stale = 0
    epochs_run = 0
    for epoch in range(1, config.max_epochs + 1):
        epochs_run = epoch
        perm = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            rows = perm[start : start + config.batch_size]
            grad = grad_fn(M, Y, kind, rows)
            velocity = config.momentum * velocity - config.learning_rate * grad
            Y = Y + velocity
        current = full_loss(epoch)
        trace.append(current)
        if current < best * (1.0 - config.min_rel_improvement):
            stale = 0
        else:
            stale += 1
        if current < best:
            best = current
            best_Y = Y.copy()
        if stale >= config.patience:
            break
    return EmbeddingResult(best_Y, best, np.asarray(trace), epochs_run)


def random_search(
    target,
    manifold: str,
    n_components: int,
    loss: str = "stress",
    trials: int = 30,
    seed: int = 0,
    **config_overrides,
) -> tuple[EmbeddingConfig, EmbeddingResult]:
    """Tune learning rate and batch size by seeded random search.

    Each trial draws the learning rate log-uniformly from
    ``LEARNING_RATE_RANGE`` and the batch size uniformly from
    ``BATCH_SIZE_CHOICES`` (clipped to the number of points), runs
    :func:`sgd_embed` with a trial-derived seed, and keeps the lowest
    final loss.  Diverged trials score ``+inf``; if every trial
    diverges, :class:`EmbeddingDiverged` is raised.  Trial ``k`` draws
    and seeds identically regardless of the total budget, so a larger
    budget can only improve the result on the shared prefix.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    check_manifold(manifold)
    _check_loss_name(loss)
    check_seed(seed)
    n = np.asarray(target).shape[0]
    rng = np.random.default_rng(seed)
    lo, hi = LEARNING_RATE_RANGE
    best: tuple[EmbeddingConfig, EmbeddingResult] | None = None
    best_score = math.inf
    for trial in range(trials):
        lr = float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
        batch = min(int(rng.choice(BATCH_SIZE_CHOICES)), n)
        config = EmbeddingConfig(
            manifold=manifold,
            n_components=n_components,
            learning_rate=lr,
            batch_size=batch,
            seed=derive_seed(seed, trial),
            **config_overrides,
        )
        try:
            result = sgd_embed(config, target, loss)
        except EmbeddingDiverged:
            continue
        if result.final_loss < best_score:
            best_score = result.final_loss
            best = (config, result)
    if best is None:
        raise EmbeddingDiverged(f"all {trials} search trials diverged")
    return best


def _resolve_loss(X, loss: str) -> str:
    if loss in LOSSES:
        return loss
    if loss != "auto":
        raise ValueError(f"loss must be 'auto' or one of {LOSSES}, got {loss!r}")
    kind = matrix_kind(X)
    if kind == "distance":
        return "stress"
    if kind == "similarity":
        return "kl"
    if kind == "ambiguous":
        raise ValueError(
            "target matrix is both a valid distance and similarity matrix; "
            "set loss='stress' or loss='kl' explicitly"
        )
    raise ValueError(
        "target matrix is neither a distance matrix (symmetric, zero diagonal) "
        "nor a similarity matrix (row-stochastic, zero diagonal)"
    )


class ManifoldEmbedding(BaseEstimator):
    """Embed a target matrix into one of five geometries by SGD.

    Fitting minimizes the stress loss for a distance matrix or the mean
    KL loss for a row-stochastic similarity matrix (``loss="auto"``
    picks by inspecting the input).

    Parameters
    ----------
    manifold : {"euclidean", "l1", "hyperboloid", "hilbert", "funk"}
        Geometry of the embedding space.
    n_components : int
        Dimensionality of the unconstrained coordinates.
    learning_rate : float
        SGD step size.
    batch_size : int or "auto"
        Rows per mini-batch; "auto" uses ``min(32, n)``.
    momentum : float
        Momentum coefficient in [0, 1).
    max_epochs, patience, min_rel_improvement : early-stopping knobs.
    init_scale : float
        Standard deviation of the Gaussian initialization.
    loss : {"auto", "stress", "kl"}
    random_state : int
        Seed; fitting is fully deterministic given it.

    Attributes
    ----------
    embedding_ : ndarray of shape (n, n_components)
        Best coordinates found.
    loss_ : float
        Best full-data loss (the minimum of ``loss_curve_``).
    loss_curve_ : ndarray
        Full-data loss per epoch, starting at the initial iterate.
    n_iter_ : int
        Epochs actually run.
    loss_kind_ : str
        Loss that was optimized ("stress" or "kl").
    """

    def __init__(
        self,
        manifold="hilbert",
        n_components=2,
        learning_rate=0.1,
        batch_size="auto",
        momentum=0.9,
        max_epochs=3000,
        patience=100,
        min_rel_improvement=1e-4,
        init_scale=1.0,
        loss="auto",
        random_state=0,
    ):
        self.manifold = manifold
        self.n_components = n_components
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.momentum = momentum
        self.max_epochs = max_epochs
        self.patience = patience
        self.min_rel_improvement = min_rel_improvement
        self.init_scale = init_scale
        self.loss = loss
        self.random_state = random_state

    def _config(self, n: int) -> EmbeddingConfig:
        batch = min(32, n) if self.batch_size == "auto" else int(self.batch_size)
        return EmbeddingConfig(
            manifold=self.manifold,
            n_components=self.n_components,
            learning_rate=self.learning_rate,
            batch_size=batch,
            momentum=self.momentum,
            max_epochs=self.max_epochs,
            patience=self.patience,
            min_rel_improvement=self.min_rel_improvement,
            init_scale=self.init_scale,
            seed=self.random_state,
        )

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        loss_kind = _resolve_loss(X, self.loss)
        result = sgd_embed(self._config(X.shape[0]), X, loss_kind)
        self.embedding_ = result.Y
        self.loss_ = result.final_loss
        self.loss_curve_ = result.loss_trace
        self.n_iter_ = result.epochs_run
        self.loss_kind_ = loss_kind
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).embedding_


class TunedManifoldEmbedding(BaseEstimator):
    """Like :class:`ManifoldEmbedding`, with the learning rate and batch
    size picked by :func:`random_search` over ``n_trials`` trials.

    Attributes
    ----------
    best_params_ : dict
        ``{"learning_rate": ..., "batch_size": ...}`` of the winner.
    embedding_, loss_, loss_curve_, n_iter_, loss_kind_ : as in
        :class:`ManifoldEmbedding`, for the winning trial.
    """

    def __init__(
        self,
        manifold="hilbert",
        n_components=2,
        n_trials=30,
        momentum=0.9,
        max_epochs=3000,
        patience=100,
        min_rel_improvement=1e-4,
        init_scale=1.0,
        loss="auto",
        random_state=0,
    ):
        self.manifold = manifold
        self.n_components = n_components
        self.n_trials = n_trials
        self.momentum = momentum
        self.max_epochs = max_epochs
        self.patience = patience
        self.min_rel_improvement = min_rel_improvement
        self.init_scale = init_scale
        self.loss = loss
        self.random_state = random_state

    def fit(self, X, y=None):
        X = np.asarray(X, dtype=float)
        loss_kind = _resolve_loss(X, self.loss)
        config, result = random_search(
            X,
            self.manifold,
            self.n_components,
            loss=loss_kind,
            trials=self.n_trials,
            seed=self.random_state,
            momentum=self.momentum,
            max_epochs=self.max_epochs,
            patience=self.patience,
            min_rel_improvement=self.min_rel_improvement,
            init_scale=self.init_scale,
        )
        self.best_params_ = {
            "learning_rate": config.learning_rate,
            "batch_size": config.batch_size,
        }
        self.embedding_ = result.Y
        self.loss_ = result.final_loss
        self.loss_curve_ = result.loss_trace
        self.n_iter_ = result.epochs_run
        self.loss_kind_ = loss_kind
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).embedding_
