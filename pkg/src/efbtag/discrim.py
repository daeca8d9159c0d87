"""Multinomial logistic regression over sparse feature ids, trained by SGD.

The same model class serves two conditionals: label given the token's
features, and next label given the previous label and the token's
features (the previous label enters as a one-hot block appended to the
feature id space).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidInputError

# one training example: (active feature ids, previous label or None, target)
Example = tuple[Sequence[int], Optional[int], int]


@dataclass(frozen=True)
class SgdConfig:
    """Hyperparameters for mini-batch SGD with 1/(1 + decay*epoch) rate decay."""

    learning_rate: float = 0.1
    decay: float = 0.05
    epochs: int = 20
    l2: float = 1e-5
    batch_size: int = 32
    seed: int = 42

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise InvalidInputError("learning rate must be > 0")
        if self.epochs < 1:
            raise InvalidInputError("epochs must be >= 1")
        if self.batch_size < 1:
            raise InvalidInputError("batch size must be >= 1")
        if self.l2 < 0:
            raise InvalidInputError("l2 strength must be >= 0")


@dataclass(frozen=True)
class LogisticModel:
    """Weight table of shape (inputs + optional previous-label block + bias, N)."""

    weights: np.ndarray
    n_features: int
    n_labels: int
    conditions_on_prev: bool

    def __post_init__(self):
        d = self.n_features + (self.n_labels if self.conditions_on_prev else 0) + 1
        if self.weights.shape != (d, self.n_labels):
            raise InvalidInputError(
                f"weight table shape {self.weights.shape}, expected {(d, self.n_labels)}"
            )

    @property
    def bias_row(self) -> int:
        return self.weights.shape[0] - 1

    def active_rows(
        self, feature_ids: Sequence[int], prev_label: Optional[int]
    ) -> list[int]:
        if self.conditions_on_prev:
            if prev_label is None:
                raise InvalidInputError("model conditions on the previous label")
            if not 0 <= prev_label < self.n_labels:
                raise InvalidInputError(f"previous label {prev_label} out of range")
        elif prev_label is not None:
            raise InvalidInputError("model does not condition on the previous label")
        rows = list(feature_ids)
        for fid in rows:
            if not 0 <= fid < self.n_features:
                raise InvalidInputError(f"feature id {fid} out of range")
        if self.conditions_on_prev:
            rows.append(self.n_features + prev_label)
        rows.append(self.bias_row)
        return rows


def zero_model(
    n_features: int, n_labels: int, conditions_on_prev: bool = False
) -> LogisticModel:
    d = n_features + (n_labels if conditions_on_prev else 0) + 1
    return LogisticModel(
        weights=np.zeros((d, n_labels)),
        n_features=n_features,
        n_labels=n_labels,
        conditions_on_prev=conditions_on_prev,
    )


def _softmax_rows(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def predict(
    model: LogisticModel,
    feature_ids: Sequence[int],
    prev_label: Optional[int] = None,
) -> np.ndarray:
    """Softmax distribution over the N labels for one input."""
    rows = model.active_rows(feature_ids, prev_label)
    return _softmax_rows(model.weights[rows].sum(axis=0))


def predict_all_prev(model: LogisticModel, feature_ids: Sequence[int]) -> np.ndarray:
    """N x N table whose column j is the prediction given previous label j."""
    if not model.conditions_on_prev:
        raise InvalidInputError("model does not condition on the previous label")
    base = (
        model.weights[list(feature_ids)].sum(axis=0) + model.weights[model.bias_row]
    )
    block = model.weights[model.n_features : model.n_features + model.n_labels]
    scores = base[None, :] + block  # row j: scores given prev=j
    return _softmax_rows(scores).T


def loss_and_gradient(
    model: LogisticModel, batch: Sequence[Example], l2: float = 0.0
) -> tuple[float, np.ndarray]:
    """Average negative log-likelihood plus (l2/2)*||w||^2, and its gradient."""
    w = model.weights
    grad = l2 * w
    loss = 0.5 * l2 * float((w * w).sum())
    if batch:
        inv = 1.0 / len(batch)
        for feature_ids, prev_label, target in batch:
            rows = model.active_rows(feature_ids, prev_label)
            p = _softmax_rows(w[rows].sum(axis=0))
            loss -= inv * float(np.log(p[target]))
            g = p.copy()
            g[target] -= 1.0
            np.add.at(grad, rows, inv * g)
    return loss, grad


def _prepare_rows(
    model: LogisticModel, dataset: Sequence[Example]
) -> tuple[Optional[np.ndarray], list[list[int]], np.ndarray]:
    rows_list = [
        model.active_rows(ids, prev) for ids, prev, _ in dataset
    ]
    targets = np.array([t for _, _, t in dataset], dtype=np.intp)
    if np.any(targets < 0) or np.any(targets >= model.n_labels):
        raise InvalidInputError("target label out of range")
    lens = {len(r) for r in rows_list}
    rows_arr = np.array(rows_list, dtype=np.intp) if len(lens) == 1 else None
    return rows_arr, rows_list, targets


def train(
    dataset: Sequence[Example],
    n_features: int,
    n_labels: int,
    config: SgdConfig,
    conditions_on_prev: bool = False,
) -> LogisticModel:
    """Mini-batch SGD on L2-regularized cross-entropy, deterministic per seed.

    L2 decay is applied as a lazily tracked global scale so each batch
    only touches the weight rows active in it.
    """
    if len(dataset) == 0:
        raise InvalidInputError("dataset must be non-empty")
    model = zero_model(n_features, n_labels, conditions_on_prev)
    w = model.weights
    rows_arr, rows_list, targets = _prepare_rows(model, dataset)
    rng = np.random.default_rng(config.seed)
    n = len(dataset)
    scale = 1.0
    for epoch in range(config.epochs):
        rate = config.learning_rate / (1.0 + config.decay * epoch)
        order = rng.permutation(n)
        decay_factor = 1.0 - rate * config.l2
        for start in range(0, n, config.batch_size):
            batch_idx = order[start : start + config.batch_size]
            tgt = targets[batch_idx]
            b_size = len(batch_idx)
            if rows_arr is not None:
                rows = rows_arr[batch_idx]  # (B, A)
                g = _softmax_rows(scale * w[rows].sum(axis=1))
                g[np.arange(b_size), tgt] -= 1.0
                scale *= decay_factor
                g *= rate / (b_size * scale)
                np.subtract.at(
                    w,
                    rows.reshape(-1),
                    np.repeat(g, rows.shape[1], axis=0),
                )
            else:
                grads = []
                for b in batch_idx:
                    g = _softmax_rows(scale * w[rows_list[b]].sum(axis=0))
                    g[targets[b]] -= 1.0
                    grads.append(g)
                scale *= decay_factor
                step = rate / (b_size * scale)
                for b, g in zip(batch_idx, grads):
                    np.subtract.at(w, rows_list[b], step * g)
        # fold the lazy scale back in once per epoch to limit drift
        w *= scale
        scale = 1.0
    return model


def mean_loss(
    model: LogisticModel, dataset: Sequence[Example], l2: float = 0.0
) -> float:
    loss, _ = loss_and_gradient(model, dataset, l2=l2)
    return loss
