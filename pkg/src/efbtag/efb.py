"""Entropic Forward-Backward posterior decoding.

The recursions run on per-position conditional label distributions
produced by any discriminative model, divided by the stationary prior,
and yield exactly the posterior marginals of the matched generative
chain.  No emission table is involved, so arbitrary token features can
drive the decoder.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import PosteriorLattice, mpm_from_lattice
from .errors import InvalidInputError, NumericalDegeneracyError
from .hmc import posterior_from_lattices

# floor for conditional label probabilities; softmax providers never hit
# it, but table-backed providers may emit exact zeros
L_FLOOR = 1e-300

# maps (per-position input, position) to a length-N probability vector
LProvider = Callable[[object, int], np.ndarray]


@dataclass(frozen=True)
class EfbParams:
    """Stationary prior, transition table, and a conditional-label provider."""

    pi: np.ndarray
    trans: np.ndarray
    l_provider: LProvider

    def __post_init__(self):
        if self.pi.ndim != 1:
            raise InvalidInputError("pi must be a vector")
        zero = np.nonzero(self.pi <= 0.0)[0]
        if zero.size:
            raise InvalidInputError(
                f"pi must be strictly positive, state {int(zero[0])} is not"
            )
        n = self.pi.shape[0]
        if self.trans.shape != (n, n):
            raise InvalidInputError("transition table shape mismatch")
        if np.any(np.abs(self.trans.sum(axis=1) - 1.0) > 1e-12):
            raise InvalidInputError("transition rows must sum to 1")

    @property
    def n_labels(self) -> int:
        return self.pi.shape[0]


def conditional_matrix(params: EfbParams, obs: Sequence) -> np.ndarray:
    """Stack the provider's outputs into a T x N matrix, floored at L_FLOOR."""
    if len(obs) == 0:
        raise InvalidInputError("observation sequence must be non-empty")
    lmat = np.empty((len(obs), params.n_labels))
    for t, item in enumerate(obs):
        lmat[t] = params.l_provider(item, t)
    return np.maximum(lmat, L_FLOOR)


def entropic_forward(
    params: EfbParams, obs: Sequence
) -> tuple[np.ndarray, np.ndarray]:
    """Entropic forward lattice with per-step normalization.

    Unscaled value at t is alphas[t] * prod(scales[:t+1]).
    """
    lmat = conditional_matrix(params, obs)
    ratio = lmat / params.pi[None, :]
    t_len, n = lmat.shape
    alphas = np.empty((t_len, n))
    scales = np.empty(t_len)
    row = lmat[0]
    for t in range(t_len):
        if t > 0:
            row = ratio[t] * (alphas[t - 1] @ params.trans)
        s = row.sum()
        if s <= 0.0:
            raise NumericalDegeneracyError(
                f"entropic forward degenerated to zero mass at position {t}"
            )
        scales[t] = s
        alphas[t] = row / s
    return alphas, scales


def entropic_backward(
    params: EfbParams, obs: Sequence
) -> tuple[np.ndarray, np.ndarray]:
    """Entropic backward lattice; unscaled value at t is betas[t] * prod(scales[t:])."""
    lmat = conditional_matrix(params, obs)
    ratio = lmat / params.pi[None, :]
    t_len, n = lmat.shape
    betas = np.empty((t_len, n))
    scales = np.empty(t_len)
    row = np.ones(n)
    for t in range(t_len - 1, -1, -1):
        if t < t_len - 1:
            row = params.trans @ (ratio[t + 1] * betas[t + 1])
        s = row.sum()
        if s <= 0.0:
            raise NumericalDegeneracyError(
                f"entropic backward degenerated to zero mass at position {t}"
            )
        scales[t] = s
        betas[t] = row / s
    return betas, scales


def posterior_efb(params: EfbParams, obs: Sequence) -> PosteriorLattice:
    """Posterior marginals from the entropic recursions (scales cancel)."""
    alphas, _ = entropic_forward(params, obs)
    betas, _ = entropic_backward(params, obs)
    return posterior_from_lattices(alphas, betas)


def decode_efb(params: EfbParams, obs: Sequence) -> list[int]:
    """Maximum-posterior-mode labels for one sentence's per-position inputs."""
    return mpm_from_lattice(posterior_efb(params, obs))
