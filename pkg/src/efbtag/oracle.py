"""Brute-force reference implementations used only by tests.

These enumerate label paths literally and share no code with the
recursion-based engines they check.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from .core import PosteriorLattice
from .errors import InvalidInputError
from .hmc import HmcParams

ENUMERATION_LIMIT = 10_000_000


def joint_probability(
    params: HmcParams, labels: Sequence[int], obs: Sequence[int]
) -> float:
    """Literal product of the factorized joint: prior, transitions, emissions."""
    if len(labels) != len(obs) or len(labels) == 0:
        raise InvalidInputError("labels and observations must match and be non-empty")
    prob = params.pi[labels[0]]
    for prev, cur in zip(labels, labels[1:]):
        prob *= params.trans[prev, cur]
    for label, y in zip(labels, obs):
        prob *= params.emit[label, y]
    return float(prob)


def _check_scale(n: int, t_len: int) -> None:
    if n**t_len > ENUMERATION_LIMIT:
        raise InvalidInputError(
            f"refusing to enumerate {n}^{t_len} label paths (test-scale guard)"
        )


def posterior_bruteforce(params: HmcParams, obs: Sequence[int]) -> PosteriorLattice:
    """Posterior marginals by summing the joint over every label path."""
    n = params.n_labels
    t_len = len(obs)
    if t_len == 0:
        raise InvalidInputError("observation sequence must be non-empty")
    _check_scale(n, t_len)
    mass = np.zeros((t_len, n))
    for path in itertools.product(range(n), repeat=t_len):
        p = joint_probability(params, path, obs)
        for t, label in enumerate(path):
            mass[t, label] += p
    totals = mass.sum(axis=1, keepdims=True)
    values = mass / totals
    assert np.all(np.abs(values.sum(axis=1) - 1.0) < 1e-12)
    return PosteriorLattice(values)


def observation_probability(params: HmcParams, obs: Sequence[int]) -> float:
    """Total probability of the observation sequence by path enumeration."""
    n = params.n_labels
    _check_scale(n, len(obs))
    return float(
        sum(
            joint_probability(params, path, obs)
            for path in itertools.product(range(n), repeat=len(obs))
        )
    )


def forward_bruteforce(params: HmcParams, obs: Sequence[int]) -> np.ndarray:
    """Unscaled forward values: joint of (label at t, observations 1..t)."""
    n = params.n_labels
    t_len = len(obs)
    _check_scale(n, t_len)
    out = np.zeros((t_len, n))
    for t in range(t_len):
        for path in itertools.product(range(n), repeat=t + 1):
            out[t, path[-1]] += joint_probability(params, path, obs[: t + 1])
    return out


def backward_bruteforce(params: HmcParams, obs: Sequence[int]) -> np.ndarray:
    """Unscaled backward values: probability of observations t+1..T given label at t."""
    n = params.n_labels
    t_len = len(obs)
    _check_scale(n, t_len)
    out = np.zeros((t_len, n))
    out[t_len - 1] = 1.0
    for t in range(t_len - 1):
        rest = t_len - t - 1
        for i in range(n):
            total = 0.0
            for path in itertools.product(range(n), repeat=rest):
                p = params.trans[i, path[0]]
                for prev, cur in zip(path, path[1:]):
                    p *= params.trans[prev, cur]
                for label, y in zip(path, obs[t + 1 :]):
                    p *= params.emit[label, y]
                total += p
            out[t, i] = total
    return out


def memm_posterior_bruteforce(
    first: np.ndarray, steps: Sequence[np.ndarray]
) -> np.ndarray:
    """Marginals p(label at t | observations 1..t) by prefix enumeration.

    Takes the same explicit tables as the forward recursion: `first` for
    t=1 and N x N tables with entry (i, j) = p(label i | previous j).
    """
    n = first.shape[0]
    t_len = len(steps) + 1
    _check_scale(n, t_len)
    out = np.zeros((t_len, n))
    for t in range(t_len):
        for path in itertools.product(range(n), repeat=t + 1):
            p = float(first[path[0]])
            for s, (prev, cur) in enumerate(zip(path, path[1:])):
                p *= float(steps[s][cur, prev])
            out[t, path[-1]] += p
    assert np.all(np.abs(out.sum(axis=1) - 1.0) < 1e-9)
    return out
