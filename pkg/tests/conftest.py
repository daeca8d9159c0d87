import numpy as np
import pytest

from efbtag.hmc import HmcParams


@pytest.fixture
def worked_params() -> HmcParams:
    """Two-state instance with stationary prior; obs symbol 0 is the one used."""
    pi = np.array([4 / 7, 3 / 7])
    trans = np.array([[0.7, 0.3], [0.4, 0.6]])
    emit = np.array([[0.9, 0.1], [0.2, 0.8]])
    return HmcParams(pi=pi, trans=trans, emit=emit)


def stationary_distribution(trans: np.ndarray) -> np.ndarray:
    """Left eigenvector of the transition table for eigenvalue 1, normalized."""
    vals, vecs = np.linalg.eig(trans.T)
    k = int(np.argmin(np.abs(vals - 1.0)))
    v = np.real(vecs[:, k])
    v = np.abs(v)
    return v / v.sum()


def random_stationary_hmc(rng: np.random.Generator, n: int, m: int) -> HmcParams:
    """Draw a transition table, use its stationary law as the prior, draw emissions."""
    trans = rng.dirichlet(np.ones(n) * 2.0, size=n)
    pi = stationary_distribution(trans)
    emit = rng.dirichlet(np.ones(m) * 2.0, size=n)
    return HmcParams(pi=pi, trans=trans, emit=emit)


def exact_conditional_table(params: HmcParams) -> np.ndarray:
    """L table with entry (y, i) = pi_i b_i(y) / p(y), p(y) the stationary marginal."""
    joint = params.pi[None, :] * params.emit.T  # (M, N)
    return joint / joint.sum(axis=1, keepdims=True)
