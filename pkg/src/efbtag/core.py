"""Domain types shared by every decoding engine.

Label and word indexing, sentences, and the per-position posterior
lattice from which maximum-posterior-mode label sequences are read.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError

ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class TagSet:
    """Bidirectional map between label strings and dense ids 0..N-1."""

    labels: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise InvalidInputError("duplicate labels in tag set")
        object.__setattr__(
            self, "_index", {lab: i for i, lab in enumerate(self.labels)}
        )

    @classmethod
    def from_labels(cls, labels: Iterable[str]) -> "TagSet":
        return cls(tuple(labels))

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def id_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InvalidInputError(f"unknown label: {label!r}") from None

    def label_of(self, i: int) -> str:
        return self.labels[i]


@dataclass(frozen=True)
class Vocabulary:
    """Dense word ids plus one reserved slot for unknown words.

    Word identity is exact surface-form equality; case folding is a
    feature-template concern, not a vocabulary concern.
    """

    words: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.words)) != len(self.words):
            raise InvalidInputError("duplicate words in vocabulary")
        object.__setattr__(
            self, "_index", {w: i for i, w in enumerate(self.words)}
        )

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "Vocabulary":
        seen: dict[str, None] = {}
        for w in words:
            seen.setdefault(w)
        return cls(tuple(seen))

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self._index

    @property
    def unknown_id(self) -> int:
        # one past the last trained word id
        return len(self.words)

    @property
    def size_with_unknown(self) -> int:
        return len(self.words) + 1

    def id_of(self, word: str) -> int:
        """Return the word's id, or the unknown id for unseen words."""
        return self._index.get(word, self.unknown_id)


@dataclass(frozen=True)
class LabeledSentence:
    """A token sequence paired with gold label ids of equal length."""

    tokens: tuple[str, ...]
    labels: tuple[int, ...]

    def __post_init__(self):
        if len(self.tokens) == 0:
            raise InvalidInputError("sentence must contain at least one token")
        if len(self.tokens) != len(self.labels):
            raise InvalidInputError(
                f"{len(self.tokens)} tokens but {len(self.labels)} labels"
            )

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class PosteriorLattice:
    """T x N table of posterior marginals P(X_t = label_i | observations)."""

    values: np.ndarray

    def __post_init__(self):
        v = self.values
        if v.ndim != 2 or v.shape[0] == 0 or v.shape[1] == 0:
            raise InvalidInputError("lattice must be a non-empty T x N table")
        if np.any(v < -ROW_SUM_TOL) or np.any(v > 1.0 + ROW_SUM_TOL):
            raise InvalidInputError("lattice entries must lie in [0, 1]")
        sums = v.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > ROW_SUM_TOL):
            t = int(np.argmax(np.abs(sums - 1.0)))
            raise InvalidInputError(
                f"lattice row {t} sums to {sums[t]!r}, expected 1"
            )

    @property
    def length(self) -> int:
        return self.values.shape[0]

    @property
    def n_labels(self) -> int:
        return self.values.shape[1]


def mpm_from_lattice(lattice: PosteriorLattice) -> list[int]:
    """Per-position argmax of the posterior lattice.

    Ties are broken toward the lowest label id so decoding is
    deterministic across runs and platforms.
    """
    return [int(i) for i in np.argmax(lattice.values, axis=1)]


def as_lattice(values: Sequence[Sequence[float]] | np.ndarray) -> PosteriorLattice:
    return PosteriorLattice(np.asarray(values, dtype=np.float64))
