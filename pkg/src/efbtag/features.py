"""Token feature templates and sparse feature indexing.

Three templates are supported: the bare word (NF), word plus short
affixes, sentence-initial position and initial capital (LF1), and LF1
extended with longer affixes, digit and hyphen indicators (LF2).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .core import LabeledSentence
from .errors import InvalidInputError


class FeatureTemplate(Enum):
    NF = "nf"
    LF1 = "lf1"
    LF2 = "lf2"


_LF1_FAMILIES = (
    "word",
    "suffix-3",
    "suffix-2",
    "prefix-3",
    "prefix-2",
    "first-position",
    "first-letter-up",
)
_LF2_EXTRA = (
    "suffix-5",
    "suffix-4",
    "prefix-5",
    "prefix-4",
    "has-digit",
    "has-hyphen",
)

TEMPLATE_FAMILIES: dict[FeatureTemplate, tuple[str, ...]] = {
    FeatureTemplate.NF: ("word",),
    FeatureTemplate.LF1: _LF1_FAMILIES,
    FeatureTemplate.LF2: _LF1_FAMILIES + _LF2_EXTRA,
}


def _bool_value(flag: bool) -> str:
    return "true" if flag else "false"


def extract(token: str, position: int, template: FeatureTemplate) -> dict[str, str]:
    """String-valued feature vector of a token in sentence context.

    Affixes of tokens shorter than n are the whole token, so every
    family is present for every token.  Case is preserved in the word
    and affix families; capitalization lives only in first-letter-up.
    """
    if not token:
        raise InvalidInputError("token must be non-empty")
    fv = {"word": token}
    if template is FeatureTemplate.NF:
        return fv
    fv["suffix-3"] = token[-3:]
    fv["suffix-2"] = token[-2:]
    fv["prefix-3"] = token[:3]
    fv["prefix-2"] = token[:2]
    fv["first-position"] = _bool_value(position == 0)
    fv["first-letter-up"] = _bool_value(token[0].isupper())
    if template is FeatureTemplate.LF1:
        return fv
    fv["suffix-5"] = token[-5:]
    fv["suffix-4"] = token[-4:]
    fv["prefix-5"] = token[:5]
    fv["prefix-4"] = token[:4]
    fv["has-digit"] = _bool_value(any(c.isdigit() for c in token))
    fv["has-hyphen"] = _bool_value("-" in token)
    return fv


@dataclass(frozen=True)
class FeatureIndex:
    """Frozen map from (family, value) to dense ids, with per-family unknown ids.

    Ids are assigned in corpus order at build time and never change
    afterwards; values unseen at train time route to their family's
    unknown id, so vectorization is total.
    """

    template: FeatureTemplate
    families: tuple[str, ...]
    ids: dict[tuple[str, str], int]
    unknown_ids: dict[str, int]

    @property
    def size(self) -> int:
        return len(self.ids) + len(self.unknown_ids)

    def id_of(self, family: str, value: str) -> int:
        if family not in self.unknown_ids:
            raise InvalidInputError(f"feature family {family!r} not in index")
        return self.ids.get((family, value), self.unknown_ids[family])


def build_index(
    corpus: Sequence[LabeledSentence] | Iterable[Sequence[str]],
    template: FeatureTemplate,
) -> FeatureIndex:
    """Index every (family, value) pair observed in the corpus.

    Accepts labeled sentences or bare token sequences; only tokens are
    used.  Unknown ids are appended after all observed pairs, one per
    family, and the index is then frozen.
    """
    ids: dict[tuple[str, str], int] = {}
    saw_any = False
    for sent in corpus:
        saw_any = True
        tokens = sent.tokens if isinstance(sent, LabeledSentence) else sent
        for pos, token in enumerate(tokens):
            for fam, value in extract(token, pos, template).items():
                key = (fam, value)
                if key not in ids:
                    ids[key] = len(ids)
    if not saw_any:
        raise InvalidInputError("corpus must be non-empty")
    families = TEMPLATE_FAMILIES[template]
    unknown_ids = {fam: len(ids) + k for k, fam in enumerate(families)}
    return FeatureIndex(
        template=template, families=families, ids=ids, unknown_ids=unknown_ids
    )


def vectorize(fv: dict[str, str], index: FeatureIndex) -> tuple[int, ...]:
    """Map a string-valued feature vector to dense ids, one per family."""
    return tuple(index.id_of(fam, value) for fam, value in fv.items())


@dataclass(frozen=True)
class FeaturePipeline:
    """Extraction plus indexing for whole sentences, frozen after training."""

    index: FeatureIndex

    @property
    def template(self) -> FeatureTemplate:
        return self.index.template

    def sentence_features(self, tokens: Sequence[str]) -> list[tuple[int, ...]]:
        return [
            vectorize(extract(tok, pos, self.index.template), self.index)
            for pos, tok in enumerate(tokens)
        ]
