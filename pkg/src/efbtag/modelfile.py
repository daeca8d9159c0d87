"""Versioned model persistence.

Layout: a magic line, one line of JSON metadata (sorted keys, compact
separators), then the raw bytes of every array listed in the metadata,
concatenated in order as little-endian float64.  Writing the same model
twice therefore produces byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import numpy as np

from . import discrim, hmc
from .core import TagSet, Vocabulary
from .errors import DataError, InvalidInputError
from .features import TEMPLATE_FAMILIES, FeatureIndex, FeatureTemplate
from .tagger import DecoderKind, Tagger

MAGIC = b"EFBTAG-MODEL\n"
FORMAT_VERSION = 1
_DTYPE = np.dtype("<f8")


def _index_header(index: Optional[FeatureIndex]):
    if index is None:
        return None
    entries = sorted(index.ids, key=index.ids.__getitem__)
    return {"entries": [[fam, val] for fam, val in entries]}


def _index_from_header(header, template: FeatureTemplate) -> FeatureIndex:
    entries = header["entries"]
    ids = {(fam, val): i for i, (fam, val) in enumerate(entries)}
    families = TEMPLATE_FAMILIES[template]
    unknown_ids = {fam: len(ids) + k for k, fam in enumerate(families)}
    return FeatureIndex(
        template=template, families=families, ids=ids, unknown_ids=unknown_ids
    )


def _tagger_arrays(tagger: Tagger) -> dict[str, np.ndarray]:
    arrays: dict[str, np.ndarray] = {}
    if tagger.hmc_params is not None:
        arrays["pi"] = tagger.hmc_params.pi
        arrays["trans"] = tagger.hmc_params.trans
        if tagger.kind in (DecoderKind.HMC_FB, DecoderKind.HMC_NAIVE):
            arrays["emit"] = tagger.hmc_params.emit
    if tagger.naive is not None:
        for fam in tagger.naive.families:
            arrays[f"naive:{fam}"] = tagger.naive.tables[fam]
    if tagger.l0 is not None:
        arrays["l0_weights"] = tagger.l0.weights
    if tagger.l1 is not None:
        arrays["l1_weights"] = tagger.l1.weights
    return arrays


def save_model(path: str | Path, tagger: Tagger) -> None:
    arrays = _tagger_arrays(tagger)
    header = {
        "format_version": FORMAT_VERSION,
        "kind": tagger.kind.value,
        "template": tagger.template.value if tagger.template else None,
        "labels": list(tagger.tagset.labels),
        "words": list(tagger.vocab.words),
        "feature_index": _index_header(tagger.feature_index),
        "naive": (
            {
                "families": list(tagger.naive.families),
                "values": {
                    fam: sorted(
                        tagger.naive.value_index[fam],
                        key=tagger.naive.value_index[fam].__getitem__,
                    )
                    for fam in tagger.naive.families
                },
            }
            if tagger.naive
            else None
        ),
        "arrays": [
            {"name": name, "shape": list(arr.shape)} for name, arr in arrays.items()
        ],
    }
    blob = json.dumps(
        header, sort_keys=True, ensure_ascii=False, separators=(",", ":")
    ).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(blob)
        fh.write(b"\n")
        for arr in arrays.values():
            fh.write(np.ascontiguousarray(arr, dtype=_DTYPE).tobytes())


def load_model(path: str | Path, expect_kind: Optional[DecoderKind] = None) -> Tagger:
    """Load a model file; optionally require a specific decoder kind."""
    with open(path, "rb") as fh:
        if fh.read(len(MAGIC)) != MAGIC:
            raise DataError(f"{path}: not an efbtag model file")
        try:
            header = json.loads(fh.readline().decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise DataError(f"{path}: corrupt model header: {exc}") from exc
        if header.get("format_version") != FORMAT_VERSION:
            raise DataError(
                f"{path}: unsupported format version {header.get('format_version')!r}"
            )
        try:
            kind = DecoderKind(header["kind"])
        except (KeyError, ValueError):
            raise DataError(f"{path}: unknown decoder kind in header") from None
        if expect_kind is not None and kind is not expect_kind:
            raise InvalidInputError(
                f"{path}: model kind is {kind.value}, expected {expect_kind.value}"
            )
        arrays: dict[str, np.ndarray] = {}
        for spec in header["arrays"]:
            shape = tuple(spec["shape"])
            count = int(np.prod(shape)) if shape else 1
            raw = fh.read(count * _DTYPE.itemsize)
            if len(raw) != count * _DTYPE.itemsize:
                raise DataError(f"{path}: truncated array {spec['name']!r}")
            arrays[spec["name"]] = np.frombuffer(raw, dtype=_DTYPE).reshape(shape).copy()

    tagset = TagSet.from_labels(header["labels"])
    vocab = Vocabulary(tuple(header["words"]))
    template = (
        FeatureTemplate(header["template"]) if header.get("template") else None
    )
    n = len(tagset)

    params = None
    if "pi" in arrays:
        emit = arrays.get("emit")
        if emit is None:
            # EFB models carry no emission table; a uniform stand-in keeps
            # the parameter container's invariants satisfied
            emit = np.full((n, vocab.size_with_unknown), 1.0 / vocab.size_with_unknown)
        params = hmc.HmcParams(pi=arrays["pi"], trans=arrays["trans"], emit=emit)

    naive = None
    if header.get("naive"):
        families = tuple(header["naive"]["families"])
        value_index = {
            fam: {v: i for i, v in enumerate(header["naive"]["values"][fam])}
            for fam in families
        }
        naive = hmc.NaiveFeatureEmission(
            families=families,
            value_index=value_index,
            tables={fam: arrays[f"naive:{fam}"] for fam in families},
        )

    index = None
    if header.get("feature_index") is not None:
        if template is None:
            raise DataError(f"{path}: feature index without a template")
        index = _index_from_header(header["feature_index"], template)

    def _logistic(name: str, conditions_on_prev: bool):
        if name not in arrays:
            return None
        return discrim.LogisticModel(
            weights=arrays[name],
            n_features=index.size,
            n_labels=n,
            conditions_on_prev=conditions_on_prev,
        )

    return Tagger(
        kind=kind,
        tagset=tagset,
        vocab=vocab,
        template=template,
        hmc_params=params,
        naive=naive,
        feature_index=index,
        l0=_logistic("l0_weights", False),
        l1=_logistic("l1_weights", True),
    )
