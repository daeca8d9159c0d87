"""Compare the decoders on a synthetic tagging task with unknown words.

A small probabilistic grammar generates train and test sentences; the
test lexicon contains extra words never seen in training, so the
known/unknown split is exercised.  Feature-driven decoders (EFB, MEMM)
can still read affixes of unseen words; the plain generative chain
cannot.
"""

import numpy as np

from efbtag.core import LabeledSentence, TagSet, Vocabulary
from efbtag.dataio import Corpus
from efbtag.discrim import SgdConfig
from efbtag.evaluation import evaluate, format_table
from efbtag.features import FeatureTemplate
from efbtag.tagger import DecoderKind, train_compare_pair, train_tagger

rng = np.random.default_rng(7)

TRAIN_LEXICON = {
    "DT": ["the", "a", "every"],
    "NN": ["runner", "builder", "painter", "walker", "fixer"],
    "VB": ["running", "building", "painting", "walking"],
    "JJ": ["darkish", "greenish", "oldish"],
}
# same morphology, new stems: -er nouns, -ing verbs, -ish adjectives
TEST_EXTRA = {
    "NN": ["singer", "dancer", "climber"],
    "VB": ["singing", "dancing", "climbing"],
    "JJ": ["bluish", "newish"],
}
PATTERNS = [
    ["DT", "NN", "VB"],
    ["DT", "JJ", "NN", "VB"],
    ["NN", "VB"],
    ["DT", "NN"],
]


def sample_corpus(n_sentences, lexicon, tagset):
    sentences = []
    for _ in range(n_sentences):
        pattern = PATTERNS[int(rng.integers(len(PATTERNS)))]
        tokens = tuple(
            lexicon[tag][int(rng.integers(len(lexicon[tag])))] for tag in pattern
        )
        labels = tuple(tagset.id_of(tag) for tag in pattern)
        sentences.append(LabeledSentence(tokens, labels))
    vocab = Vocabulary.from_words(w for s in sentences for w in s.tokens)
    return Corpus(sentences=tuple(sentences), tagset=tagset, vocab=vocab)


tagset = TagSet.from_labels(["DT", "NN", "VB", "JJ"])
train_corpus = sample_corpus(400, TRAIN_LEXICON, tagset)
test_lexicon = {
    tag: TRAIN_LEXICON[tag] + TEST_EXTRA.get(tag, []) for tag in TRAIN_LEXICON
}
test_corpus = sample_corpus(120, test_lexicon, tagset)

sgd = SgdConfig(learning_rate=0.5, epochs=30, batch_size=16)

print("=== generative baseline (word emissions only) ===")
fb_tagger, _ = train_tagger(train_corpus, DecoderKind.HMC_FB)
print(format_table(evaluate(fb_tagger, test_corpus, train_corpus.vocab)))

for template in (FeatureTemplate.NF, FeatureTemplate.LF1):
    efb_tagger, memm_tagger = train_compare_pair(train_corpus, template, sgd)
    for name, tagger in (("MEMM", memm_tagger), ("HMC-EFB", efb_tagger)):
        print(f"\n=== {name} / {template.value} ===")
        print(format_table(evaluate(tagger, test_corpus, train_corpus.vocab)))
