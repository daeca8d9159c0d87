"""Show what each feature template extracts from a sentence.

The sentence "Batman is the main vigilante of Gotham ." is tokenized by
whitespace; every token becomes one feature vector per template.
"""

from efbtag.features import FeatureTemplate, build_index, extract, vectorize

SENTENCE = "Batman is the main vigilante of Gotham .".split()

for template in FeatureTemplate:
    print(f"=== {template.value} ===")
    for pos, token in enumerate(SENTENCE):
        fv = extract(token, pos, template)
        rendered = ", ".join(f"{fam}={val}" for fam, val in fv.items())
        print(f"  {token:<10} {rendered}")
    print()

index = build_index([SENTENCE], FeatureTemplate.LF1)
print(f"LF1 index built from this one sentence: {index.size} ids "
      f"(incl. one unknown slot per family)")
fv = extract("Batgirl", 0, FeatureTemplate.LF1)
ids = vectorize(fv, index)
print("vectorized 'Batgirl' (unseen word, shared affixes):", ids)
