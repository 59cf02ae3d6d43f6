"""
Comparing texts by their q-gram profiles
========================================

A single edit changes at most 2q windows, so the L1 distance between
profiles divided by 2q never exceeds the edit distance. That makes it a
cheap filter before an exact comparison.
"""

from gqprof import build_profile, compress_text, qgram_distance

texts = {
    "original": b"the quick brown fox jumps over the lazy dog " * 50,
    "one typo": b"the quick brown fox jumps over the lazy dog " * 49 + b"the quick brown fax jumps over the lazy dog ",
    "shuffled": b"over the lazy dog the quick brown fox jumps " * 50,
    "unrelated": b"pack my box with five dozen liquor jugs " * 55,
}

q = 3
tables = {name: build_profile(compress_text(t), q, seed=7)[0].table() for name, t in texts.items()}

names = list(tables)
print(" " * 10 + "".join(f"{n:>11}" for n in names))
for a in names:
    print(f"{a:>10}" + "".join(f"{qgram_distance(tables[a], tables[b]):>11}" for b in names))

# One substituted byte touches at most q windows on each side.
assert qgram_distance(tables["original"], tables["one typo"]) <= 2 * q
