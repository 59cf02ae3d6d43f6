"""
Catching fingerprint collisions
===============================

Graph nodes are keyed by a rolling hash, so two different windows can merge
by accident. Here we shrink the modulus to 5 on purpose and watch the check
notice, then let the retry loop recover.
"""

from gqprof import build_profile, compress_text, make_params, verify_collision_free
from gqprof.pipeline import build_profile_improved

text = b"abcdefg"
slp = compress_text(text)

# Six distinct 2-grams cannot fit into five hash values.
bad = make_params(3, seed=0, modulus=5)
profile, _, _ = build_profile_improved(slp, 3, bad)
print("table with p = 5:", profile.enumerate())
report = verify_collision_free(profile)
print("verdict:", report.verdict)
print("evidence:", report.describe(3))


# The wrapper re-draws parameters until the check passes.
def first_attempt_broken(q, seed, attempt):
    return bad if attempt == 0 else make_params(q, seed + attempt)


profile, stats = build_profile(slp, 3, seed=0, params_factory=first_attempt_broken)
print(f"\nafter {stats.retries} retry:", profile.enumerate())
