"""Brute-force reference implementations.

Nothing here shares code with the pipeline. Text and occurrence counts are
re-derived from the raw rules, so a bug in the fast path cannot hide behind
a shared helper.
"""

from __future__ import annotations

from collections import Counter

from .errors import InvalidParameterError
from .slp import Pair, Slp, Terminal

DEFAULT_CAP = 10**6


def naive_profile(text: bytes, q: int) -> dict[bytes, int]:
    if q < 1:
        raise InvalidParameterError(f"q must be >= 1, got {q}")
    return dict(Counter(text[i : i + q] for i in range(len(text) - q + 1)))


def _expand(rules, x: int) -> bytes:
    out = bytearray()
    stack = [x]
    while stack:
        rule = rules[stack.pop() - 1]
        if isinstance(rule, Terminal):
            out.append(rule.ch)
        else:
            stack.append(rule.right)
            stack.append(rule.left)
    return bytes(out)


def _derivation_counts(rules, start: int) -> Counter:
    """Occurrences of each rule, by walking the whole derivation tree."""
    seen: Counter = Counter()
    stack = [start]
    while stack:
        x = stack.pop()
        seen[x] += 1
        rule = rules[x - 1]
        if isinstance(rule, Pair):
            stack.append(rule.left)
            stack.append(rule.right)
    return seen


def naive_relevant_check(slp: Slp, q: int, cap: int = DEFAULT_CAP) -> bool:
    """Does summing occ-weighted q-gram counts of relevant substrings give the text's counts?"""
    rules = slp.rules
    text = _expand(rules, len(rules)) if slp.length <= cap else None
    if text is None:
        raise InvalidParameterError(f"text length {slp.length} exceeds the oracle cap {cap}")
    if len(text) < q:
        return True
    occ = _derivation_counts(rules, len(rules))
    total: Counter = Counter()
    for x, rule in enumerate(rules, start=1):
        if not isinstance(rule, Pair):
            continue
        tx = _expand(rules, x)
        if len(tx) < q:
            continue
        nl = len(_expand(rules, rule.left))
        lo = max(0, nl - q + 1)
        hi = min(nl + q - 2, len(tx) - 1)
        r = tx[lo : hi + 1]
        for s, c in naive_profile(r, q).items():
            total[s] += c * occ[x]
    return dict(total) == naive_profile(text, q)
