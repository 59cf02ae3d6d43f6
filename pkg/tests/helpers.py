"""Shared fixtures data and generators for the test suite."""

from __future__ import annotations

import random

from gqprof.slp import Pair, Slp, Terminal, parse_slp

EXAMPLE_SLP = """\
# the running example: derives ababbbab
X1 = 'a'
X2 = 'b'
X3 = X1 X2
X4 = X2 X2
X5 = X3 X3
X6 = X4 X3
X7 = X5 X6
"""
EXAMPLE_TEXT = b"ababbbab"
EXAMPLE_PROFILE = [(b"aba", 1), (b"abb", 1), (b"bab", 2), (b"bba", 1), (b"bbb", 1)]


def example_slp() -> Slp:
    return parse_slp(EXAMPLE_SLP)


def fibonacci_slp(levels: int) -> Slp:
    """F1 = 'a', F2 = 'b', F_k = F_{k-1} F_{k-2}; ``levels`` rules in total."""
    rules = [Terminal(ord("a")), Terminal(ord("b"))]
    for k in range(3, levels + 1):
        rules.append(Pair(k - 1, k - 2))
    return Slp(rules)


def random_text(rng: random.Random, n: int, sigma: int) -> bytes:
    alphabet = b"abcdefghijklmnopqrstuvwxyz"[:sigma] if sigma <= 26 else bytes(range(sigma))
    return bytes(rng.choice(alphabet) for _ in range(n))


def random_slp(rng: random.Random, n_rules: int, sigma: int = 3, max_len: int = 2000) -> Slp:
    """A random grammar: random pairs over earlier rules, pruned to what the last rule reaches."""
    sigma = max(1, min(sigma, n_rules))
    rules = [Terminal(ord("a") + i) for i in range(sigma)]
    lengths = [1] * sigma
    while len(rules) < n_rules:
        i = len(rules)
        # bias toward recent rules so the top rule reaches most of the grammar
        l = rng.randrange(max(0, i - 6), i) if rng.random() < 0.6 else rng.randrange(i)
        r = rng.randrange(max(0, i - 6), i) if rng.random() < 0.6 else rng.randrange(i)
        if lengths[l] + lengths[r] > max_len:
            l = rng.randrange(sigma)
        rules.append(Pair(l + 1, r + 1))
        lengths.append(lengths[l] + lengths[r])
    return prune(rules)


def prune(rules) -> Slp:
    n = len(rules)
    keep = [False] * (n + 1)
    keep[n] = True
    for i in range(n, 0, -1):
        if keep[i] and isinstance(rules[i - 1], Pair):
            keep[rules[i - 1].left] = keep[rules[i - 1].right] = True
    new_id = {}
    out = []
    for i in range(1, n + 1):
        if keep[i]:
            r = rules[i - 1]
            out.append(r if isinstance(r, Terminal) else Pair(new_id[r.left], new_id[r.right]))
            new_id[i] = len(out)
    return Slp(out)
