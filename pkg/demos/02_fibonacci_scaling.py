"""
Profiles of texts too long to write down
========================================

A Fibonacci grammar with n rules derives a text of length Fib(n). The
improved builder reads about q bytes per rule, so the cost follows n while
the text length grows exponentially.
"""

import time

from gqprof import build_profile
from gqprof.slp import Pair, Slp, Terminal


def fibonacci(levels):
    rules = [Terminal(ord("a")), Terminal(ord("b"))]
    rules += [Pair(k - 1, k - 2) for k in range(3, levels + 1)]
    return Slp(rules)


q = 4
print(f"{'rules':>5} {'text length':>22} {'bytes read':>10} {'ms':>8}")
for levels in (10, 20, 40, 60, 80):
    slp = fibonacci(levels)
    start = time.perf_counter()
    profile, stats = build_profile(slp, q, seed=3)
    ms = (time.perf_counter() - start) * 1000
    print(f"{levels:>5} {slp.length:>22} {stats.chars_decompressed:>10} {ms:>8.2f}")

# Fibonacci words famously have exactly q + 1 distinct factors of length q.
print("\ndistinct 4-grams:", profile.enumerate())
