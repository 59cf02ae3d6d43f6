"""Rabin-Karp polynomial fingerprints with a sliding window.

A window ``s`` of ``m`` bytes maps to ``sum(s[k-1] * b**k for k in 1..m) mod p``.
Dropping the first byte divides by ``b`` (multiplication by ``b_inv``), so a
window can be slid one byte to the right with a constant number of field
operations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import InvalidParameterError

MERSENNE_61 = (1 << 61) - 1


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for d in small:
        if n % d == 0:
            return n == d
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FingerprintParams:
    p: int
    b: int
    window: int
    b_pow_window: int
    b_inv: int
    seed: int

    @property
    def q(self) -> int:
        return self.window + 1


def make_params(q: int, seed: int, modulus: int = MERSENNE_61) -> FingerprintParams:
    """Draw fingerprint parameters for windows of ``q - 1`` bytes.

    The base is drawn from ``[2, p - 2]`` by a generator seeded with ``seed``,
    so equal ``(q, seed, modulus)`` always give equal parameters. ``modulus``
    exists so tests can force a tiny field and provoke collisions.
    """
    if q < 2:
        raise InvalidParameterError(f"q must be >= 2, got {q}")
    if modulus < 5 or not _is_prime(modulus):
        raise InvalidParameterError(f"modulus must be a prime >= 5, got {modulus}")
    rng = random.Random(seed)
    b = rng.randint(2, modulus - 2)
    window = q - 1
    return FingerprintParams(
        p=modulus,
        b=b,
        window=window,
        b_pow_window=pow(b, window, modulus),
        b_inv=pow(b, -1, modulus),
        seed=seed,
    )


def hash_string(params: FingerprintParams, s: bytes) -> int:
    if len(s) != params.window:
        raise InvalidParameterError(
            f"window is {params.window} bytes, got a string of length {len(s)}"
        )
    p, b = params.p, params.b
    acc = 0
    # Horner from the right: s[0]*b + s[1]*b^2 + ... = b*(s[0] + b*(s[1] + ...))
    for ch in reversed(s):
        acc = (acc + ch) * b % p
    return acc


def roll(params: FingerprintParams, fp: int, out_char: int, in_char: int) -> int:
    """Fingerprint of ``w[1:] + in_char`` given ``fp`` of ``w`` and ``out_char == w[0]``."""
    p = params.p
    return ((fp - out_char * params.b) * params.b_inv + in_char * params.b_pow_window) % p
