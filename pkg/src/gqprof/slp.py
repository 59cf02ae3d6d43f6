"""Straight-line programs and their decompression.

Rule ids are 1-based, as in ``X1 .. Xn``; the start symbol is always ``Xn``.
Internally every per-rule array has length ``n + 1`` and slot 0 is unused.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, Union

from .errors import InvalidParameterError, SlpFormatError, checked_add

TERMINAL = -1


@dataclass(frozen=True)
class Terminal:
    ch: int


@dataclass(frozen=True)
class Pair:
    left: int
    right: int


Rule = Union[Terminal, Pair]


class DecompressionMeter:
    """Counts every character produced by a decompression routine."""

    __slots__ = ("chars",)

    def __init__(self) -> None:
        self.chars = 0


def _check_structure(rules: Sequence[Rule]) -> None:
    if not rules:
        raise SlpFormatError("empty rule set")
    n = len(rules)
    for i, rule in enumerate(rules, start=1):
        if isinstance(rule, Terminal):
            if not 0 <= rule.ch <= 255:
                raise SlpFormatError(f"X{i}: terminal {rule.ch!r} is not a byte")
        elif isinstance(rule, Pair):
            for child in (rule.left, rule.right):
                if child < 1 or child > n:
                    raise SlpFormatError(f"X{i}: undefined rule X{child}")
                if child >= i:
                    kind = "self" if child == i else "forward"
                    raise SlpFormatError(f"X{i}: {kind} reference to X{child}")
        else:
            raise SlpFormatError(f"X{i}: not a rule: {rule!r}")


def compute_lengths(rules: Sequence[Rule]) -> list[int]:
    """Lengths ``|X_i|`` bottom-up; index 0 is unused."""
    lengths = [0] * (len(rules) + 1)
    for i, rule in enumerate(rules, start=1):
        if isinstance(rule, Terminal):
            lengths[i] = 1
        else:
            lengths[i] = checked_add(lengths[rule.left], lengths[rule.right], f"|X{i}|")
    return lengths


def compute_occurrences(rules: Sequence[Rule]) -> list[int]:
    """Occurrence counts of each rule in the derivation tree of ``Xn``."""
    n = len(rules)
    occs = [0] * (n + 1)
    occs[n] = 1
    for i in range(n, 0, -1):
        rule = rules[i - 1]
        if isinstance(rule, Pair):
            occs[rule.left] = checked_add(occs[rule.left], occs[i], f"occ(X{rule.left})")
            occs[rule.right] = checked_add(occs[rule.right], occs[i], f"occ(X{rule.right})")
    return occs


class Slp:
    """An immutable, validated straight-line program.

    ``rules[i - 1]`` is the production of ``Xi``. Construction validates the
    ordering constraint (children have smaller ids) and that every rule is
    reachable from the start symbol, then computes lengths, occurrence
    counts and derivation heights.
    """

    def __init__(self, rules: Sequence[Rule]):
        rules = tuple(rules)
        _check_structure(rules)
        n = len(rules)
        self.rules = rules
        self.n = n
        self.start = n
        self.left = [0] * (n + 1)
        self.right = [0] * (n + 1)
        self.char = [TERMINAL] * (n + 1)
        for i, rule in enumerate(rules, start=1):
            if isinstance(rule, Terminal):
                self.char[i] = rule.ch
            else:
                self.left[i] = rule.left
                self.right[i] = rule.right

        reachable = [False] * (n + 1)
        reachable[n] = True
        for i in range(n, 0, -1):
            if reachable[i] and self.char[i] == TERMINAL:
                reachable[self.left[i]] = reachable[self.right[i]] = True
        missing = [i for i in range(1, n + 1) if not reachable[i]]
        if missing:
            raise SlpFormatError(
                "unreachable rules: " + ", ".join(f"X{i}" for i in missing[:10])
            )

        self.lengths = compute_lengths(rules)
        self.occs = compute_occurrences(rules)
        self.heights = [0] * (n + 1)
        for i in range(1, n + 1):
            if self.char[i] == TERMINAL:
                self.heights[i] = 1 + max(self.heights[self.left[i]], self.heights[self.right[i]])
        self._reversed: Slp | None = None

    @property
    def length(self) -> int:
        """``N``, the length of the derived text."""
        return self.lengths[self.n]

    def rule(self, i: int) -> Rule:
        return self.rules[i - 1]

    def is_terminal(self, i: int) -> bool:
        return self.char[i] != TERMINAL

    def reversed(self) -> Slp:
        """The reversed grammar, built once and cached."""
        if self._reversed is None:
            self._reversed, _ = reverse_slp(self)
            self._reversed._reversed = self
        return self._reversed

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Slp) and self.rules == other.rules

    def __hash__(self) -> int:
        return hash(self.rules)

    def __repr__(self) -> str:
        return f"Slp(n={self.n}, N={self.length})"


def reverse_slp(slp: Slp) -> tuple[Slp, dict[int, int]]:
    """Swap the children of every pair rule.

    Ids are preserved, so the correspondence ``Xi -> Xi'`` is the identity;
    it is still returned so callers never rely on that.
    """
    rules = [r if isinstance(r, Terminal) else Pair(r.right, r.left) for r in slp.rules]
    return Slp(rules), {i: i for i in range(1, slp.n + 1)}


def _check_rule(slp: Slp, x: int) -> None:
    if not 1 <= x <= slp.n:
        raise InvalidParameterError(f"no rule X{x} (n={slp.n})")


def decompress_prefix(
    slp: Slp, x: int, j: int, meter: DecompressionMeter | None = None
) -> bytes:
    """First ``j`` characters of ``t_X`` in ``O(j + height(X))`` steps.

    Descends the left spine keeping the right children still to be expanded
    on an explicit stack; stops as soon as ``j`` characters are out.
    """
    _check_rule(slp, x)
    if not 0 <= j <= slp.lengths[x]:
        raise InvalidParameterError(f"prefix length {j} outside [0, {slp.lengths[x]}]")
    left, right, char = slp.left, slp.right, slp.char
    out = bytearray()
    stack = [x]
    while len(out) < j:
        y = stack.pop()
        while char[y] == TERMINAL:
            stack.append(right[y])
            y = left[y]
        out.append(char[y])
    if meter is not None:
        meter.chars += j
    return bytes(out)


def decompress_suffix(
    slp: Slp, x: int, j: int, meter: DecompressionMeter | None = None
) -> bytes:
    """Last ``j`` characters of ``t_X``: a prefix of the reversed rule, re-reversed."""
    _check_rule(slp, x)
    if not 0 <= j <= slp.lengths[x]:
        raise InvalidParameterError(f"suffix length {j} outside [0, {slp.lengths[x]}]")
    return decompress_prefix(slp.reversed(), x, j, meter)[::-1]


def iter_chars(slp: Slp, x: int | None = None) -> Iterator[int]:
    """Yield ``t_X`` left to right without recursion."""
    x = slp.start if x is None else x
    _check_rule(slp, x)
    left, right, char = slp.left, slp.right, slp.char
    stack = [x]
    while stack:
        y = stack.pop()
        while char[y] == TERMINAL:
            stack.append(right[y])
            y = left[y]
        yield char[y]


def decompress_full(
    slp: Slp,
    x: int | None = None,
    sink: Callable[[int], object] | None = None,
    meter: DecompressionMeter | None = None,
) -> bytes | None:
    """Stream ``t_X`` into ``sink`` one byte at a time.

    Without a sink the text is materialized and returned instead.
    """
    chars = iter_chars(slp, x)
    if sink is None:
        out = bytes(chars)
        if meter is not None:
            meter.chars += len(out)
        return out
    count = 0
    for ch in chars:
        sink(ch)
        count += 1
    if meter is not None:
        meter.chars += count
    return None


@dataclass(frozen=True)
class RelevantSubstring:
    rule: int
    text: bytes
    span: tuple[int, int]  # half-open offsets inside t_X


def relevant_substring(
    slp: Slp, x: int, q: int, meter: DecompressionMeter | None = None
) -> RelevantSubstring:
    """The window of ``t_X`` holding exactly the q-grams that straddle its split."""
    _check_rule(slp, x)
    if slp.is_terminal(x):
        raise InvalidParameterError(f"X{x} is a terminal and has no relevant substring")
    if q < 2:
        raise InvalidParameterError(f"q must be >= 2, got {q}")
    if slp.lengths[x] < q:
        raise InvalidParameterError(f"|X{x}| = {slp.lengths[x]} < q = {q}: X{x} not in S_q")
    l, r = slp.left[x], slp.right[x]
    nl, nr = slp.lengths[l], slp.lengths[r]
    head = decompress_suffix(slp, l, min(q - 1, nl), meter)
    tail = decompress_prefix(slp, r, min(q - 1, nr), meter)
    start = max(0, nl - q + 1)
    stop = min(nl + q - 2, nl + nr - 1) + 1
    return RelevantSubstring(x, head + tail, (start, stop))


def relevant_length(slp: Slp, x: int, q: int) -> int:
    return min(q - 1, slp.lengths[slp.left[x]]) + min(q - 1, slp.lengths[slp.right[x]])


def rules_in_sq(slp: Slp, q: int) -> list[int]:
    """Ids of the pair rules deriving at least ``q`` characters, ascending."""
    return [i for i in range(1, slp.n + 1) if slp.char[i] == TERMINAL and slp.lengths[i] >= q]


# ----------------------------------------------------------------------------
# Compression (greedy most-frequent pair replacement)


def compress_text(text: bytes) -> Slp:
    """Build an SLP for ``text`` by repeated most-frequent-pair replacement.

    Ties between equally frequent pairs go to the lexicographically smallest
    ``(left id, right id)``. Once no pair occurs twice the remaining sequence
    is folded into a balanced binary tree of rules.
    """
    if isinstance(text, str):
        raise TypeError("compress_text expects bytes")
    if not text:
        raise InvalidParameterError("cannot compress an empty text")

    alphabet = sorted(set(text))
    rules: list[Rule] = [Terminal(c) for c in alphabet]
    sym_of = {c: i for i, c in enumerate(alphabet, start=1)}

    m = len(text)
    seq = [sym_of[c] for c in text]
    nxt = list(range(1, m + 1))
    nxt[-1] = -1
    prv = list(range(-1, m - 1))
    alive = [True] * m

    occ: dict[tuple[int, int], set[int]] = {}
    for i in range(m - 1):
        occ.setdefault((seq[i], seq[i + 1]), set()).add(i)
    heap = [(-len(v), k) for k, v in occ.items() if len(v) >= 2]
    heapq.heapify(heap)

    def add(pair: tuple[int, int], pos: int) -> None:
        s = occ.get(pair)
        if s is None:
            s = occ[pair] = set()
        s.add(pos)
        if len(s) >= 2:
            heapq.heappush(heap, (-len(s), pair))

    def remove(pair: tuple[int, int], pos: int) -> None:
        s = occ.get(pair)
        if s is not None:
            s.discard(pos)

    while heap:
        negf, pair = heapq.heappop(heap)
        current = occ.get(pair)
        cur = len(current) if current else 0
        if cur != -negf:
            if cur >= 2 and cur < -negf:
                heapq.heappush(heap, (-cur, pair))
            continue
        if cur < 2:
            break
        a, b = pair
        z = len(rules) + 1
        rules.append(Pair(a, b))
        positions = sorted(current)
        del occ[pair]
        for i in positions:
            j = nxt[i]
            if not alive[i] or seq[i] != a or j < 0 or seq[j] != b:
                continue
            h, k = prv[i], nxt[j]
            if h >= 0:
                remove((seq[h], a), h)
            if k >= 0:
                remove((b, seq[k]), j)
            seq[i] = z
            alive[j] = False
            nxt[i] = k
            if k >= 0:
                prv[k] = i
            if h >= 0:
                add((seq[h], z), h)
            if k >= 0:
                add((z, seq[k]), i)
        occ.pop(pair, None)

    residual = []
    i = 0
    while i >= 0:
        residual.append(seq[i])
        i = nxt[i]

    made: dict[tuple[int, int], int] = {}
    while len(residual) > 1:
        level = []
        for t in range(0, len(residual) - 1, 2):
            key = (residual[t], residual[t + 1])
            z = made.get(key)
            if z is None:
                rules.append(Pair(*key))
                z = made[key] = len(rules)
            level.append(z)
        if len(residual) % 2:
            level.append(residual[-1])
        residual = level

    top = residual[0]
    if top != len(rules):
        # start symbol must be the last rule; only possible if top is an
        # earlier rule, i.e. the whole text collapsed to one existing symbol
        rules = _move_to_end(rules, top)
    return Slp(rules)


def _move_to_end(rules: list[Rule], top: int) -> list[Rule]:
    """Renumber so that ``top`` becomes the last rule, dropping unreachable ones."""
    n = len(rules)
    keep = [False] * (n + 1)
    keep[top] = True
    for i in range(top, 0, -1):
        r = rules[i - 1]
        if keep[i] and isinstance(r, Pair):
            keep[r.left] = keep[r.right] = True
    new_id = {}
    out: list[Rule] = []
    for i in range(1, top + 1):
        if keep[i]:
            r = rules[i - 1]
            out.append(r if isinstance(r, Terminal) else Pair(new_id[r.left], new_id[r.right]))
            new_id[i] = len(out)
    return out


# ----------------------------------------------------------------------------
# Text format

_RULE_RE = re.compile(r"^X(\d+)\s*=\s*(.*?)\s*$")
_PAIR_RE = re.compile(r"^X(\d+)\s+X(\d+)$")


def _escape_byte(c: int) -> str:
    if c == 0x27:
        return "\\'"
    if c == 0x5C:
        return "\\\\"
    if 0x20 <= c < 0x7F:
        return chr(c)
    return f"\\x{c:02x}"


def _parse_terminal(body: str, lineno: int) -> int:
    if len(body) < 3 or body[0] != "'" or body[-1] != "'":
        raise SlpFormatError(f"line {lineno}: bad terminal {body!r}")
    inner = body[1:-1]
    if inner in ("\\'", "\\\\"):
        return ord(inner[1])
    if len(inner) == 4 and inner.startswith("\\x"):
        try:
            return int(inner[2:], 16)
        except ValueError:
            raise SlpFormatError(f"line {lineno}: bad escape {inner!r}") from None
    if len(inner) == 1 and inner not in ("'", "\\") and ord(inner) < 256:
        return ord(inner)
    raise SlpFormatError(f"line {lineno}: terminal must be exactly one byte, got {inner!r}")


def parse_slp(document: str) -> Slp:
    """Parse the line-oriented grammar format.

    ``Xi = 'c'`` declares a terminal and ``Xi = Xl Xr`` a pair; ids must run
    1, 2, 3, ... in file order. Blank lines and lines starting with ``#``
    are ignored.
    """
    rules: list[Rule] = []
    for lineno, raw in enumerate(document.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _RULE_RE.match(line)
        if not m:
            raise SlpFormatError(f"line {lineno}: cannot parse {raw!r}")
        i = int(m.group(1))
        if i != len(rules) + 1:
            raise SlpFormatError(f"line {lineno}: expected X{len(rules) + 1}, got X{i}")
        body = m.group(2)
        if body.startswith("'"):
            rules.append(Terminal(_parse_terminal(body, lineno)))
            continue
        pm = _PAIR_RE.match(body)
        if not pm:
            tokens = body.split()
            raise SlpFormatError(
                f"line {lineno}: X{i} must be one terminal or exactly two rules, got {len(tokens)} symbols"
            )
        l, r = int(pm.group(1)), int(pm.group(2))
        for child in (l, r):
            if child >= i:
                kind = "self" if child == i else "forward"
                raise SlpFormatError(f"line {lineno}: {kind} reference to X{child} in X{i}")
            if child < 1:
                raise SlpFormatError(f"line {lineno}: undefined rule X{child}")
        rules.append(Pair(l, r))
    if not rules:
        raise SlpFormatError("empty rule set")
    return Slp(rules)


def write_slp(slp: Slp) -> str:
    lines = [f"# slp n={slp.n} N={slp.length}"]
    for i, rule in enumerate(slp.rules, start=1):
        if isinstance(rule, Terminal):
            lines.append(f"X{i} = '{_escape_byte(rule.ch)}'")
        else:
            lines.append(f"X{i} = X{rule.left} X{rule.right}")
    return "\n".join(lines) + "\n"
