"""End-to-end profile construction from a straight-line program.

Two ways to fill the q-gram graph are provided. ``build_profile_basic``
decompresses the relevant substring of every long rule independently.
``build_profile_improved`` walks the grammar once, left to right, expands
each long rule only on its first occurrence and afterwards decompresses just
its (q-1)-prefix, so every q-gram occurrence position is read once.
``build_profile`` wraps either one in verify-and-retry.
"""

from __future__ import annotations

import json
import logging
from collections import deque
from dataclasses import asdict, dataclass
from typing import Callable

from .errors import CollisionError, InvalidParameterError, checked_add
from .fingerprint import FingerprintParams, make_params
from .graph import QGramGraph, graph_extend, graph_jump, graph_start, insert_relevant_substring
from .profile import (
    CollisionReport,
    Profile,
    ProfileTable,
    build_cstree,
    build_suffix_tree,
    empty_profile,
    verify_collision_free,
)
from .slp import (
    TERMINAL,
    DecompressionMeter,
    Slp,
    decompress_prefix,
    relevant_length,
    relevant_substring,
    rules_in_sq,
)

log = logging.getLogger(__name__)

BASIC = "basic"
IMPROVED = "improved"
DEFAULT_MAX_RETRIES = 8


@dataclass
class BuildStats:
    algorithm: str
    n: int
    N: int
    q: int
    size_Sq: int
    chars_decompressed: int
    distinct_qgrams: int
    total_qgrams: int
    retries: int = 0

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _check_q(slp: Slp, q: int, params: FingerprintParams | None) -> None:
    if q < 2:
        raise InvalidParameterError(f"q must be >= 2, got {q} (use count_unigrams for q=1)")
    if params is not None and params.q != q:
        raise InvalidParameterError(f"params are for q={params.q}, not q={q}")


def _finish(
    slp: Slp,
    q: int,
    params: FingerprintParams,
    graph: QGramGraph,
    first_gram: bytes,
    meter: DecompressionMeter,
    algorithm: str,
) -> tuple[Profile, QGramGraph, BuildStats]:
    tree = build_cstree(graph, first_gram)
    profile = build_suffix_tree(tree, q, params)
    stats = BuildStats(
        algorithm=algorithm,
        n=slp.n,
        N=slp.length,
        q=q,
        size_Sq=len(rules_in_sq(slp, q)),
        chars_decompressed=meter.chars,
        distinct_qgrams=graph.edge_count,
        total_qgrams=graph.total_count(),
    )
    return profile, graph, stats


def _empty(slp: Slp, q: int, params: FingerprintParams, algorithm: str):
    stats = BuildStats(algorithm, slp.n, slp.length, q, 0, 0, 0, 0)
    return empty_profile(q, params), None, stats


def build_profile_basic(
    slp: Slp, q: int, params: FingerprintParams
) -> tuple[Profile, QGramGraph | None, BuildStats]:
    _check_q(slp, q, params)
    if slp.length < q:
        return _empty(slp, q, params, BASIC)
    meter = DecompressionMeter()
    first_gram = decompress_prefix(slp, slp.start, q - 1, meter)
    graph, _ = graph_start(params, first_gram)
    for x in rules_in_sq(slp, q):
        r = relevant_substring(slp, x, q, meter)
        insert_relevant_substring(graph, r.text, slp.occs[x])
    return _finish(slp, q, params, graph, first_gram, meter, BASIC)


class _Feeder:
    """Receives decompressed bytes in text order and credits each q-gram.

    The first q - 1 bytes only prime the window. Every later byte closes one
    q-gram occurrence owned by the rule at the head of ``pending``; that
    rule's remaining-count is then decremented.
    """

    def __init__(self, slp: Slp, q: int, params: FingerprintParams):
        self.q = q
        self.params = params
        self.occs = slp.occs
        self.prime = bytearray()
        self.graph: QGramGraph | None = None
        self.cursor = None
        self.pending: deque[list[int]] = deque()

    def feed(self, ch: int) -> None:
        if self.graph is None:
            self.prime.append(ch)
            if len(self.prime) == self.q - 1:
                self.graph, self.cursor = graph_start(self.params, bytes(self.prime))
            return
        if not self.pending:
            raise RuntimeError("decompressed a byte that no pending rule accounts for")
        head = self.pending[0]
        graph_extend(self.graph, self.cursor, ch, self.occs[head[0]])
        head[1] -= 1
        if head[1] == 0:
            self.pending.popleft()


def build_profile_improved(
    slp: Slp, q: int, params: FingerprintParams
) -> tuple[Profile, QGramGraph | None, BuildStats]:
    _check_q(slp, q, params)
    if slp.length < q:
        return _empty(slp, q, params, IMPROVED)
    meter = DecompressionMeter()
    feeder = _Feeder(slp, q, params)
    left, right, char, lengths = slp.left, slp.right, slp.char, slp.lengths
    suffix_node: dict[int, int] = {}  # visited long rule -> node of its (q-1)-suffix

    ENTER, TURN, LEAVE = 0, 1, 2
    stack = [(slp.start, ENTER)]
    while stack:
        x, state = stack.pop()
        if state == ENTER:
            if char[x] != TERMINAL:
                meter.chars += 1
                feeder.feed(char[x])
            elif x in suffix_node:
                if feeder.graph is None:
                    raise RuntimeError(f"X{x} revisited before the window was primed")
                for ch in decompress_prefix(slp, x, q - 1, meter):
                    feeder.feed(ch)
                feeder.cursor = graph_jump(feeder.graph, suffix_node[x])
            else:
                stack.append((x, TURN))
                stack.append((left[x], ENTER))
        elif state == TURN:
            if lengths[x] >= q:
                feeder.pending.append([x, relevant_length(slp, x, q) - (q - 1)])
            stack.append((x, LEAVE))
            stack.append((right[x], ENTER))
        elif lengths[x] >= q:
            r = right[x]
            suffix_node[x] = suffix_node[r] if lengths[r] >= q else feeder.cursor.node

    if feeder.pending:
        raise RuntimeError(
            "pending rules left at the end: "
            + ", ".join(f"X{x} ({k} q-grams)" for x, k in feeder.pending)
        )
    return _finish(slp, q, params, feeder.graph, bytes(feeder.prime), meter, IMPROVED)


_BUILDERS = {BASIC: build_profile_basic, IMPROVED: build_profile_improved}

ParamsFactory = Callable[[int, int, int], FingerprintParams]


def _default_params(q: int, seed: int, attempt: int) -> FingerprintParams:
    return make_params(q, seed + attempt)


def build_profile(
    slp: Slp,
    q: int,
    seed: int = 0,
    *,
    algorithm: str = IMPROVED,
    max_retries: int = DEFAULT_MAX_RETRIES,
    params_factory: ParamsFactory = _default_params,
) -> tuple[Profile, BuildStats]:
    """Build and verify; rebuild with fresh parameters while collisions are found.

    ``params_factory(q, seed, attempt)`` supplies the parameters of each
    attempt; the default draws them from ``seed + attempt``.
    """
    try:
        builder = _BUILDERS[algorithm]
    except KeyError:
        raise InvalidParameterError(f"unknown algorithm {algorithm!r}") from None
    reports: list[CollisionReport] = []
    for attempt in range(max_retries + 1):
        params = params_factory(q, seed, attempt)
        profile, _, stats = builder(slp, q, params)
        report = verify_collision_free(profile, q)
        if report.ok:
            stats.retries = attempt
            return profile, stats
        log.info("attempt %d: %s", attempt, report.describe(q))
        reports.append(report)
    raise CollisionError(
        f"fingerprints collided in all {max_retries + 1} attempts: "
        + " | ".join(r.describe(q) for r in reports),
        reports,
    )


def qgram_distance(a: ProfileTable, b: ProfileTable) -> int:
    """L1 distance between two q-gram frequency tables."""
    if a.q != b.q:
        raise InvalidParameterError(f"cannot compare a q={a.q} profile with a q={b.q} profile")
    grams = set(a.counts) | set(b.counts)
    return sum(abs(a.counts.get(g, 0) - b.counts.get(g, 0)) for g in grams)


def count_unigrams(slp: Slp) -> ProfileTable:
    """Byte frequencies straight from terminal occurrence counts."""
    counts: dict[bytes, int] = {}
    for i in range(1, slp.n + 1):
        if slp.char[i] != TERMINAL:
            g = bytes([slp.char[i]])
            counts[g] = checked_add(counts.get(g, 0), slp.occs[i])
    return ProfileTable(1, counts)
