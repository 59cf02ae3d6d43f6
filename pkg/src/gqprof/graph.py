"""The q-gram graph: one node per distinct (q-1)-gram, one edge per distinct q-gram.

Nodes are keyed by the fingerprint of their (q-1)-gram only; the gram text is
never stored. Each node instead remembers the node it was first reached from
and the byte that reached it, which is enough to rebuild its gram in O(q)
steps when the construction cursor has to jump to it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import InvalidParameterError, checked_add
from .fingerprint import FingerprintParams, hash_string, roll

NO_NODE = -1


@dataclass
class QGramGraph:
    params: FingerprintParams
    q: int
    nodes: dict[int, int] = field(default_factory=dict)  # fingerprint -> node id
    labels: list[int] = field(default_factory=list)  # node id -> fingerprint
    edges: list[dict[int, list[int]]] = field(default_factory=list)  # node -> {byte: [target, count]}
    pred: list[int] = field(default_factory=list)
    last: list[int] = field(default_factory=list)
    start: int = NO_NODE
    first_gram: bytes = b""
    # evidence of fingerprint collisions seen during construction
    conflicts: list[str] = field(default_factory=list)

    @property
    def node_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return sum(len(e) for e in self.edges)

    def total_count(self) -> int:
        return sum(c for out in self.edges for _, c in out.values())

    def out_edges(self, node: int) -> list[tuple[int, int, int]]:
        """``(byte, target, counter)`` triples in ascending byte order."""
        out = self.edges[node]
        return [(ch, out[ch][0], out[ch][1]) for ch in sorted(out)]

    def _node_for(self, fp: int, pred: int, last: int) -> int:
        node = self.nodes.get(fp)
        if node is None:
            node = len(self.labels)
            self.nodes[fp] = node
            self.labels.append(fp)
            self.edges.append({})
            self.pred.append(pred)
            self.last.append(last)
        return node

    def gram_of(self, node: int) -> bytes:
        """Rebuild the (q-1)-gram a node was created for.

        Walks creation back-links; the chain ends at the start node, whose
        gram is kept. Nodes created by :func:`graph_seek` end a chain without
        a known gram and cannot be rebuilt.
        """
        w = self.q - 1
        tail = bytearray()
        v = node
        while len(tail) < w and v != self.start:
            if self.pred[v] == NO_NODE:
                raise InvalidParameterError(f"node {node} has no recoverable gram")
            tail.append(self.last[v])
            v = self.pred[v]
        tail.reverse()
        if len(tail) == w:
            return bytes(tail)
        return self.first_gram[len(tail):] + bytes(tail)

    def to_dot(self, name: str = "qgram_graph") -> str:
        lines = [f"digraph {name} {{", "  node [shape=box];"]
        for v, fp in enumerate(self.labels):
            extra = ", peripheries=2" if v == self.start else ""
            lines.append(f'  n{v} [label="{fp:016x}"{extra}];')
        for v in range(self.node_count):
            for ch, target, count in self.out_edges(v):
                lines.append(f'  n{v} -> n{target} [label="{_dot_char(ch)}/{count}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_char(ch: int) -> str:
    if ch in (0x22, 0x5C) or not 0x20 <= ch < 0x7F:
        return f"\\\\x{ch:02x}"
    return chr(ch)


@dataclass
class Cursor:
    node: int
    window_fp: int
    window_chars: deque


def graph_start(params: FingerprintParams, seed_gram: bytes) -> tuple[QGramGraph, Cursor]:
    q = params.q
    if len(seed_gram) != q - 1:
        raise InvalidParameterError(f"start gram must have {q - 1} bytes, got {len(seed_gram)}")
    graph = QGramGraph(params=params, q=q, first_gram=bytes(seed_gram))
    fp = hash_string(params, seed_gram)
    graph.start = graph._node_for(fp, NO_NODE, seed_gram[-1])
    return graph, Cursor(graph.start, fp, deque(seed_gram, maxlen=q - 1))


def graph_extend(graph: QGramGraph, cursor: Cursor, ch: int, weight: int = 1) -> Cursor:
    """Append one byte and add ``weight`` to the q-gram it closes.

    Missing nodes and edges are created. The cursor is advanced in place
    and returned.
    """
    if weight < 1:
        raise InvalidParameterError(f"weight must be >= 1, got {weight}")
    window = cursor.window_chars
    fp = roll(graph.params, cursor.window_fp, window[0], ch)
    source = cursor.node
    target = graph._node_for(fp, source, ch)
    out = graph.edges[source]
    edge = out.get(ch)
    if edge is None:
        out[ch] = [target, weight]
    else:
        if edge[0] != target:
            labels = graph.labels
            graph.conflicts.append(
                f"edge {labels[source]:x} --{ch:#04x}--> stored {labels[edge[0]]:x}, rolled {fp:x}"
            )
        edge[1] = checked_add(edge[1], weight, "edge counter")
    window.append(ch)
    cursor.node = target
    cursor.window_fp = fp
    return cursor


def graph_seek(graph: QGramGraph, gram: bytes) -> Cursor:
    if len(gram) != graph.q - 1:
        raise InvalidParameterError(f"gram must have {graph.q - 1} bytes, got {len(gram)}")
    fp = hash_string(graph.params, gram)
    node = graph._node_for(fp, NO_NODE, gram[-1])
    return Cursor(node, fp, deque(gram, maxlen=graph.q - 1))


def graph_jump(graph: QGramGraph, node: int) -> Cursor:
    """Cursor at an existing node, its window rebuilt from creation back-links.

    A rebuilt window that does not hash to the node's label proves a
    fingerprint collision and is recorded as a conflict.
    """
    gram = graph.gram_of(node)
    fp = graph.labels[node]
    rehashed = hash_string(graph.params, gram)
    if rehashed != fp:
        graph.conflicts.append(f"node {fp:x}: rebuilt gram {gram!r} hashes to {rehashed:x}")
    return Cursor(node, fp, deque(gram, maxlen=graph.q - 1))


def build_from_string(params: FingerprintParams, text: bytes, q: int) -> QGramGraph:
    if q != params.q:
        raise InvalidParameterError(f"params are for q={params.q}, not q={q}")
    if len(text) < q:
        raise InvalidParameterError(f"text of length {len(text)} has no {q}-grams")
    graph, cursor = graph_start(params, text[: q - 1])
    for ch in text[q - 1:]:
        graph_extend(graph, cursor, ch, 1)
    return graph


def insert_relevant_substring(graph: QGramGraph, r: bytes, weight: int) -> Cursor:
    q = graph.q
    if len(r) < q:
        raise InvalidParameterError(f"relevant substring shorter than q={q}: {r!r}")
    cursor = graph_seek(graph, r[: q - 1])
    for ch in r[q - 1:]:
        graph_extend(graph, cursor, ch, weight)
    return cursor
