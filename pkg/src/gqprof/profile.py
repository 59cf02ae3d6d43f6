"""CS-tree and the suffix trie built over it: the queryable q-gram profile.

The CS-tree stores each q-gram exactly once as a root-ward path: reading the
first q edge bytes upward from a node gives that q-gram reversed. The
profile is a compact trie over those root-ward strings, each truncated to q
bytes and ended by a unique terminator, so a q-gram is found by walking its
reversal from the trie root.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import InvalidParameterError
from .fingerprint import FingerprintParams, hash_string
from .graph import QGramGraph


@dataclass
class CsTree:
    """Parallel arrays indexed by tree node; node 0 is the root.

    ``char``, ``counter`` and ``label`` describe the edge into a node and the
    fingerprint copied from the graph. Nodes on the prepended (q-1) path have
    no counter and no label; the depth-first root has a label but no counter.
    """

    q: int
    parent: list[int] = field(default_factory=list)
    char: list[int] = field(default_factory=list)
    counter: list[int | None] = field(default_factory=list)
    label: list[int | None] = field(default_factory=list)
    df_root: int = 0
    conflicts: list[str] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.parent)

    def _add(self, parent: int, ch: int, counter: int | None, label: int | None) -> int:
        self.parent.append(parent)
        self.char.append(ch)
        self.counter.append(counter)
        self.label.append(label)
        return len(self.parent) - 1

    def rootward(self, node: int, limit: int | None = None) -> bytes:
        """Bytes on the path from ``node`` up to the root, at most ``limit`` of them."""
        out = bytearray()
        while node != 0 and (limit is None or len(out) < limit):
            out.append(self.char[node])
            node = self.parent[node]
        return bytes(out)


def build_cstree(graph: QGramGraph, first_gram: bytes) -> CsTree:
    """Depth-first tree of the graph in which every graph edge becomes a tree edge.

    The first visit of a graph node makes an inner tree node; reaching an
    already visited node makes a fresh leaf. Out-edges are followed in
    ascending byte order. A path spelling ``first_gram`` is then put above the
    depth-first root.
    """
    q = graph.q
    if len(first_gram) != q - 1:
        raise InvalidParameterError(f"first gram must have {q - 1} bytes")
    if hash_string(graph.params, first_gram) != graph.labels[graph.start]:
        raise InvalidParameterError("first gram does not match the graph's start node")

    tree = CsTree(q=q, conflicts=list(graph.conflicts))
    tree._add(-1, -1, None, None)
    node = 0
    for ch in first_gram[:-1]:
        node = tree._add(node, ch, None, None)
    root = tree._add(node, first_gram[-1], None, graph.labels[graph.start])
    tree.df_root = root

    visited = {graph.start}
    stack = [(graph.start, root, iter(graph.out_edges(graph.start)))]
    while stack:
        _, tnode, edges = stack[-1]
        nxt = next(edges, None)
        if nxt is None:
            stack.pop()
            continue
        ch, target, count = nxt
        child = tree._add(tnode, ch, count, graph.labels[target])
        if target not in visited:
            visited.add(target)
            stack.append((target, child, iter(graph.out_edges(target))))
    return tree


# ----------------------------------------------------------------------------
# Suffix trie


class TrieNode:
    __slots__ = ("children", "key", "start", "stop", "depth", "leaf")

    def __init__(self, key, start: int, stop: int, depth: int):
        self.children: dict[int, TrieNode] = {}
        self.key = key  # edge label is key[start:stop]
        self.start = start
        self.stop = stop
        self.depth = depth  # string depth, terminator included
        self.leaf: Leaf | None = None

    @property
    def label_len(self) -> int:
        return self.stop - self.start

    def symbol(self, offset: int) -> int:
        return self.key[self.start + offset]


@dataclass(frozen=True)
class Leaf:
    cs_node: int
    key: bytes  # root-ward string, truncated to q bytes
    fingerprint: int | None
    counter: int | None


def _terminator(i: int) -> int:
    return -1 - i


@dataclass(frozen=True)
class ProfileTable:
    """Plain q-gram frequency table, the exchange format between profiles."""

    q: int
    counts: Mapping[bytes, int]

    def total(self) -> int:
        return sum(self.counts.values())


class Profile:
    """Compact trie over the truncated root-ward strings of a CS-tree."""

    def __init__(self, q: int, params: FingerprintParams | None, conflicts=()):
        self.q = q
        self.params = params
        self.root = TrieNode((), 0, 0, 0)
        self.leaves: list[TrieNode] = []
        self.conflicts = list(conflicts)

    def _insert(self, key: bytes, leaf: Leaf) -> None:
        seq = tuple(key) + (_terminator(len(self.leaves)),)
        node = self.root
        i = 0
        while True:
            child = node.children.get(seq[i])
            if child is None:
                new = TrieNode(seq, i, len(seq), node.depth + len(seq) - i)
                new.leaf = leaf
                node.children[seq[i]] = new
                self.leaves.append(new)
                return
            j = 0
            n = child.stop - child.start
            label, base = child.key, child.start
            while j < n and seq[i + j] == label[base + j]:
                j += 1
            if j == n:
                node = child
                i += j
                continue
            mid = TrieNode(child.key, child.start, child.start + j, node.depth + j)
            child.start += j
            mid.children[child.symbol(0)] = child
            node.children[seq[i]] = mid
            new = TrieNode(seq, i + j, len(seq), mid.depth + len(seq) - i - j)
            new.leaf = leaf
            mid.children[seq[i + j]] = new
            self.leaves.append(new)
            return

    def iter_nodes(self) -> Iterator[tuple[TrieNode, TrieNode | None]]:
        """All ``(node, parent)`` pairs, depth first."""
        stack: list[tuple[TrieNode, TrieNode | None]] = [(self.root, None)]
        while stack:
            node, parent = stack.pop()
            yield node, parent
            for sym in sorted(node.children, reverse=True):
                stack.append((node.children[sym], node))

    def query(self, gram: bytes) -> int:
        """Frequency of ``gram``; looks at most q bytes plus one terminator."""
        q = self.q
        if len(gram) != q:
            raise InvalidParameterError(f"query must be a {q}-gram, got {len(gram)} bytes")
        node = self.root
        offset = 0
        for ch in reversed(gram):
            if offset == node.label_len:
                child = node.children.get(ch)
                if child is None:
                    return 0
                node, offset = child, 0
            if node.symbol(offset) != ch:
                return 0
            offset += 1
        if offset < node.label_len:
            if node.symbol(offset) >= 0:
                return 0
            return node.leaf.counter or 0
        # only reachable when two stored q-grams coincide, i.e. after a collision
        return sum(c.leaf.counter or 0 for s, c in node.children.items() if s < 0 and c.leaf)

    def enumerate(self) -> list[tuple[bytes, int]]:
        """All stored ``(q-gram, count)`` pairs, sorted by q-gram."""
        q = self.q
        out = []
        for node, _ in self.iter_nodes():
            leaf = node.leaf
            if leaf is not None and len(leaf.key) == q and leaf.counter is not None:
                out.append((leaf.key[::-1], leaf.counter))
        out.sort()
        return out

    def table(self) -> ProfileTable:
        return ProfileTable(self.q, dict(self.enumerate()))

    def internal_max_depth(self) -> int:
        return max((n.depth for n, _ in self.iter_nodes() if n.children), default=0)


def build_suffix_tree(cstree: CsTree, q: int, params: FingerprintParams | None = None) -> Profile:
    """Insert every CS-tree node's root-ward string, truncated to q bytes."""
    if q != cstree.q:
        raise InvalidParameterError(f"CS-tree was built for q={cstree.q}, not {q}")
    profile = Profile(q, params, cstree.conflicts)
    parent, char, label, counter = cstree.parent, cstree.char, cstree.label, cstree.counter
    keys = [b""] * cstree.size
    # parents always precede children, so each key extends its parent's key
    for v in range(1, cstree.size):
        keys[v] = bytes((char[v],)) + keys[parent[v]][: q - 1]
    for v in range(cstree.size):
        key = keys[v]
        profile._insert(key, Leaf(v, key, label[v], counter[v]))
    return profile


def empty_profile(q: int, params: FingerprintParams | None = None) -> Profile:
    return Profile(q, params)


def query(profile: Profile, gram: bytes) -> int:
    return profile.query(gram)


def enumerate_profile(profile: Profile) -> list[tuple[bytes, int]]:
    return profile.enumerate()


# ----------------------------------------------------------------------------
# Verification

COLLISION_FREE = "collision-free"
COLLISION_FOUND = "collision-found"


@dataclass(frozen=True)
class CollisionReport:
    verdict: str
    witness: tuple[Leaf, Leaf] | None = None
    conflicts: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.verdict == COLLISION_FREE

    def describe(self, q: int) -> str:
        if self.ok:
            return COLLISION_FREE
        parts = []
        if self.witness is not None:
            a, b = self.witness
            ga, gb = a.key[: q - 1][::-1], b.key[: q - 1][::-1]
            parts.append(f"{ga!r} and {gb!r} share fingerprint {a.fingerprint:x}")
        parts.extend(self.conflicts)
        return "; ".join(parts)


def verify_collision_free(profile: Profile, q: int | None = None) -> CollisionReport:
    """Las Vegas check of the fingerprints used to build ``profile``.

    Pass one gives each leaf its shallowest ancestor of string depth at least
    q - 1, which identifies the leaf's (q-1)-byte prefix. Pass two files
    leaves by fingerprint; one fingerprint under two such ancestors means two
    different (q-1)-grams hashed alike. Collisions noticed while the graph
    was built are reported as well.
    """
    q = profile.q if q is None else q
    if q != profile.q:
        raise InvalidParameterError(f"profile was built for q={profile.q}, not {q}")
    need = q - 1
    anchor_of: dict[int, TrieNode] = {}
    stack: list[tuple[TrieNode, TrieNode | None]] = [(profile.root, None)]
    while stack:
        node, anchor = stack.pop()
        if anchor is None and node.depth >= need:
            anchor = node
        if node.leaf is not None and anchor is not None:
            anchor_of[id(node)] = anchor
        for child in node.children.values():
            stack.append((child, anchor))

    seen: dict[int, tuple[TrieNode, Leaf]] = {}
    witness = None
    for leaf_node in profile.leaves:
        leaf = leaf_node.leaf
        if leaf.fingerprint is None or len(leaf.key) < need:
            continue
        anchor = anchor_of[id(leaf_node)]
        prev = seen.get(leaf.fingerprint)
        if prev is None:
            seen[leaf.fingerprint] = (anchor, leaf)
        elif prev[0] is not anchor:
            witness = (prev[1], leaf)
            break
    conflicts = tuple(profile.conflicts)
    if witness is None and not conflicts:
        return CollisionReport(COLLISION_FREE)
    return CollisionReport(COLLISION_FOUND, witness, conflicts)


# ----------------------------------------------------------------------------
# TSV export

TSV_MAGIC = "gqprof v1"


def escape_gram(gram: bytes) -> str:
    return "".join(chr(c) if 0x20 <= c < 0x7F and c != 0x5C else f"\\x{c:02x}" for c in gram)


def unescape_gram(text: str) -> bytes:
    out = bytearray()
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\\":
            if text[i + 1 : i + 2] != "x" or len(text) < i + 4:
                raise InvalidParameterError(f"bad escape in {text!r}")
            try:
                out.append(int(text[i + 2 : i + 4], 16))
            except ValueError:
                raise InvalidParameterError(f"bad escape in {text!r}") from None
            i += 4
        else:
            if ord(c) > 255:
                raise InvalidParameterError(f"non-byte character in {text!r}")
            out.append(ord(c))
            i += 1
    return bytes(out)


def write_profile_tsv(table: ProfileTable) -> str:
    lines = [f"# {TSV_MAGIC} q={table.q} total={table.total()}"]
    for gram in sorted(table.counts):
        lines.append(f"{escape_gram(gram)}\t{table.counts[gram]}")
    return "\n".join(lines) + "\n"


def read_profile_tsv(text: str) -> ProfileTable:
    lines = text.splitlines()
    if not lines or not lines[0].startswith(f"# {TSV_MAGIC} "):
        raise InvalidParameterError("missing gqprof header line")
    fields = dict(f.split("=", 1) for f in lines[0][len(f"# {TSV_MAGIC} "):].split())
    try:
        q = int(fields["q"])
        total = int(fields["total"])
    except (KeyError, ValueError):
        raise InvalidParameterError(f"bad header {lines[0]!r}") from None
    counts: dict[bytes, int] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        try:
            g, c = line.split("\t")
            count = int(c)
        except ValueError:
            raise InvalidParameterError(f"line {lineno}: expected <gram>TAB<count>") from None
        gram = unescape_gram(g)
        if len(gram) != q:
            raise InvalidParameterError(f"line {lineno}: gram length {len(gram)} != q={q}")
        counts[gram] = count
    table = ProfileTable(q, counts)
    if table.total() != total:
        raise InvalidParameterError(f"header total {total} != sum of counts {table.total()}")
    return table
