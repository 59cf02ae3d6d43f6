import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from gqprof.errors import InvalidParameterError
from gqprof.fingerprint import hash_string, make_params
from gqprof.graph import (
    build_from_string,
    graph_extend,
    graph_jump,
    graph_seek,
    graph_start,
    insert_relevant_substring,
)
from gqprof.oracle import naive_profile
from gqprof.slp import relevant_substring, rules_in_sq

from helpers import EXAMPLE_PROFILE, EXAMPLE_TEXT, example_slp, random_text

P3 = make_params(3, seed=1)


def decode(graph, text):
    """Edge table keyed by q-gram text, using brute-force hashes of every (q-1)-gram of ``text``."""
    w = graph.q - 1
    gram_of_fp = {hash_string(graph.params, text[i : i + w]): text[i : i + w] for i in range(len(text) - w + 1)}
    table = {}
    for v, fp in enumerate(graph.labels):
        for ch, target, count in graph.out_edges(v):
            gram = gram_of_fp[fp] + bytes([ch])
            assert graph.labels[target] == hash_string(graph.params, gram[1:])
            table[gram] = count
    return table


def test_start_node():
    graph, cursor = graph_start(P3, b"ab")
    assert graph.node_count == 1 and graph.edge_count == 0
    assert graph.labels[graph.start] == hash_string(P3, b"ab")
    assert cursor.node == graph.start
    again, _ = graph_start(P3, b"ab")
    assert again.labels == graph.labels


def test_start_q2():
    graph, _ = graph_start(make_params(2, 5), b"a")
    assert graph.node_count == 1


def test_start_wrong_length():
    with pytest.raises(InvalidParameterError):
        graph_start(P3, b"abc")


def test_extend_creates_edge():
    graph, cursor = graph_start(P3, b"ab")
    graph_extend(graph, cursor, ord("a"))
    ((ch, target, count),) = graph.out_edges(graph.start)
    assert (ch, count) == (ord("a"), 1)
    assert graph.labels[target] == hash_string(P3, b"ba")
    assert cursor.node == target
    assert cursor.window_fp == hash_string(P3, b"ba")
    assert bytes(cursor.window_chars) == b"ba"


def test_extend_is_additive():
    graph, cursor = graph_start(P3, b"ab")
    graph_extend(graph, cursor, ord("a"))
    c2 = graph_seek(graph, b"ab")
    graph_extend(graph, c2, ord("a"))
    assert graph.out_edges(graph.start)[0][2] == 2


def test_self_loop():
    graph, cursor = graph_start(P3, b"bb")
    graph_extend(graph, cursor, ord("b"))
    graph_extend(graph, cursor, ord("b"))
    assert graph.node_count == 1
    assert graph.out_edges(graph.start) == [(ord("b"), graph.start, 2)]


def test_extend_rejects_zero_weight():
    graph, cursor = graph_start(P3, b"ab")
    with pytest.raises(InvalidParameterError):
        graph_extend(graph, cursor, ord("a"), 0)


def test_seek_idempotent_and_creating():
    graph, _ = graph_start(P3, b"ab")
    assert graph_seek(graph, b"ab").node == graph.start
    assert graph.node_count == 1
    c = graph_seek(graph, b"bb")
    assert graph.node_count == 2 and graph.edge_count == 0
    assert c.window_fp == hash_string(P3, b"bb")
    with pytest.raises(InvalidParameterError):
        graph_seek(graph, b"b")


def test_seek_then_extend_matches_one_shot():
    one = build_from_string(P3, b"abab", 3)
    graph, _ = graph_start(P3, b"ab")
    c = graph_seek(graph, b"ab")
    for ch in b"ab":
        graph_extend(graph, c, ch)
    assert graph.labels == one.labels
    assert graph.edges == one.edges


def test_build_running_example():
    graph = build_from_string(P3, EXAMPLE_TEXT, 3)
    assert graph.node_count == 3 and graph.edge_count == 5
    assert {graph.labels[v] for v in range(3)} == {hash_string(P3, g) for g in (b"ab", b"ba", b"bb")}
    assert sorted(decode(graph, EXAMPLE_TEXT).items()) == EXAMPLE_PROFILE
    loops = [v for v in range(3) for _, t, _ in graph.out_edges(v) if t == v]
    assert loops == [graph.nodes[hash_string(P3, b"bb")]]


def test_build_single_letter():
    graph = build_from_string(make_params(2, 3), b"aaaa", 2)
    assert graph.node_count == 1
    assert graph.out_edges(0) == [(ord("a"), 0, 3)]


def test_build_errors():
    with pytest.raises(InvalidParameterError):
        build_from_string(P3, b"ab", 3)
    with pytest.raises(InvalidParameterError):
        build_from_string(P3, b"abcd", 4)


def test_build_matches_oracle_on_random_strings():
    rng = random.Random(12)
    for i in range(100):
        q = rng.choice([2, 3, 4, 6])
        text = random_text(rng, rng.randint(q, 300), rng.choice([1, 2, 4, 26]))
        graph = build_from_string(make_params(q, i), text, q)
        assert decode(graph, text) == naive_profile(text, q)
        assert graph.total_count() == len(text) - q + 1
        assert graph.edge_count == len(naive_profile(text, q))
        assert graph.node_count <= graph.edge_count + 1
        assert graph.conflicts == []


def test_insert_single_relevant_substring():
    graph, _ = graph_start(P3, b"ab")
    insert_relevant_substring(graph, b"abab", 1)
    assert decode(graph, b"abab") == {b"aba": 1, b"bab": 1}


def test_insert_running_example_relevant_substrings():
    slp = example_slp()
    graph, _ = graph_start(P3, b"ab")
    for x in rules_in_sq(slp, 3):
        insert_relevant_substring(graph, relevant_substring(slp, x, 3).text, 1)
    reference = build_from_string(P3, EXAMPLE_TEXT, 3)
    assert decode(graph, EXAMPLE_TEXT) == decode(reference, EXAMPLE_TEXT)
    assert graph.node_count == 3


def test_insert_weight_linearity():
    graph, _ = graph_start(P3, b"ab")
    insert_relevant_substring(graph, b"ababa", 3)
    assert decode(graph, b"ababa") == {b"aba": 6, b"bab": 3}


def test_insert_too_short():
    graph, _ = graph_start(P3, b"ab")
    with pytest.raises(InvalidParameterError):
        insert_relevant_substring(graph, b"ab", 1)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.binary(min_size=3, max_size=12), st.integers(1, 5)), min_size=1, max_size=6))
def test_insertion_invariants(insertions):
    graph, _ = graph_start(P3, insertions[0][0][:2])
    expected = Counter()
    grams = set()
    for r, w in insertions:
        insert_relevant_substring(graph, r, w)
        grams |= set(naive_profile(r, 2))
        for g, c in naive_profile(r, 3).items():
            expected[g] += c * w
    assert graph.edge_count == len(expected)
    assert graph.node_count == len(grams)
    assert graph.total_count() == sum(expected.values())


def _paths_ending_at(graph, length):
    """All byte strings spelled by edge paths of ``length`` edges, grouped by end node."""
    spelled = {v: set() for v in range(graph.node_count)}
    frontier = [(v, b"") for v in range(graph.node_count)]
    for _ in range(length):
        nxt = []
        for v, s in frontier:
            for ch, t, _ in graph.out_edges(v):
                nxt.append((t, s + bytes([ch])))
        frontier = nxt
    for v, s in frontier:
        spelled[v].add(s)
    return spelled


def test_path_property_on_small_graphs():
    rng = random.Random(5)
    for i in range(40):
        q = rng.choice([2, 3, 4])
        text = random_text(rng, rng.randint(q, 40), rng.choice([2, 3]))
        graph = build_from_string(make_params(q, i), text, q)
        for v, strings in _paths_ending_at(graph, q - 1).items():
            assert len(strings) <= 1
            if strings:
                assert strings == {graph.gram_of(v)}


def test_gram_reconstruction_and_jump():
    rng = random.Random(3)
    for i in range(30):
        q = rng.choice([2, 3, 5, 8])
        text = random_text(rng, rng.randint(q, 200), rng.choice([2, 4]))
        graph = build_from_string(make_params(q, i), text, q)
        for v in range(graph.node_count):
            gram = graph.gram_of(v)
            assert hash_string(graph.params, gram) == graph.labels[v]
            c = graph_jump(graph, v)
            assert c.window_fp == graph.labels[v] and bytes(c.window_chars) == gram
        assert graph.conflicts == []


def test_colliding_params_leave_conflict_evidence():
    params = make_params(3, 0, modulus=5)
    graph = build_from_string(params, b"abcdefg", 3)
    assert graph.node_count < 6


def test_dot_export():
    graph = build_from_string(P3, EXAMPLE_TEXT, 3)
    dot = graph.to_dot()
    assert dot.startswith("digraph qgram_graph {")
    assert dot.count("->") == 5
    assert "peripheries=2" in dot
    assert f'label="{graph.labels[graph.start]:016x}"' in dot
    assert '"b/2"' in dot
