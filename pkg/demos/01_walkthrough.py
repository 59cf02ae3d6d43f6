"""
Walking through one small grammar
=================================

Seven rules derive ``ababbbab``. We build the q = 3 profile both ways and
look at every intermediate structure along the way.
"""

from gqprof import build_from_string, build_profile_basic, build_profile_improved, make_params, parse_slp
from gqprof.profile import build_cstree
from gqprof.slp import relevant_substring, rules_in_sq

slp = parse_slp("""\
X1 = 'a'
X2 = 'b'
X3 = X1 X2
X4 = X2 X2
X5 = X3 X3
X6 = X4 X3
X7 = X5 X6
""")
q = 3
print("rule lengths:", slp.lengths[1:])
print("occurrences: ", slp.occs[1:])

# Only rules deriving at least q bytes own q-grams that straddle their split.
for x in rules_in_sq(slp, q):
    r = relevant_substring(slp, x, q)
    print(f"X{x}: relevant substring {r.text.decode()!r}, weight {slp.occs[x]}")

# The graph has a node per distinct 2-gram and an edge per distinct 3-gram.
params = make_params(q, seed=1)
graph = build_from_string(params, b"ababbbab", q)
print(f"\ngraph: {graph.node_count} nodes, {graph.edge_count} edges")
print(graph.to_dot())

# Flattening the graph into a tree keeps every edge exactly once.
tree = build_cstree(graph, b"ab")
for v in range(tree.size):
    print(f"cs-node {v}: root-ward {tree.rootward(v).decode()!r:8} counter {tree.counter[v]}")

# Both construction strategies yield the same table at different cost.
for builder in (build_profile_basic, build_profile_improved):
    profile, _, stats = builder(slp, q, params)
    print(f"\n{stats.algorithm}: read {stats.chars_decompressed} bytes")
    for gram, count in profile.enumerate():
        print(f"  {gram.decode()}  {count}")
