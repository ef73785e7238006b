#!/usr/bin/env python3
"""Graphs of groups: spanning trees, edge reduction, fundamental groups
and hypothesis validation.

Run:  python3 demos/04_graphs_of_groups.py
"""

from hightrans import fixtures, graphs
from hightrans.normal_forms import parse_word

print("== one geometric edge: the surface graph ==")
sg = fixtures.surface_graph()
print(f"  spanning tree: {graphs.spanning_tree(sg)}")
prob = graphs.reduce_edge(sg, "e0")
print(f"  removing e0 disconnects -> {prob.kind} of "
      f"{prob.gamma.left.name} and {prob.gamma.right.name}")

print("\n== a loop: the Gaussian-integer affine group ==")
gl = fixtures.gaussian_loop_graph()
prob = graphs.reduce_edge(gl, "e0")
print(f"  removing the loop keeps one vertex -> {prob.kind}, "
      f"stable letter {prob.gamma.stable_label!r}")
lhs = parse_word(prob.gamma, "e0 i e0^-1")
print(f"  e0 i e0^-1 = {lhs}  (the conjugated unit)")

print("\n== theta graph: two vertices, two geometric edges ==")
th = fixtures.theta_graph()
print(f"  spanning tree: {graphs.spanning_tree(th)}")
prob = graphs.reduce_edge(th, "e2")
print(f"  removing e2 -> {prob.kind} over a base of kind "
      f"{prob.gamma.base.kind}")
print(f"  e2 a2 e2^-1 = {parse_word(prob.gamma, 'e2 a2 e2^-1')}")
fg = graphs.fundamental_group(th)
print(f"  fundamental group handle: {fg.name} ({fg.kind})")

print("\n== hypothesis validation ==")
for name, graph in [("surface", fixtures.surface_graph()),
                    ("gaussian loop", fixtures.gaussian_loop_graph()),
                    ("planted finite vertex", fixtures.planted_finite_vertex_graph()),
                    ("planted finite-index edge",
                     fixtures.planted_finite_index_edge_graph())]:
    report = graphs.validate_main_hypotheses(graph)
    print(f"  {name:26s} -> {report['overall']}")
    for vid, entry in sorted(report["vertices"].items()):
        if not entry["infinite"]:
            print(f"      finite vertex group flagged: {vid} ({entry['group']})")
    for eid, entry in sorted(report["edges"].items()):
        for tag in ("source", "range"):
            verdict = entry[tag]["hcf"]
            if verdict.failed:
                print(f"      edge {eid}.{tag} fails the core-freeness audit")
