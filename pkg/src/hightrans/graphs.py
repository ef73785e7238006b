"""Finite graphs of groups: hypothesis validation and edge reduction.

A graph of groups carries one group per vertex and, per geometric edge, an
edge group with a monomorphism into each endpoint group (the inverse edge
is implicit and shares the edge group).  Removing one geometric edge
either keeps the graph connected, in which case the fundamental group is
an HNN extension of the smaller graph's fundamental group with the edge as
stable letter, or splits it in two, giving an amalgam of the two sides
over the edge group.  Iterating over non-tree edges first and tree edges
last realizes the fundamental group as nested composite handles whose
normal forms are exactly the relations of the presentation (tree edges
collapse, non-tree edges conjugate).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .embeddings import Embedding
from .groups import AmalgamGroup, HnnGroup
from .hcf import AuditBounds, audit_hcf, certify_structural


@dataclass(frozen=True)
class GraphEdge:
    id: str
    source: str
    range: str
    group: object
    source_map: Embedding
    range_map: Embedding


class GraphOfGroups:
    def __init__(self, name, vertices, edges, base=None):
        self.name = name
        self.vertices = dict(vertices)
        self.edges = list(edges)
        if not self.vertices:
            raise ValueError(f"{name}: a graph of groups needs at least one vertex")
        self.base = base if base is not None else next(iter(self.vertices))
        if self.base not in self.vertices:
            raise ValueError(f"{name}: base vertex {self.base!r} is not a vertex")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise ValueError(f"{name}: duplicate edge ids")
        for e in self.edges:
            if e.source not in self.vertices or e.range not in self.vertices:
                raise ValueError(f"{name}: edge {e.id!r} touches unknown vertices")
            if e.source_map.source is not e.group or e.range_map.source is not e.group:
                raise ValueError(f"{name}: edge {e.id!r} maps must start at the edge group")
            if e.source_map.target is not self.vertices[e.source]:
                raise ValueError(f"{name}: edge {e.id!r} source map lands in the wrong group")
            if e.range_map.target is not self.vertices[e.range]:
                raise ValueError(f"{name}: edge {e.id!r} range map lands in the wrong group")
        if self._components() != 1:
            raise ValueError(f"{name}: the underlying graph must be connected")

    def _components(self, skip=()):
        seen = set()
        comps = 0
        for start in self.vertices:
            if start in seen:
                continue
            comps += 1
            stack = [start]
            seen.add(start)
            while stack:
                v = stack.pop()
                for e in self.edges:
                    if e.id in skip:
                        continue
                    for a, b in ((e.source, e.range), (e.range, e.source)):
                        if a == v and b not in seen:
                            seen.add(b)
                            stack.append(b)
        return comps

    def edge(self, edge_id):
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise ValueError(f"{self.name}: no edge {edge_id!r}")


def spanning_tree(graph):
    """Edge ids of the breadth-first spanning tree from the base vertex,
    edges considered in declaration order."""
    seen = {graph.base}
    tree = []
    frontier = [graph.base]
    while frontier:
        nxt = []
        for v in frontier:
            for e in graph.edges:
                for a, b in ((e.source, e.range), (e.range, e.source)):
                    if a == v and b not in seen:
                        seen.add(b)
                        tree.append(e.id)
                        nxt.append(b)
        frontier = nxt
    return tree


@dataclass
class AmalgamProblem:
    gamma: AmalgamGroup
    edge_id: str
    left_vertices: tuple
    right_vertices: tuple
    inclusions: dict = field(repr=False, default_factory=dict)

    kind = "amalgam"


@dataclass
class HNNProblem:
    gamma: HnnGroup
    edge_id: str
    inclusions: dict = field(repr=False, default_factory=dict)

    kind = "hnn"


def _subgraph(graph, vertices, skip_edge, base):
    vs = {v: graph.vertices[v] for v in vertices}
    es = [e for e in graph.edges
          if e.id != skip_edge and e.source in vs and e.range in vs]
    return GraphOfGroups(f"{graph.name}|{base}", vs, es, base)


def _compose_into(inner, include, name, target):
    images = [include(inner.apply(g)) for g in inner.source.generators()]
    return Embedding(name, inner.source, target, images, check=False)


def reduce_edge(graph, edge_id):
    """Remove one geometric edge and present the fundamental group.

    Connected remainder: HNN over the remainder's fundamental group, with
    the range map giving the conjugated subgroup and the source map its
    image.  Disconnected remainder: amalgam of the two components over the
    edge group.
    """
    e = graph.edge(edge_id)
    remaining = [x for x in graph.edges if x.id != edge_id]
    comp = _reach(graph, e.source, remaining)
    if e.range in comp:
        sub = _subgraph(graph, graph.vertices, edge_id, graph.base)
        base_handle, incl = _fundamental_group(sub)
        e_r = _compose_into(e.range_map, incl[e.range], f"{edge_id}.r", base_handle)
        e_s = _compose_into(e.source_map, incl[e.source], f"{edge_id}.s", base_handle)
        gamma = HnnGroup(f"hnn[{graph.name}:{edge_id}]", base_handle, e_r, e_s,
                         stable_label=edge_id)
        inclusions = {v: _chain(incl[v], gamma.include) for v in graph.vertices}
        return HNNProblem(gamma, edge_id, inclusions)
    left_vs = sorted(comp)
    right_vs = sorted(set(graph.vertices) - comp)
    left_sub = _subgraph(graph, left_vs, edge_id, e.source)
    right_sub = _subgraph(graph, right_vs, edge_id, e.range)
    left_handle, incl_l = _fundamental_group(left_sub)
    right_handle, incl_r = _fundamental_group(right_sub)
    e_left = _compose_into(e.source_map, incl_l[e.source], f"{edge_id}.l", left_handle)
    e_right = _compose_into(e.range_map, incl_r[e.range], f"{edge_id}.rr", right_handle)
    gamma = AmalgamGroup(f"amalgam[{graph.name}:{edge_id}]",
                         left_handle, right_handle, e_left, e_right)
    inclusions = {}
    for v in left_vs:
        inclusions[v] = _chain(incl_l[v], lambda x: gamma.include(0, x))
    for v in right_vs:
        inclusions[v] = _chain(incl_r[v], lambda x: gamma.include(1, x))
    return AmalgamProblem(gamma, edge_id, tuple(left_vs), tuple(right_vs), inclusions)


def _chain(first, second):
    return lambda x: second(first(x))


def _reach(graph, start, edges):
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for e in edges:
            for a, b in ((e.source, e.range), (e.range, e.source)):
                if a == v and b not in seen:
                    seen.add(b)
                    stack.append(b)
    return seen


def _fundamental_group(graph):
    """(handle, inclusion map per vertex) by iterated edge reduction:
    non-tree edges first (HNN layers), then tree edges (amalgams)."""
    if not graph.edges:
        (vid, handle), = graph.vertices.items()
        return handle, {vid: lambda x: x}
    tree = set(spanning_tree(graph))
    non_tree = [e for e in graph.edges if e.id not in tree]
    target = non_tree[0] if non_tree else graph.edges[0]
    problem = reduce_edge(graph, target.id)
    return problem.gamma, problem.inclusions


def fundamental_group(graph):
    """The fundamental group as nested amalgam / HNN handles."""
    handle, _ = _fundamental_group(graph)
    return handle


def choose_reduction_edge(graph):
    """First geometric edge whose removal disconnects (the amalgam form is
    cheaper downstream), else the first edge."""
    if not graph.edges:
        raise ValueError(f"{graph.name}: no edges to reduce")
    for e in graph.edges:
        remaining = [x for x in graph.edges if x.id != e.id]
        if e.range not in _reach(graph, e.source, remaining):
            return e.id
    return graph.edges[0].id


def _is_infinite(handle):
    kind = handle.kind
    if kind == "finite":
        return False
    if kind in ("free", "free_abelian", "semidirect"):
        return True
    if kind == "hnn":
        return True
    if kind == "amalgam":
        if _is_infinite(handle.left) or _is_infinite(handle.right):
            return True
        return _finite_proper(handle.edge_left) and _finite_proper(handle.edge_right)
    raise ValueError(f"unknown kind {kind!r}")


def _finite_proper(emb):
    """Whether a finite-target embedding misses at least one element."""
    for g in emb.target.elements():
        if not emb.contains(g):
            return True
    return False


def validate_main_hypotheses(graph, bounds=None):
    """Per-vertex infiniteness and per-edge core-freeness diagnostics.

    Vertex infiniteness is structural; each edge map gets the bounded
    core-freeness audit plus the structural certificate as corroboration.
    The overall status is fail if anything fails, undecided if anything is
    undecided, else pass.
    """
    bounds = bounds or AuditBounds()
    report = {"vertices": {}, "edges": {}, "graph": {}}
    statuses = []
    for vid, handle in sorted(graph.vertices.items()):
        infinite = _is_infinite(handle)
        report["vertices"][vid] = {
            "group": handle.name,
            "infinite": infinite,
            "status": "pass" if infinite else "fail",
        }
        statuses.append(report["vertices"][vid]["status"])
    for e in graph.edges:
        entry = {}
        for tag, emb in (("source", e.source_map), ("range", e.range_map)):
            hcf_verdict = audit_hcf(emb, bounds)
            structural = certify_structural(emb, bounds)
            entry[tag] = {
                "embedding": emb.name,
                "hcf": hcf_verdict,
                "structural": structural,
            }
            statuses.append(hcf_verdict.status)
        report["edges"][e.id] = entry
    report["graph"]["nontrivial"] = bool(graph.edges)
    overall = "pass"
    if "fail" in statuses:
        overall = "fail"
    elif "undecided" in statuses:
        overall = "undecided"
    report["overall"] = overall
    return report
