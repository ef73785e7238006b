"""Problem-file parsing and canonical serialization.

A problem file is a single JSON document with sections ``groups``,
``embeddings``, optional ``graph`` or ``target``, ``bounds`` and
``budget``.  Group kinds are tagged by a ``kind`` field; words are the
human-writable strings accepted by ``parse_word`` ("a b^-2", "1").

Serialization is canonical: key-sorted, two-space indented, trailing
newline.  Equal inputs produce byte-identical documents, which is what
makes certificate comparison and the problem hash meaningful.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .embeddings import Embedding
from .engine import Budget
from .graphs import GraphEdge, GraphOfGroups
from .groups import (
    AmalgamGroup,
    FiniteGroup,
    FreeAbelianGroup,
    FreeGroup,
    HnnGroup,
    SemidirectGroup,
    cyclic_group,
    symmetric_group,
    trivial_group,
)
from .hcf import AuditBounds
from .normal_forms import parse_word


class ProblemError(ValueError):
    """Schema or resolution failures, one message per offence."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class ProblemFile:
    raw: dict = field(repr=False)
    groups: dict = field(repr=False)
    embeddings: dict = field(repr=False)
    graph: GraphOfGroups | None
    target: str | None
    bounds: AuditBounds
    budget: Budget

    def canonical_text(self):
        return canonical_text(self.raw)

    def digest(self):
        return problem_hash(self.raw)

    def build_group(self):
        """The composite group the engine should act for."""
        from .graphs import choose_reduction_edge, reduce_edge

        if self.graph is not None:
            return reduce_edge(self.graph, choose_reduction_edge(self.graph)).gamma
        if self.target is not None:
            return self.groups[self.target]
        raise ProblemError(["problem declares neither a graph nor a target group"])


def canonical_text(data):
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def problem_hash(data):
    return hashlib.sha256(canonical_text(data).encode("utf-8")).hexdigest()


def parse_problem(path):
    """Load and validate a problem file; raises ProblemError with one
    message per schema violation."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ProblemError([f"cannot read {path}: {exc}"])
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError([f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"])
    return build_problem(data)


def build_problem(data):
    errors = []
    if not isinstance(data, dict):
        raise ProblemError(["problem document must be a JSON object"])
    group_specs = data.get("groups")
    if not isinstance(group_specs, dict) or not group_specs:
        raise ProblemError(["missing groups"])
    emb_specs = data.get("embeddings", {})
    if not isinstance(emb_specs, dict):
        raise ProblemError(["embeddings must be an object"])

    groups, embeddings = {}, {}
    pending_groups = dict(group_specs)
    pending_embs = dict(emb_specs)
    progress = True
    while progress and (pending_groups or pending_embs):
        progress = False
        for name in sorted(pending_groups):
            spec = pending_groups[name]
            try:
                handle = _try_build_group(name, spec, groups, embeddings)
            except _NotReady:
                continue
            except (ValueError, KeyError, TypeError) as exc:
                errors.append(f"groups.{name}: {exc}")
                del pending_groups[name]
                progress = True
                continue
            groups[name] = handle
            del pending_groups[name]
            progress = True
        for name in sorted(pending_embs):
            spec = pending_embs[name]
            try:
                emb = _try_build_embedding(name, spec, groups)
            except _NotReady:
                continue
            except (ValueError, KeyError, TypeError) as exc:
                errors.append(f"embeddings.{name}: {exc}")
                del pending_embs[name]
                progress = True
                continue
            embeddings[name] = emb
            del pending_embs[name]
            progress = True
    for name in sorted(pending_groups):
        errors.append(f"groups.{name}: unresolved references")
    for name in sorted(pending_embs):
        errors.append(f"embeddings.{name}: unresolved references")

    graph = None
    if "graph" in data and not errors:
        try:
            graph = _build_graph(data["graph"], groups, embeddings)
        except (ValueError, KeyError, TypeError) as exc:
            errors.append(f"graph: {exc}")

    target = data.get("target")
    if target is not None and target not in groups:
        errors.append(f"target: unknown group {target!r}")

    try:
        bounds = AuditBounds(**data.get("bounds", {}))
    except (TypeError, ValueError) as exc:
        errors.append(f"bounds: {exc}")
        bounds = AuditBounds()
    try:
        budget_spec = dict(data.get("budget", {}))
        budget = Budget(steps=budget_spec.pop("steps", 50), **budget_spec)
    except (TypeError, ValueError) as exc:
        errors.append(f"budget: {exc}")
        budget = Budget(steps=50)

    if errors:
        raise ProblemError(errors)
    return ProblemFile(raw=data, groups=groups, embeddings=embeddings,
                       graph=graph, target=target, bounds=bounds, budget=budget)


class _NotReady(Exception):
    pass


def _need_group(groups, name):
    if name not in groups:
        raise _NotReady
    return groups[name]


def _try_build_group(name, spec, groups, embeddings):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("group spec needs a kind")
    kind = spec["kind"]
    if kind == "free":
        return FreeGroup(name, tuple(spec["generators"]))
    if kind == "free_abelian":
        return FreeAbelianGroup(name, tuple(spec["generators"]))
    if kind == "trivial":
        return trivial_group(name)
    if kind == "cyclic":
        return cyclic_group(name, int(spec["order"]), spec["generator"])
    if kind == "symmetric":
        return symmetric_group(name, int(spec["degree"]))
    if kind == "finite":
        gens = spec["generators"]
        if not isinstance(gens, dict):
            raise ValueError("finite groups declare generators as a label-to-index object")
        labels = tuple(sorted(gens))
        return FiniteGroup(name, spec["table"], labels, tuple(gens[l] for l in labels))
    if kind == "semidirect":
        acting = _need_group(groups, spec["acting"])
        mats = {int(k): v for k, v in spec["matrices"].items()}
        matrices = [mats[i] for i in range(acting.order)]
        return SemidirectGroup(name, acting, tuple(spec["translations"]), matrices)
    if kind == "amalgam":
        e_left, e_right = spec["edge"]
        if e_left not in embeddings or e_right not in embeddings:
            raise _NotReady
        left = _need_group(groups, spec["left"])
        right = _need_group(groups, spec["right"])
        return AmalgamGroup(name, left, right, embeddings[e_left], embeddings[e_right])
    if kind == "hnn":
        e_r, e_s = spec["edge"]
        if e_r not in embeddings or e_s not in embeddings:
            raise _NotReady
        base = _need_group(groups, spec["base"])
        return HnnGroup(name, base, embeddings[e_r], embeddings[e_s],
                        stable_label=spec.get("stable", "t"))
    raise ValueError(f"unknown group kind {kind!r}")


def _try_build_embedding(name, spec, groups):
    if not isinstance(spec, dict):
        raise ValueError("embedding spec must be an object")
    source = _need_group(groups, spec["source"])
    target = _need_group(groups, spec["target"])
    images = [parse_word(target, w) for w in spec["images"]]
    return Embedding(name, source, target, images)


def _build_graph(spec, groups, embeddings):
    vertices = {vid: groups[gname] for vid, gname in spec["vertices"].items()}
    edges = []
    for e in spec["edges"]:
        edges.append(GraphEdge(
            id=e["id"],
            source=e["source"],
            range=e["range"],
            group=groups[e["group"]],
            source_map=embeddings[e["source_map"]],
            range_map=embeddings[e["range_map"]],
        ))
    return GraphOfGroups(spec.get("name", "graph"), vertices, edges, spec.get("base"))


# ---------------------------------------------------------------------------
# certificates on disk


def emit_certificate(cert, path):
    """Write the canonical serialization; equal certificates are
    byte-identical on disk."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_text(cert))


def load_certificate(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
