"""Deterministic construction of a faithful, highly transitive action.

The engine discharges two kinds of requirements against an intertwiner
state over X = Gamma x N:

  * transitivity(xs, ys): find witnesses in the factor/base groups, commit
    a fresh orbit batch that swaps default images, and return a mover g
    with pi(g) xs = ys pointwise;
  * faithfulness(g): reserve a fresh level, where pi acts through defaults
    alone, and freeze it so the non-fixed witness point survives forever.

Requirements are dovetailed in a fixed diagonal order, so every tuple and
every group element is eventually scheduled.  Witness searches enumerate
shortlex balls of growing radius up to a budget cap; an exhausted search
defers the requirement with a diagnostic instead of failing the run, which
is exactly the observable trace of a misjudged core-freeness hypothesis.

States only ever extend.  Postcondition replays pin every default orbit
they touch (recorded as auto commits), so once a requirement is discharged
it holds in all later states; certificates record enough to rebuild and
re-check everything without re-running any search.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

from .action import (IntertwinerState, LevelAction, Point, StateError,
                     allocate_fresh_orbits, evaluate_pi)
from .groups import UndecidedError
from .hcf import search_E_set
from .normal_forms import parse_word


logger = logging.getLogger(__name__)


class EngineError(RuntimeError):
    """An internal engine invariant failed; indicates a bug, not an input."""


class DeferredRequirement(Exception):
    def __init__(self, message):
        super().__init__(message)
        self.diagnostic = message


@dataclass(frozen=True)
class Budget:
    steps: int
    witness_radius: int = 64
    wall_clock: float | None = None

    def as_dict(self):
        return {"steps": self.steps, "witness_radius": self.witness_radius}


@dataclass(frozen=True)
class Requirement:
    kind: str
    payload: tuple


class EngineProblem:
    """An amalgam or HNN group wired up for the engine."""

    def __init__(self, gamma):
        if gamma.kind not in ("amalgam", "hnn"):
            raise ValueError(f"{gamma.name!r} is neither an amalgam nor an HNN group")
        self.gamma = gamma
        self.mode = gamma.kind
        if self.mode == "amalgam":
            sigma = gamma.sigma_embedding()
            self.action_left = LevelAction(gamma.left, lambda h: gamma.include(0, h), sigma)
            self.action_right = LevelAction(gamma.right, lambda h: gamma.include(1, h), sigma)
        else:
            self.action_pos = LevelAction(gamma.base, gamma.include, gamma.sigma_embedding(1))
            self.action_neg = LevelAction(gamma.base, gamma.include, gamma.sigma_embedding(-1))

    def new_state(self):
        return IntertwinerState.for_group(self.gamma)


def _check_tuples(xs, ys):
    if len(xs) != len(ys):
        raise ValueError("transitivity tuples must have the same length")
    if not xs:
        raise ValueError("transitivity tuples must be non-empty")
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        raise ValueError("tuple entries must be pairwise distinct")
    levels = {p.level for p in xs} | {p.level for p in ys}
    if len(levels) != 1:
        raise ValueError("tuple entries must share one level")
    return levels.pop()


def _committed_anchor_points(state):
    pts = []
    for srep in sorted(state.anchors, key=Point.sort_key):
        x0, y0 = state.anchors[srep]
        pts.append(x0)
        pts.append(y0)
    return pts


def extend_transitivity_amalgam(problem, state, xs, ys, witness_radius=64):
    """One extension step in amalgam mode.

    Searches g1, g2 in the left factor and h in the right factor so that
    the four families of orbits are fresh and pairwise disjoint, commits the
    four-way swap batch, and returns the mover g2 h g1.
    """
    level = _check_tuples(xs, ys)
    if level in state.frozen:
        raise ValueError(f"level {level} is frozen")
    gamma = problem.gamma
    n = len(xs)
    protect = _committed_anchor_points(state)
    f1 = protect + list(xs) + list(ys)
    g1 = search_E_set(problem.action_left, xs, f1, witness_radius)
    if g1 is None:
        raise DeferredRequirement(
            f"no left-factor witness for the source tuple within radius {witness_radius}")
    g1x = [problem.action_left.act(g1, x) for x in xs]
    f2 = f1 + g1x
    g2inv = search_E_set(problem.action_left, ys, f2, witness_radius)
    if g2inv is None:
        raise DeferredRequirement(
            f"no left-factor witness for the target tuple within radius {witness_radius}")
    g2y = [problem.action_left.act(g2inv, y) for y in ys]
    zs = allocate_fresh_orbits(state, n, avoid=f2 + g2y, level=level)
    f3 = f2 + g2y + list(zs)
    h = search_E_set(problem.action_right, zs, f3, witness_radius)
    if h is None:
        raise DeferredRequirement(
            f"no right-factor witness for the fresh classes within radius {witness_radius}")
    hz = [problem.action_right.act(h, z) for z in zs]

    batch = ([(g1x[k], zs[k]) for k in range(n)]
             + [(g2y[k], hz[k]) for k in range(n)]
             + [(zs[k], g1x[k]) for k in range(n)]
             + [(hz[k], g2y[k]) for k in range(n)])
    state.commit_batch(batch)
    g2 = g2inv.inverse()
    mover = gamma.include(0, g2) * gamma.include(1, h) * gamma.include(0, g1)
    auto = []
    for k in range(n):
        got = evaluate_pi(state, mover, xs[k], commit=True, log=auto)
        if got != ys[k]:
            raise EngineError(f"postcondition failed at entry {k}: {got!r} != {ys[k]!r}")
    witnesses = {"g1": str(g1), "g2": str(g2), "h": str(h)}
    return mover, witnesses, zs, batch, auto


def extend_transitivity_hnn(problem, state, xs, ys, witness_radius=64):
    """One extension step in HNN mode: mover g t h with a two-way swap batch."""
    level = _check_tuples(xs, ys)
    if level in state.frozen:
        raise ValueError(f"level {level} is frozen")
    gamma = problem.gamma
    n = len(xs)
    dst_protect, src_protect = [], []
    for srep in sorted(state.anchors, key=Point.sort_key):
        x0, y0 = state.anchors[srep]
        dst_protect.extend([y0, state.default_image(x0)])
        src_protect.extend([x0, state.default_preimage(y0)])
    ginv = search_E_set(problem.action_neg, ys, dst_protect + list(ys) + list(xs),
                        witness_radius)
    if ginv is None:
        raise DeferredRequirement(
            f"no witness for the target tuple within radius {witness_radius}")
    ginv_y = [problem.action_neg.act(ginv, y) for y in ys]
    g = ginv.inverse()
    f_src = (src_protect + list(xs) + list(ys)
             + [state.default_preimage(p) for p in ginv_y])
    h = search_E_set(problem.action_pos, xs, f_src, witness_radius)
    if h is None:
        raise DeferredRequirement(
            f"no witness for the source tuple within radius {witness_radius}")
    hx = [problem.action_pos.act(h, x) for x in xs]

    batch = ([(hx[k], ginv_y[k]) for k in range(n)]
             + [(state.default_preimage(ginv_y[k]), state.default_image(hx[k]))
                for k in range(n)])
    state.commit_batch(batch)
    mover = gamma.include(g) * gamma.stable() * gamma.include(h)
    auto = []
    for k in range(n):
        got = evaluate_pi(state, mover, xs[k], commit=True, log=auto)
        if got != ys[k]:
            raise EngineError(f"postcondition failed at entry {k}: {got!r} != {ys[k]!r}")
    witnesses = {"g": str(g), "h": str(h)}
    return mover, witnesses, [], batch, auto


def extend_transitivity(problem, state, xs, ys, witness_radius=64):
    if problem.mode == "amalgam":
        return extend_transitivity_amalgam(problem, state, xs, ys, witness_radius)
    return extend_transitivity_hnn(problem, state, xs, ys, witness_radius)


def ensure_faithful(problem, state, g):
    """Reserve and freeze a fresh level where pi(g) visibly moves a point."""
    if g.owner is not problem.gamma:
        raise ValueError("the element must live in the acting group")
    if g.is_identity:
        raise ValueError("faithfulness witnesses exist only for nontrivial elements")
    n = state.ceiling + 1
    while n in state.frozen:
        n += 1
    witness = Point(problem.gamma.identity(), n)
    image = evaluate_pi(state, g, witness)
    expected = Point(g, n)
    if image != expected or image == witness:
        raise EngineError(f"default evaluation at fresh level {n} is broken")
    state.freeze_level(n)
    return witness, image


# ---------------------------------------------------------------------------
# scheduling


def _distinct_tuples(n, total):
    """Ordered n-tuples of pairwise distinct positive integers with the
    given sum, lexicographically."""
    out = []
    cur = []
    used = set()

    def rec(slots, remaining):
        if slots == 0:
            if remaining == 0:
                out.append(tuple(cur))
            return
        for v in range(1, remaining - (slots - 1) + 1):
            if v in used:
                continue
            used.add(v)
            cur.append(v)
            rec(slots - 1, remaining - v)
            cur.pop()
            used.remove(v)

    rec(n, total)
    return out


def transitivity_descriptors():
    """All (n, source indices, target indices) descriptors, diagonally by
    total index weight; every tuple pair appears exactly once."""
    weight = 2
    while True:
        n = 1
        while n * (n + 1) <= weight:
            min_side = n * (n + 1) // 2
            for s in range(min_side, weight - min_side + 1):
                for it in _distinct_tuples(n, s):
                    for jt in _distinct_tuples(n, weight - s):
                        yield (n, it, jt)
            n += 1
        weight += 1


def requirement_stream(problem):
    """Alternate transitivity and faithfulness requirements forever."""
    trans = transitivity_descriptors()
    faith = (g for g in problem.gamma.iter_shortlex() if not g.is_identity)
    while True:
        yield Requirement("transitivity", next(trans))
        yield Requirement("faithfulness", (next(faith),))


class _PointTable:
    """Lazily materialized level-0 points in shortlex order, 1-indexed."""

    def __init__(self, gamma):
        self._iter = gamma.iter_shortlex()
        self._points = []

    def get(self, index):
        while len(self._points) < index:
            self._points.append(Point(next(self._iter), 0))
        return self._points[index - 1]


def _point_json(p):
    return [str(p.g), p.level]


def _parse_point(gamma, data):
    return Point(parse_word(gamma, data[0]), data[1])


def run_schedule(problem, budget, problem_key=""):
    """Dovetail requirements within the step budget and emit a certificate.

    The certificate lists every discharged requirement with its witnesses,
    batch commitments and auto-pinned orbits, plus the final state
    snapshot; equal runs produce equal certificates byte for byte.
    """
    if not isinstance(problem, EngineProblem):
        problem = EngineProblem(problem)
    state = problem.new_state()
    points = _PointTable(problem.gamma)
    stream = requirement_stream(problem)
    steps, deferred = [], []
    started = time.monotonic()
    for index in range(budget.steps):
        if budget.wall_clock is not None and time.monotonic() - started > budget.wall_clock:
            deferred.append({"index": index, "diagnostic": "wall clock budget exhausted"})
            break
        req = next(stream)
        if req.kind == "transitivity":
            n, it, jt = req.payload
            xs = [points.get(i) for i in it]
            ys = [points.get(j) for j in jt]
            try:
                mover, witnesses, zs, batch, auto = extend_transitivity(
                    problem, state, xs, ys, budget.witness_radius)
            except DeferredRequirement as exc:
                deferred.append({
                    "index": index, "kind": "transitivity",
                    "xs": [_point_json(p) for p in xs],
                    "ys": [_point_json(p) for p in ys],
                    "diagnostic": exc.diagnostic,
                })
                continue
            except UndecidedError as exc:
                deferred.append({
                    "index": index, "kind": "transitivity",
                    "xs": [_point_json(p) for p in xs],
                    "ys": [_point_json(p) for p in ys],
                    "diagnostic": f"membership oracle gave up: {exc}",
                })
                continue
            steps.append({
                "kind": "transitivity",
                "index": index,
                "n": n,
                "xs": [_point_json(p) for p in xs],
                "ys": [_point_json(p) for p in ys],
                "witnesses": witnesses,
                "zs": [_point_json(p) for p in zs],
                "batch": [[_point_json(a), _point_json(b)] for a, b in batch],
                "auto": [[_point_json(a), _point_json(b)] for a, b in auto],
                "mover": str(mover),
            })
            logger.info("step %d: transitivity n=%d discharged, mover %s",
                        index, n, mover)
        else:
            (g,) = req.payload
            witness, image = ensure_faithful(problem, state, g)
            steps.append({
                "kind": "faithfulness",
                "index": index,
                "element": str(g),
                "level": witness.level,
                "witness": _point_json(witness),
                "image": _point_json(image),
            })
            logger.info("step %d: faithfulness of %s witnessed at level %d",
                        index, g, witness.level)
    return {
        "format": 1,
        "problem": problem_key,
        "group": problem.gamma.name,
        "mode": problem.mode,
        "budget": budget.as_dict(),
        "steps": steps,
        "deferred": deferred,
        "final_state": _state_snapshot(state),
    }


def _state_snapshot(state):
    anchors = sorted(state.anchors.values(), key=lambda pair: pair[0].sort_key())
    return {
        "anchors": [[_point_json(a), _point_json(b)] for a, b in anchors],
        "frozen": sorted(state.frozen),
        "ceiling": state.ceiling,
    }


# ---------------------------------------------------------------------------
# verification


def verify_certificate_report(gamma, cert):
    """Rebuild the state from the recorded commitments and re-check every
    postcondition; returns (ok, reason of first failure)."""
    try:
        problem = EngineProblem(gamma)
    except ValueError as exc:
        return False, str(exc)
    state = problem.new_state()
    replayed = []
    try:
        for step in cert.get("steps", []):
            if step["kind"] == "transitivity":
                ok, reason = _verify_transitivity_step(problem, state, step)
            elif step["kind"] == "faithfulness":
                ok, reason = _verify_faithfulness_step(problem, state, step)
            else:
                return False, f"unknown step kind {step['kind']!r}"
            if not ok:
                return False, f"step {step.get('index')}: {reason}"
            replayed.append(step)
        for step in replayed:
            ok, reason = _recheck_postcondition(problem, state, step)
            if not ok:
                return False, f"persistence of step {step.get('index')}: {reason}"
        if _state_snapshot(state) != cert.get("final_state"):
            return False, "final state snapshot does not match the replayed state"
    except (UndecidedError, ValueError, KeyError, TypeError) as exc:
        return False, f"replay error: {exc}"
    return True, "ok"


def verify_certificate(gamma, cert):
    ok, _ = verify_certificate_report(gamma, cert)
    return ok


def _verify_transitivity_step(problem, state, step):
    gamma = problem.gamma
    xs = [_parse_point(gamma, p) for p in step["xs"]]
    ys = [_parse_point(gamma, p) for p in step["ys"]]
    n = len(xs)
    wit = step["witnesses"]
    if problem.mode == "amalgam":
        g1 = parse_word(gamma.left, wit["g1"])
        g2 = parse_word(gamma.left, wit["g2"])
        h = parse_word(gamma.right, wit["h"])
        zs = [_parse_point(gamma, p) for p in step["zs"]]
        g1x = [problem.action_left.act(g1, x) for x in xs]
        g2y = [problem.action_left.act(g2.inverse(), y) for y in ys]
        hz = [problem.action_right.act(h, z) for z in zs]
        expected_batch = ([(g1x[k], zs[k]) for k in range(n)]
                          + [(g2y[k], hz[k]) for k in range(n)]
                          + [(zs[k], g1x[k]) for k in range(n)]
                          + [(hz[k], g2y[k]) for k in range(n)])
        mover = gamma.include(0, g2) * gamma.include(1, h) * gamma.include(0, g1)
    else:
        g = parse_word(gamma.base, wit["g"])
        h = parse_word(gamma.base, wit["h"])
        ginv_y = [problem.action_neg.act(g.inverse(), y) for y in ys]
        hx = [problem.action_pos.act(h, x) for x in xs]
        expected_batch = ([(hx[k], ginv_y[k]) for k in range(n)]
                          + [(state.default_preimage(ginv_y[k]), state.default_image(hx[k]))
                             for k in range(n)])
        mover = gamma.include(g) * gamma.stable() * gamma.include(h)
    recorded_batch = [(_parse_point(gamma, a), _parse_point(gamma, b))
                      for a, b in step["batch"]]
    if recorded_batch != expected_batch:
        return False, "batch does not match the recorded witnesses"
    try:
        state.commit_batch(recorded_batch)
    except StateError as exc:
        return False, f"batch rejected: {exc}"
    if parse_word(gamma, step["mover"]) != mover:
        return False, "mover does not match the recorded witnesses"
    auto = []
    for k in range(n):
        got = evaluate_pi(state, mover, xs[k], commit=True, log=auto)
        if got != ys[k]:
            return False, f"mover does not carry entry {k} to its target"
    recorded_auto = [(_parse_point(gamma, a), _parse_point(gamma, b))
                     for a, b in step["auto"]]
    if auto != recorded_auto:
        return False, "auto-pinned orbits do not match the recording"
    if not state.check_equivariance():
        return False, "equivariance fails at a committed anchor"
    for a, b in recorded_batch:
        if a.level != b.level:
            return False, "a committed pair changes levels"
    return True, "ok"


def _verify_faithfulness_step(problem, state, step):
    gamma = problem.gamma
    g = parse_word(gamma, step["element"])
    if g.is_identity:
        return False, "faithfulness step for the identity"
    level = step["level"]
    expected = state.ceiling + 1
    while expected in state.frozen:
        expected += 1
    if level != expected:
        return False, f"level {level} is not the scheduled fresh level {expected}"
    witness = _parse_point(gamma, step["witness"])
    image = _parse_point(gamma, step["image"])
    if witness != Point(gamma.identity(), level):
        return False, "witness point is not the base point of the fresh level"
    got = evaluate_pi(state, g, witness)
    if got != image or got == witness:
        return False, "recorded image is not the evaluated image"
    try:
        state.freeze_level(level)
    except StateError as exc:
        return False, f"cannot freeze level {level}: {exc}"
    return True, "ok"


def _recheck_postcondition(problem, state, step):
    gamma = problem.gamma
    if step["kind"] == "transitivity":
        mover = parse_word(gamma, step["mover"])
        xs = [_parse_point(gamma, p) for p in step["xs"]]
        ys = [_parse_point(gamma, p) for p in step["ys"]]
        for x, y in zip(xs, ys):
            if evaluate_pi(state, mover, x) != y:
                return False, "mover postcondition lost"
        return True, "ok"
    g = parse_word(gamma, step["element"])
    witness = _parse_point(gamma, step["witness"])
    image = _parse_point(gamma, step["image"])
    got = evaluate_pi(state, g, witness)
    if got != image or got == witness:
        return False, "faithfulness witness lost"
    return True, "ok"
