"""The countable set X = Gamma x N, its free action, and the partially
built intertwiner.

Points are (group element, level) pairs; every group element acts freely
by left multiplication on the first coordinate, so orbits and their
canonical representatives reduce to coset decompositions in Gamma.

The intertwiner is a bijection of X held as a finite equivariant rewiring
over a total default (left multiplication by the stable letter in HNN
mode, the identity in amalgam mode).  Each committed orbit stores one
anchor pair; the equivariance law reconstructs the rest of the orbit, so
the map is exact and O(1) per orbit.  Rewirings only ever extend: a batch
permutes the default images of its source orbits, which keeps the total
map a bijection at every instant, and frozen levels are never committed so
evaluations there stay default forever.
"""

from __future__ import annotations

from .groups import OwnerMismatch


class Point:
    """An element of X = Gamma x N."""

    __slots__ = ("g", "level", "_hash")

    def __init__(self, g, level):
        if level < 0:
            raise ValueError("levels are natural numbers")
        self.g = g
        self.level = level
        self._hash = None

    def translate(self, h):
        """The free action: h . (g, n) = (hg, n)."""
        return Point(h * self.g, self.level)

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return self.level == other.level and self.g == other.g

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.g, self.level))
        return self._hash

    def sort_key(self):
        return (self.level, self.g.sort_key())

    def __repr__(self):
        return f"({self.g!s}, {self.level})"


def orbit_rep(embedding, point):
    """Canonical representative of the orbit (image subgroup) . point."""
    return Point(embedding.rep(point.g), point.level)


def same_orbit(embedding, a, b):
    return a.level == b.level and orbit_rep(embedding, a) == orbit_rep(embedding, b)


class LevelAction:
    """A group acting on X = Gamma x N through an inclusion, together with
    the subgroup whose orbits the searches reason about."""

    def __init__(self, group, include, sigma):
        self.group = group
        self.include = include
        self.sigma = sigma

    def act(self, h, point):
        return point.translate(self.include(h))

    def orbit_rep(self, point):
        return orbit_rep(self.sigma, point)


def plain_level_action(sigma_embedding):
    """H acting on H x N with Sigma-orbits from the given embedding."""
    return LevelAction(sigma_embedding.target, lambda h: h, sigma_embedding)


class StateError(ValueError):
    """A rewiring request violated a state invariant."""


class IntertwinerState:
    """The partially built intertwiner w.

    ``anchors`` maps a committed source-orbit representative to its anchor
    pair (x0, y0); ``dst_index`` is the inverse view keyed by target-orbit
    representatives.  Equivariance law: w(s . x0) = twist(s) . y0 where
    twist conjugates by the stable letter in HNN mode and is the identity
    in amalgam mode.
    """

    def __init__(self, gamma, mode, sigma_src, sigma_dst, stable=None):
        if mode not in ("amalgam", "hnn"):
            raise ValueError(f"unknown mode {mode!r}")
        if mode == "hnn" and stable is None:
            raise ValueError("hnn mode needs the stable letter")
        self.gamma = gamma
        self.mode = mode
        self.sigma_src = sigma_src
        self.sigma_dst = sigma_dst
        self.stable = stable
        self.anchors = {}
        self.dst_index = {}
        self.frozen = set()
        self.ceiling = 0

    @classmethod
    def for_group(cls, gamma):
        if gamma.kind == "amalgam":
            sig = gamma.sigma_embedding()
            return cls(gamma, "amalgam", sig, sig)
        if gamma.kind == "hnn":
            return cls(gamma, "hnn", gamma.sigma_embedding(1), gamma.sigma_embedding(-1),
                       stable=gamma.stable())
        raise ValueError(f"{gamma.name!r} is neither an amalgam nor an HNN group")

    # -- structure ----------------------------------------------------------

    def twist(self, s):
        if self.mode == "amalgam":
            return s
        return self.stable * s * self.stable.inverse()

    def untwist(self, s):
        if self.mode == "amalgam":
            return s
        return self.stable.inverse() * s * self.stable

    def default_image(self, x):
        """t . x in hnn mode, x itself in amalgam mode."""
        if self.mode == "amalgam":
            return x
        return x.translate(self.stable)

    def default_preimage(self, x):
        if self.mode == "amalgam":
            return x
        return x.translate(self.stable.inverse())

    def src_orbit(self, x):
        return orbit_rep(self.sigma_src, x)

    def dst_orbit(self, x):
        return orbit_rep(self.sigma_dst, x)

    def is_committed(self, x):
        return self.src_orbit(x) in self.anchors

    # -- evaluation -----------------------------------------------------------

    def evaluate(self, x, inverse=False, commit=False, log=None):
        """w(x) (or its inverse image); a bijection of X for every state.

        With ``commit=True`` an untouched, unfrozen orbit is pinned to its
        default image before evaluating, so the value can never change in a
        later state; the pinned pair is appended to ``log``.
        """
        if not inverse:
            rep = self.src_orbit(x)
            pair = self.anchors.get(rep)
            if pair is None:
                if commit and x.level not in self.frozen:
                    pair = (rep, self.default_image(rep))
                    self.commit_pair(*pair)
                    if log is not None:
                        log.append(pair)
                else:
                    return self.default_image(x)
            x0, y0 = pair
            s = x.g * x0.g.inverse()
            return Point(self.twist(s) * y0.g, y0.level)
        rep = self.dst_orbit(x)
        pair = self.dst_index.get(rep)
        if pair is None:
            pre = self.default_preimage(x)
            if commit and pre.level not in self.frozen:
                srep = self.src_orbit(pre)
                pair = (srep, self.default_image(srep))
                self.commit_pair(*pair)
                if log is not None:
                    log.append(pair)
            else:
                return pre
        x0, y0 = pair
        s = x.g * y0.g.inverse()
        return Point(self.untwist(s) * x0.g, x0.level)

    # -- mutation -------------------------------------------------------------

    def commit_pair(self, x0, y0):
        self.commit_batch([(x0, y0)])

    def commit_batch(self, pairs):
        """Extend the rewiring by a batch of anchor pairs.

        The batch must consist of fresh source orbits whose default images
        are exactly the target orbits (as a set), so the total map stays a
        bijection; frozen levels are untouchable.
        """
        src_reps, dst_reps, default_reps = [], [], []
        for x0, y0 in pairs:
            if x0.g.owner is not self.gamma or y0.g.owner is not self.gamma:
                raise OwnerMismatch("anchor points must live in the acting group")
            if x0.level in self.frozen or y0.level in self.frozen:
                raise StateError(f"level {x0.level if x0.level in self.frozen else y0.level} "
                                 "is frozen for faithfulness witnesses")
            srep = self.src_orbit(x0)
            drep = self.dst_orbit(y0)
            if srep in self.anchors:
                raise StateError(f"source orbit of {x0!r} is already committed")
            if drep in self.dst_index:
                raise StateError(f"target orbit of {y0!r} is already committed")
            src_reps.append(srep)
            dst_reps.append(drep)
            default_reps.append(self.dst_orbit(self.default_image(x0)))
        if len(set(src_reps)) != len(src_reps):
            raise StateError("batch source orbits must be pairwise distinct")
        if len(set(dst_reps)) != len(dst_reps):
            raise StateError("batch target orbits must be pairwise distinct")
        if set(dst_reps) != set(default_reps):
            raise StateError("batch must permute the default images of its sources")
        for (x0, y0), srep, drep in zip(pairs, src_reps, dst_reps):
            self.anchors[srep] = (x0, y0)
            self.dst_index[drep] = (x0, y0)
            self.ceiling = max(self.ceiling, x0.level, y0.level)

    def freeze_level(self, n):
        if any(rep.level == n for rep in self.anchors):
            raise StateError(f"level {n} already carries committed orbits")
        if any(rep.level == n for rep in self.dst_index):
            raise StateError(f"level {n} already carries committed target orbits")
        self.frozen.add(n)

    def check_equivariance(self):
        """Re-derive the defining law at every anchor for every subgroup
        generator; exact, used by the invariant suite."""
        for srep, (x0, y0) in self.anchors.items():
            for gen in self.sigma_src.source.generators():
                s = self.sigma_src.apply(gen)
                lhs = self.evaluate(Point(s * x0.g, x0.level))
                rhs = Point(self.twist(s) * y0.g, y0.level)
                if lhs != rhs:
                    return False
            if self.evaluate(x0) != y0 or self.evaluate(y0, inverse=True) != x0:
                return False
        return True


def default_image(state, x):
    return state.default_image(x)


def evaluate_w(state, x, inverse=False):
    """Total evaluation of the partial intertwiner; pure."""
    return state.evaluate(x, inverse=inverse)


def evaluate_pi(state, g, x, commit=False, log=None):
    """Evaluate the induced homomorphism at g on the point x.

    Amalgam mode: left-factor syllables act by left multiplication, right-
    factor syllables act conjugated through w.  HNN mode: stable letters
    act by w, base syllables by left multiplication.  Syllables are applied
    right to left.
    """
    gamma = state.gamma
    if g.owner is not gamma:
        raise OwnerMismatch(f"{g!r} does not live in {gamma.name!r}")
    cur = x
    if state.mode == "amalgam":
        sigma, syls = g.payload
        for side, r in reversed(syls):
            if side == 0:
                cur = cur.translate(gamma.include(0, r))
            else:
                cur = state.evaluate(cur, commit=commit, log=log)
                cur = cur.translate(gamma.include(1, r))
                cur = state.evaluate(cur, inverse=True, commit=commit, log=log)
        if not sigma.is_identity:
            cur = cur.translate(gamma.include(0, gamma.edge_left.apply(sigma)))
        return cur
    head, tail = g.payload
    for eps, r in reversed(tail):
        if not r.is_identity:
            cur = cur.translate(gamma.include(r))
        cur = state.evaluate(cur, inverse=(eps == -1), commit=commit, log=log)
    if not head.is_identity:
        cur = cur.translate(gamma.include(head))
    return cur


def allocate_fresh_orbits(state, count, avoid=(), level=None):
    """Deterministically pick fresh, pairwise distinct source orbits.

    Representatives are scanned in shortlex order at the lowest non-frozen
    level >= ceiling (or the given level), skipping committed orbits,
    frozen levels and the orbits of the avoid set.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if level is None:
        level = state.ceiling
        while level in state.frozen:
            level += 1
    elif level in state.frozen:
        raise StateError(f"level {level} is frozen")
    avoid_reps = {state.src_orbit(p) for p in avoid}
    out = []
    for g in state.gamma.iter_shortlex():
        cand = Point(g, level)
        rep = state.src_orbit(cand)
        if rep != cand:
            continue
        if rep in state.anchors or rep in avoid_reps:
            continue
        avoid_reps.add(rep)
        out.append(rep)
        if len(out) == count:
            break
    state.ceiling = max(state.ceiling, level)
    return out
