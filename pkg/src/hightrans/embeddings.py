"""Subgroup embeddings with membership tests and transversal oracles.

An Embedding carries a monomorphism source -> target given by generator
images.  Membership and coset decomposition are dispatched to a decision
procedure chosen from the (source, target) kinds:

  * trivial source: everything is exact and immediate;
  * finite source: the image is enumerated once and cached;
  * free-abelian target: integer lattice arithmetic (column echelon form);
  * infinite-cyclic source in a free target: power stripping with an exact
    letter-length formula;
  * subgroup of one factor of a composite target: peel the normal form and
    recurse into the factor;
  * anything else: bounded image enumeration that raises UndecidedError
    rather than guess.

Coset representatives are canonical (shortlex-minimal for the exact base
procedures) and cached per embedding, so orbit representatives downstream
are stable across a whole run.
"""

from __future__ import annotations

from . import groups
from .groups import Element, UndecidedError


def _as_word(src, s):
    """An element of the source as (generator index, exponent) syllables."""
    if src.kind == "free":
        return list(s.payload)
    if src.kind == "free_abelian":
        return [(i, v) for i, v in enumerate(s.payload) if v]
    word = []
    for rank in s.spelling():
        idx, exp = rank >> 1, -1 if rank & 1 else 1
        if word and word[-1][0] == idx and (word[-1][1] > 0) == (exp > 0):
            word[-1] = (idx, word[-1][1] + exp)
        else:
            word.append((idx, exp))
    return word


def _is_infinite_cyclic(g):
    return (g.kind == "free_abelian" or g.kind == "free") and g.rank == 1


def _source_coords(src, s):
    if src.kind == "free_abelian":
        return s.payload
    return (s.payload[0][1],) if s.payload else (0,)


def _source_from_coords(src, coords):
    if src.kind == "free_abelian":
        return Element(src, tuple(coords))
    gen = src.generators()[0]
    return gen ** coords[0]


class TrivialStrategy:
    """Image is the trivial subgroup."""

    def __init__(self, emb):
        self.emb = emb

    def contains(self, g):
        return g.is_identity

    def decompose(self, g):
        return (self.emb.source.identity(), g)


class FiniteImageStrategy:
    """Finite source: enumerate the whole image once."""

    def __init__(self, emb):
        self.emb = emb
        self._map = None

    def _image_map(self):
        if self._map is None:
            src = self.emb.source
            table = {}
            count = 0
            for s in src.iter_shortlex():
                img = self.emb.apply(s)
                if img not in table:
                    table[img] = s
                count += 1
                if count >= src.order:
                    break
            self._map = table
        return self._map

    def contains(self, g):
        return g in self._image_map()

    def decompose(self, g):
        table = self._image_map()
        best = None
        for img in table:
            cand = img * g
            if best is None or cand.sort_key() < best.sort_key():
                best = cand
        witness = g * best.inverse()
        return (table[witness], best)


class LatticeStrategy:
    """Free-abelian target: the image is an integer lattice.

    Kept in column echelon form with a unimodular transform so membership,
    preimages and canonical (shortlex-minimal) coset representatives are all
    exact.
    """

    def __init__(self, emb):
        self.emb = emb
        src = emb.source
        cols = [list(_to_vector(emb.target, img)) for img in emb.images]
        k = len(cols)
        u_cols = [[1 if i == j else 0 for i in range(k)] for j in range(k)]
        rank_t = emb.target.rank
        pivots = []
        lead = 0
        for row in range(rank_t):
            while True:
                nz = [j for j in range(lead, k) if cols[j][row] != 0]
                if len(nz) <= 1:
                    break
                nz.sort(key=lambda j: abs(cols[j][row]))
                j0, j1 = nz[0], nz[1]
                q = cols[j1][row] // cols[j0][row]
                cols[j1] = [a - q * b for a, b in zip(cols[j1], cols[j0])]
                u_cols[j1] = [a - q * b for a, b in zip(u_cols[j1], u_cols[j0])]
            if nz:
                j = nz[0]
                cols[lead], cols[j] = cols[j], cols[lead]
                u_cols[lead], u_cols[j] = u_cols[j], u_cols[lead]
                if cols[lead][row] < 0:
                    cols[lead] = [-a for a in cols[lead]]
                    u_cols[lead] = [-a for a in u_cols[lead]]
                pivots.append((row, lead))
                lead += 1
        self.basis = [tuple(cols[j]) for _, j in pivots]
        self.pivot_rows = [row for row, _ in pivots]
        self.transform = [tuple(u_cols[j]) for _, j in pivots]
        self.dim = rank_t

    def _solve(self, vec):
        """Pivot coefficients expressing vec over the basis, or None."""
        w = list(vec)
        coeffs = []
        for (prow, col) in zip(self.pivot_rows, self.basis):
            p = col[prow]
            if w[prow] % p:
                return None
            c = w[prow] // p
            coeffs.append(c)
            w = [a - c * b for a, b in zip(w, col)]
        if any(w):
            return None
        return coeffs

    def _residue(self, vec):
        w = list(vec)
        for (prow, col) in zip(self.pivot_rows, self.basis):
            c = w[prow] // col[prow]
            w = [a - c * b for a, b in zip(w, col)]
        return w

    def _lattice_points(self, bound):
        """All lattice vectors of l1 norm <= bound."""
        out = []
        m = len(self.basis)

        def rec(i, partial):
            if i == m:
                if sum(abs(a) for a in partial) <= bound:
                    out.append(tuple(partial))
                return
            prow = self.pivot_rows[i]
            col = self.basis[i]
            p = col[prow]
            base = partial[prow]
            lo = -((bound + base) // p)
            hi = (bound - base) // p
            for c in range(lo, hi + 1):
                rec(i + 1, [a + c * b for a, b in zip(partial, col)])

        rec(0, [0] * self.dim)
        return out

    def contains(self, g):
        return self._solve(_to_vector(self.emb.target, g)) is not None

    def decompose(self, g):
        tgt = self.emb.target
        vec = _to_vector(tgt, g)
        res = self._residue(vec)
        best = Element(tgt, tuple(res))
        m = sum(abs(a) for a in res)
        for l in self._lattice_points(2 * m):
            cand = Element(tgt, tuple(a - b for a, b in zip(res, l)))
            if cand.sort_key() < best.sort_key():
                best = cand
        diff = tuple(a - b for a, b in zip(vec, best.payload))
        coeffs = self._solve(diff)
        coords = [0] * len(self.emb.images)
        for c, ucol in zip(coeffs, self.transform):
            for j in range(len(coords)):
                coords[j] += c * ucol[j]
        return (_source_from_coords(self.emb.source, coords), best)


def _to_vector(target, g):
    if target.kind != "free_abelian":
        raise ValueError("lattice arithmetic needs a free-abelian target")
    return g.payload


class CyclicFreeStrategy:
    """Infinite cyclic subgroup of a free group, via c = u d u^-1.

    After cyclic reduction the letter length of c^k is exactly
    2|u| + |k||d|, which makes both membership and the shortlex-minimal
    coset representative finite, exact searches.
    """

    def __init__(self, emb):
        self.emb = emb
        c = emb.images[0]
        letters = []
        for gen, exp in c.payload:
            step = 1 if exp > 0 else -1
            letters.extend([(gen, step)] * abs(exp))
        u = []
        lo, hi = 0, len(letters) - 1
        while lo < hi and letters[lo] == (letters[hi][0], -letters[hi][1]):
            u.append(letters[lo])
            lo += 1
            hi -= 1
        tgt = emb.target
        self.u = tgt.element_from_word([(tgt.labels[g], e) for g, e in u])
        self.core = tgt.element_from_word([(tgt.labels[g], e) for g, e in letters[lo:hi + 1]])
        self.len_u = len(u)
        self.len_core = hi + 1 - lo
        self.c = c

    def _power(self, k):
        return self.u * (self.core ** k) * self.u.inverse()

    def contains(self, g):
        if g.is_identity:
            return True
        rem = g.length() - 2 * self.len_u
        if rem <= 0 or rem % self.len_core:
            return False
        k = rem // self.len_core
        return g == self._power(k) or g == self._power(-k)

    def decompose(self, g):
        best, best_k = g, 0
        best_key = g.sort_key()
        for sign in (1, -1):
            step = self.c if sign == 1 else self.c.inverse()
            cand = g
            k = 1
            while 2 * self.len_u + k * self.len_core - g.length() <= best_key[0]:
                cand = step * cand
                if cand.sort_key() < best_key:
                    best, best_k, best_key = cand, sign * k, cand.sort_key()
                k += 1
        s = _source_from_coords(self.emb.source, (-best_k,))
        return (s, best)


class FactorStrategy:
    """Subgroup of one factor of a composite group.

    Normal forms make the factor part of any element explicit, so
    membership peels the composite layer and recurses exactly.
    """

    def __init__(self, outer, side, inner):
        self.outer = outer
        self.side = side
        self.inner = inner

    def _split(self, g):
        """g = include(u) * rest with u the maximal factor-side left part."""
        if self.outer.kind == "hnn":
            head, tail = g.payload
            return head, tail
        sigma, syls = g.payload
        u = self.outer.edge(self.side).apply(sigma)
        rest = syls
        if syls and syls[0][0] == self.side:
            u = u * syls[0][1]
            rest = syls[1:]
        return u, rest

    def _extract(self, g):
        u, rest = self._split(g)
        return u if not rest else None

    def contains(self, g):
        part = self._extract(g)
        return part is not None and self.inner.contains(part)

    def decompose(self, g):
        u, rest = self._split(g)
        s, r_in = self.inner.decompose(u)
        outer = self.outer
        if outer.kind == "hnn":
            rep = Element(outer, (r_in, rest))
        else:
            sig2, x2 = outer.edge(self.side).decompose(r_in)
            syls = ((self.side, x2),) + rest if not x2.is_identity else rest
            rep = Element(outer, (sig2, syls))
        return (s, rep)


class BoundedStrategy:
    """Last-resort bounded image enumeration; undecided instead of wrong."""

    def __init__(self, emb, bound=8):
        self.emb = emb
        self.bound = bound
        self._map = None

    def _image_map(self):
        if self._map is None:
            table = {}
            for s in self.emb.source.ball(self.bound):
                table.setdefault(self.emb.apply(s), s)
            self._map = table
        return self._map

    def contains(self, g):
        if g in self._image_map():
            return True
        raise UndecidedError(
            f"membership in {self.emb.name!r} undecided at bound {self.bound}",
            bound=self.bound)

    def decompose(self, g):
        table = self._image_map()
        if g in table:
            return (table[g], self.emb.target.identity())
        raise UndecidedError(
            f"coset decomposition in {self.emb.name!r} undecided at bound {self.bound}",
            bound=self.bound)


def _factor_route(emb):
    tgt = emb.target
    sides = (0, 1) if tgt.kind == "amalgam" else ("base",)
    for side in sides:
        probe = FactorStrategy(tgt, side, None)
        parts = [probe._extract(img) for img in emb.images]
        if all(p is not None for p in parts):
            factor = tgt.base if tgt.kind == "hnn" else tgt.factor(side)
            inner = Embedding(f"{emb.name}|factor", emb.source, factor, parts, check=False)
            probe.inner = inner
            return probe
    return None


def _choose_strategy(emb):
    src, tgt = emb.source, emb.target
    if all(img.is_identity for img in emb.images):
        return TrivialStrategy(emb)
    if src.is_finite():
        return FiniteImageStrategy(emb)
    if tgt.kind == "free_abelian" and (src.kind == "free_abelian" or _is_infinite_cyclic(src)):
        return LatticeStrategy(emb)
    if _is_infinite_cyclic(src) and tgt.kind == "free":
        return CyclicFreeStrategy(emb)
    if tgt.kind in ("amalgam", "hnn"):
        routed = _factor_route(emb)
        if routed is not None:
            return routed
    return BoundedStrategy(emb)


class Embedding:
    """A monomorphism source -> target given by generator images."""

    def __init__(self, name, source, target, images, check=True, injectivity_bound=4):
        self.name = name
        self.source = source
        self.target = target
        self.injectivity_bound = injectivity_bound
        images = tuple(images)
        if len(images) != len(source.labels):
            raise ValueError(f"{name}: one image per source generator required")
        for img in images:
            if img.owner is not target:
                raise ValueError(f"{name}: image {img!r} does not live in {target.name!r}")
        self.images = images
        self._apply_cache = {source.identity_payload(): target.identity()}
        self._decompose_cache = {}
        self.strategy = _choose_strategy(self)
        if check:
            self._check_homomorphism()
            self._check_injectivity()

    def __repr__(self):
        return f"<Embedding {self.name}: {self.source.name} -> {self.target.name}>"

    def apply(self, s):
        if s.owner is not self.source:
            raise groups.OwnerMismatch(f"{s!r} is not in the source of {self.name!r}")
        cached = self._apply_cache.get(s.payload)
        if cached is None:
            out = self.target.identity()
            for idx, exp in _as_word(self.source, s):
                out = out * (self.images[idx] ** exp)
            self._apply_cache[s.payload] = out
            cached = out
        return cached

    def contains(self, g):
        """Whether g lies in the image subgroup; may raise UndecidedError."""
        if g.owner is not self.target:
            raise groups.OwnerMismatch(f"{g!r} is not in the target of {self.name!r}")
        if g.is_identity:
            return True
        return self.strategy.contains(g)

    def decompose(self, g):
        """g = apply(s) * r with r the canonical right-coset representative."""
        if g.owner is not self.target:
            raise groups.OwnerMismatch(f"{g!r} is not in the target of {self.name!r}")
        cached = self._decompose_cache.get(g.payload)
        if cached is None:
            cached = self.strategy.decompose(g)
            self._decompose_cache[g.payload] = cached
        return cached

    def rep(self, g):
        """Canonical representative of the coset image*g."""
        return self.decompose(g)[1]

    def preimage(self, g):
        s, r = self.decompose(g)
        if not r.is_identity:
            raise ValueError(f"{g!r} is not in the image of {self.name!r}")
        return s

    def is_trivial(self):
        return isinstance(self.strategy, TrivialStrategy)

    # -- construction-time sanity -------------------------------------------

    def _check_homomorphism(self):
        src = self.source
        if src.kind == "finite":
            if src.order <= 128:
                elems = src.elements()
            else:
                elems = src.ball(3)
            for a in elems:
                for b in elems:
                    if self.apply(a * b) != self.apply(a) * self.apply(b):
                        raise ValueError(f"{self.name}: images do not respect the table")
        elif src.kind == "free_abelian":
            for i in range(len(self.images)):
                for j in range(i):
                    x, y = self.images[i], self.images[j]
                    if x * y != y * x:
                        raise ValueError(f"{self.name}: images of commuting generators must commute")
        elif src.kind == "free":
            pass
        else:
            for a in src.ball(2):
                for b in src.ball(2):
                    if self.apply(a * b) != self.apply(a) * self.apply(b):
                        raise ValueError(f"{self.name}: images do not respect relations at bound 2")

    def _check_injectivity(self):
        seen = {}
        for s in self.source.ball(self.injectivity_bound):
            img = self.apply(s)
            if img in seen and seen[img] != s:
                raise ValueError(
                    f"{self.name}: not injective at bound {self.injectivity_bound} "
                    f"({seen[img]!r} and {s!r} share an image)")
            seen[img] = s


def subgroup_contains(embedding, g):
    """Membership of g in the embedded subgroup (exact or UndecidedError)."""
    return embedding.contains(g)


def coset_decompose(embedding, g):
    """g = e(s) * r with r the canonical right-transversal representative."""
    return embedding.decompose(g)


def apply_embedding(embedding, s):
    return embedding.apply(s)
