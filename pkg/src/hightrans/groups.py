"""Concrete group oracles.

Groups are immutable handles; an element is a word stored in the owner's
canonical normal form, so equality is payload comparison and the word
problem reduces to normal-form computation.

Determinism contract: every search in this package enumerates elements in
shortlex order over the declared generator alphabet, with letters ordered
``g0 < g0^-1 < g1 < g1^-1 < ...``.  Ball enumeration, coset representatives
and witness searches all derive from this single order.

Handles cache ball layers and spelling tables; caches are append-only maps
keyed by immutable payloads, so concurrent readers are safe and repeated
queries are cheap.
"""

from __future__ import annotations


class UndecidedError(Exception):
    """A bounded decision procedure ran out of budget.

    Raised instead of guessing.  Callers that audit at fixed bounds catch
    this and report an ``undecided`` verdict carrying the bound.
    """

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class OwnerMismatch(ValueError):
    pass


def _check_labels(labels):
    labels = tuple(labels)
    for lab in labels:
        if not lab or not isinstance(lab, str) or any(ch.isspace() for ch in lab) or "^" in lab:
            raise ValueError(f"invalid generator label: {lab!r}")
    if len(set(labels)) != len(labels):
        raise ValueError(f"duplicate generator labels in {labels}")
    return labels


class Element:
    """A group element, always held in canonical normal form."""

    __slots__ = ("owner", "payload", "_hash", "_spell")

    def __init__(self, owner, payload):
        self.owner = owner
        self.payload = payload
        self._hash = None
        self._spell = None

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.owner is other.owner and self.payload == other.payload

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.owner), self.payload))
        return self._hash

    def __mul__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if other.owner is not self.owner:
            raise OwnerMismatch(
                f"elements of {self.owner.name!r} and {other.owner.name!r} cannot be composed")
        return Element(self.owner, self.owner.multiply(self.payload, other.payload))

    def inverse(self):
        return Element(self.owner, self.owner.invert(self.payload))

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.owner.identity()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    @property
    def is_identity(self):
        return self.owner.is_identity_payload(self.payload)

    def spelling(self):
        """Canonical letter spelling as a tuple of alphabet ranks."""
        if self._spell is None:
            self._spell = self.owner.spell(self.payload)
        return self._spell

    def length(self):
        return len(self.spelling())

    def sort_key(self):
        sp = self.spelling()
        return (len(sp), sp, self.owner.structural(self.payload))

    def __lt__(self, other):
        if other.owner is not self.owner:
            raise OwnerMismatch("cannot order elements of different groups")
        return self.sort_key() < other.sort_key()

    def word(self):
        """The spelling as a list of (label, exponent) syllables."""
        out = []
        labels = self.owner.labels
        for rank in self.spelling():
            lab = labels[rank >> 1]
            exp = -1 if rank & 1 else 1
            if out and out[-1][0] == lab and (out[-1][1] > 0) == (exp > 0):
                out[-1] = (lab, out[-1][1] + exp)
            else:
                out.append((lab, exp))
        return out

    def __repr__(self):
        return f"<{self.owner.name}: {format_word(self.word())}>"

    def __str__(self):
        return format_word(self.word())


def format_word(word):
    if not word:
        return "1"
    parts = []
    for lab, exp in word:
        parts.append(lab if exp == 1 else f"{lab}^{exp}")
    return " ".join(parts)


class Group:
    """Base class for group handles.

    Subclass contract: ``multiply``, ``invert``, ``identity_payload``,
    ``is_identity_payload``, ``spell`` and ``structural`` operate on
    payloads and must keep results in canonical normal form.
    """

    kind = "abstract"

    def __init__(self, name, labels):
        self.name = name
        self.labels = _check_labels(labels)
        self._letters = None
        self._layers = None       # finalized shortlex layers by canonical length
        self._pending = None
        self._frontier = None
        self._seen = None
        self._bfs_depth = 0

    # -- payload protocol ---------------------------------------------------

    def multiply(self, p, q):
        raise NotImplementedError

    def invert(self, p):
        raise NotImplementedError

    def identity_payload(self):
        raise NotImplementedError

    def is_identity_payload(self, p):
        raise NotImplementedError

    def spell(self, p):
        raise NotImplementedError

    def structural(self, p):
        raise NotImplementedError

    def is_finite(self):
        return False

    # -- elements -----------------------------------------------------------

    def identity(self):
        return Element(self, self.identity_payload())

    def generators(self):
        return [self.generator(lab) for lab in self.labels]

    def generator(self, label):
        raise NotImplementedError

    def element_from_word(self, word):
        """Multiply out a list of (label, exponent) syllables."""
        x = self.identity()
        by_label = {lab: i for i, lab in enumerate(self.labels)}
        for lab, exp in word:
            if lab not in by_label:
                raise ValueError(f"unknown generator {lab!r} in group {self.name!r}")
            x = x * (self.generator(lab) ** exp)
        return x

    def letters(self):
        """Alphabet of the shortlex order: [(rank, element), ...]."""
        if self._letters is None:
            letters = []
            for i, lab in enumerate(self.labels):
                g = self.generator(lab)
                letters.append((2 * i, g))
                letters.append((2 * i + 1, g.inverse()))
            self._letters = letters
        return self._letters

    # -- shortlex enumeration -----------------------------------------------

    def _init_bfs(self):
        if self._layers is None:
            ident = self.identity()
            self._layers = [[ident]]
            self._pending = {}
            self._frontier = [ident]
            self._seen = {ident}
            self._bfs_depth = 0

    def _extend_layers(self, depth):
        """Finalize shortlex layers up to canonical length ``depth``.

        BFS over letter products; an element first reached at geodesic depth
        d has canonical length >= d, so layer d is complete once depth d has
        been expanded.
        """
        self._init_bfs()
        while self._bfs_depth < depth:
            d = self._bfs_depth + 1
            new = []
            for x in self._frontier:
                for _, letter in self.letters():
                    y = x * letter
                    if y not in self._seen:
                        self._seen.add(y)
                        new.append(y)
                        self._pending.setdefault(y.length(), []).append(y)
            self._frontier = new
            self._layers.append(sorted(self._pending.pop(d, []), key=Element.sort_key))
            self._bfs_depth = d

    def shortlex_layer(self, length):
        self._extend_layers(length)
        return self._layers[length]

    def ball(self, radius):
        """All elements of normal-form length <= radius, shortlex ordered."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        self._extend_layers(radius)
        out = []
        for d in range(radius + 1):
            out.extend(self._layers[d])
        return out

    def iter_shortlex(self, max_radius=None):
        """Yield elements in shortlex order, layer by layer."""
        d = 0
        while max_radius is None or d <= max_radius:
            for x in self.shortlex_layer(d):
                yield x
            if (self.is_finite() and not self._frontier and not self._pending
                    and d + 1 >= len(self._layers)):
                return
            d += 1


# ---------------------------------------------------------------------------
# finite groups by multiplication table


class FiniteGroup(Group):
    """A finite group given by a full multiplication table.

    ``table[i][j]`` is the index of the product of elements i and j.
    Associativity, identity and inverses are checked at construction, and
    the declared generators must generate the whole table.
    """

    kind = "finite"

    def __init__(self, name, table, generator_labels, generator_indices,
                 element_names=None):
        super().__init__(name, generator_labels)
        table = tuple(tuple(row) for row in table)
        n = len(table)
        if any(len(row) != n for row in table):
            raise ValueError(f"{name}: multiplication table must be square")
        if any(not (0 <= v < n) for row in table for v in row):
            raise ValueError(f"{name}: table entries out of range")
        ident = None
        for e in range(n):
            if all(table[e][j] == j and table[j][e] == j for j in range(n)):
                ident = e
                break
        if ident is None:
            raise ValueError(f"{name}: table has no identity")
        inv = [None] * n
        for i in range(n):
            for j in range(n):
                if table[i][j] == ident and table[j][i] == ident:
                    inv[i] = j
                    break
            if inv[i] is None:
                raise ValueError(f"{name}: element {i} has no inverse")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if table[table[a][b]][c] != table[a][table[b][c]]:
                        raise ValueError(f"{name}: table is not associative at ({a},{b},{c})")
        self.table = table
        self.order = n
        self.id_index = ident
        self.inv_table = tuple(inv)
        gen_idx = tuple(generator_indices)
        if len(gen_idx) != len(self.labels):
            raise ValueError(f"{name}: one index per generator label required")
        self.gen_indices = gen_idx
        self.element_names = tuple(element_names) if element_names else None
        self._bfs_words = None
        if len(self._words()) != n:
            raise ValueError(f"{name}: declared generators do not generate the group")

    def _words(self):
        """Shortlex-least word (tuple of letter ranks) for every element."""
        if self._bfs_words is None:
            words = {self.id_index: ()}
            frontier = [self.id_index]
            ranked = []
            for i, gi in enumerate(self.gen_indices):
                ranked.append((2 * i, gi))
                ranked.append((2 * i + 1, self.inv_table[gi]))
            while frontier:
                nxt = []
                for x in frontier:
                    for rank, g in ranked:
                        y = self.table[x][g]
                        if y not in words:
                            words[y] = words[x] + (rank,)
                            nxt.append(y)
                frontier = nxt
            self._bfs_words = words
        return self._bfs_words

    def is_finite(self):
        return True

    def multiply(self, p, q):
        return self.table[p][q]

    def invert(self, p):
        return self.inv_table[p]

    def identity_payload(self):
        return self.id_index

    def is_identity_payload(self, p):
        return p == self.id_index

    def spell(self, p):
        return self._words()[p]

    def structural(self, p):
        return (p,)

    def generator(self, label):
        i = self.labels.index(label)
        return Element(self, self.gen_indices[i])

    def elements(self):
        return [Element(self, i) for i in range(self.order)]


def cyclic_group(name, order, label):
    """The cyclic group of the given order with one declared generator."""
    table = [[(i + j) % order for j in range(order)] for i in range(order)]
    return FiniteGroup(name, table, (label,), (1 % order,))


def trivial_group(name="1"):
    return FiniteGroup(name, [[0]], (), ())


def symmetric_group(name, degree, labels=None):
    """S_n as a table group generated by adjacent transpositions.

    Index 0 is the identity; ``perm_of(i)`` recovers the permutation tuple
    of element i, which is what domain actions key on.
    """
    import itertools as _it

    perms = sorted(_it.permutations(range(degree)))
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):
        # apply q first, then p
        return tuple(p[q[k]] for k in range(degree))

    table = [[index[compose(p, q)] for q in perms] for p in perms]
    gens = []
    for k in range(degree - 1):
        t = list(range(degree))
        t[k], t[k + 1] = t[k + 1], t[k]
        gens.append(index[tuple(t)])
    if labels is None:
        labels = tuple(f"s{k}" for k in range(degree - 1))
    g = FiniteGroup(name, table, labels, tuple(gens))
    g.perms = perms
    return g


# ---------------------------------------------------------------------------
# free abelian groups


class FreeAbelianGroup(Group):
    """Z^rank; payloads are integer vectors."""

    kind = "free_abelian"

    def __init__(self, name, labels):
        super().__init__(name, labels)
        self.rank = len(self.labels)
        if self.rank < 1:
            raise ValueError(f"{name}: rank must be positive")

    def multiply(self, p, q):
        return tuple(a + b for a, b in zip(p, q))

    def invert(self, p):
        return tuple(-a for a in p)

    def identity_payload(self):
        return (0,) * self.rank

    def is_identity_payload(self, p):
        return all(a == 0 for a in p)

    def spell(self, p):
        out = []
        for i, v in enumerate(p):
            rank = 2 * i if v > 0 else 2 * i + 1
            out.extend([rank] * abs(v))
        return tuple(out)

    def structural(self, p):
        return p

    def generator(self, label):
        i = self.labels.index(label)
        vec = [0] * self.rank
        vec[i] = 1
        return Element(self, tuple(vec))


# ---------------------------------------------------------------------------
# free groups


class FreeGroup(Group):
    """Free group on the given generators; payloads are reduced syllable words."""

    kind = "free"

    def __init__(self, name, labels):
        super().__init__(name, labels)
        self.rank = len(self.labels)
        if self.rank < 1:
            raise ValueError(f"{name}: rank must be positive")

    def multiply(self, p, q):
        word = list(p)
        for gen, exp in q:
            if word and word[-1][0] == gen:
                merged = word[-1][1] + exp
                word.pop()
                if merged:
                    word.append((gen, merged))
            else:
                word.append((gen, exp))
        return tuple(word)

    def invert(self, p):
        return tuple((gen, -exp) for gen, exp in reversed(p))

    def identity_payload(self):
        return ()

    def is_identity_payload(self, p):
        return p == ()

    def spell(self, p):
        out = []
        for gen, exp in p:
            rank = 2 * gen if exp > 0 else 2 * gen + 1
            out.extend([rank] * abs(exp))
        return tuple(out)

    def structural(self, p):
        out = []
        for pair in p:
            out.extend(pair)
        return tuple(out)

    def generator(self, label):
        i = self.labels.index(label)
        return Element(self, ((i, 1),))


# ---------------------------------------------------------------------------
# semidirect products Q |x Z^rank, Q finite acting by integer matrices


def _matvec(m, v):
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m)))


def _matmul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _det(minor)
    return total


class SemidirectGroup(Group):
    """Q |x Z^rank with Q finite; payloads are (q index, translation vector).

    The action map ``matrices[q]`` satisfies q v q^-1 = A_q v, so
    (q1, v1)(q2, v2) = (q1 q2, A_{q2^-1} v1 + v2).
    """

    kind = "semidirect"

    def __init__(self, name, q_group, translation_labels, matrices):
        if not isinstance(q_group, FiniteGroup):
            raise ValueError(f"{name}: the acting group must be a finite table group")
        labels = q_group.labels + tuple(translation_labels)
        super().__init__(name, labels)
        self.q_group = q_group
        self.rank = len(tuple(translation_labels))
        if self.rank < 1:
            raise ValueError(f"{name}: translation rank must be positive")
        mats = tuple(tuple(tuple(row) for row in matrices[i]) for i in range(q_group.order))
        ident = tuple(tuple(1 if i == j else 0 for j in range(self.rank))
                      for i in range(self.rank))
        if mats[q_group.id_index] != ident:
            raise ValueError(f"{name}: identity of Q must act trivially")
        for m in mats:
            if _det(m) not in (1, -1):
                raise ValueError(f"{name}: action matrix is not invertible over Z")
        for a in range(q_group.order):
            for b in range(q_group.order):
                if _matmul(mats[a], mats[b]) != mats[q_group.table[a][b]]:
                    raise ValueError(f"{name}: matrices do not define an action of Q")
        self.matrices = mats

    def _act(self, q_idx, v):
        return _matvec(self.matrices[q_idx], v)

    def multiply(self, p, q):
        q1, v1 = p
        q2, v2 = q
        twisted = self._act(self.q_group.inv_table[q2], v1)
        return (self.q_group.table[q1][q2],
                tuple(a + b for a, b in zip(twisted, v2)))

    def invert(self, p):
        q, v = p
        return (self.q_group.inv_table[q],
                tuple(-a for a in self._act(q, v)))

    def identity_payload(self):
        return (self.q_group.id_index, (0,) * self.rank)

    def is_identity_payload(self, p):
        return p[0] == self.q_group.id_index and all(a == 0 for a in p[1])

    def spell(self, p):
        q, v = p
        out = list(self.q_group.spell(q))
        off = 2 * len(self.q_group.labels)
        for i, c in enumerate(v):
            rank = off + 2 * i if c > 0 else off + 2 * i + 1
            out.extend([rank] * abs(c))
        return tuple(out)

    def structural(self, p):
        return (p[0],) + p[1]

    def generator(self, label):
        nq = len(self.q_group.labels)
        i = self.labels.index(label)
        if i < nq:
            return Element(self, (self.q_group.gen_indices[i], (0,) * self.rank))
        vec = [0] * self.rank
        vec[i - nq] = 1
        return Element(self, (self.q_group.id_index, tuple(vec)))


# ---------------------------------------------------------------------------
# composite kinds; reduction lives in normal_forms


class AmalgamGroup(Group):
    """Amalgamated product of two factors over a shared edge subgroup.

    Payloads are ``(sigma, syllables)``: an edge-group element pushed
    maximally to the left, then alternating non-identity right-coset
    representatives tagged 0 (left factor) or 1 (right factor).
    """

    kind = "amalgam"

    def __init__(self, name, left, right, edge_left, edge_right):
        if edge_left.source is not edge_right.source:
            raise ValueError(f"{name}: edge embeddings must share their source group")
        if edge_left.target is not left or edge_right.target is not right:
            raise ValueError(f"{name}: edge embeddings must land in the two factors")
        if set(left.labels) & set(right.labels):
            raise ValueError(f"{name}: factor generator labels must be disjoint")
        super().__init__(name, left.labels + right.labels)
        self.left = left
        self.right = right
        self.edge_left = edge_left
        self.edge_right = edge_right
        self.edge_source = edge_left.source

    def factor(self, side):
        return self.left if side == 0 else self.right

    def edge(self, side):
        return self.edge_left if side == 0 else self.edge_right

    def tokens(self, p):
        sigma, syls = p
        toks = []
        if not sigma.is_identity:
            toks.append((0, self.edge_left.apply(sigma)))
        toks.extend(syls)
        return toks

    def multiply(self, p, q):
        from . import normal_forms
        return normal_forms.reduce_amalgam_tokens(self, self.tokens(p) + self.tokens(q))

    def invert(self, p):
        from . import normal_forms
        toks = [(side, x.inverse()) for side, x in reversed(self.tokens(p))]
        return normal_forms.reduce_amalgam_tokens(self, toks)

    def identity_payload(self):
        return (self.edge_source.identity(), ())

    def is_identity_payload(self, p):
        return p[0].is_identity and p[1] == ()

    def spell(self, p):
        sigma, syls = p
        off_right = 2 * len(self.left.labels)
        out = list(self.edge_left.apply(sigma).spelling())
        for side, x in syls:
            if side == 0:
                out.extend(x.spelling())
            else:
                out.extend(r + off_right for r in x.spelling())
        return tuple(out)

    def structural(self, p):
        sigma, syls = p
        return (self.edge_source.structural(sigma.payload),
                tuple((side, self.factor(side).structural(x.payload)) for side, x in syls))

    def generator(self, label):
        if label in self.left.labels:
            return self.include(0, self.left.generator(label))
        return self.include(1, self.right.generator(label))

    def include(self, side, x):
        """The canonical injection of a factor element."""
        from . import normal_forms
        if x.owner is not self.factor(side):
            raise OwnerMismatch(f"{x!r} is not in factor {side} of {self.name!r}")
        return Element(self, normal_forms.reduce_amalgam_tokens(self, [(side, x)]))

    def sigma_embedding(self):
        """The edge subgroup included into the amalgam itself."""
        if not hasattr(self, "_sigma_emb"):
            from .embeddings import Embedding
            images = [self.include(0, self.edge_left.apply(g))
                      for g in self.edge_source.generators()]
            self._sigma_emb = Embedding(f"{self.name}.edge", self.edge_source, self, images)
        return self._sigma_emb


class HnnGroup(Group):
    """HNN extension of a base group along an isomorphism of two subgroups.

    ``edge_r`` embeds the abstract edge group as the subgroup conjugated by
    the stable letter, ``edge_s`` as its image, so t r(x) t^-1 = s(x).
    Payloads are Britton-reduced ``(head, tail)`` with the head an arbitrary
    base element and the tail a sequence of (epsilon, representative) pairs:
    after t^eps the base part is the canonical right-coset representative of
    image(edge_r) for eps = +1 and of image(edge_s) for eps = -1.
    """

    kind = "hnn"

    def __init__(self, name, base, edge_r, edge_s, stable_label="t"):
        if edge_r.source is not edge_s.source:
            raise ValueError(f"{name}: edge embeddings must share their source group")
        if edge_r.target is not base or edge_s.target is not base:
            raise ValueError(f"{name}: edge embeddings must land in the base group")
        if stable_label in base.labels:
            raise ValueError(f"{name}: stable letter clashes with a base generator")
        super().__init__(name, base.labels + (stable_label,))
        self.base = base
        self.edge_r = edge_r
        self.edge_s = edge_s
        self.stable_label = stable_label
        self.edge_source = edge_r.source

    def sigma_edge(self, eps):
        return self.edge_r if eps == 1 else self.edge_s

    def twist_base(self, x, eps):
        """Carry a subgroup element through t^eps: t r(s) = s(s) t."""
        src = self.sigma_edge(eps)
        dst = self.sigma_edge(-eps)
        return dst.apply(src.preimage(x))

    def tokens(self, p):
        head, tail = p
        toks = []
        if not head.is_identity:
            toks.append(("b", head))
        for eps, r in tail:
            toks.append(("t", eps))
            if not r.is_identity:
                toks.append(("b", r))
        return toks

    def multiply(self, p, q):
        from . import normal_forms
        return normal_forms.reduce_hnn_tokens(self, self.tokens(p) + self.tokens(q))

    def invert(self, p):
        from . import normal_forms
        toks = []
        for kind, val in reversed(self.tokens(p)):
            if kind == "b":
                toks.append(("b", val.inverse()))
            else:
                toks.append(("t", -val))
        return normal_forms.reduce_hnn_tokens(self, toks)

    def identity_payload(self):
        return (self.base.identity(), ())

    def is_identity_payload(self, p):
        return p[0].is_identity and p[1] == ()

    def spell(self, p):
        head, tail = p
        t_rank = 2 * len(self.base.labels)
        out = list(head.spelling())
        for eps, r in tail:
            out.append(t_rank if eps == 1 else t_rank + 1)
            out.extend(r.spelling())
        return tuple(out)

    def structural(self, p):
        head, tail = p
        return (self.base.structural(head.payload),
                tuple((eps, self.base.structural(r.payload)) for eps, r in tail))

    def generator(self, label):
        if label == self.stable_label:
            return self.stable()
        return self.include(self.base.generator(label))

    def stable(self):
        return Element(self, (self.base.identity(), ((1, self.base.identity()),)))

    def include(self, x):
        """The canonical injection of a base element."""
        if x.owner is not self.base:
            raise OwnerMismatch(f"{x!r} is not in the base of {self.name!r}")
        return Element(self, (x, ()))

    def sigma_embedding(self, eps):
        """Sigma (eps=+1) or its stable-letter image (eps=-1) inside the HNN group."""
        attr = "_sigma_emb_pos" if eps == 1 else "_sigma_emb_neg"
        if not hasattr(self, attr):
            from .embeddings import Embedding
            edge = self.sigma_edge(eps)
            images = [self.include(edge.apply(g)) for g in self.edge_source.generators()]
            setattr(self, attr, Embedding(
                f"{self.name}.edge{'+' if eps == 1 else '-'}", self.edge_source, self, images))
        return getattr(self, attr)


# ---------------------------------------------------------------------------
# module-level operation aliases


def compose(a, b):
    """Product in normal form; raises OwnerMismatch for foreign elements."""
    return a * b


def invert(a):
    return a.inverse()


def equal(a, b):
    """Word problem: normal forms coincide."""
    if a.owner is not b.owner:
        raise OwnerMismatch("cannot compare elements of different groups")
    return a.payload == b.payload


def enumerate_ball(group, radius):
    """All elements of normal-form length <= radius in shortlex order."""
    return group.ball(radius)
