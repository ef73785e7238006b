"""Bounded, certificate-producing audits of the highly core-free condition.

The definition quantifies over every finite set and every covering, so a
terminating audit fixes bounds: tuple entries and protected sets come from
a ball of ``point_radius``, witnesses are searched in shortlex order up to
``witness_radius``, and tuples have at most ``tuple_size_max`` entries.
Verdicts therefore come in three flavours:

  * ``pass``   -- every witness search succeeded at the bounds (for the
                  trivial subgroup: unconditionally, all cores are trivial);
  * ``fail``   -- an explicit covering counterexample was found and proved,
                  e.g. the finite-index pattern with a complete transversal
                  and the single piece {1};
  * ``undecided`` -- a search ran out of radius or a membership oracle gave
                  up; the evidence records the covering shape that a genuine
                  failure would produce.

All evidence re-verifies by direct evaluation (see ``replay_*``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .groups import UndecidedError

PASS = "pass"
FAIL = "fail"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class AuditBounds:
    tuple_size_max: int = 2
    point_radius: int = 2
    witness_radius: int = 4
    covering_piece_max: int = 4

    def __post_init__(self):
        if min(self.tuple_size_max, self.point_radius,
               self.witness_radius, self.covering_piece_max) < 1:
            raise ValueError("all audit bounds must be positive")
        if self.witness_radius < self.point_radius:
            raise ValueError("witness_radius must be >= point_radius")

    def as_dict(self):
        return {
            "tuple_size_max": self.tuple_size_max,
            "point_radius": self.point_radius,
            "witness_radius": self.witness_radius,
            "covering_piece_max": self.covering_piece_max,
        }


@dataclass
class AuditVerdict:
    status: str
    bounds: AuditBounds
    evidence: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.status == PASS

    @property
    def failed(self):
        return self.status == FAIL

    def __str__(self):
        return f"{self.status}({self.bounds.tuple_size_max},{self.bounds.point_radius},{self.bounds.witness_radius})"


# ---------------------------------------------------------------------------
# witness-set searches


def search_H_set(emb, xs, F, radius):
    """First shortlex h with h x_i outside Sigma F and h x_i h^-1 outside
    Sigma, for every i; None when the ball at ``radius`` is exhausted."""
    for x in xs:
        if x.is_identity:
            raise ValueError("H-set entries must be nontrivial")
    f_reps = {emb.rep(f) for f in F}
    for h in emb.target.iter_shortlex(radius):
        ok = True
        for x in xs:
            moved = h * x
            if emb.rep(moved) in f_reps or emb.contains(h * x * h.inverse()):
                ok = False
                break
        if ok:
            return h
    return None


def search_G_set(emb, xs, F, radius):
    """First shortlex h with h x_i outside Sigma F and all pairwise
    h x_i x_j^-1 h^-1 outside Sigma; entries must be pairwise distinct."""
    if len(set(xs)) != len(xs):
        raise ValueError("G-set tuples live off the large diagonal")
    f_reps = {emb.rep(f) for f in F}
    diffs = [xs[i] * xs[j].inverse() for i in range(len(xs))
             for j in range(len(xs)) if i != j]
    for h in emb.target.iter_shortlex(radius):
        if any(emb.rep(h * x) in f_reps for x in xs):
            continue
        hinv = h.inverse()
        if any(emb.contains(h * d * hinv) for d in diffs):
            continue
        return h
    return None


def search_E_set(action, xs, F, radius):
    """First shortlex h moving the points off the protected orbits with
    pairwise disjoint subgroup orbits; None when exhausted.

    ``action`` is a LevelAction; points must be pairwise distinct.
    """
    if len(set(xs)) != len(xs):
        raise ValueError("E-set tuples live off the large diagonal")
    f_reps = {action.orbit_rep(f) for f in F}
    for h in action.group.iter_shortlex(radius):
        imgs = [action.act(h, x) for x in xs]
        reps = [action.orbit_rep(p) for p in imgs]
        if any(r in f_reps for r in reps):
            continue
        if len(set(reps)) != len(reps):
            continue
        return h
    return None


# ---------------------------------------------------------------------------
# transports between the witness sets (the equivalence constructions)


def hset_instance_for_gset(xs, F):
    """Shrink a G-set instance to the H-set instance whose witnesses are
    also G-set witnesses: y_ij = x_i x_j^-1, F' = the union of F x_i^-1."""
    ys, seen = [], set()
    for i, xi in enumerate(xs):
        for j, xj in enumerate(xs):
            if i != j:
                y = xi * xj.inverse()
                if y not in seen:
                    seen.add(y)
                    ys.append(y)
    f2, fseen = [], set()
    for f in F:
        for xi in xs:
            c = f * xi.inverse()
            if c not in fseen:
                fseen.add(c)
                f2.append(c)
    return ys, f2


def gset_instance_for_eset(action, xs, F):
    """Shrink an E-set instance over H x N to a G-set instance in H whose
    witnesses transport: F' collects the group parts of the protected orbit
    representatives, ybar the distinct group parts of the tuple."""
    f2, fseen = [], set()
    for f in F:
        t = action.orbit_rep(f).g
        if t not in fseen:
            fseen.add(t)
            f2.append(t)
    gs = []
    for p in xs:
        if p.g not in gs:
            gs.append(p.g)
    if len(gs) >= 2:
        return gs, f2
    y = gs[0]
    for cand in action.group.iter_shortlex():
        if cand != y:
            return [y, cand], f2
    raise RuntimeError("unreachable: the group has at least two elements")


# ---------------------------------------------------------------------------
# finite-index prover (the covering counterexample generator)


def prove_finite_index(emb, max_radius):
    """A complete right transversal of the image, or None.

    Collects coset representatives layer by layer; once the set is closed
    under right multiplication by every letter it is a full transversal
    (induction on word length), which proves finite index exactly.
    """
    tgt = emb.target
    reps = []
    seen = set()
    for d in range(max_radius + 1):
        for x in tgt.shortlex_layer(d):
            r = emb.rep(x)
            if r not in seen:
                seen.add(r)
                reps.append(r)
        if all(emb.rep(t * letter) in seen for t in reps for _, letter in tgt.letters()):
            return reps
    return None


def _nontrivial_image_element(emb):
    for g in emb.source.generators():
        img = emb.apply(g)
        if not img.is_identity:
            return img
    raise ValueError("the subgroup is trivial")


# ---------------------------------------------------------------------------
# the main audits


def audit_hcf(emb, bounds=None):
    """Bounded audit of the highly core-free condition for an embedding.

    The trivial subgroup passes outright (every core of it is trivial).
    Otherwise a proven finite index yields the covering counterexample
    F = transversal, S_1 = {1}; failing that, one maximal-F H-set search
    per tuple decides pass at the bounds, since shrinking F or the tuple
    only enlarges the witness set.
    """
    bounds = bounds or AuditBounds()
    if emb.is_trivial():
        return AuditVerdict(PASS, bounds, {"reason": "trivial subgroup: every core is trivial"})
    try:
        transversal = prove_finite_index(emb, bounds.witness_radius)
        if transversal is not None:
            core = _nontrivial_image_element(emb)
            return AuditVerdict(FAIL, bounds, {
                "reason": f"finite index {len(transversal)} proven",
                "covering": {
                    "F": [str(t) for t in transversal],
                    "pieces": [{"members": ["1"]}],
                    "cores": [str(core)],
                },
            })
        ball = emb.target.ball(bounds.point_radius)
        nontrivial = [x for x in ball if not x.is_identity]
        size = min(bounds.tuple_size_max, len(nontrivial))
        witnesses = []
        for combo in itertools.combinations(nontrivial, size) if size else ():
            h = search_H_set(emb, combo, ball, bounds.witness_radius)
            if h is None:
                return AuditVerdict(UNDECIDED, bounds, {
                    "reason": "H-set witness search exhausted",
                    "failed_tuple": [str(x) for x in combo],
                    "covering_shape": _conjugation_covering_shape(emb, combo, ball, bounds),
                })
            witnesses.append({"tuple": [str(x) for x in combo], "witness": str(h)})
        return AuditVerdict(PASS, bounds, {
            "protected_radius": bounds.point_radius,
            "witnesses": witnesses,
        })
    except UndecidedError as exc:
        return AuditVerdict(UNDECIDED, bounds, {"reason": str(exc)})


def _conjugation_covering_shape(emb, xs, F, bounds):
    """The covering a genuine failure would produce: F' = union of F x_i^-1
    and pieces S_k = {h : h x_k h^-1 in Sigma}, listed at the bound."""
    f2 = [f * x.inverse() for f in F for x in xs]
    pieces = []
    for x in xs:
        members = [str(h) for h in emb.target.ball(bounds.witness_radius)
                   if emb.contains(h * x * h.inverse())]
        pieces.append({"conjugation_locus_of": str(x), "members_at_bound": members})
    out_f, seen = [], set()
    for f in f2:
        if f not in seen:
            seen.add(f)
            out_f.append(str(f))
    return {"F": out_f, "pieces": pieces}


def audit_highly_faithful(domain, bounds=None):
    """Bounded audit of high faithfulness for a pointed action.

    Coverings are searched in the shapes the counterexamples take: a finite
    piece P from the sample zone plus its complement.  A verdict of fail
    requires the cofinite piece's fixer to be exact (supports known);
    bounded-only fixers downgrade to undecided.
    """
    bounds = bounds or AuditBounds()
    zone = domain.zone(bounds.point_radius)
    candidates = []
    whole, exact = domain.cofinite_fixer((), bounds)
    if whole is not None:
        verdict = {"covering": {"F": [], "pieces": [{"complement_of": []}],
                                "fixers": [str(whole)]}}
        if exact:
            return AuditVerdict(FAIL, bounds, verdict)
        candidates.append(verdict)
    if bounds.covering_piece_max >= 2:
        for P in _finite_piece_candidates(zone):
            cof, exact = domain.cofinite_fixer(P, bounds)
            if cof is None:
                continue
            fin = domain.nontrivial_fixer_of(P, bounds.witness_radius)
            if fin is None:
                continue
            verdict = {"covering": {
                "F": [],
                "pieces": [{"members": [domain.describe(p) for p in P]},
                           {"complement_of": [domain.describe(p) for p in P]}],
                "fixers": [str(fin), str(cof)],
            }}
            if exact:
                return AuditVerdict(FAIL, bounds, verdict)
            candidates.append(verdict)
    if candidates:
        return AuditVerdict(UNDECIDED, bounds, {
            "reason": "covering candidates found but cofinite fixers are only bounded",
            "candidates": candidates})
    return AuditVerdict(PASS, bounds, {
        "zone": [domain.describe(p) for p in zone],
        "reason": "no covering in the audited shapes admits nontrivial fixers on every piece",
    })


def _finite_piece_candidates(zone):
    """Finite pieces worth probing: prefixes of the sample zone plus all
    singletons and pairs, in a fixed deterministic order.

    The known counterexample shapes are initial segments; the full power
    set is exponential and adds nothing the audit could verify anyway.
    """
    seen = set()
    out = []
    for k in range(1, len(zone)):
        cand = tuple(zone[:k])
        if cand not in seen:
            seen.add(cand)
            out.append(cand)
    for size in (1, 2):
        if size < len(zone):
            for cand in itertools.combinations(zone, size):
                if cand not in seen:
                    seen.add(cand)
                    out.append(cand)
    return out


def certify_structural(emb, bounds=None):
    """Bounded evidence for the structural sufficient condition.

    Three premises: infinite index (transversal keeps growing), relative
    icc (conjugacy classes of subgroup elements keep growing), and
    stabilizing intersections of the subgroup with ambient conjugacy
    classes.  A pass is consistency at the bounds, never a proof.
    """
    bounds = bounds or AuditBounds()
    tgt = emb.target
    premises = {}
    try:
        transversal = prove_finite_index(emb, bounds.witness_radius)
        if transversal is not None:
            premises["infinite_index"] = {
                "status": FAIL,
                "transversal": [str(t) for t in transversal]}
        else:
            counts = []
            seen = set()
            for d in range(bounds.witness_radius + 1):
                for x in tgt.shortlex_layer(d):
                    seen.add(emb.rep(x))
                counts.append(len(seen))
            growing = all(counts[i] < counts[i + 1] for i in range(len(counts) - 1))
            premises["infinite_index"] = {
                "status": PASS if growing else UNDECIDED,
                "transversal_counts": counts}

        ball_small = tgt.ball(bounds.point_radius)
        sigma_members = [g for g in ball_small if not g.is_identity and emb.contains(g)]
        icc = {"status": PASS, "per_element": []}
        for s in sigma_members:
            prev = {h * s * h.inverse() for h in tgt.ball(bounds.witness_radius - 1)}
            cur = {h * s * h.inverse() for h in tgt.ball(bounds.witness_radius)}
            closed = all((letter * c * letter.inverse()) in cur
                         for c in cur for _, letter in tgt.letters())
            if closed:
                status = FAIL
            elif len(cur) > len(prev):
                status = PASS
            else:
                status = UNDECIDED
            icc["per_element"].append({"element": str(s), "conjugates": len(cur),
                                       "status": status})
            if status == FAIL or (status == UNDECIDED and icc["status"] == PASS):
                icc["status"] = status
        premises["relative_icc"] = icc

        stab = {"status": PASS, "per_element": []}
        for h in ball_small:
            if h.is_identity:
                continue
            prev = {g * h * g.inverse() for g in tgt.ball(bounds.witness_radius - 1)}
            cur = {g * h * g.inverse() for g in tgt.ball(bounds.witness_radius)}
            prev_in = {c for c in prev if emb.contains(c)}
            cur_in = {c for c in cur if emb.contains(c)}
            status = PASS if prev_in == cur_in else UNDECIDED
            stab["per_element"].append({"element": str(h),
                                        "intersection": len(cur_in),
                                        "status": status})
            if status == UNDECIDED and stab["status"] == PASS:
                stab["status"] = status
        premises["class_intersections"] = stab
    except UndecidedError as exc:
        return AuditVerdict(UNDECIDED, bounds, {"reason": str(exc)})

    statuses = [p["status"] for p in premises.values()]
    overall = FAIL if FAIL in statuses else (UNDECIDED if UNDECIDED in statuses else PASS)
    return AuditVerdict(overall, bounds, {"premises": premises})


# ---------------------------------------------------------------------------
# pointed actions for the high-faithfulness audit


class PermutationDomain:
    """Finitely supported permutations of N with a bounded generated zone.

    Backed by a finite table group whose elements carry permutation tuples;
    everything at or beyond the degree is fixed, so supports are exact and
    cofinite fixers are decidable."""

    def __init__(self, group):
        if not hasattr(group, "perms"):
            raise ValueError("the group must carry permutation data")
        self.group = group
        self.degree = len(group.perms[0])

    def zone(self, radius):
        return list(range(radius + 1))

    def describe(self, x):
        return x

    def act(self, h, x):
        p = self.group.perms[h.payload]
        return p[x] if x < self.degree else x

    def nontrivial_fixer_of(self, points, radius):
        for h in self.group.iter_shortlex():
            if h.is_identity:
                continue
            if all(self.act(h, x) == x for x in points):
                return h
        return None

    def cofinite_fixer(self, excluded, bounds):
        allowed = set(excluded)
        for h in self.group.iter_shortlex():
            if h.is_identity:
                continue
            p = self.group.perms[h.payload]
            support = {k for k in range(self.degree) if p[k] != k}
            if support <= allowed:
                return h, True
        return None, True


class TranslationDomain:
    """The integers translating the integer line: fixed-point free."""

    def __init__(self, group):
        self.group = group

    def zone(self, radius):
        return list(range(-radius, radius + 1))

    def describe(self, x):
        return x

    def act(self, h, x):
        return x + h.payload[0]

    def nontrivial_fixer_of(self, points, radius):
        return None

    def cofinite_fixer(self, excluded, bounds):
        return None, True


class CosetDomain:
    """The target acting on the right-coset space of the embedded subgroup.

    h . (Sigma g) = Sigma g h^-1, so the stabilizer of a coset is the
    corresponding conjugate of the subgroup.  When a complete transversal
    is provable the space is finite and cofinite fixers are exact;
    otherwise they are only boundedly refutable, so the audit can pass or
    stay undecided but not fail.
    """

    def __init__(self, emb, probe_radius=6):
        self.emb = emb
        self.group = emb.target
        self._act_cache = {}
        try:
            self.transversal = prove_finite_index(emb, probe_radius)
        except UndecidedError:
            self.transversal = None

    def zone(self, radius):
        if self.transversal is not None:
            reps = set(self.transversal)
        else:
            reps = {self.emb.rep(g) for g in self.group.ball(radius)}
        return sorted(reps, key=lambda r: r.sort_key())

    def describe(self, rep):
        return str(rep)

    def act(self, h, rep):
        key = (h, rep)
        out = self._act_cache.get(key)
        if out is None:
            out = self.emb.rep(rep * h.inverse())
            self._act_cache[key] = out
        return out

    def nontrivial_fixer_of(self, points, radius):
        for h in self.group.iter_shortlex(radius):
            if h.is_identity:
                continue
            if all(self.act(h, r) == r for r in points):
                return h
        return None

    def cofinite_fixer(self, excluded, bounds):
        exact = self.transversal is not None
        sample = [r for r in self.zone(bounds.point_radius + 2) if r not in set(excluded)]
        for h in self.group.iter_shortlex(bounds.witness_radius):
            if h.is_identity:
                continue
            if all(self.act(h, r) == r for r in sample):
                return h, exact
        return None, exact


# ---------------------------------------------------------------------------
# evidence replay


def replay_hcf_verdict(emb, verdict):
    """Re-derive a verdict's evidence by direct evaluation."""
    from .normal_forms import parse_word

    ev = verdict.evidence
    if verdict.status == PASS:
        if "witnesses" not in ev:
            return emb.is_trivial()
        ball = emb.target.ball(verdict.bounds.point_radius)
        f_reps = {emb.rep(f) for f in ball}
        for item in ev["witnesses"]:
            xs = [parse_word(emb.target, w) for w in item["tuple"]]
            h = parse_word(emb.target, item["witness"])
            for x in xs:
                if emb.rep(h * x) in f_reps or emb.contains(h * x * h.inverse()):
                    return False
        return True
    if verdict.status == FAIL:
        cov = ev["covering"]
        transversal = [parse_word(emb.target, w) for w in cov["F"]]
        cores = [parse_word(emb.target, w) for w in cov["cores"]]
        if any(c.is_identity for c in cores):
            return False
        for piece, core in zip(cov["pieces"], cores):
            for member in piece["members"]:
                h = parse_word(emb.target, member)
                if not emb.contains(h * core * h.inverse()):
                    return False
        t_reps = {emb.rep(t) for t in transversal}
        return all(emb.rep(g) in t_reps
                   for g in emb.target.ball(verdict.bounds.witness_radius))
    return True


def replay_highly_faithful_verdict(domain, verdict):
    from .normal_forms import parse_word

    if verdict.status != FAIL:
        return True
    cov = verdict.evidence["covering"]
    fixers = [parse_word(domain.group, w) for w in cov["fixers"]]
    if any(f.is_identity for f in fixers):
        return False
    for piece, fixer in zip(cov["pieces"], fixers):
        if "members" in piece:
            pts = [_parse_domain_point(domain, m) for m in piece["members"]]
            if not all(domain.act(fixer, x) == x for x in pts):
                return False
        else:
            excluded = [_parse_domain_point(domain, m) for m in piece["complement_of"]]
            again, exact = domain.cofinite_fixer(excluded, verdict.bounds)
            if not exact:
                return False
            pts = [x for x in domain.zone(verdict.bounds.point_radius + 2)
                   if x not in set(excluded)]
            if not all(domain.act(fixer, x) == x for x in pts):
                return False
    return True


def _parse_domain_point(domain, value):
    from .normal_forms import parse_word

    if isinstance(value, int):
        return value
    return domain.emb.rep(parse_word(domain.group, value))
