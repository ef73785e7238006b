import itertools

import pytest

from hightrans import fixtures, hcf
from hightrans.action import Point, plain_level_action


@pytest.fixture(scope="module")
def comm():
    return fixtures.commutator_subgroup_embedding()


@pytest.fixture(scope="module")
def even():
    return fixtures.even_integers_embedding()


def h_set_conditions(emb, h, xs, F):
    f_reps = {emb.rep(f) for f in F}
    return all(emb.rep(h * x) not in f_reps
               and not emb.contains(h * x * h.inverse()) for x in xs)


def g_set_conditions(emb, h, xs, F):
    f_reps = {emb.rep(f) for f in F}
    if any(emb.rep(h * x) in f_reps for x in xs):
        return False
    return all(not emb.contains(h * xs[i] * xs[j].inverse() * h.inverse())
               for i in range(len(xs)) for j in range(len(xs)) if i != j)


def e_set_conditions(action, h, xs, F):
    f_reps = {action.orbit_rep(f) for f in F}
    imgs = [action.act(h, x) for x in xs]
    reps = [action.orbit_rep(p) for p in imgs]
    return all(r not in f_reps for r in reps) and len(set(reps)) == len(reps)


def test_search_h_trivial_subgroup():
    triv = fixtures.trivial_subgroup_embedding()
    z = triv.target
    h = hcf.search_H_set(triv, [z.generator("a")], [z.identity()], 2)
    assert h is not None and h.is_identity


def test_search_h_commutator(comm):
    f = comm.target
    h = hcf.search_H_set(comm, [f.generator("a")], [f.identity()], 2)
    assert h is not None
    assert h_set_conditions(comm, h, [f.generator("a")], [f.identity()])


def test_search_h_finite_index_always_empty(even):
    z = even.target
    two = z.generator("a") ** 2
    F = [z.identity(), z.generator("a")]
    for radius in (2, 4, 8):
        assert hcf.search_H_set(even, [two], F, radius) is None


def test_search_h_rejects_identity_entries(comm):
    with pytest.raises(ValueError):
        hcf.search_H_set(comm, [comm.target.identity()], [], 2)


def test_search_g_example(comm):
    f = comm.target
    xs = [f.identity(), f.generator("a")]
    h = hcf.search_G_set(comm, xs, [f.identity()], 4)
    assert h is not None
    assert g_set_conditions(comm, h, xs, [f.identity()])
    # the worked example witness is valid too
    assert g_set_conditions(comm, f.generator("b"), xs, [f.identity()])


def test_search_g_rejects_diagonal(comm):
    a = comm.target.generator("a")
    with pytest.raises(ValueError):
        hcf.search_G_set(comm, [a, a], [], 2)


def test_search_e_basic(comm):
    action = plain_level_action(comm)
    f = comm.target
    xs = [Point(f.identity(), 0), Point(f.generator("a"), 0)]
    F = [Point(f.identity(), 0)]
    h = hcf.search_E_set(action, xs, F, 2)
    assert h is not None
    assert e_set_conditions(action, h, xs, F)


def test_search_e_same_orbit_normal_subgroup(even):
    # with 2Z < Z every translate keeps the two points in one orbit, so the
    # disjointness condition can never hold
    action = plain_level_action(even)
    z = even.target
    xs = [Point(z.identity(), 0), Point(z.generator("a") ** 2, 0)]
    assert hcf.search_E_set(action, xs, [], 6) is None


# ---------------------------------------------------------------------------
# audits


def test_audit_trivial_passes():
    v = hcf.audit_hcf(fixtures.trivial_subgroup_embedding())
    assert v.passed
    assert hcf.replay_hcf_verdict(fixtures.trivial_subgroup_embedding(), v)


def test_audit_commutator_passes(comm):
    v = hcf.audit_hcf(comm, hcf.AuditBounds(2, 2, 4))
    assert v.passed
    assert hcf.replay_hcf_verdict(comm, v)


def test_audit_gaussian_units_passes():
    emb = fixtures.gaussian_units_subgroup_embedding()
    v = hcf.audit_hcf(emb, hcf.AuditBounds(2, 2, 4))
    assert v.passed
    assert hcf.replay_hcf_verdict(emb, v)


def test_audit_even_fails_with_covering(even):
    v = hcf.audit_hcf(even)
    assert v.failed
    cov = v.evidence["covering"]
    assert cov["pieces"] == [{"members": ["1"]}]
    assert len(cov["F"]) == 2
    assert hcf.replay_hcf_verdict(even, v)


def test_audit_finite_group_subgroup_fails():
    from hightrans.embeddings import Embedding
    from hightrans.groups import cyclic_group
    z6 = cyclic_group("Z6a", 6, "g")
    z2 = cyclic_group("Z2a", 2, "x")
    emb = Embedding("z2inz6", z2, z6, [z6.generator("g") ** 3])
    v = hcf.audit_hcf(emb)
    assert v.failed


def test_tampered_fail_evidence_rejected(even):
    v = hcf.audit_hcf(even)
    v.evidence["covering"]["cores"] = ["1"]
    assert not hcf.replay_hcf_verdict(even, v)


def test_pass_implies_core_free_at_bounds(comm):
    # a pass leaves no nontrivial small element inside every conjugate of
    # the subgroup over the witness ball
    bounds = hcf.AuditBounds(2, 2, 4)
    assert hcf.audit_hcf(comm, bounds).passed
    ball_r = comm.target.ball(bounds.witness_radius)
    for g in comm.target.ball(bounds.point_radius):
        if g.is_identity:
            continue
        assert any(not comm.contains(h * g * h.inverse()) for h in ball_r)


def test_structural_certificates():
    assert hcf.certify_structural(fixtures.commutator_subgroup_embedding()).passed
    assert hcf.certify_structural(fixtures.primitive_cyclic_embedding()).passed
    assert hcf.certify_structural(fixtures.gaussian_units_subgroup_embedding()).passed
    improper = hcf.certify_structural(fixtures.improper_embedding())
    assert improper.failed
    assert improper.evidence["premises"]["infinite_index"]["status"] == "fail"


def test_structural_flags_finite_index(even):
    v = hcf.certify_structural(even)
    assert v.failed
    assert v.evidence["premises"]["infinite_index"]["status"] == "fail"


# ---------------------------------------------------------------------------
# highly faithful audits


def test_highly_faithful_translation_passes():
    dom = hcf.TranslationDomain(fixtures.integers())
    assert hcf.audit_highly_faithful(dom).passed


def test_highly_faithful_perm_domain_fails():
    dom = hcf.PermutationDomain(fixtures.finitely_supported_permutations(4))
    v = hcf.audit_highly_faithful(dom)
    assert v.failed
    cov = v.evidence["covering"]
    assert cov["pieces"][0] == {"members": [0, 1]}
    assert cov["pieces"][1] == {"complement_of": [0, 1]}
    assert hcf.replay_highly_faithful_verdict(dom, v)


def test_highly_faithful_perm_tamper_rejected():
    dom = hcf.PermutationDomain(fixtures.finitely_supported_permutations(4))
    v = hcf.audit_highly_faithful(dom)
    v.evidence["covering"]["fixers"][0] = "1"
    assert not hcf.replay_highly_faithful_verdict(dom, v)


def test_highly_faithful_coset_cross_checks(comm, even):
    # condition-5 cross-check: the coset action mirrors the core audit
    assert hcf.audit_highly_faithful(hcf.CosetDomain(comm)).passed
    v = hcf.audit_highly_faithful(hcf.CosetDomain(even))
    assert v.failed
    assert hcf.replay_highly_faithful_verdict(hcf.CosetDomain(even), v)


# ---------------------------------------------------------------------------
# transports between the witness sets


def test_hset_transports_into_gset(comm):
    f = comm.target
    ball = f.ball(2)
    nontrivial = [x for x in ball if not x.is_identity]
    F = f.ball(1)
    checked = 0
    for xs in itertools.combinations(nontrivial, 2):
        ys, f2 = hcf.hset_instance_for_gset(list(xs), F)
        h = hcf.search_H_set(comm, ys, f2, 6)
        assert h is not None
        assert g_set_conditions(comm, h, list(xs), F)
        checked += 1
    assert checked == len(list(itertools.combinations(nontrivial, 2)))


def test_gset_transports_into_eset(comm):
    action = plain_level_action(comm)
    f = comm.target
    pts = [Point(g, lvl) for g in f.ball(1) for lvl in (0, 1)]
    F = [Point(g, 0) for g in f.ball(1)]
    checked = 0
    for xs in itertools.combinations(pts, 2):
        ys, f2 = hcf.gset_instance_for_eset(action, list(xs), F)
        h = hcf.search_G_set(comm, ys, f2, 6)
        assert h is not None
        assert e_set_conditions(action, h, list(xs), F)
        checked += 1
    assert checked > 0


def test_gset_transport_single_group_part(comm):
    action = plain_level_action(comm)
    f = comm.target
    xs = [Point(f.generator("a"), 0), Point(f.generator("a"), 1)]
    ys, f2 = hcf.gset_instance_for_eset(action, xs, [Point(f.identity(), 0)])
    assert len(ys) == 2 and ys[0] != ys[1]
    h = hcf.search_G_set(comm, ys, f2, 6)
    assert h is not None
    assert e_set_conditions(action, h, xs, [Point(f.identity(), 0)])


def test_undecided_propagates_to_verdict():
    from hightrans.embeddings import Embedding
    from hightrans.groups import FreeGroup
    f = FreeGroup("UF", ("a", "b"))
    s = FreeGroup("US", ("u", "v"))
    emb = Embedding("squares", s, f, [f.generator("a") ** 2, f.generator("b") ** 2])
    v = hcf.audit_hcf(emb, hcf.AuditBounds(1, 2, 4))
    assert v.status == "undecided"
    assert "undecided" in v.evidence["reason"]
