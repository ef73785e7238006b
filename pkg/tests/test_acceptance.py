"""Acceptance suite: one test per criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import itertools
import json
import time

from hightrans import fixtures, graphs, hcf
from hightrans.action import Point, evaluate_pi, plain_level_action
from hightrans.engine import Budget, EngineProblem, run_schedule, verify_certificate_report
from hightrans.normal_forms import parse_word, reduce_word

from oracles import affine_bs12, all_words, psl2z_key


def report(n, text):
    print(f"\nACCEPTANCE {n}: PASS - {text}")


def partitions_agree(group, labels, oracle, max_len):
    """All pairs of words of length <= max_len agree between the normal
    form and the oracle iff the two induced partitions coincide."""
    nf_to_key, key_to_nf = {}, {}
    count = 0
    for w in all_words(labels, max_len):
        nf = reduce_word(group, list(w))
        key = oracle(w)
        assert nf_to_key.setdefault(nf, key) == key, f"equal words split by oracle: {w}"
        assert key_to_nf.setdefault(key, nf) == nf, f"distinct words merged: {w}"
        count += 1
    return count


def test_criterion_1_word_problem_soundness():
    start = time.monotonic()
    n1 = partitions_agree(fixtures.bs12(), ("a", "t"), affine_bs12, 6)
    n2 = partitions_agree(fixtures.z2_star_z3(), ("x", "y"), psl2z_key, 6)
    elapsed = time.monotonic() - start
    assert elapsed < 30
    report(1, f"equal() matches the matrix oracles on all pairs of "
              f"{n1} + {n2} words of length <= 6 in {elapsed:.1f}s")


def test_criterion_2_surface_relation():
    surface = fixtures.surface_group()
    rel = parse_word(surface, "a1 b1 a1^-1 b1^-1 b2 a2 b2^-1 a2^-1")
    assert rel.is_identity
    report(2, "the genus-2 relation word reduces to the identity")


def test_criterion_3_hcf_positive_fixtures():
    bounds = hcf.AuditBounds(tuple_size_max=2, point_radius=2, witness_radius=4)
    start = time.monotonic()
    cases = [
        ("commutator subgroup of F2", fixtures.commutator_subgroup_embedding()),
        ("trivial subgroup of Z", fixtures.trivial_subgroup_embedding()),
        ("unit subgroup of the Gaussian affine group",
         fixtures.gaussian_units_subgroup_embedding()),
    ]
    for label, emb in cases:
        audit = hcf.audit_hcf(emb, bounds)
        assert audit.passed, f"{label}: {audit}"
        assert hcf.replay_hcf_verdict(emb, audit), label
        structural = hcf.certify_structural(emb, bounds)
        assert structural.passed, f"{label}: structural {structural}"
    elapsed = time.monotonic() - start
    assert elapsed < 60
    report(3, f"three positive fixtures pass at bounds (2,2,4) with "
              f"structural corroboration in {elapsed:.1f}s")


def test_criterion_4_negative_fixtures():
    even = fixtures.even_integers_embedding()
    v = hcf.audit_hcf(even)
    assert v.failed
    assert v.evidence["covering"]["pieces"] == [{"members": ["1"]}]
    assert sorted(v.evidence["covering"]["F"]) == ["1", "a"]
    assert hcf.replay_hcf_verdict(even, v)

    dom = hcf.PermutationDomain(fixtures.finitely_supported_permutations(4))
    w = hcf.audit_highly_faithful(dom)
    assert w.failed
    assert w.evidence["covering"]["pieces"][0] == {"members": [0, 1]}
    assert w.evidence["covering"]["pieces"][1] == {"complement_of": [0, 1]}
    assert hcf.replay_highly_faithful_verdict(dom, w)
    report(4, "index-two subgroup fails with the single-piece covering and "
              "the bounded permutation fixture fails with {0,1} | {k>=2}; "
              "both counterexamples re-verify")


def test_criterion_5_equivalence_cross_checks():
    emb = fixtures.commutator_subgroup_embedding()
    f = emb.target
    ball2 = f.ball(2)
    nontrivial = [x for x in ball2 if not x.is_identity]
    F = f.ball(1)
    f_reps = {emb.rep(x) for x in F}
    total = transported = 0
    for xs in itertools.combinations(nontrivial, 2):
        ys, f2 = hcf.hset_instance_for_gset(list(xs), F)
        h = hcf.search_H_set(emb, ys, f2, 6)
        assert h is not None
        assert all(emb.rep(h * x) not in f_reps for x in xs)
        hinv = h.inverse()
        assert all(not emb.contains(h * xs[i] * xs[j].inverse() * hinv)
                   for i in range(2) for j in range(2) if i != j)
        total += 1
        transported += 1

    action = plain_level_action(emb)
    pts = [Point(g, lvl) for g in f.ball(1) for lvl in (0, 1)]
    fpts = [Point(g, 0) for g in f.ball(1)]
    fp_reps = {action.orbit_rep(p) for p in fpts}
    for xs in itertools.combinations(pts, 2):
        ys, f2 = hcf.gset_instance_for_eset(action, list(xs), fpts)
        h = hcf.search_G_set(emb, ys, f2, 6)
        assert h is not None
        imgs = [action.act(h, x) for x in xs]
        reps = [action.orbit_rep(p) for p in imgs]
        assert all(r not in fp_reps for r in reps)
        assert len(set(reps)) == len(reps)
        total += 1
        transported += 1
    assert transported == total
    report(5, f"{transported}/{total} sampled instances transport between "
              "the three witness sets")


def _engine_criterion(factories, label):
    certs = {}
    for name, factory in factories:
        start = time.monotonic()
        cert = run_schedule(factory(), Budget(steps=50), name)
        elapsed = time.monotonic() - start
        assert elapsed < 120, f"{name}: {elapsed:.1f}s"
        assert len(cert["steps"]) == 50
        assert cert["deferred"] == []
        ok, reason = verify_certificate_report(factory(), cert)
        assert ok, f"{name}: {reason}"
        cert2 = run_schedule(factory(), Budget(steps=50), name)
        assert (json.dumps(cert, sort_keys=True)
                == json.dumps(cert2, sort_keys=True)), f"{name}: runs differ"
        certs[name] = (factory, cert)
    return certs


AMALGAM_RUNS = [("z-star-z", fixtures.z_star_z), ("surface", fixtures.surface_group)]
HNN_RUNS = [("free2-hnn", fixtures.free2_hnn), ("gaussian-hnn", fixtures.gaussian_hnn)]
_cert_cache = {}


def _cli_build_cycle(problem_file, tmp_path):
    from hightrans import cli
    from conftest import problem_path
    out = str(tmp_path / (problem_file + ".cert.json"))
    rc = cli.main(["build", problem_path(problem_file), "--budget", "50",
                   "--out", out, "--seedless"])
    assert rc == 0, f"{problem_file}: build exit {rc}"
    rc = cli.main(["verify", problem_path(problem_file), out])
    assert rc == 0, f"{problem_file}: verify exit {rc}"


def test_criterion_6_engine_amalgams(tmp_path, capsys):
    _cert_cache.update(_engine_criterion(AMALGAM_RUNS, "amalgam"))
    for name in ("z-star-z.json", "pi1-sigma2.json"):
        _cli_build_cycle(name, tmp_path)
    capsys.readouterr()
    report(6, "50-step builds on the two amalgams (library and cli): zero "
              "deferred, verified replay, byte-identical double runs")


def test_criterion_7_engine_hnn(tmp_path, capsys):
    _cert_cache.update(_engine_criterion(HNN_RUNS, "hnn"))
    for name in ("free2-hnn.json", "gaussian-hnn.json"):
        _cli_build_cycle(name, tmp_path)
    capsys.readouterr()
    report(7, "50-step builds on the two HNN fixtures (library and cli): "
              "zero deferred, verified replay, byte-identical double runs")


def test_criterion_8_monotone_invariants():
    from hightrans.engine import (_parse_point, _verify_faithfulness_step,
                                  _verify_transitivity_step)

    if not _cert_cache:
        _cert_cache.update(_engine_criterion(AMALGAM_RUNS + HNN_RUNS, "all"))
    violations = 0
    steps_checked = 0
    for name, (factory, cert) in _cert_cache.items():
        gamma = factory()
        problem = EngineProblem(gamma)
        state = problem.new_state()
        history = []
        for step in cert["steps"]:
            if step["kind"] == "transitivity":
                ok, reason = _verify_transitivity_step(problem, state, step)
            else:
                ok, reason = _verify_faithfulness_step(problem, state, step)
            assert ok, f"{name} step {step['index']}: {reason}"
            history.append(step)
            steps_checked += 1
            assert state.check_equivariance(), f"{name}: equivariance"
            for rep, (x0, y0) in state.anchors.items():
                assert x0.level == y0.level == rep.level, f"{name}: level change"
            for past in history:
                if past["kind"] == "transitivity":
                    mover = parse_word(gamma, past["mover"])
                    for xj, yj in zip(past["xs"], past["ys"]):
                        if evaluate_pi(state, mover,
                                       _parse_point(gamma, xj)) != _parse_point(gamma, yj):
                            violations += 1
                else:
                    g = parse_word(gamma, past["element"])
                    w = _parse_point(gamma, past["witness"])
                    img = _parse_point(gamma, past["image"])
                    got = evaluate_pi(state, g, w)
                    if got != img or got == w:
                        violations += 1
    assert violations == 0
    report(8, f"equivariance, batch closure, level preservation and "
              f"persistence hold across all {steps_checked} replayed steps "
              "with zero violations")


def test_criterion_9_graph_reduction():
    surf = graphs.reduce_edge(fixtures.surface_graph(), "e0")
    assert surf.kind == "amalgam"
    gauss = graphs.reduce_edge(fixtures.gaussian_loop_graph(), "e0")
    assert gauss.kind == "hnn"
    theta = graphs.reduce_edge(fixtures.theta_graph(), "e2")
    assert theta.kind == "hnn" and theta.gamma.base.kind == "amalgam"

    rep_v = graphs.validate_main_hypotheses(fixtures.planted_finite_vertex_graph())
    assert rep_v["overall"] == "fail"
    assert rep_v["vertices"]["p"]["status"] == "fail"
    rep_e = graphs.validate_main_hypotheses(fixtures.planted_finite_index_edge_graph())
    assert rep_e["overall"] == "fail"
    assert rep_e["edges"]["e0"]["source"]["hcf"].failed
    report(9, "reductions take the expected shapes and the planted finite "
              "vertex and finite-index edge are both flagged")
