"""End-to-end witness computation and example generation."""
from __future__ import annotations

import pytest

import eldiff as e

from conftest import classify_pair, deep_ladder_expected, deep_ladder_pair


def sets_of(rep, direction, mode):
    ms = rep.sets(direction, mode)
    return (ms.role_wtn, ms.rhs_wtn, ms.lhs_atomic, ms.lhs_dom, ms.lhs_ran)


def test_role_witnesses_direct():
    t1 = e.Terminology([e.RoleIncl("s", "r")])
    t2 = e.Terminology([])
    sigma = e.Signature.of([], ["r", "s"])
    i1, i2 = e.classify(t1), e.classify(t2)
    assert e.role_witnesses(i1, i2, sigma) == {("s", "r")}
    assert e.role_witnesses(i1, i1, sigma) == frozenset()


def test_role_witnesses_respect_signature(role_merge_pair):
    t1, t2, sigma = role_merge_pair
    i1, i2 = e.classify(t1), e.classify(t2)
    assert e.role_witnesses(i1, i2, sigma) == frozenset()  # subrole not in sigma
    assert e.role_witnesses(i1, i2, sigma, restrict_to_sigma=False) == {
        ("s", "r1"), ("s", "r2")}


def test_range_conj_full_matrix(range_conj_pair):
    t1, t2, sigma = range_conj_pair
    rep = e.compute_diff(t1, t2, sigma, mode="all", examples=True)
    for mode in ("concept", "instance", "query"):
        assert all(not s for s in sets_of(rep, "2->1", mode))
    assert all(not s for s in sets_of(rep, "1->2", "concept"))
    for mode in ("instance", "query"):
        role, rhs, lhs_a, lhs_d, lhs_r = sets_of(rep, "1->2", mode)
        assert rhs == {"B"}
        assert not (role or lhs_a or lhs_d or lhs_r)
        inc = rep.sets("1->2", mode).examples[("rhs", "B")]
        assert inc.lhs == e.conj([e.Ran("r"), e.Ran("s")])
        assert inc.rhs == e.Atom("B")


def test_query_only_difference(query_only_pair):
    t1, t2, sigma = query_only_pair
    rep = e.compute_diff(t1, t2, sigma, mode="all", examples=True)
    for mode in ("concept", "instance"):
        assert all(not s for s in sets_of(rep, "1->2", mode))
        assert all(not s for s in sets_of(rep, "2->1", mode))
    ms = rep.sets("1->2", "query")
    assert ms.lhs_atomic == {"A"} and not ms.rhs_wtn
    assert ms.examples[("lhs-atomic", "A")].rhs == e.ExistsUniversal(e.Atom("B"))
    assert all(not s for s in sets_of(rep, "2->1", "query"))


def test_role_merge_difference(role_merge_pair):
    t1, t2, sigma = role_merge_pair
    rep = e.compute_diff(t1, t2, sigma, mode="all", examples=True)
    for mode in ("concept", "instance"):
        assert all(not s for s in sets_of(rep, "1->2", mode))
        assert all(not s for s in sets_of(rep, "2->1", mode))
    ms = rep.sets("1->2", "query")
    assert ms.role_wtn == frozenset()
    assert ms.lhs_atomic == {"A"}
    assert ms.examples[("lhs-atomic", "A")].rhs == e.exists_roles(["r1", "r2"], e.TOP)


def test_ladder_concept_witness_and_example():
    for n in (2, 3):
        t1, t2, sigma = deep_ladder_pair(n)
        rep = e.compute_diff(t1, t2, sigma, mode="concept",
                             direction="forward", examples=True)
        ms = rep.sets("1->2", "concept")
        assert ms.rhs_wtn == {"A1"}
        assert not (ms.lhs_atomic or ms.lhs_dom or ms.lhs_ran or ms.role_wtn)
        inc = ms.examples[("rhs", "A1")]
        assert inc.lhs == deep_ladder_expected(n)
        assert e.role_depth(inc.lhs) == n


def test_bundled_successors_concept_lhs(bundled_successors_pair):
    t1, t2, sigma = bundled_successors_pair
    rep = e.compute_diff(t1, t2, sigma, mode="concept",
                         direction="forward", examples=True)
    ms = rep.sets("1->2", "concept")
    assert ms.lhs_atomic == {"A"}
    inc = ms.examples[("lhs-atomic", "A")]
    assert inc.rhs == e.Exists("r", e.conj([
        e.Exists("r", e.Atom("B1")), e.Exists("r", e.Atom("B2"))]))


def test_replacement_sensitivity_of_equations():
    t1 = e.Terminology([e.SubAtom("A", e.Exists("r", e.Atom("B"))),
                        e.EqAtom("Ap", e.Exists("r", e.Atom("Bp")))])
    t2 = e.Terminology([e.SubAtom("A", e.Exists("r", e.Atom("B"))),
                        e.SubAtom("Ap", e.Exists("r", e.Atom("Bp")))])
    sigma = e.Signature.of(["A", "Ap", "B", "Bp"], [])
    assert not e.compute_diff(t1, t2, sigma, mode="all").has_difference()
    bridge = [e.SubAtom("B", e.Atom("Bp"))]
    t1b = e.Terminology(list(t1.axioms) + bridge)
    t2b = e.Terminology(list(t2.axioms) + bridge)
    rep = e.compute_diff(t1b, t2b, sigma, mode="concept", examples=True)
    ms = rep.sets("1->2", "concept")
    assert "A" in ms.lhs_atomic and "Ap" in ms.rhs_wtn
    assert ms.examples[("lhs-atomic", "A")].rhs == e.Atom("Ap")


def test_self_diff_is_empty(range_conj_pair, role_merge_pair):
    for t, _, sigma in (range_conj_pair, role_merge_pair):
        rep = e.compute_diff(t, t, sigma, mode="all")
        assert not rep.has_difference()


def test_rhs_strategies_agree_on_fixtures(range_conj_pair, normalized_ladder_pair):
    for t1, t2, sigma in (range_conj_pair, normalized_ladder_pair):
        n1, n2, i1, i2 = classify_pair(t1, t2)
        for a, b in ((n1, n2), (n2, n1)):
            ia, ib = e.classify(a), e.classify(b)
            assert (e.rhs_witnesses_instance(a, b, ia, ib, sigma, "notwitness")
                    == e.rhs_witnesses_instance(a, b, ia, ib, sigma, "abox"))


def test_auto_strategy_falls_back_on_cyclic_inputs():
    cyclic = e.Terminology([e.EqAtom("A", e.Exists("r", e.Atom("A"))),
                            e.SubAtom("B", e.Atom("A"))])
    flat = e.Terminology([])
    sigma = e.Signature.of(["A", "B"], ["r"])
    rep = e.compute_diff(cyclic, flat, sigma, mode="instance")
    assert rep.sets("1->2", "instance").rhs_wtn == {"A"}
    with pytest.raises(e.CyclicityError):
        e.compute_diff(cyclic, flat, sigma, mode="instance", strategy="notwitness")


def test_lhs_example_kinds():
    t1 = e.Terminology([e.RangeRestr("r", e.Atom("C")),
                        e.DomainRestr("s", e.Atom("D"))])
    t2 = e.Terminology([])
    sigma = e.Signature.of(["C", "D"], ["r", "s"])
    rep = e.compute_diff(t1, t2, sigma, mode="instance",
                         direction="forward", examples=True)
    ms = rep.sets("1->2", "instance")
    assert ms.lhs_ran == {"r"} and ms.lhs_dom == {"s"}
    assert ms.examples[("lhs-ran", "r")] == e.Inclusion(e.Ran("r"), e.Atom("C"))
    assert ms.examples[("lhs-dom", "s")] == e.Inclusion(
        e.Exists("s", e.TOP), e.Atom("D"))


def test_example_overflow_is_flagged():
    t1, t2, sigma = deep_ladder_pair(3)
    rep = e.compute_diff(t1, t2, sigma, mode="concept", direction="forward",
                         examples=True, max_example_size=4)
    ms = rep.sets("1->2", "concept")
    assert ms.rhs_wtn == {"A1"}
    assert ("rhs", "A1") in ms.overflow
    assert ("rhs", "A1") not in ms.examples


def test_default_signature_is_the_shared_one(range_conj_pair):
    t1, _, _ = range_conj_pair
    t2 = e.parse_terminology("(range r A1)(define-primitive-concept X A1)")
    sigma = e.default_signature(t1, t2)
    assert sigma.concept_names == {"A1"}
    assert sigma.role_names == {"r"}


def test_report_invariants_hold_on_fixture_matrix(range_conj_pair,
                                                  role_merge_pair,
                                                  query_only_pair):
    for t1, t2, sigma in (range_conj_pair, role_merge_pair, query_only_pair):
        rep = e.compute_diff(t1, t2, sigma, mode="all")
        rep.check_invariants()
        for d in rep.directions():
            inst = rep.sets(d, "instance")
            q = rep.sets(d, "query")
            c = rep.sets(d, "concept")
            assert q.rhs_wtn == inst.rhs_wtn
            assert c.rhs_wtn <= inst.rhs_wtn
            assert (c.lhs_atomic, c.lhs_dom, c.lhs_ran) == (
                inst.lhs_atomic, inst.lhs_dom, inst.lhs_ran)
            assert inst.lhs_atomic <= q.lhs_atomic


def test_parallel_examples_match_serial(range_conj_pair):
    t1, t2, sigma = range_conj_pair
    serial = e.compute_diff(t1, t2, sigma, mode="instance", examples=True)
    threaded = e.compute_diff(t1, t2, sigma, mode="instance", examples=True,
                              parallel=4)
    a = serial.sets("1->2", "instance")
    b = threaded.sets("1->2", "instance")
    assert a.examples == b.examples and a.rhs_wtn == b.rhs_wtn
