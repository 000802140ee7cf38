"""Canonical models, concept evaluation, and the ABox translations."""
from __future__ import annotations

import pytest

import eldiff as e
from eldiff.canonical import (
    Aux, Named, UnknownIndividualError, canonical_model, terminology_subconcepts,
)
from eldiff.oracle import generate_random_terminology
from eldiff.simulation import _ABoxView


def kb(t, *assertions):
    return e.KnowledgeBase(t, e.ABox(list(assertions)))


def test_degenerate_generating_interpretation():
    k = kb(e.Terminology([]), e.ConceptAssert("A", "a"))
    w = e.build_generating(k)
    assert w.domain == {Named("a")}
    assert w.concept_ext["A"] == {Named("a")}


def test_generating_grid_is_roles_times_subconcepts():
    t = e.parse_terminology("(define-primitive-concept A (some r B))\n"
                            "(define-primitive-concept C (some s B))")
    k = kb(t, e.ConceptAssert("A", "a"))
    w = e.build_generating(k)
    aux = {d for d in w.domain if isinstance(d, Aux)}
    assert len(aux) == 2 * len(terminology_subconcepts(t))


def test_generating_interpretation_of_bundled_successors(bundled_successors_pair):
    t1, _, _ = bundled_successors_pair
    w = e.build_generating(kb(t1, e.ConceptAssert("A", "a")))
    x_f0 = Aux("r", e.Atom("F0"))
    assert (Named("a"), x_f0) in w.role_ext["r"]
    assert (x_f0, Aux("r", e.Atom("B1"))) in w.role_ext["r"]
    assert (x_f0, Aux("r", e.Atom("B2"))) in w.role_ext["r"]


def test_canonical_model_keeps_only_reachable_elements(bundled_successors_pair):
    t1, _, _ = bundled_successors_pair
    m = e.build_canonical(kb(t1, e.ConceptAssert("A", "a")))
    assert m.domain == {Named("a"), Aux("r", e.Atom("F0")),
                        Aux("r", e.Atom("B1")), Aux("r", e.Atom("B2"))}


def test_unreachable_aux_elements_are_absent():
    t = e.parse_terminology("(define-primitive-concept X (some r B))")
    m = e.build_canonical(kb(t, e.ConceptAssert("A", "a")))
    assert m.domain == {Named("a")}  # X never holds for a


def test_eval_top_is_the_domain(bundled_successors_pair):
    t1, _, _ = bundled_successors_pair
    m = e.build_canonical(kb(t1, e.ConceptAssert("A", "a")))
    assert e.eval_concept(m, e.TOP) == m.domain


def test_eval_finds_the_separating_concept(bundled_successors_pair):
    t1, _, _ = bundled_successors_pair
    m = e.build_canonical(kb(t1, e.ConceptAssert("A", "a")))
    c = e.Exists("r", e.conj([e.Exists("r", e.Atom("B1")),
                              e.Exists("r", e.Atom("B2"))]))
    assert Named("a") in e.eval_concept(m, c)


def test_eval_role_conjunction_on_canonical_models(role_merge_pair):
    t1, t2, _ = role_merge_pair
    q = e.exists_roles(["r1", "r2"], e.TOP)
    m1 = e.build_canonical(kb(t1, e.ConceptAssert("A", "a")))
    m2 = e.build_canonical(kb(t2, e.ConceptAssert("A", "a")))
    assert m1.individual_map["a"] in e.eval_concept(m1, q)
    assert m2.individual_map["a"] not in e.eval_concept(m2, q)


def test_instance_check_range_conjunction(range_conj_pair):
    t1, t2, _ = range_conj_pair
    ab = e.ABox([e.RoleAssert("r", "a", "c"), e.RoleAssert("s", "b", "c")])
    assert e.instance_check(e.KnowledgeBase(t1, ab), None, e.Atom("B"), "c")
    assert not e.instance_check(e.KnowledgeBase(t2, ab), None, e.Atom("B"), "c")


def test_instance_check_trivial_assertion():
    k = kb(e.Terminology([]), e.ConceptAssert("A", "a"))
    assert e.instance_check(k, None, e.Atom("A"), "a")


def test_instance_check_unknown_individual():
    k = kb(e.Terminology([]), e.ConceptAssert("A", "a"))
    with pytest.raises(UnknownIndividualError):
        e.instance_check(k, None, e.Atom("A"), "zz")


def test_concept_to_abox_atomic():
    ab, root = e.concept_to_abox(e.Atom("A"))
    assert ab.assertions == {e.ConceptAssert("A", root)}


def test_concept_to_abox_range():
    ab, root = e.concept_to_abox(e.Ran("r"))
    (assertion,) = ab.assertions
    assert assertion == e.RoleAssert("r", "nran", root)


def test_concept_to_abox_keeps_occurrences_distinct():
    # two occurrences of the same subconcept become distinct individuals,
    # both targets of edges from the shared range source
    c = e.conj([
        e.Exists("r", e.conj([e.Atom("A"), e.Ran("v")])),
        e.Exists("s", e.conj([
            e.Exists("t", e.conj([e.Atom("A"), e.Ran("v")])),
            e.Exists("t", e.conj([e.Atom("B"), e.Ran("s")]))]))])
    ab, root = e.concept_to_abox(c)
    v_edges = [a for a in ab.assertions
               if isinstance(a, e.RoleAssert) and a.role == "v"]
    assert len(v_edges) == 2
    assert all(a.subj == "nran" for a in v_edges)
    assert len({a.obj for a in v_edges}) == 2
    a_nodes = {a.indiv for a in ab.assertions
               if isinstance(a, e.ConceptAssert) and a.name == "A"}
    assert {a.obj for a in v_edges} == a_nodes


def test_concept_to_abox_top_filler():
    ab, root = e.concept_to_abox(e.Exists("r", e.TOP))
    kinds = sorted(type(a).__name__ for a in ab.assertions)
    assert kinds == ["ConceptAssert", "RoleAssert"]
    (ca,) = [a for a in ab.assertions if isinstance(a, e.ConceptAssert)]
    assert ca.name is None


def test_neighborhood_concept_of_double_range():
    ab = e.ABox([e.RoleAssert("r", "a", "c"), e.RoleAssert("s", "b", "c")])
    assert e.abox_neighborhood_concept(ab, "c", 0) == e.conj([e.Ran("r"), e.Ran("s")])


def test_neighborhood_concept_isolated_individual():
    ab = e.ABox([e.ConceptAssert(None, "a")])
    for n in (0, 1, 3):
        assert e.abox_neighborhood_concept(ab, "a", n) == e.TOP


def test_neighborhood_concept_depth_one():
    # the recurrence restates the incoming label below the restriction;
    # the result is equivalent to A and (some r B)
    ab = e.ABox([e.ConceptAssert("A", "a"), e.RoleAssert("r", "a", "b"),
                 e.ConceptAssert("B", "b")])
    got = e.abox_neighborhood_concept(ab, "a", 1)
    expected = e.conj([e.Atom("A"),
                       e.Exists("r", e.conj([e.Atom("B"), e.Ran("r")]))])
    assert got == expected
    empty = e.Terminology([])
    stripped = e.conj([e.Atom("A"), e.Exists("r", e.Atom("B"))])
    assert e.entails_subsumption(empty, got, stripped)
    tree, root = e.concept_to_abox(stripped)
    assert _ABoxView(tree).satisfies(root, got)


def test_neighborhood_concept_unknown_individual():
    ab = e.ABox([e.ConceptAssert("A", "a")])
    with pytest.raises(UnknownIndividualError):
        e.abox_neighborhood_concept(ab, "zzz", 0)


def _random_kb(seed):
    import random
    rng = random.Random(seed)
    t = generate_random_terminology(4, 2, 0.5, 0.4, 2, seed,
                                    range_ratio=0.4, domain_ratio=0.3,
                                    role_incl_ratio=0.3)
    names = sorted(e.signature_of(t).concept_names)
    roles = sorted(e.signature_of(t).role_names)
    inds = ["a", "b", "c"]
    assertions: list = [e.ConceptAssert(rng.choice(names), rng.choice(inds))]
    for _ in range(rng.randint(1, 4)):
        if rng.random() < 0.5:
            assertions.append(e.ConceptAssert(rng.choice(names), rng.choice(inds)))
        else:
            assertions.append(e.RoleAssert(rng.choice(roles), rng.choice(inds),
                                           rng.choice(inds)))
    return e.KnowledgeBase(t, e.ABox(assertions))


def model_satisfies_axioms(k: e.KnowledgeBase) -> bool:
    m = e.build_canonical(k)
    t = k.plain_terminology()
    for ax in t.axioms:
        if isinstance(ax, e.SubAtom):
            if not e.eval_concept(m, e.Atom(ax.lhs)) <= e.eval_concept(m, ax.rhs):
                return False
        elif isinstance(ax, e.EqAtom):
            if e.eval_concept(m, e.Atom(ax.lhs)) != e.eval_concept(m, ax.rhs):
                return False
        elif isinstance(ax, e.RangeRestr):
            if not e.eval_concept(m, e.Ran(ax.role)) <= e.eval_concept(m, ax.rhs):
                return False
        elif isinstance(ax, e.DomainRestr):
            if not e.eval_concept(m, e.Exists(ax.role, e.TOP)) <= e.eval_concept(m, ax.rhs):
                return False
        else:
            if not m.role_ext.get(ax.sub, frozenset()) <= m.role_ext.get(ax.sup, frozenset()):
                return False
    for assertion in k.abox.assertions:
        if isinstance(assertion, e.ConceptAssert):
            if assertion.name and m.individual_map[assertion.indiv] not in \
                    e.eval_concept(m, e.Atom(assertion.name)):
                return False
        else:
            pair = (m.individual_map[assertion.subj], m.individual_map[assertion.obj])
            if pair not in m.role_ext.get(assertion.role, frozenset()):
                return False
    return True


def test_canonical_model_is_a_model():
    for seed in range(40):
        assert model_satisfies_axioms(_random_kb(seed)), seed


def test_neighborhood_concepts_hold_at_their_individual():
    for seed in range(20):
        k = _random_kb(seed)
        free = e.KnowledgeBase(e.Terminology([]), k.abox)
        m = canonical_model(free)
        view = _ABoxView(k.abox)
        for a in sorted(k.abox.obj):
            for n in (0, 1, 2):
                c = e.abox_neighborhood_concept(k.abox, a, n)
                assert view.satisfies(a, c), (seed, a, n)
                assert m.individual_map[a] in e.eval_concept(m, c)


def test_bounded_neighborhood_entailment_matches_instance_checking():
    """Membership of an individual equals entailment from some bounded
    neighbourhood concept, with the search capped by model size."""
    for seed in range(15):
        k = _random_kb(seed)
        m = canonical_model(k)
        t = k.plain_terminology()
        names = sorted(e.signature_of(t).concept_names)[:3]
        roles = sorted(e.signature_of(t).role_names)[:1]
        queries = [e.Atom(a) for a in names]
        queries += [e.Exists(r, e.Atom(a)) for r in roles for a in names[:2]]
        for a in sorted(k.abox.obj):
            for d in queries:
                holds = e.instance_check(k, None, d, a)
                cap = len(m.domain) * (1 + e.role_depth(d)) + 1
                found = any(
                    e.entails_subsumption(
                        t, e.abox_neighborhood_concept(k.abox, a, n), d)
                    for n in range(cap + 1))
                assert holds == found, (seed, a, d)


def test_eval_monotone_under_extension():
    """Adding edges and memberships never shrinks plain-concept extensions."""
    from eldiff.canonical import Interpretation
    base_edges = [("x", "y", {"r"})]
    i1 = Interpretation(["x", "y"], {"x": {"A"}, "y": {"B"}}, base_edges)
    i2 = Interpretation(["x", "y", "z"], {"x": {"A", "C"}, "y": {"B"}, "z": {"A"}},
                        base_edges + [("y", "z", {"r", "s"})])
    for c in (e.Atom("A"), e.Exists("r", e.Atom("B")),
              e.conj([e.Atom("A"), e.Exists("r", e.TOP)])):
        assert e.eval_concept(i1, c) <= e.eval_concept(i2, c)
