"""Brute-force search and the random generator."""
from __future__ import annotations

import pytest

import eldiff as e
from eldiff.oracle import (
    brute_force_witnesses, enumerate_concepts, generate_random_terminology,
)

from conftest import classify_pair


def test_generator_is_deterministic():
    a = generate_random_terminology(30, 5, 0.5, 0.3, 3, 42)
    b = generate_random_terminology(30, 5, 0.5, 0.3, 3, 42)
    assert a == b
    c = generate_random_terminology(30, 5, 0.5, 0.3, 3, 43)
    assert a != c


def test_generator_matches_requested_profile():
    t = generate_random_terminology(400, 62, 0.525, 0.304, 2, 9)
    eqs = sum(isinstance(ax, e.EqAtom) for ax in t.axioms)
    exist_heads = sum(isinstance(ax, (e.EqAtom, e.SubAtom))
                      and isinstance(ax.rhs, e.Exists) for ax in t.axioms)
    n = len(t.axioms)
    assert n == 400
    assert abs(eqs / n - 0.525) < 0.08
    assert abs(exist_heads / n - 0.304) < 0.08
    assert len(e.signature_of(t).role_names) <= 62


def test_generator_output_is_always_a_valid_acyclic_terminology():
    for seed in range(200):
        t = generate_random_terminology(6, 3, 0.5, 0.4, 3, seed,
                                        range_ratio=0.3, domain_ratio=0.3,
                                        role_incl_ratio=0.3)
        assert e.is_acyclic(t)


def test_generator_rejects_degenerate_parameters():
    with pytest.raises(ValueError):
        generate_random_terminology(0, 5, 0.5, 0.3, 2, 1)
    with pytest.raises(ValueError):
        generate_random_terminology(5, 5, 0.5, 0.3, 1, 1)


def test_enumeration_is_canonical_and_bounded():
    sigma = e.Signature.of(["A"], ["r"])
    pool = enumerate_concepts(sigma, 2, 2)
    assert len(set(pool)) == len(pool)
    assert all(e.role_depth(c) <= 2 for c in pool)
    assert e.TOP in pool and e.Atom("A") in pool


def test_oracle_finds_range_conjunction_at_depth_zero(range_conj_pair):
    t1, t2, sigma = range_conj_pair
    n1, n2, i1, i2 = classify_pair(t1, t2)
    found = brute_force_witnesses(n1, n2, i1, i2, sigma, depth_cap=0, conj_cap=2,
                                  modes=("instance",))
    assert found["instance"].rhs_wtn == {"B"}


def test_oracle_is_empty_on_self_diff(range_conj_pair):
    t1, _, sigma = range_conj_pair
    n1, _, i1, _ = classify_pair(t1, t1)
    found = brute_force_witnesses(n1, n1, i1, i1, sigma, depth_cap=1)
    for ms in found.values():
        assert ms.empty()


def test_oracle_finds_bundled_successor_lhs(bundled_successors_pair):
    t1, t2, sigma = bundled_successors_pair
    n1, n2, i1, i2 = classify_pair(t1, t2)
    found = brute_force_witnesses(n1, n2, i1, i2, sigma, depth_cap=2, conj_cap=2,
                                  modes=("concept",))
    assert "A" in found["concept"].lhs_atomic


def test_oracle_sees_query_only_difference(query_only_pair):
    t1, t2, sigma = query_only_pair
    n1, n2, i1, i2 = classify_pair(t1, t2)
    found = brute_force_witnesses(n1, n2, i1, i2, sigma, depth_cap=1, conj_cap=2)
    assert found["instance"].empty()
    assert found["concept"].empty()
    assert found["query"].lhs_atomic == {"A"}
