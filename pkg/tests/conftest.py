"""Shared worked-example inputs used across the test modules."""
from __future__ import annotations

import pytest

import eldiff as e


@pytest.fixture
def range_conj_pair():
    """Two range restrictions feeding a conjunction, against the empty
    terminology; the classic instance-only difference."""
    t1 = e.parse_terminology(
        "(range r A1)\n(range s A2)\n(define-concept B (and A1 A2))")
    t2 = e.Terminology([])
    sigma = e.Signature.of(["B"], ["r", "s"])
    return t1, t2, sigma


@pytest.fixture
def query_only_pair():
    """One existential against nothing; visible to queries only."""
    t1 = e.Terminology([e.SubAtom("A", e.Exists("r", e.Atom("B")))])
    t2 = e.Terminology([])
    sigma = e.Signature.of(["A", "B"], [])
    return t1, t2, sigma


@pytest.fixture
def role_merge_pair():
    """A subrole of two roles versus two independent successors."""
    t1 = e.Terminology([
        e.SubAtom("A", e.Exists("s", e.TOP)),
        e.RoleIncl("s", "r1"), e.RoleIncl("s", "r2")])
    t2 = e.Terminology([
        e.SubAtom("A", e.conj([e.Exists("r1", e.TOP), e.Exists("r2", e.TOP)]))])
    sigma = e.Signature.of(["A"], ["r1", "r2"])
    return t1, t2, sigma


@pytest.fixture
def bundled_successors_pair():
    """One successor carrying two consequences versus two successors."""
    t1 = e.parse_terminology("""
        (define-primitive-concept A (some r F0))
        (define-primitive-concept F0 (and F1 F2))
        (define-primitive-concept F1 (some r B1))
        (define-primitive-concept F2 (some r B2))
    """)
    t2 = e.parse_terminology("""
        (define-primitive-concept A (and G1 G2))
        (define-primitive-concept G1 (some r G1p))
        (define-primitive-concept G2 (some r G2p))
        (define-primitive-concept G1p (some r B1))
        (define-primitive-concept G2p (some r B2))
    """)
    sigma = e.Signature.of(["A", "B1", "B2"], ["r"])
    return t1, t2, sigma


def deep_ladder_pair(n: int):
    """A depth-n conjunction ladder whose minimal separating concept is
    exponential; the right side offers the mirror-image inclusions."""
    t1 = [e.SubAtom("A0", e.Atom("B0")), e.EqAtom("A1", e.Atom(f"B{n}"))]
    t1 += [e.EqAtom(f"B{i+1}", e.conj([e.Exists("r", e.Atom(f"B{i}")),
                                       e.Exists("s", e.Atom(f"B{i}"))]))
           for i in range(n)]
    t2 = [e.SubAtom("A1", e.Atom("F0"))]
    t2 += [e.SubAtom(f"F{i}", e.conj([e.Exists("r", e.Atom(f"F{i+1}")),
                                      e.Exists("s", e.Atom(f"F{i+1}"))]))
           for i in range(n)]
    sigma = e.Signature.of(["A0", "A1"], ["r", "s"])
    return e.Terminology(t1), e.Terminology(t2), sigma


def deep_ladder_expected(n: int):
    c = e.Atom("A0")
    for _ in range(n):
        c = e.conj([e.Exists("r", c), e.Exists("s", c)])
    return c


@pytest.fixture
def normalized_ladder_pair():
    """The hand-normalized form of the depth-2 ladder."""
    t1 = e.parse_terminology("""
        (define-primitive-concept A0 B0)
        (define-concept A1 B2)
        (define-concept B1 (and B1p B1pp))
        (define-concept B2 (and B2p B2pp))
        (define-concept B1p (some r B0))
        (define-concept B1pp (some s B0))
        (define-concept B2p (some r B1))
        (define-concept B2pp (some s B1))
    """)
    t2 = e.parse_terminology("""
        (define-primitive-concept A1 F0)
        (define-concept F0 (and F0p F0pp))
        (define-concept F1 (and F1p F1pp))
        (define-primitive-concept F0p (some r F1))
        (define-primitive-concept F0pp (some s F1))
        (define-primitive-concept F1p (some r F2))
        (define-primitive-concept F1pp (some s F2))
    """)
    sigma = e.Signature.of(["A0", "A1"], ["r", "s"])
    return t1, t2, sigma


def classify_pair(t1, t2):
    n1, n2 = e.ensure_normalized(t1), e.ensure_normalized(t2)
    return n1, n2, e.classify(n1), e.classify(n2)
