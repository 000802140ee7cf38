"""Core syntax: concepts, axioms, terminologies, signatures, and ABoxes.

Concepts are immutable trees in canonical form: conjunctions are flattened,
deduplicated, sorted by a total structural order, and never contain ``top``.
Two concepts that differ only in conjunct order therefore compare equal.

Four concept families are distinguished:

* plain concepts         -- names, ``top``, conjunction, ``some``
* range concepts         -- additionally ``(ran r)`` anywhere
* role-conjunction       -- additionally ``(some-all (r1 .. rk) C)``
* role-conjunction + u   -- additionally ``(some-u C)`` (universal role)

The universal role is a logical symbol: it is not a role name and it
contributes nothing to a signature.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

FRESH_PREFIX = "@N"


class ModelError(ValueError):
    """Malformed concept, axiom, terminology, signature, or ABox."""


class InternalError(RuntimeError):
    """An internal invariant was violated; this signals a bug."""


# ---------------------------------------------------------------------------
# Concepts
# ---------------------------------------------------------------------------

# Concept trees are hashed heavily (dict keys in the saturation engine and
# memo tables), so every node caches its hash at construction; children are
# constructed first, making each cache fill constant-time.

def _seal_hash(obj, key: tuple) -> None:
    object.__setattr__(obj, "_hash", hash(key))


@dataclass(frozen=True)
class Top:
    def __post_init__(self) -> None:
        _seal_hash(self, ("top",))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "top"


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self) -> None:
        _seal_hash(self, ("a", self.name))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Conj:
    parts: tuple  # tuple[Concept, ...], canonical: sorted, >= 2, no Top/Conj

    def __post_init__(self) -> None:
        _seal_hash(self, ("c",) + self.parts)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "(and " + " ".join(map(repr, self.parts)) + ")"


@dataclass(frozen=True)
class Exists:
    role: str
    filler: "Concept"

    def __post_init__(self) -> None:
        _seal_hash(self, ("e", self.role, self.filler))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"(some {self.role} {self.filler!r})"


@dataclass(frozen=True)
class Ran:
    role: str

    def __post_init__(self) -> None:
        _seal_hash(self, ("r", self.role))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"(ran {self.role})"


@dataclass(frozen=True)
class ExistsRoles:
    roles: tuple  # tuple[str, ...], sorted, len >= 2
    filler: "Concept"

    def __post_init__(self) -> None:
        _seal_hash(self, ("er",) + self.roles + (self.filler,))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"(some-all ({' '.join(self.roles)}) {self.filler!r})"


@dataclass(frozen=True)
class ExistsUniversal:
    filler: "Concept"

    def __post_init__(self) -> None:
        _seal_hash(self, ("eu", self.filler))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"(some-u {self.filler!r})"


Concept = Union[Top, Atom, Conj, Exists, Ran, ExistsRoles, ExistsUniversal]

TOP = Top()

_VARIANT_RANK = {Top: 0, Atom: 1, Ran: 2, Exists: 3, ExistsRoles: 4, ExistsUniversal: 5, Conj: 6}


def sort_key(c: Concept) -> tuple:
    """Total structural order: variant rank, then names, then children."""
    rank = _VARIANT_RANK[type(c)]
    if isinstance(c, Top):
        return (rank,)
    if isinstance(c, Atom):
        return (rank, c.name)
    if isinstance(c, Ran):
        return (rank, c.role)
    if isinstance(c, Exists):
        return (rank, c.role, sort_key(c.filler))
    if isinstance(c, ExistsRoles):
        return (rank, c.roles, sort_key(c.filler))
    if isinstance(c, ExistsUniversal):
        return (rank, sort_key(c.filler))
    return (rank, tuple(sort_key(p) for p in c.parts))


def conj(parts: Iterable[Concept]) -> Concept:
    """Canonical conjunction: flatten, drop top, dedupe, sort.

    The empty conjunction is ``top``; a single conjunct stands alone.
    """
    flat: list[Concept] = []
    for p in parts:
        if isinstance(p, Top):
            continue
        if isinstance(p, Conj):
            flat.extend(p.parts)
        else:
            flat.append(p)
    unique = sorted(set(flat), key=sort_key)
    if not unique:
        return TOP
    if len(unique) == 1:
        return unique[0]
    return Conj(tuple(unique))


def exists_roles(roles: Iterable[str], filler: Concept) -> Concept:
    rs = tuple(sorted(set(roles)))
    if not rs:
        raise ModelError("role-conjunction restriction needs at least one role")
    if len(rs) == 1:
        return Exists(rs[0], filler)
    return ExistsRoles(rs, filler)


def conjuncts(c: Concept) -> tuple:
    """Top-level conjuncts; top has none, a non-conjunction is itself."""
    if isinstance(c, Top):
        return ()
    if isinstance(c, Conj):
        return c.parts
    return (c,)


def atomic_conjuncts(c: Concept) -> tuple:
    return tuple(p.name for p in conjuncts(c) if isinstance(p, Atom))


def canonicalize(c: Concept) -> Concept:
    """Rebuild a concept bottom-up through the canonical constructors."""
    if isinstance(c, (Top, Atom, Ran)):
        return c
    if isinstance(c, Exists):
        return Exists(c.role, canonicalize(c.filler))
    if isinstance(c, ExistsRoles):
        return exists_roles(c.roles, canonicalize(c.filler))
    if isinstance(c, ExistsUniversal):
        return ExistsUniversal(canonicalize(c.filler))
    return conj(canonicalize(p) for p in c.parts)


def subconcepts(c: Concept) -> Iterator[Concept]:
    yield c
    if isinstance(c, Conj):
        for p in c.parts:
            yield from subconcepts(p)
    elif isinstance(c, (Exists, ExistsRoles, ExistsUniversal)):
        yield from subconcepts(c.filler)


def role_depth(c: Concept) -> int:
    """Nesting depth of existential restrictions (of any flavour)."""
    if isinstance(c, (Top, Atom, Ran)):
        return 0
    if isinstance(c, (Exists, ExistsRoles, ExistsUniversal)):
        return role_depth(c.filler) + 1
    return max(role_depth(p) for p in c.parts)


def concept_size(c: Concept) -> int:
    """Number of nodes in the concept tree."""
    if isinstance(c, (Top, Atom, Ran)):
        return 1
    if isinstance(c, (Exists, ExistsRoles, ExistsUniversal)):
        return 1 + concept_size(c.filler)
    return 1 + sum(concept_size(p) for p in c.parts)


def family(c: Concept) -> str:
    """One of ``el``, ``ran``, ``roleconj``, ``roleconj-u``, or ``mixed``."""
    has_ran = has_rc = has_u = False
    for s in subconcepts(c):
        if isinstance(s, Ran):
            has_ran = True
        elif isinstance(s, ExistsRoles):
            has_rc = True
        elif isinstance(s, ExistsUniversal):
            has_u = True
    if has_ran and (has_rc or has_u):
        return "mixed"
    if has_ran:
        return "ran"
    if has_u:
        return "roleconj-u"
    if has_rc:
        return "roleconj"
    return "el"


def is_el_concept(c: Concept) -> bool:
    return family(c) == "el"


def is_ran_concept(c: Concept) -> bool:
    return family(c) in ("el", "ran")


def is_roleconj_u_concept(c: Concept) -> bool:
    return family(c) in ("el", "roleconj", "roleconj-u")


# ---------------------------------------------------------------------------
# Axioms and terminologies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubAtom:
    """A is-subsumed-by C."""
    lhs: str
    rhs: Concept


@dataclass(frozen=True)
class EqAtom:
    """A is-defined-as C."""
    lhs: str
    rhs: Concept


@dataclass(frozen=True)
class RangeRestr:
    """(ran r) is-subsumed-by C."""
    role: str
    rhs: Concept


@dataclass(frozen=True)
class DomainRestr:
    """(some r top) is-subsumed-by C."""
    role: str
    rhs: Concept


@dataclass(frozen=True)
class RoleIncl:
    """sub is-subsumed-by sup (role names)."""
    sub: str
    sup: str


Axiom = Union[SubAtom, EqAtom, RangeRestr, DomainRestr, RoleIncl]

_AXIOM_RANK = {EqAtom: 0, SubAtom: 1, DomainRestr: 2, RangeRestr: 3, RoleIncl: 4}


def axiom_sort_key(ax: Axiom) -> tuple:
    rank = _AXIOM_RANK[type(ax)]
    if isinstance(ax, (SubAtom, EqAtom)):
        return (rank, ax.lhs, sort_key(ax.rhs))
    if isinstance(ax, (RangeRestr, DomainRestr)):
        return (rank, ax.role, sort_key(ax.rhs))
    return (rank, ax.sub, ax.sup)


def _check_concept_rhs(rhs: Concept, what: str) -> Concept:
    rhs = canonicalize(rhs)
    if not is_el_concept(rhs):
        raise ModelError(f"{what}: right-hand side must be a plain concept")
    if isinstance(rhs, Top):
        raise ModelError(f"{what}: right-hand side must not be top")
    return rhs


class Terminology:
    """A checked set of axioms: each concept name defined at most once.

    Axioms are stored canonically sorted, so structurally equal
    terminologies compare equal regardless of input order.
    """

    def __init__(self, axioms: Iterable[Axiom]):
        canonical: list[Axiom] = []
        definition_of: dict[str, Axiom] = {}
        for ax in axioms:
            if isinstance(ax, SubAtom):
                ax = SubAtom(ax.lhs, _check_concept_rhs(ax.rhs, ax.lhs))
            elif isinstance(ax, EqAtom):
                ax = EqAtom(ax.lhs, _check_concept_rhs(ax.rhs, ax.lhs))
            elif isinstance(ax, RangeRestr):
                ax = RangeRestr(ax.role, _check_concept_rhs(ax.rhs, f"range of {ax.role}"))
            elif isinstance(ax, DomainRestr):
                ax = DomainRestr(ax.role, _check_concept_rhs(ax.rhs, f"domain of {ax.role}"))
            elif not isinstance(ax, RoleIncl):
                raise ModelError(f"not an axiom: {ax!r}")
            if isinstance(ax, (SubAtom, EqAtom)):
                if ax.lhs in definition_of:
                    raise ModelError(f"concept name defined twice: {ax.lhs}")
                definition_of[ax.lhs] = ax
            canonical.append(ax)
        self.axioms: tuple = tuple(sorted(set(canonical), key=axiom_sort_key))
        self.definition_of = {
            ax.lhs: ax for ax in self.axioms if isinstance(ax, (SubAtom, EqAtom))
        }

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Terminology) and self.axioms == other.axioms

    def __hash__(self) -> int:
        return hash(self.axioms)

    def __repr__(self) -> str:
        return f"Terminology({list(self.axioms)!r})"

    def is_pseudo_primitive(self, name: str) -> bool:
        """True unless the name has an equation."""
        return not isinstance(self.definition_of.get(name), EqAtom)

    def is_primitive(self, name: str) -> bool:
        return name not in self.definition_of

    def is_conjunctive(self, name: str) -> bool:
        """Defined by an equation whose right side is a name conjunction."""
        ax = self.definition_of.get(name)
        return isinstance(ax, EqAtom) and not isinstance(ax.rhs, (Exists, Top))

    def equation_rhs(self, name: str) -> Optional[Concept]:
        ax = self.definition_of.get(name)
        return ax.rhs if isinstance(ax, EqAtom) else None


def non_conj(t: Terminology, name: str) -> frozenset:
    """The non-conjunctive names a defined name expands to.

    A pseudo-primitive or existentially defined name stands for itself;
    a name defined as a conjunction stands for its (atomic) conjuncts.
    """
    if not t.is_conjunctive(name):
        return frozenset((name,))
    rhs = t.equation_rhs(name)
    return frozenset(atomic_conjuncts(rhs))


def depends_on(t: Terminology) -> dict:
    """The name-uses-name relation from concept definitions."""
    graph: dict[str, set] = {}
    for ax in t.axioms:
        if isinstance(ax, (SubAtom, EqAtom)):
            names, _ = _concept_signature(ax.rhs)
            graph.setdefault(ax.lhs, set()).update(names)
    return graph


def is_acyclic(t: Terminology) -> bool:
    """True iff the uses-relation from definitions has no cycle."""
    graph = depends_on(t)
    state: dict[str, int] = {}  # 1 = in progress, 2 = done

    def visit(n: str) -> bool:
        st = state.get(n)
        if st == 2:
            return True
        if st == 1:
            return False
        state[n] = 1
        for m in graph.get(n, ()):
            if not visit(m):
                return False
        state[n] = 2
        return True

    return all(visit(n) for n in graph)


# ---------------------------------------------------------------------------
# Signatures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Signature:
    concept_names: frozenset
    role_names: frozenset

    def __post_init__(self) -> None:
        clash = self.concept_names & self.role_names
        if clash:
            raise ModelError(f"name used both as concept and role: {sorted(clash)}")
        for n in self.concept_names | self.role_names:
            if not n:
                raise ModelError("empty name in signature")
            if n.startswith(FRESH_PREFIX[0]):
                raise ModelError(f"reserved name in signature: {n}")

    @staticmethod
    def of(concepts: Iterable[str] = (), roles: Iterable[str] = ()) -> "Signature":
        return Signature(frozenset(concepts), frozenset(roles))

    def __or__(self, other: "Signature") -> "Signature":
        return Signature(self.concept_names | other.concept_names,
                         self.role_names | other.role_names)

    def __and__(self, other: "Signature") -> "Signature":
        return Signature(self.concept_names & other.concept_names,
                         self.role_names & other.role_names)


# ---------------------------------------------------------------------------
# ABoxes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConceptAssert:
    """name(indiv); name None asserts top."""
    name: Optional[str]
    indiv: str


@dataclass(frozen=True)
class RoleAssert:
    role: str
    subj: str
    obj: str


Assertion = Union[ConceptAssert, RoleAssert]


class ABox:
    def __init__(self, assertions: Iterable[Assertion]):
        self.assertions = frozenset(assertions)
        if not self.assertions:
            raise ModelError("an ABox must not be empty")
        objs: set = set()
        for a in self.assertions:
            if isinstance(a, ConceptAssert):
                objs.add(a.indiv)
            else:
                objs.add(a.subj)
                objs.add(a.obj)
        self.obj = frozenset(objs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ABox) and self.assertions == other.assertions

    def __hash__(self) -> int:
        return hash(self.assertions)

    def __repr__(self) -> str:
        return f"ABox({sorted(map(repr, self.assertions))})"

    def concept_assertions(self, indiv: str) -> Iterator[str]:
        for a in self.assertions:
            if isinstance(a, ConceptAssert) and a.indiv == indiv and a.name:
                yield a.name

    def role_assertions(self) -> Iterator[RoleAssert]:
        for a in self.assertions:
            if isinstance(a, RoleAssert):
                yield a


# ---------------------------------------------------------------------------
# Signature extraction
# ---------------------------------------------------------------------------

def _concept_signature(c: Concept) -> tuple:
    names: set = set()
    roles: set = set()
    for s in subconcepts(c):
        if isinstance(s, Atom):
            names.add(s.name)
        elif isinstance(s, (Exists, Ran)):
            roles.add(s.role)
        elif isinstance(s, ExistsRoles):
            roles.update(s.roles)
    return names, roles


def signature_of(entity) -> Signature:
    """Exactly the concept and role names occurring in the entity.

    The universal role carries no signature; fresh normalization names are
    excluded so that the result is always a legal signature.
    """
    names: set = set()
    roles: set = set()

    def add_concept(c: Concept) -> None:
        ns, rs = _concept_signature(c)
        names.update(ns)
        roles.update(rs)

    def add_axiom(ax: Axiom) -> None:
        if isinstance(ax, (SubAtom, EqAtom)):
            names.add(ax.lhs)
            add_concept(ax.rhs)
        elif isinstance(ax, (RangeRestr, DomainRestr)):
            roles.add(ax.role)
            add_concept(ax.rhs)
        else:
            roles.add(ax.sub)
            roles.add(ax.sup)

    if isinstance(entity, (Top, Atom, Conj, Exists, Ran, ExistsRoles, ExistsUniversal)):
        add_concept(entity)
    elif isinstance(entity, (SubAtom, EqAtom, RangeRestr, DomainRestr, RoleIncl)):
        add_axiom(entity)
    elif isinstance(entity, Terminology):
        for ax in entity.axioms:
            add_axiom(ax)
    elif isinstance(entity, ABox):
        for a in entity.assertions:
            if isinstance(a, ConceptAssert):
                if a.name:
                    names.add(a.name)
            else:
                roles.add(a.role)
    else:
        raise ModelError(f"cannot take the signature of {entity!r}")
    names = {n for n in names if not n.startswith(FRESH_PREFIX)}
    return Signature(frozenset(names), frozenset(roles))
