"""Witness computation for both directions and all three query semantics.

For a signature and two terminologies the report holds, per direction and
per semantics (``concept``, ``instance``, ``query``):

* role witnesses: signature role inclusions holding in one terminology only;
* right-hand witnesses: names subsuming some signature concept in one
  terminology only (not-witness table or witness-ABox instance checks);
* left-hand witnesses, split into atomic, domain, and range: names and
  roles whose most specific consequences differ, decided by simulations
  between canonical models.

The expensive substrates are shared: classification, the aux grids of the
canonical models, and one maximal simulation per direction and flavour
answer every left-hand question at once.  Right-hand witnesses coincide for
the instance and query semantics; the subsumption semantics filters them
further, by one instance check each over the role-splitting unfolding of
the witness ABox, except in two cases decided directly: a signature without
roles, and inputs free of range restrictions, where instance and
subsumption witnesses agree.

On request every witness is explained by a verified inclusion: it must be
entailed by the first terminology and not by the second, or the report is
aborted as internally inconsistent.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .model import (
    ABox, Atom, Concept, Conj, Exists, ExistsRoles, ExistsUniversal,
    InternalError, ModelError, Ran, RangeRestr, Signature, Terminology, Top,
    TOP, concept_size, conj, conjuncts, is_acyclic, non_conj, role_depth,
    signature_of, sort_key,
)
from .normalize import NormalizedTerminology, ensure_normalized
from .reasoner import SubsumptionIndex, classify, entails_role, entails_subsumption
from .canonical import (
    Interpretation, KnowledgeBase, abox_neighborhood_concept, build_canonical,
    canonical_model, concept_to_abox, eval_concept, instance_check,
)
from .simulation import (
    SimulationResult, _el_key, global_intersection_simulation, sigma_simulation,
)
from .syntax import render_concept
from .witnesses import (
    ALL, CyclicityError, NotWitnessTable, XI_SIGMA, build_witness_abox,
    notwitness_table, role_splitting_unfold, split_name, xi,
)

MODES = ("concept", "instance", "query")
DEFAULT_EXAMPLE_CAP = 64


@dataclass(frozen=True)
class Inclusion:
    lhs: Concept
    rhs: Concept

    def render(self) -> str:
        return f"{render_concept(self.lhs)} < {render_concept(self.rhs)}"


@dataclass
class ModeSets:
    role_wtn: frozenset = frozenset()
    rhs_wtn: frozenset = frozenset()
    lhs_atomic: frozenset = frozenset()
    lhs_dom: frozenset = frozenset()
    lhs_ran: frozenset = frozenset()
    examples: dict = field(default_factory=dict)
    overflow: frozenset = frozenset()

    def empty(self) -> bool:
        return not (self.role_wtn or self.rhs_wtn or self.lhs_atomic
                    or self.lhs_dom or self.lhs_ran)

    def lhs_all(self) -> frozenset:
        return self.lhs_atomic | self.lhs_dom | self.lhs_ran

    def example_text(self, key: tuple) -> str:
        if key in self.overflow:
            return "!overflow"
        inc = self.examples.get(key)
        if inc is None:
            return ""
        if key[0] == "rhs":
            return render_concept(inc.lhs)
        return render_concept(inc.rhs)


class WitnessReport:
    def __init__(self, modes: tuple, directions: tuple):
        self.modes = modes
        self._directions = directions
        self._data: dict[tuple, ModeSets] = {
            (d, m): ModeSets() for d in directions for m in modes}

    def directions(self) -> tuple:
        return self._directions

    def sets(self, direction: str, mode: str) -> ModeSets:
        return self._data[(direction, mode)]

    def put(self, direction: str, mode: str, sets: ModeSets) -> None:
        self._data[(direction, mode)] = sets

    def has_difference(self) -> bool:
        return any(not ms.empty() for ms in self._data.values())

    def check_invariants(self) -> None:
        for d in self._directions:
            have = {m: self.sets(d, m) for m in self.modes if (d, m) in self._data}
            if "instance" in have and "query" in have:
                inst, q = have["instance"], have["query"]
                if q.rhs_wtn != inst.rhs_wtn or q.role_wtn != inst.role_wtn:
                    raise InternalError("query/instance right-hand sets diverged")
                if not (inst.lhs_atomic <= q.lhs_atomic
                        and inst.lhs_dom <= q.lhs_dom
                        and inst.lhs_ran <= q.lhs_ran):
                    raise InternalError("instance left-hand sets not below query")
            if "instance" in have and "concept" in have:
                inst, c = have["instance"], have["concept"]
                if not c.rhs_wtn <= inst.rhs_wtn:
                    raise InternalError("concept right-hand set not below instance")
                if (c.lhs_atomic, c.lhs_dom, c.lhs_ran) != (
                        inst.lhs_atomic, inst.lhs_dom, inst.lhs_ran):
                    raise InternalError("concept/instance left-hand sets diverged")


# ---------------------------------------------------------------------------
# Role witnesses
# ---------------------------------------------------------------------------

def role_witnesses(idx1: SubsumptionIndex, idx2: SubsumptionIndex,
                   sigma: Signature, restrict_to_sigma: bool = True) -> frozenset:
    if restrict_to_sigma:
        roles = sorted(sigma.role_names)
    else:
        roles = sorted(set(idx1.saturation.supers) | set(idx2.saturation.supers)
                       | sigma.role_names)
    found = set()
    for r in roles:
        for s in roles:
            if r != s and idx1.role_subs(r, s) and not idx2.role_subs(r, s):
                found.add((r, s))
    return frozenset(found)


# ---------------------------------------------------------------------------
# Right-hand witnesses
# ---------------------------------------------------------------------------

def _t_of(tn) -> Terminology:
    return tn.terminology if isinstance(tn, NormalizedTerminology) else tn


def rhs_witnesses_instance(t1n, t2n, idx1, idx2, sigma: Signature,
                           strategy: str = "auto") -> frozenset:
    """Names that subsume a fresh signature consequence in the first
    terminology only, under instance semantics."""
    t1, t2 = _t_of(t1n), _t_of(t2n)
    if strategy == "auto":
        strategy = "notwitness" if is_acyclic(t1) and is_acyclic(t2) else "abox"
    if strategy == "notwitness":
        candidates = sorted(sigma.concept_names & (signature_of(t1).concept_names
                                                   | set(t1.definition_of)))
        table = notwitness_table(t1n, t2n, idx1, idx2, sigma, candidates, elhr=True)
        return frozenset(
            a for a in candidates
            if any(not table.contains(a, b) for b in non_conj(t2, a)))
    if strategy == "abox":
        wit_abox = build_witness_abox(t2n, idx2, sigma, style="full")
        model = canonical_model(KnowledgeBase(t1, wit_abox))
        found = set()
        for a in sorted(sigma.concept_names):
            for b in sorted(non_conj(t2, a)):
                el = model.individual_map.get(xi(b))
                if el is not None and el in eval_concept(model, Atom(a)):
                    found.add(a)
                    break
        return frozenset(found)
    raise ValueError(f"unknown strategy {strategy!r}")


def _has_range_restrictions(t: Terminology) -> bool:
    return any(isinstance(ax, RangeRestr) for ax in t.axioms)


def rhs_witnesses_concept(t1n, t2n, idx1, idx2, sigma: Signature,
                          instance_rhs: Optional[frozenset] = None,
                          strategy: str = "auto") -> frozenset:
    """Right-hand witnesses under subsumption semantics."""
    if instance_rhs is None:
        instance_rhs = rhs_witnesses_instance(t1n, t2n, idx1, idx2, sigma, strategy)
    if not sigma.role_names:
        return instance_rhs
    if not _has_range_restrictions(_t_of(t1n)) and not _has_range_restrictions(_t_of(t2n)):
        return instance_rhs
    if not instance_rhs:
        return frozenset()
    t1, t2 = _t_of(t1n), _t_of(t2n)
    wit_abox = build_witness_abox(t2n, idx2, sigma, style="full")
    split = role_splitting_unfold(wit_abox)
    model = canonical_model(KnowledgeBase(t1, split))
    found = set()
    for a in sorted(instance_rhs):
        ext = eval_concept(model, Atom(a))
        hit = False
        for b in sorted(non_conj(t2, a)):
            for r in sorted(sigma.role_names):
                el = model.individual_map.get(split_name(xi(b), r))
                if el is not None and el in ext:
                    hit = True
                    break
            if hit:
                break
        if hit:
            found.add(a)
    return frozenset(found)


# ---------------------------------------------------------------------------
# Left-hand witnesses via shared grid simulations
# ---------------------------------------------------------------------------

def _grid(idx: SubsumptionIndex, sigma: Signature) -> tuple:
    """All saturated contexts as one interpretation, plus the query roots."""
    sat = idx.saturation
    roots = {}
    for a in sorted(sigma.concept_names):
        roots[("atom", a)] = sat.ensure(("atom", a))
    for r in sorted(sigma.role_names):
        roots[("dom", r)] = sat.ensure(("dom", r))
        roots[("ran", r)] = sat.ensure(("ran", r))
    elements = [c for c in sat.S if c[0] != "ind"]
    type_map = {c: sat.names_of(c) for c in elements}
    edges = []
    for c in elements:
        for role, child in sat.succ[c]:
            edges.append((c, child, sat.supers.get(role, frozenset((role,)))))
    return Interpretation(elements, type_map, edges), roots


def _plain_sim_masks(g1: Interpretation, g2: Interpretation,
                     sigma: Signature) -> tuple:
    order2 = sorted(g2.domain, key=_el_key)
    pos2 = {el: i for i, el in enumerate(order2)}
    full = (1 << len(order2)) - 1
    names = sigma.concept_names
    roles = sorted(sigma.role_names)

    col: dict[str, int] = {}
    for y in order2:
        for n in g2.types[y] & names:
            col[n] = col.get(n, 0) | (1 << pos2[y])

    sim: dict = {}
    for x in g1.domain:
        m = full
        for n in g1.types[x] & names:
            m &= col.get(n, 0)
        sim[x] = m

    succ1 = {x: {} for x in g1.domain}
    for x in g1.domain:
        for x2, labels in g1.out[x].items():
            for r in labels & set(roles):
                succ1[x].setdefault(r, []).append(x2)
    succ2_mask: dict[str, list] = {r: [] for r in roles}
    for y in order2:
        per_role: dict[str, int] = {}
        for y2, labels in g2.out[y].items():
            for r in labels & set(roles):
                per_role[r] = per_role.get(r, 0) | (1 << pos2[y2])
        for r, m in per_role.items():
            succ2_mask[r].append((1 << pos2[y], m))

    order1 = sorted(g1.domain, key=_el_key)
    while True:
        changed = False
        for r in roles:
            havers = succ2_mask[r]
            memo: dict[int, int] = {}
            for x in order1:
                m = sim[x]
                if not m:
                    continue
                for x2 in succ1[x].get(r, ()):
                    sx2 = sim[x2]
                    allowed = memo.get(sx2)
                    if allowed is None:
                        allowed = 0
                        for ybit, ym in havers:
                            if ym & sx2:
                                allowed |= ybit
                        memo[sx2] = allowed
                    m &= allowed
                    if not m:
                        break
                if m != sim[x]:
                    sim[x] = m
                    changed = True
        if not changed:
            return sim, pos2, order2


def _intersection_sim_masks(g1: Interpretation, g2: Interpretation,
                            sigma: Signature) -> tuple:
    order2 = sorted(g2.domain, key=_el_key)
    pos2 = {el: i for i, el in enumerate(order2)}
    full = (1 << len(order2)) - 1
    names = sigma.concept_names
    roles = frozenset(sigma.role_names)

    col: dict[str, int] = {}
    for y in order2:
        for n in g2.types[y] & names:
            col[n] = col.get(n, 0) | (1 << pos2[y])

    sim: dict = {}
    for x in g1.domain:
        m = full
        for n in g1.types[x] & names:
            m &= col.get(n, 0)
        sim[x] = m

    succ1: dict = {x: [] for x in g1.domain}
    needed_rsets: set = set()
    for x in g1.domain:
        for x2, labels in g1.out[x].items():
            rset = frozenset(labels & roles)
            if rset:
                succ1[x].append((x2, rset))
                needed_rsets.add(rset)

    rset_havers: dict[frozenset, list] = {}
    for rset in needed_rsets:
        havers = []
        for y in order2:
            m = 0
            for y2, labels in g2.out[y].items():
                if rset <= labels:
                    m |= 1 << pos2[y2]
            if m:
                havers.append((1 << pos2[y], m))
        rset_havers[rset] = havers

    order1 = sorted(g1.domain, key=_el_key)
    while True:
        changed = False
        for x in order1:
            m = sim[x]
            if not m:
                continue
            for x2, rset in succ1[x]:
                sx2 = sim[x2]
                allowed = 0
                for ybit, ym in rset_havers[rset]:
                    if ym & sx2:
                        allowed |= ybit
                m &= allowed
                if not m:
                    break
            if m != sim[x]:
                sim[x] = m
                changed = True
        if not changed:
            return sim, pos2, order2


def _reach_masks(g: Interpretation, pos: dict) -> dict:
    """Per element, the bitmask of elements reachable from it (reflexive)."""
    masks = {x: 1 << pos[x] for x in g.domain}
    order = sorted(g.domain, key=_el_key)
    while True:
        changed = False
        for x in order:
            m = masks[x]
            for y in g.out[x]:
                m |= masks[y]
            if m != masks[x]:
                masks[x] = m
                changed = True
        if not changed:
            return masks


def lhs_witnesses(t1n, t2n, idx1, idx2, sigma: Signature,
                  mode: str = "instance") -> tuple:
    """Left-hand witness names and roles (atomic, domain, range).

    ``mode`` is ``instance`` (shared with the subsumption semantics) or
    ``query``.  Failure of the appropriate simulation between the
    canonical models of the two singleton knowledge bases is the witness
    criterion; the models are read off the shared terminology grids.
    """
    g1, roots1 = _grid(idx1, sigma)
    g2, roots2 = _grid(idx2, sigma)
    if mode == "query":
        sim, pos2, order2 = _intersection_sim_masks(g1, g2, sigma)
        pos1 = {el: i for i, el in enumerate(sorted(g1.domain, key=_el_key))}
        reach1 = _reach_masks(g1, pos1)
        reach2 = _reach_masks(g2, pos2)
        order1 = sorted(g1.domain, key=_el_key)

        def ok(key: tuple) -> bool:
            p1, p2 = roots1[key], roots2[key]
            if not sim[p1] & (1 << pos2[p2]):
                return False
            # the knowledge base over {r(a,b)} has the subject side in its
            # domain too; its context reaches the range context by the
            # seeded successor, so the subject root spans the whole model
            dom_key = ("dom", key[1]) if key[0] == "ran" else key
            r2mask = reach2[roots2[dom_key]]
            m = reach1[roots1[dom_key]]
            for x in order1:
                if m & (1 << pos1[x]) and not (sim[x] & r2mask):
                    return False
            return True
    else:
        sim, pos2, order2 = _plain_sim_masks(g1, g2, sigma)

        def ok(key: tuple) -> bool:
            return bool(sim[roots1[key]] & (1 << pos2[roots2[key]]))

    atomic = frozenset(a for a in sigma.concept_names if not ok(("atom", a)))
    dom = frozenset(r for r in sigma.role_names if not ok(("dom", r)))
    ran = frozenset(r for r in sigma.role_names if not ok(("ran", r)))
    return atomic, dom, ran


# ---------------------------------------------------------------------------
# Example inclusions
# ---------------------------------------------------------------------------

def _strip_matching_ran(c: Concept) -> Concept:
    """Drop range conjuncts that restate the restriction they sit under."""
    def strip(c: Concept, under: Optional[str]) -> Concept:
        if isinstance(c, Exists):
            return Exists(c.role, strip(c.filler, c.role))
        if isinstance(c, Conj):
            parts = [strip(p, under) for p in c.parts
                     if not (isinstance(p, Ran) and p.role == under)]
            return conj(parts)
        if isinstance(c, Ran) and c.role == under:
            return TOP
        return c
    return strip(c, None)


def _prune_entailed(c: Concept, keeps: "callable") -> Concept:
    """Greedy conjunct-wise pruning while the predicate stays true."""
    def shrink(node: Concept, rebuild) -> Concept:
        parts = list(conjuncts(node))
        i = 0
        while i < len(parts):
            trial = parts[:i] + parts[i + 1:]
            if keeps(rebuild(conj(trial))):
                parts = trial
            else:
                i += 1
        for i, p in enumerate(list(parts)):
            if isinstance(p, Exists):
                def rebuild_child(f, i=i, p=p):
                    return rebuild(conj(parts[:i] + [Exists(p.role, f)] + parts[i + 1:]))
                parts[i] = Exists(p.role, shrink(p.filler, rebuild_child))
        return conj(parts)

    return shrink(c, lambda w: w)


def generate_rhs_example(t1n, t2n, idx1, idx2, sigma: Signature, a: str,
                         mode: str, max_size: int = DEFAULT_EXAMPLE_CAP
                         ) -> Optional[Inclusion]:
    """A verified inclusion with the witness name on the right.

    Returns None (overflow) when no example fits the size cap.
    """
    t1, t2 = _t_of(t1n), _t_of(t2n)
    wit_abox = build_witness_abox(t2n, idx2, sigma, style="full")
    if mode == "concept" and sigma.role_names and (
            _has_range_restrictions(t1) or _has_range_restrictions(t2)):
        abox = role_splitting_unfold(wit_abox)
        anchors = [split_name(xi(b), r) for b in sorted(non_conj(t2, a))
                   for r in sorted(sigma.role_names)]
    else:
        abox = wit_abox
        anchors = [xi(b) for b in sorted(non_conj(t2, a))]
    kb1 = KnowledgeBase(t1, abox)
    model1 = canonical_model(kb1)
    anchor = None
    for cand in anchors:
        el = model1.individual_map.get(cand)
        if el is not None and el in eval_concept(model1, Atom(a)):
            anchor = cand
            break
    if anchor is None:
        raise InternalError(f"no anchoring individual entails {a}")

    target = Atom(a)
    cap = len(model1.domain) * (1 + role_depth(target)) + 1
    material_cap = max(2000, 64 * max_size)
    chosen = None
    for n in range(cap + 1):
        c = abox_neighborhood_concept(abox, anchor, n)
        if concept_size(c) > material_cap:
            return None
        if entails_subsumption(t1, c, target):
            chosen = _strip_matching_ran(c)
            break
    if chosen is None:
        raise InternalError(f"no neighbourhood depth entails {a}")

    pruned = _prune_entailed(chosen, lambda w: entails_subsumption(t1, w, target))
    if concept_size(pruned) > max_size:
        return None
    if not entails_subsumption(t1, pruned, target):
        raise InternalError("right-hand example lost its entailment")
    if entails_subsumption(t2, pruned, target):
        raise InternalError("right-hand example entailed by the second input")
    return Inclusion(pruned, target)


def generate_lhs_example(t1n, t2n, idx1, idx2, sigma: Signature,
                         witness: tuple, mode: str,
                         max_size: int = DEFAULT_EXAMPLE_CAP
                         ) -> Optional[Inclusion]:
    """A verified inclusion with the witness name or role on the left."""
    t1, t2 = _t_of(t1n), _t_of(t2n)
    kind, name = witness
    if kind == "lhs-atomic":
        abox = ABox([_concept_assert(name, "w0")])
        point, lhs = "w0", Atom(name)
    elif kind == "lhs-dom":
        abox = ABox([_role_assert(name, "w0", "w1")])
        point, lhs = "w0", Exists(name, TOP)
    elif kind == "lhs-ran":
        abox = ABox([_role_assert(name, "w0", "w1")])
        point, lhs = "w1", Ran(name)
    else:
        raise ValueError(f"not a left-hand witness kind: {kind!r}")
    m1 = canonical_model(KnowledgeBase(t1, abox))
    m2 = canonical_model(KnowledgeBase(t2, abox))
    p1, p2 = m1.individual_map[point], m2.individual_map[point]
    if mode == "query":
        res = global_intersection_simulation(m1, p1, m2, p2, sigma, max_size)
    else:
        res = sigma_simulation(m1, p1, m2, p2, sigma, max_size)
    if res.holds:
        raise InternalError(f"simulation holds for reported witness {witness!r}")
    if res.witness_concept is None:
        return None
    d = res.witness_concept
    if not entails_subsumption(t1, lhs, d):
        raise InternalError("left-hand example lost its entailment")
    if entails_subsumption(t2, lhs, d):
        raise InternalError("left-hand example entailed by the second input")
    return Inclusion(lhs, d)


def _concept_assert(name: str, indiv: str):
    from .model import ConceptAssert
    return ConceptAssert(name, indiv)


def _role_assert(role: str, subj: str, obj: str):
    from .model import RoleAssert
    return RoleAssert(role, subj, obj)


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------

def default_signature(t1: Terminology, t2: Terminology) -> Signature:
    return signature_of(t1) & signature_of(t2)


def compute_diff(t1: Terminology, t2: Terminology,
                 sigma: Optional[Signature] = None, mode: str = "all",
                 direction: str = "both", strategy: str = "auto",
                 examples: bool = False,
                 max_example_size: int = DEFAULT_EXAMPLE_CAP,
                 parallel: int = 1,
                 restrict_role_witnesses: bool = True) -> WitnessReport:
    """Normalize, classify, and compute the full witness report."""
    if sigma is None:
        sigma = default_signature(t1, t2)
    modes = MODES if mode == "all" else (mode,)
    if any(m not in MODES for m in modes):
        raise ValueError(f"unknown mode {mode!r}")
    if direction == "both":
        directions = ("1->2", "2->1")
    elif direction == "forward":
        directions = ("1->2",)
    elif direction == "backward":
        directions = ("2->1",)
    else:
        raise ValueError(f"unknown direction {direction!r}")

    n1, n2 = ensure_normalized(t1), ensure_normalized(t2)
    idx1, idx2 = classify(n1), classify(n2)
    report = WitnessReport(modes, directions)
    for label in directions:
        src_n, dst_n = (n1, n2) if label == "1->2" else (n2, n1)
        src_i, dst_i = (idx1, idx2) if label == "1->2" else (idx2, idx1)
        _fill_direction(report, label, modes, src_n, dst_n, src_i, dst_i,
                        sigma, strategy, examples, max_example_size, parallel,
                        restrict_role_witnesses)
    report.check_invariants()
    _check_fresh_hygiene(report)
    return report


def _fill_direction(report, label, modes, src_n, dst_n, src_i, dst_i, sigma,
                    strategy, examples, max_example_size, parallel,
                    restrict_role_witnesses) -> None:
    role_set = role_witnesses(src_i, dst_i, sigma, restrict_role_witnesses)
    inst_rhs = None
    if any(m in modes for m in ("instance", "query", "concept")):
        inst_rhs = rhs_witnesses_instance(src_n, dst_n, src_i, dst_i, sigma, strategy)
    plain_lhs = None
    if "instance" in modes or "concept" in modes:
        plain_lhs = lhs_witnesses(src_n, dst_n, src_i, dst_i, sigma, "instance")
    query_lhs = None
    if "query" in modes:
        query_lhs = lhs_witnesses(src_n, dst_n, src_i, dst_i, sigma, "query")

    for m in modes:
        if m == "concept":
            rhs = rhs_witnesses_concept(src_n, dst_n, src_i, dst_i, sigma,
                                        inst_rhs, strategy)
            lhs = plain_lhs
        elif m == "instance":
            rhs = inst_rhs
            lhs = plain_lhs
        else:
            rhs = inst_rhs
            lhs = query_lhs
        ms = ModeSets(role_wtn=role_set, rhs_wtn=rhs,
                      lhs_atomic=lhs[0], lhs_dom=lhs[1], lhs_ran=lhs[2])
        if examples:
            _attach_examples(ms, m, src_n, dst_n, src_i, dst_i, sigma,
                             max_example_size, parallel)
        report.put(label, m, ms)


def _attach_examples(ms: ModeSets, mode, src_n, dst_n, src_i, dst_i, sigma,
                     max_size, parallel) -> None:
    tasks = []
    for a in sorted(ms.rhs_wtn):
        tasks.append((("rhs", a),
                      lambda a=a: generate_rhs_example(
                          src_n, dst_n, src_i, dst_i, sigma, a, mode, max_size)))
    for kind, names in (("lhs-atomic", ms.lhs_atomic),
                        ("lhs-dom", ms.lhs_dom), ("lhs-ran", ms.lhs_ran)):
        for name in sorted(names):
            tasks.append(((kind, name),
                          lambda kind=kind, name=name: generate_lhs_example(
                              src_n, dst_n, src_i, dst_i, sigma, (kind, name),
                              mode, max_size)))
    if parallel > 1 and len(tasks) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(lambda kt: (kt[0], kt[1]()), tasks))
    else:
        results = [(key, make()) for key, make in tasks]
    overflow = set()
    for key, inc in results:
        if inc is None:
            overflow.add(key)
        else:
            ms.examples[key] = inc
    ms.overflow = frozenset(overflow)


def _check_fresh_hygiene(report: WitnessReport) -> None:
    from .model import FRESH_PREFIX

    def clean_name(n: str) -> None:
        if n.startswith(FRESH_PREFIX):
            raise InternalError(f"fresh name leaked into the report: {n}")

    def clean_concept(c: Concept) -> None:
        sig = signature_of(c)
        for n in sig.concept_names | sig.role_names:
            clean_name(n)

    for d in report.directions():
        for m in report.modes:
            ms = report.sets(d, m)
            for r, s in ms.role_wtn:
                clean_name(r)
                clean_name(s)
            for n in ms.rhs_wtn | ms.lhs_atomic | ms.lhs_dom | ms.lhs_ran:
                clean_name(n)
            for inc in ms.examples.values():
                clean_concept(inc.lhs)
                clean_concept(inc.rhs)
