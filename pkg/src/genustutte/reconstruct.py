"""Recover a matroid from the monomials of its genus-|B(M)| rank polynomial.

The constructive route: find a monomial whose tuple is (circuit C, all bases
but one), read the base-graph shape off the pairwise intersection exponents,
label one closed neighborhood from the circuit anchor, propagate labels over
distance-2 steps, and recover the single unseen basis from the labeled family.
Everything downstream of the monomial filters is validated, so a spurious
witness is discarded and the scan moves on instead of returning garbage.
"""

from __future__ import annotations

from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from . import engine
from .matroid import (
    BaseGraph,
    Matroid,
    NotAMatroid,
    from_bases,
    mask_of,
    popcount,
    set_of,
    uniform,
    validate_basis_family,
)
from .poly import SparsePoly, VarLayout


class NoSuchMonomial(RuntimeError):
    """No monomial encodes g pairwise-distinct bases (wrong g or bad input)."""


class PartitionNotFound(RuntimeError):
    """The neighborhood does not decompose into the two exchange partitions."""


class AmbiguousPartition(RuntimeError):
    """The anchor class fails to pin down which partition is which."""


class InconsistentLabels(RuntimeError):
    """Label propagation conflicted or stalled before covering the graph."""


class NotApplicable(RuntimeError):
    """The labeled family shows no circuit of size >= 3 to complete from."""


class Ambiguous(RuntimeError):
    """Zero or several candidate missing bases survived validation."""


class NoWitness(RuntimeError):
    """Every monomial failed the witness filters or its decode was rejected."""


class NotReconstructible(RuntimeError):
    """Input polynomial is not the genus-|B(M)| stream of a supported matroid."""


class MonomialWitness(NamedTuple):
    exps: Tuple[int, ...]
    tuple_count: int


def monomial_stream(
    m: Matroid,
    g: int,
    budget: int = engine.DEFAULT_BUDGET,
    force: bool = False,
    workers: int = 1,
) -> Iterator[MonomialWitness]:
    """Yield every distinct exponent vector of R^(g)(M) with its tuple count.

    Deterministic order: ascending exponent tuples.
    """
    poly = engine.whitney_g(m, g, budget=budget, force=force, workers=workers)
    for exps in sorted(poly.terms):
        yield MonomialWitness(exps, poly.terms[exps])


def find_all_bases_monomial(
    stream: Iterable[MonomialWitness], g: int, n: int
) -> BaseGraph:
    """Base-graph shape from a monomial whose g tuple entries are distinct bases.

    A slot holds a basis iff both its singleton exponents vanish; two slots
    hold distinct bases iff their x-intersection exponent is positive, and the
    bases are exchange-adjacent iff that exponent is exactly 1.
    """
    lay = VarLayout(g)
    for witness in stream:
        exps = witness.exps
        if any(exps[lay.x(i)] or exps[lay.y(i)] for i in range(1, g + 1)):
            continue
        ok = True
        for i in range(1, g + 1):
            for j in range(i + 1, g + 1):
                if exps[lay.x_cap(i, j)] == 0:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        verts = list(range(1, g + 1))
        adj: Dict[int, Set[int]] = {v: set() for v in verts}
        for i in range(1, g + 1):
            for j in range(i + 1, g + 1):
                if exps[lay.x_cap(i, j)] == 1:
                    adj[i].add(j)
                    adj[j].add(i)
        return BaseGraph(verts, adj)
    raise NoSuchMonomial(
        "no monomial with %d distinct bases; genus does not match |B(M)|" % g
    )


# -- neighborhood partitions ----------------------------------------------------


def _closures(adj: Dict[int, Set[int]], nbhd: Sequence[int]) -> List[FrozenSet[int]]:
    """Multi-vertex classes of the two exchange partitions of a neighborhood.

    Within N(B) two neighbors are adjacent iff they share the removed or the
    added element, so every class of size >= 2 is a clique and the class of an
    edge (u, v) is exactly {u, v} plus their common neighbors inside N(B).
    """
    inside = set(nbhd)
    out: List[FrozenSet[int]] = []
    for u in nbhd:
        for v in adj[u]:
            if v <= u or v not in inside:
                continue
            cls = {u, v}
            for w in adj[u] & adj[v]:
                if w in inside:
                    cls.add(w)
            fz = frozenset(cls)
            for a in fz:
                for b in fz:
                    if a < b and b not in adj[a]:
                        raise PartitionNotFound(
                            "edge closure %s is not a clique" % sorted(fz)
                        )
            if fz not in out:
                out.append(fz)
    for i, a in enumerate(out):
        for b in out[i + 1 :]:
            if len(a & b) > 1:
                raise PartitionNotFound(
                    "closures %s and %s overlap in two vertices"
                    % (sorted(a), sorted(b))
                )
    return sorted(out, key=sorted)


def _color_closures(
    closures: Sequence[FrozenSet[int]], seeds: Dict[int, int]
) -> Dict[int, int]:
    """2-color closures so that two classes sharing a vertex get opposite sides.

    `seeds` maps closure index -> side; every closure must end up colored or
    the pair of partitions is not determined.
    """
    colors: Dict[int, int] = dict(seeds)
    conflict: Dict[int, Set[int]] = {i: set() for i in range(len(closures))}
    for i, a in enumerate(closures):
        for j in range(i + 1, len(closures)):
            if a & closures[j]:
                conflict[i].add(j)
                conflict[j].add(i)
    frontier = list(colors)
    while frontier:
        i = frontier.pop()
        for j in conflict[i]:
            want = 1 - colors[i]
            if j not in colors:
                colors[j] = want
                frontier.append(j)
            elif colors[j] != want:
                raise PartitionNotFound("neighborhood classes are not 2-colorable")
    if len(colors) != len(closures):
        raise AmbiguousPartition(
            "disconnected class structure leaves partition sides undetermined"
        )
    return colors


def _partition_pair(
    adj: Dict[int, Set[int]], nbhd: Sequence[int], seeds: Dict[int, int]
) -> Tuple[List[FrozenSet[int]], List[FrozenSet[int]]]:
    """The two exchange partitions as (side0, side1), singleton classes filled in."""
    closures = _closures(adj, nbhd)
    if not closures:
        single = [frozenset([v]) for v in sorted(nbhd)]
        return single, list(single)
    if not seeds:
        seeds = {0: 0}
    colors = _color_closures(closures, seeds)
    sides: Tuple[List[FrozenSet[int]], List[FrozenSet[int]]] = ([], [])
    covered: Tuple[Set[int], Set[int]] = (set(), set())
    for i, cls in enumerate(closures):
        sides[colors[i]].append(cls)
        covered[colors[i]].update(cls)
    for side in (0, 1):
        for v in sorted(nbhd):
            if v not in covered[side]:
                sides[side].append(frozenset([v]))
    return sorted(sides[0], key=sorted), sorted(sides[1], key=sorted)


def neighborhood_partitions(
    graph: BaseGraph, b: int
) -> Tuple[List[FrozenSet[int]], List[FrozenSet[int]]]:
    """The unordered pair of partitions of N(b) by removed / added element.

    Same-class neighbors are exchange-adjacent and two cross-partition classes
    meet in at most one vertex; the pair is recovered from edge closures and
    returned in a canonical order that carries no removed-vs-added meaning.
    """
    nbhd = sorted(graph.adj[b])
    pi0, pi1 = _partition_pair(graph.adj, nbhd, {})
    return tuple(sorted((pi0, pi1), key=lambda p: [sorted(c) for c in p]))


def label_neighborhood(
    graph: BaseGraph,
    b: int,
    b_label: FrozenSet[int],
    anchor: FrozenSet[int],
    n: int,
    c1: Optional[int] = None,
) -> Tuple[
    Dict[int, FrozenSet[int]],
    Dict[int, FrozenSet[int]],
    Dict[int, FrozenSet[int]],
]:
    """Label N[b] given b's label and one class known to share its added element.

    Returns (labels, circuits, cocircuits): each neighbor B'' in the class pair
    p_x / q_y gets (b_label - {x}) | {y}; the circuit for added element y is
    {y} plus the removed elements of its class, the cocircuit for removed x is
    {x} plus the added elements of its class.  Element names outside the anchor
    are assigned canonically; any consistent assignment differs from the true
    one by a ground-set permutation.
    """
    nbhd = sorted(graph.adj[b])
    if not anchor or not anchor <= set(nbhd):
        raise AmbiguousPartition("anchor is not a subset of the neighborhood")
    closures = _closures(graph.adj, nbhd)
    seeds: Dict[int, int] = {}
    if len(anchor) >= 2:
        if anchor not in closures:
            raise AmbiguousPartition("anchor is not a class of either partition")
        seeds[closures.index(anchor)] = 1
    else:
        holding = [i for i, c in enumerate(closures) if anchor & c]
        if len(holding) > 1:
            raise AmbiguousPartition(
                "singleton anchor sits in two multi-vertex classes"
            )
        if holding:
            # the anchor vertex's added-element class is the singleton itself,
            # so its enclosing closure is a removed-element class
            seeds[holding[0]] = 0
    q_side, p_side = (None, None)
    if closures:
        colors = _color_closures(closures, seeds or {0: 0})
        p_side = [c for i, c in enumerate(closures) if colors[i] == 0]
        q_side = [c for i, c in enumerate(closures) if colors[i] == 1]
    else:
        p_side, q_side = [], []

    def class_of(v: int, side: List[FrozenSet[int]]) -> FrozenSet[int]:
        for cls in side:
            if v in cls:
                return cls
        return frozenset([v])

    if len(anchor) >= 2 and class_of(min(anchor), q_side) != anchor:
        raise AmbiguousPartition("anchor did not land on the added-element side")

    p_classes = sorted({class_of(v, p_side) for v in nbhd}, key=sorted)
    q_classes = sorted({class_of(v, q_side) for v in nbhd}, key=sorted)
    ground = set(range(n))
    outside = sorted(ground - b_label)
    inside = sorted(b_label)
    if len(p_classes) > len(inside) or len(q_classes) > len(outside):
        raise PartitionNotFound(
            "more classes than available ground elements (%d removed, %d added)"
            % (len(p_classes), len(q_classes))
        )
    anchor_q = class_of(min(anchor), q_side)
    if c1 is None:
        c1 = outside[0]
    if c1 in b_label:
        raise ValueError("anchor element %d already lies in the base label" % c1)
    y_of_class: Dict[FrozenSet[int], int] = {anchor_q: c1}
    rest = [e for e in outside if e != c1]
    for cls in q_classes:
        if cls not in y_of_class:
            y_of_class[cls] = rest.pop(0)
    x_of_class: Dict[FrozenSet[int], int] = {}
    for cls, x in zip(p_classes, inside):
        x_of_class[cls] = x

    labels: Dict[int, FrozenSet[int]] = {b: b_label}
    x_of: Dict[int, int] = {}
    y_of: Dict[int, int] = {}
    for v in nbhd:
        x = x_of_class[class_of(v, p_side)]
        y = y_of_class[class_of(v, q_side)]
        x_of[v], y_of[v] = x, y
        labels[v] = (b_label - {x}) | {y}
    if len(set(labels.values())) != len(labels):
        raise InconsistentLabels("neighborhood labels collide")
    circuits = {
        y_of_class[cls]: frozenset({y_of_class[cls]} | {x_of[v] for v in cls})
        for cls in q_classes
    }
    cocircuits = {
        x_of_class[cls]: frozenset({x_of_class[cls]} | {y_of[v] for v in cls})
        for cls in p_classes
    }
    return labels, circuits, cocircuits


def propagate_labels(
    graph: BaseGraph, seed: Dict[int, FrozenSet[int]]
) -> Dict[int, FrozenSet[int]]:
    """Extend a consistent neighborhood labeling to the whole graph.

    An unlabeled vertex v adjacent to two nonadjacent labeled vertices a, b
    that are both neighbors of a labeled vertex w (with v not adjacent to w)
    must be (La & Lb) | (La - Lw) | (Lb - Lw): set algebra forces the removed
    pair to be {x_a, x_b} and the added pair {y_a, y_b}.  Fixpoint iteration;
    conflicts, stalls, or exchange-inconsistent results raise.
    """
    labels: Dict[int, FrozenSet[int]] = dict(seed)
    if not labels:
        raise InconsistentLabels("empty seed")
    rho = len(next(iter(labels.values())))
    changed = True
    while changed:
        changed = False
        for v in sorted(graph.vertices):
            if v in labels:
                continue
            derived: Optional[FrozenSet[int]] = None
            for w in sorted(labels):
                if w == v or w in graph.adj[v]:
                    continue
                common = [
                    u for u in sorted(graph.adj[v] & graph.adj[w]) if u in labels
                ]
                for i, a in enumerate(common):
                    for bb in common[i + 1 :]:
                        if bb in graph.adj[a]:
                            continue
                        la, lb, lw = labels[a], labels[bb], labels[w]
                        cand = (la & lb) | (la - lw) | (lb - lw)
                        if len(cand) != rho:
                            raise InconsistentLabels(
                                "derived label of wrong size at vertex %r" % v
                            )
                        if derived is None:
                            derived = cand
                        elif derived != cand:
                            raise InconsistentLabels(
                                "two derivations disagree at vertex %r" % v
                            )
            if derived is not None:
                labels[v] = derived
                changed = True
    if len(labels) != len(graph.vertices):
        raise InconsistentLabels(
            "propagation stalled: %d of %d vertices labeled"
            % (len(labels), len(graph.vertices))
        )
    if len(set(labels.values())) != len(labels):
        raise InconsistentLabels("two vertices share a label")
    for v in graph.vertices:
        for w in graph.adj[v]:
            if len(labels[v] - labels[w]) != 1:
                raise InconsistentLabels(
                    "adjacent vertices %r, %r are not at exchange distance 1"
                    % (v, w)
                )
    return labels


def find_missing_base(
    labels: Iterable[int],
    rho: int,
    n: int,
    circuits: Iterable[int] = (),
    cocircuits: Iterable[int] = (),
) -> int:
    """The one basis missing from an otherwise complete labeled family.

    Families are unions of two labeled bases of size rho+1 together with every
    labeled basis inside that union.  Case (a): the union is a circuit (rho
    members meeting in one element); the missing basis is the union minus that
    element.  Case (b): two families whose uncovered-element sets are nested
    with a single-element gap locate it as union minus gap.  Every candidate
    is validated against the exchange axiom before being accepted.

    The case-(a) size conditions cannot certify by themselves that the union
    really is a circuit, and two distinct completions can both satisfy the
    exchange axiom (a 5-basis rank-2 example with one parallel pair does
    exactly that).  When several candidates survive, known circuits and
    cocircuits -- the labeling step hands over the fundamental ones at its
    seed basis -- break the tie: a basis contains no circuit and meets every
    cocircuit.  They are applied only as a tie-breaker so an under-filled
    neighborhood can never veto a uniquely determined answer.
    """
    masks = sorted(set(labels))
    if not masks:
        raise NotApplicable("no labeled bases")
    fams: Dict[int, List[int]] = {}
    for i, b1 in enumerate(masks):
        for b2 in masks[i + 1 :]:
            u = b1 | b2
            if popcount(u) == rho + 1 and u not in fams:
                fams[u] = [a for a in masks if a & ~u == 0]
    if not fams:
        raise NotApplicable("no two bases span a (rho+1)-set: all circuits small")
    candidates: Set[int] = set()
    for u, members in fams.items():
        if len(members) == rho:
            inter = u
            for a in members:
                inter &= a
            if popcount(inter) == 1:
                candidates.add(u & ~inter)
    covers = {u: 0 for u in fams}
    for u, members in fams.items():
        c = 0
        for a in members:
            c |= u & ~a
        covers[u] = c
    for uj, cj in covers.items():
        for ul, cl in covers.items():
            gap = cl & ~cj
            if cj != cl and cj & ~cl == 0 and popcount(gap) == 1 and gap & uj:
                candidates.add(uj & ~gap)
    survivors = []
    for cand in sorted(candidates):
        if popcount(cand) != rho or cand in masks:
            continue
        try:
            validate_basis_family(n, masks + [cand])
        except NotAMatroid:
            continue
        survivors.append(cand)
    if len(survivors) > 1:
        survivors = [
            s
            for s in survivors
            if all(c & ~s for c in circuits) and all(s & d for d in cocircuits)
        ]
    if len(survivors) != 1:
        raise Ambiguous(
            "%d candidate missing bases survived validation" % len(survivors)
        )
    return survivors[0]


# -- driver ----------------------------------------------------------------------

_SKIP = (
    PartitionNotFound,
    AmbiguousPartition,
    InconsistentLabels,
    NotApplicable,
    Ambiguous,
    NotAMatroid,
)


def _genus1_shadow(
    monomials: Sequence[MonomialWitness], n: int, g: int
) -> Dict[Tuple[int, int], int]:
    shadow: Dict[Tuple[int, int], int] = {}
    lay = VarLayout(g)
    total = 0
    for w in monomials:
        key = (w.exps[lay.x(1)], w.exps[lay.y(1)])
        shadow[key] = shadow.get(key, 0) + w.tuple_count
        total += w.tuple_count
    if total != 1 << (g * n):
        raise NotReconstructible(
            "tuple counts sum to %d, expected 2^(g*n) = %d" % (total, 1 << (g * n))
        )
    denom = 1 << ((g - 1) * n)
    out = {}
    for key, c in shadow.items():
        if c % denom:
            raise NotReconstructible("shadow count %d not divisible by 2^((g-1)n)" % c)
        out[key] = c // denom
    return out


def reconstruct(
    stream: Iterable[MonomialWitness], n: int, g: int
) -> Matroid:
    """Rebuild a non-separable loop/coloop-free matroid from its R^(g) stream.

    g must be |B(M)|.  The result is determined up to the equivalence the
    polynomial cannot see past (isomorphism composed with dualizing
    components), and tests assert exactly that.
    """
    monomials = list(stream)
    shadow = _genus1_shadow(monomials, n, g)
    rho = max(ex for ex, _ in shadow)
    if rho == 0 or rho == n:
        raise NotReconstructible("rank 0 or rank n: loops or coloops only")
    if shadow.get((0, 0), 0) != g:
        raise NotReconstructible(
            "stream encodes %d bases, genus is %d" % (shadow.get((0, 0), 0), g)
        )
    t1 = SparsePoly(VarLayout(1), dict(shadow)).shift_all(-1)
    if t1.terms.get((1, 0), 0) == 0:
        raise NotReconstructible("beta invariant vanishes: separable or loop-bearing")
    if rho == 1:
        # rank 1 without loops is a single parallel class
        return uniform(1, n)
    if n - rho == 1:
        # nullity 1 without coloops: the ground set is one circuit
        return uniform(n - 1, n)

    lay = VarLayout(g)
    order = sorted(monomials, key=lambda w: (sum(w.exps), w.exps))
    for w in order:
        exps = w.exps
        if exps[lay.y(1)] != 1:
            continue
        m_len = rho - exps[lay.x(1)] + 1
        if not 3 <= m_len <= rho + 1 or m_len + 1 > g:
            continue
        if any(exps[lay.x(i)] or exps[lay.y(i)] for i in range(2, g + 1)):
            continue
        ok = all(
            exps[lay.x_cap(i, j)] > 0
            for i in range(2, g + 1)
            for j in range(i + 1, g + 1)
        )
        if not ok:
            continue
        ok = all(
            exps[lay.x_cap(1, i)] == rho - m_len + 1 and exps[lay.y_cap(1, i)] == 0
            for i in range(2, m_len + 2)
        )
        if not ok:
            continue
        # every union inside {circuit, anchor bases} is B | C: one extra element
        head = range(1, m_len + 2)
        ok = all(
            exps[lay.x_cup(i, j)] == 0 and exps[lay.y_cup(i, j)] == 1
            for i in head
            for j in head
            if i < j
        )
        if not ok:
            continue
        verts = list(range(2, g + 1))
        adj: Dict[int, Set[int]] = {v: set() for v in verts}
        for i in range(2, g + 1):
            for j in range(i + 1, g + 1):
                if exps[lay.x_cap(i, j)] == 1:
                    adj[i].add(j)
                    adj[j].add(i)
        graph = BaseGraph(verts, adj)
        anchor = frozenset(range(3, m_len + 2))
        if not anchor <= graph.adj[2]:
            continue
        b_label = frozenset(range(rho))
        try:
            seed, _, _ = label_neighborhood(
                graph, 2, b_label, anchor, n=n, c1=rho
            )
            full = propagate_labels(graph, seed)
            masks = [mask_of(sorted(s), n) for s in full.values()]
            missing = find_missing_base(masks, rho, n)
            family = sorted(set(masks + [missing]))
            if len(family) != g:
                continue
            validate_basis_family(n, family)
            return from_bases(n, [sorted(set_of(mk)) for mk in family])
        except _SKIP:
            continue
    raise NoWitness("no monomial decoded to a valid basis family")
