"""Matroids on small ground sets, given by their families of bases.

Ground sets are {0, .., n-1} with n <= 32 so subsets live in one machine
word; a basis is stored as a bit mask.  The rank function is served from a
precomputed table of all 2^n subset ranks once the ground set is small
enough for that to be sane (n <= 26), which is what the enumeration engine
feeds on.

The named families R_{2n}, Q_{2n}, S_{4n}, S'_{4n} (uniform matroids with a
few basis slots punched out) are constructed here as well; the constructors
go through the same validation as everything else, so the families that
fail to be matroids at small scale are rejected rather than silently built.
"""

from __future__ import annotations

import json
import random
from itertools import combinations
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

MAX_GROUND = 32
RANK_TABLE_MAX_N = 26

# Full pairwise exchange validation is quadratic in the number of bases;
# above this pair count a seeded random audit is used instead.
_FULL_CHECK_PAIR_LIMIT = 1_200_000
_SAMPLED_CHECK_PAIRS = 20_000


class NotAMatroid(ValueError):
    """A basis family violating the exchange axiom (or trivially malformed)."""


class NotACircuitHyperplane(ValueError):
    """relax() was pointed at a set that is not a circuit-hyperplane."""


class SearchLimitExceeded(RuntimeError):
    """Isomorphism search refused: ground set above the configured limit."""


class GroundSetTooLarge(ValueError):
    """Operation needs a subset-indexed table but n is too big for one."""


def popcount(x: int) -> int:
    return bin(x).count("1")


def mask_of(elements: Iterable[int], n: int) -> int:
    m = 0
    for e in elements:
        if not 0 <= e < n:
            raise ValueError("element %r outside ground set of size %d" % (e, n))
        m |= 1 << e
    return m


def set_of(mask: int) -> FrozenSet[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def _check_exchange_pair(b1: int, b2: int, basis_set: Set[int]) -> Optional[Tuple[int, int]]:
    """Return (basis, element) witnessing an exchange failure, or None."""
    only1 = b1 & ~b2
    only2 = b2 & ~b1
    e_bits = only1
    while e_bits:
        e_bit = e_bits & -e_bits
        e_bits ^= e_bit
        stripped = b1 ^ e_bit
        f_bits = only2
        ok = False
        while f_bits:
            f_bit = f_bits & -f_bits
            f_bits ^= f_bit
            if (stripped | f_bit) in basis_set:
                ok = True
                break
        if not ok:
            return (b1, e_bit.bit_length() - 1)
    return None


def validate_basis_family(n: int, masks: Sequence[int]) -> None:
    """Raise NotAMatroid unless `masks` is a valid family of bases on [0, n)."""
    if not 0 <= n <= MAX_GROUND:
        raise NotAMatroid("ground set size %d outside [0, %d]" % (n, MAX_GROUND))
    if not masks:
        raise NotAMatroid("empty basis family")
    full = (1 << n) - 1
    r = popcount(masks[0])
    seen = set()
    for m in masks:
        if m & ~full:
            raise NotAMatroid("basis 0x%x outside ground set" % m)
        if popcount(m) != r:
            raise NotAMatroid(
                "mixed basis sizes: %d and %d" % (r, popcount(m))
            )
        seen.add(m)
    if len(seen) != len(masks):
        raise NotAMatroid("duplicate bases in family")

    basis_list = sorted(seen)
    npairs = len(basis_list) * (len(basis_list) - 1)
    if npairs <= _FULL_CHECK_PAIR_LIMIT:
        pairs = ((b1, b2) for b1 in basis_list for b2 in basis_list if b1 != b2)
    else:
        rng = random.Random(0xB0BA5)
        pairs = (
            (rng.choice(basis_list), rng.choice(basis_list))
            for _ in range(_SAMPLED_CHECK_PAIRS)
        )
    for b1, b2 in pairs:
        if b1 == b2:
            continue
        bad = _check_exchange_pair(b1, b2, seen)
        if bad is not None:
            raise NotAMatroid(
                "exchange fails for bases %s, %s at element %d"
                % (sorted(set_of(bad[0])), sorted(set_of(b2)), bad[1])
            )


class Matroid:
    """A matroid with ground set {0..n-1} and an explicit basis family."""

    __slots__ = ("n", "bases_masks", "_rank_table", "_circuits")

    def __init__(self, n: int, bases: Iterable[Iterable[int] | int], validate: bool = True):
        masks = []
        for b in bases:
            masks.append(b if isinstance(b, int) else mask_of(b, n))
        masks = sorted(set(masks))
        if validate:
            validate_basis_family(n, masks)
        elif not masks:
            raise NotAMatroid("empty basis family")
        self.n = n
        self.bases_masks: Tuple[int, ...] = tuple(masks)
        self._rank_table: Optional[bytes] = None
        self._circuits: Optional[Tuple[int, ...]] = None

    # -- trivia ------------------------------------------------------------

    @property
    def rank(self) -> int:
        return popcount(self.bases_masks[0])

    @property
    def corank(self) -> int:
        return self.n - self.rank

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def bases(self) -> List[FrozenSet[int]]:
        return [set_of(m) for m in self.bases_masks]

    def is_basis(self, subset: Iterable[int] | int) -> bool:
        m = subset if isinstance(subset, int) else mask_of(subset, self.n)
        return m in set(self.bases_masks)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matroid)
            and other.n == self.n
            and other.bases_masks == self.bases_masks
        )

    def __hash__(self) -> int:
        return hash((self.n, self.bases_masks))

    def __repr__(self) -> str:
        return "Matroid(n=%d, rank=%d, bases=%d)" % (self.n, self.rank, len(self.bases_masks))

    # -- rank --------------------------------------------------------------

    def rank_table(self) -> bytes:
        """Ranks of all 2^n subsets, index = subset mask."""
        if self._rank_table is None:
            if self.n > RANK_TABLE_MAX_N:
                raise GroundSetTooLarge(
                    "rank table wants n <= %d, have %d" % (RANK_TABLE_MAX_N, self.n)
                )
            from .kernel import impl

            self._rank_table = bytes(impl.build_rank_table(self.n, list(self.bases_masks)))
        return self._rank_table

    def rank_of(self, subset: Iterable[int] | int) -> int:
        m = subset if isinstance(subset, int) else mask_of(subset, self.n)
        if self._rank_table is not None or self.n <= RANK_TABLE_MAX_N:
            return self.rank_table()[m]
        best = 0
        for b in self.bases_masks:
            c = popcount(m & b)
            if c > best:
                best = c
        return best

    def nullity_of(self, subset: Iterable[int] | int) -> int:
        m = subset if isinstance(subset, int) else mask_of(subset, self.n)
        return popcount(m) - self.rank_of(m)

    def closure(self, subset: Iterable[int] | int) -> int:
        m = subset if isinstance(subset, int) else mask_of(subset, self.n)
        r = self.rank_of(m)
        out = m
        for e in range(self.n):
            bit = 1 << e
            if not m & bit and self.rank_of(m | bit) == r:
                out |= bit
        return out

    # -- derived structure ---------------------------------------------------

    def loops(self) -> FrozenSet[int]:
        union = 0
        for b in self.bases_masks:
            union |= b
        return set_of(self.full_mask & ~union)

    def coloops(self) -> FrozenSet[int]:
        inter = self.full_mask
        for b in self.bases_masks:
            inter &= b
        return set_of(inter)

    def circuits(self) -> Tuple[int, ...]:
        """All circuits as masks, minimal dependent sets, sorted."""
        if self._circuits is None:
            table = self.rank_table()
            out = []
            for m in range(1, 1 << self.n):
                size = popcount(m)
                if table[m] != size - 1:
                    continue
                minimal = True
                mm = m
                while mm:
                    bit = mm & -mm
                    mm ^= bit
                    sub = m ^ bit
                    if table[sub] != size - 1:
                        minimal = False
                        break
                if minimal:
                    out.append(m)
            self._circuits = tuple(sorted(out))
        return self._circuits

    def circuit_size_multiset(self) -> Tuple[int, ...]:
        return tuple(sorted(popcount(c) for c in self.circuits()))

    def dual(self) -> "Matroid":
        full = self.full_mask
        d = Matroid.__new__(Matroid)
        d.n = self.n
        d.bases_masks = tuple(sorted(full ^ b for b in self.bases_masks))
        d._rank_table = None
        d._circuits = None
        return d

    def delete(self, e: int) -> "Matroid":
        """Single-element deletion; `e` must not be a coloop."""
        bit = 1 << e
        keep = [b for b in self.bases_masks if not b & bit]
        if not keep:
            raise ValueError("cannot delete coloop %d" % e)
        return _squeeze_out(self.n, keep, e)

    def contract(self, e: int) -> "Matroid":
        """Single-element contraction; `e` must not be a loop."""
        bit = 1 << e
        keep = [b ^ bit for b in self.bases_masks if b & bit]
        if not keep:
            raise ValueError("cannot contract loop %d" % e)
        return _squeeze_out(self.n, keep, e)

    def components(self) -> List[FrozenSet[int]]:
        """Connectivity classes: e ~ f iff some circuit contains both.

        Loops and coloops come out as singleton classes.  Rank additivity
        over the classes is asserted, which is the defining property of a
        direct-sum split.
        """
        parent = list(range(self.n))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a: int, b: int) -> None:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for c in self.circuits():
            first = None
            mm = c
            while mm:
                bit = mm & -mm
                mm ^= bit
                e = bit.bit_length() - 1
                if first is None:
                    first = e
                else:
                    union(first, e)
        groups: Dict[int, List[int]] = {}
        for e in range(self.n):
            groups.setdefault(find(e), []).append(e)
        classes = sorted(groups.values())
        total = sum(self.rank_of(mask_of(cl, self.n)) for cl in classes)
        if total != self.rank:
            raise NotAMatroid(
                "rank not additive over circuit-connectivity classes (%d != %d)"
                % (total, self.rank)
            )
        return [frozenset(cl) for cl in classes]

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def restriction(self, elements: Iterable[int]) -> "Matroid":
        """Restriction to a set that is a union of components."""
        keep = sorted(elements)
        pos = {e: i for i, e in enumerate(keep)}
        m = mask_of(keep, self.n)
        sub = set()
        for b in self.bases_masks:
            bm = b & m
            sub.add(sum(1 << pos[e] for e in set_of(bm)))
        sizes = {popcount(s) for s in sub}
        if len(sizes) != 1:
            raise ValueError("restriction target is not a union of components")
        out = Matroid.__new__(Matroid)
        out.n = len(keep)
        out.bases_masks = tuple(sorted(sub))
        out._rank_table = None
        out._circuits = None
        return out

    # -- serialization -------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.n, "bases": [sorted(set_of(b)) for b in self.bases_masks]},
            separators=(",", ":"),
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "Matroid":
        try:
            obj = json.loads(text)
            n = int(obj["n"])
            bases = [[int(e) for e in b] for b in obj["bases"]]
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise ValueError("bad matroid JSON: %s" % exc) from None
        return cls(n, bases)


def _squeeze_out(n: int, masks: List[int], e: int) -> Matroid:
    """Drop element e from the ground set, shifting higher elements down."""
    low = (1 << e) - 1
    out = Matroid.__new__(Matroid)
    out.n = n - 1
    out.bases_masks = tuple(sorted({(m & low) | ((m >> 1) & ~low) for m in masks}))
    out._rank_table = None
    out._circuits = None
    return out


# -- constructors ------------------------------------------------------------


def from_bases(n: int, bases: Iterable[Iterable[int]]) -> Matroid:
    return Matroid(n, bases, validate=True)


def uniform(r: int, n: int) -> Matroid:
    if not 0 <= r <= n <= MAX_GROUND:
        raise ValueError("need 0 <= r <= n <= %d" % MAX_GROUND)
    m = Matroid.__new__(Matroid)
    m.n = n
    m.bases_masks = tuple(
        sorted(sum(1 << e for e in c) for c in combinations(range(n), r))
    )
    m._rank_table = None
    m._circuits = None
    return m


def direct_sum(a: Matroid, b: Matroid) -> Matroid:
    if a.n + b.n > MAX_GROUND:
        raise ValueError("direct sum exceeds ground cap")
    out = Matroid.__new__(Matroid)
    out.n = a.n + b.n
    out.bases_masks = tuple(
        sorted(ba | (bb << a.n) for ba in a.bases_masks for bb in b.bases_masks)
    )
    out._rank_table = None
    out._circuits = None
    return out


def is_circuit_hyperplane(m: Matroid, subset: Iterable[int] | int) -> bool:
    x = subset if isinstance(subset, int) else mask_of(subset, m.n)
    r = m.rank
    if popcount(x) != r:
        return False
    if m.rank_of(x) != r - 1:
        return False
    # circuit: every proper subset independent
    mm = x
    while mm:
        bit = mm & -mm
        mm ^= bit
        if m.rank_of(x ^ bit) != r - 1:
            return False
    # hyperplane: closed of rank r-1
    for e in range(m.n):
        bit = 1 << e
        if not x & bit and m.rank_of(x | bit) == r - 1:
            return False
    return True


def relax(m: Matroid, subset: Iterable[int] | int) -> Matroid:
    """Circuit-hyperplane relaxation: promote `subset` to a basis."""
    x = subset if isinstance(subset, int) else mask_of(subset, m.n)
    if not is_circuit_hyperplane(m, x):
        raise NotACircuitHyperplane(
            "%s is not a circuit-hyperplane" % sorted(set_of(x))
        )
    out = Matroid.__new__(Matroid)
    out.n = m.n
    out.bases_masks = tuple(sorted(m.bases_masks + (x,)))
    out._rank_table = None
    out._circuits = None
    return out


def _punch_uniform(r: int, n: int, removed: List[int], name: str) -> Matroid:
    u = uniform(r, n)
    removed_set = set(removed)
    if len(removed_set) != len(removed):
        raise NotAMatroid("%s: removed slots collide" % name)
    masks = [b for b in u.bases_masks if b not in removed_set]
    try:
        validate_basis_family(n, masks)
    except NotAMatroid as exc:
        raise NotAMatroid("%s is not a matroid: %s" % (name, exc)) from None
    m = Matroid.__new__(Matroid)
    m.n = n
    m.bases_masks = tuple(sorted(masks))
    m._rank_table = None
    m._circuits = None
    return m


def construct_r(n: int) -> Matroid:
    """R_{2n}: U_{n,2n} with the two halves {0..n-1}, {n..2n-1} removed."""
    if n < 2 or 2 * n > MAX_GROUND:
        raise ValueError("construct_r wants 2 <= n <= 16")
    x1 = (1 << n) - 1
    x2 = x1 << n
    return _punch_uniform(n, 2 * n, [x1, x2], "R_%d" % (2 * n))


def construct_q(n: int) -> Matroid:
    """Q_{2n}: U_{n,2n} minus {0..n-1} and {n-1..2n-2}; a matroid iff n >= 3."""
    if n < 2 or 2 * n > MAX_GROUND:
        raise ValueError("construct_q wants 2 <= n <= 16")
    x1 = (1 << n) - 1
    x2 = x1 << n
    x3 = (x2 | (1 << (n - 1))) & ~(1 << (2 * n - 1))
    return _punch_uniform(n, 2 * n, [x1, x3], "Q_%d" % (2 * n))


def s_removed_triples(n: int, primed: bool) -> List[FrozenSet[int]]:
    """The punched 3-subsets of S_{4n} (F1 u F2) or S'_{4n} (F3 u F4).

    Triples are consecutive {2i, 2i+1, 2i+2}; the two variants differ only
    in where the wrap happens: F1 wraps the first half back to 0 and F2 the
    second half back to 2n, while F3 runs straight across the middle and F4
    wraps clear around to 0.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    tri = []
    if not primed:
        for i in range(n - 1):
            tri.append(frozenset({2 * i, 2 * i + 1, 2 * i + 2}))
        tri.append(frozenset({2 * n - 2, 2 * n - 1, 0}))
        for i in range(n, 2 * n - 1):
            tri.append(frozenset({2 * i, 2 * i + 1, 2 * i + 2}))
        tri.append(frozenset({4 * n - 2, 4 * n - 1, 2 * n}))
    else:
        for i in range(n):
            tri.append(frozenset({2 * i, 2 * i + 1, 2 * i + 2}))
        for i in range(n, 2 * n - 1):
            tri.append(frozenset({2 * i, 2 * i + 1, 2 * i + 2}))
        tri.append(frozenset({4 * n - 2, 4 * n - 1, 0}))
    return tri


def construct_s(n: int) -> Matroid:
    """S_{4n}: U_{3,4n} minus the F1 u F2 triple family; a matroid iff n >= 3."""
    if n < 2 or 4 * n > MAX_GROUND:
        raise ValueError("construct_s wants 2 <= n <= 8")
    removed = [mask_of(t, 4 * n) for t in s_removed_triples(n, primed=False)]
    return _punch_uniform(3, 4 * n, removed, "S_%d" % (4 * n))


def construct_s_prime(n: int) -> Matroid:
    """S'_{4n}: U_{3,4n} minus the F3 u F4 triple family; a matroid iff n >= 3."""
    if n < 2 or 4 * n > MAX_GROUND:
        raise ValueError("construct_s_prime wants 2 <= n <= 8")
    removed = [mask_of(t, 4 * n) for t in s_removed_triples(n, primed=True)]
    return _punch_uniform(3, 4 * n, removed, "S'_%d" % (4 * n))


# -- base graphs --------------------------------------------------------------


class BaseGraph:
    """Exchange graph on the bases: B ~ B' iff |B \\ B'| = 1."""

    __slots__ = ("vertices", "adj")

    def __init__(self, vertices: Sequence[int], adj: Dict[int, Set[int]]):
        self.vertices = tuple(vertices)
        self.adj = adj

    def degree_multiset(self) -> Tuple[int, ...]:
        return tuple(sorted(len(self.adj[v]) for v in self.vertices))

    def distances_from(self, source: int) -> Dict[int, int]:
        dist = {source: 0}
        frontier = [source]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for v in frontier:
                for w in self.adj[v]:
                    if w not in dist:
                        dist[w] = d
                        nxt.append(w)
            frontier = nxt
        return dist

    def diameter(self) -> int:
        best = 0
        for v in self.vertices:
            dist = self.distances_from(v)
            if len(dist) != len(self.vertices):
                raise ValueError("base graph is disconnected")
            best = max(best, max(dist.values()))
        return best


def base_graph(m: Matroid) -> BaseGraph:
    verts = list(m.bases_masks)
    adj: Dict[int, Set[int]] = {v: set() for v in verts}
    for i, b1 in enumerate(verts):
        for b2 in verts[i + 1 :]:
            if popcount(b1 ^ b2) == 2:
                adj[b1].add(b2)
                adj[b2].add(b1)
    return BaseGraph(verts, adj)


# -- isomorphism ---------------------------------------------------------------


DEFAULT_ISO_LIMIT = 12


def _element_profile(m: Matroid) -> List[Tuple]:
    """Per-element invariant used to cut the isomorphism search space."""
    in_bases = [0] * m.n
    for b in m.bases_masks:
        mm = b
        while mm:
            bit = mm & -mm
            mm ^= bit
            in_bases[bit.bit_length() - 1] += 1
    circ_sizes: List[List[int]] = [[] for _ in range(m.n)]
    for c in m.circuits():
        size = popcount(c)
        mm = c
        while mm:
            bit = mm & -mm
            mm ^= bit
            circ_sizes[bit.bit_length() - 1].append(size)
    return [
        (in_bases[e], tuple(sorted(circ_sizes[e]))) for e in range(m.n)
    ]


def is_isomorphic(m1: Matroid, m2: Matroid, limit: int = DEFAULT_ISO_LIMIT) -> bool:
    """Exhaustive element-bijection search with invariant pruning."""
    if m1.n != m2.n:
        return False
    if m1.n > limit:
        raise SearchLimitExceeded(
            "isomorphism search capped at n <= %d (have %d)" % (limit, m1.n)
        )
    if m1.rank != m2.rank or len(m1.bases_masks) != len(m2.bases_masks):
        return False
    if m1.circuit_size_multiset() != m2.circuit_size_multiset():
        return False
    if base_graph(m1).degree_multiset() != base_graph(m2).degree_multiset():
        return False

    prof1 = _element_profile(m1)
    prof2 = _element_profile(m2)
    if sorted(prof1) != sorted(prof2):
        return False
    candidates = [
        [f for f in range(m2.n) if prof2[f] == prof1[e]] for e in range(m1.n)
    ]

    bases2 = set(m2.bases_masks)
    circuits1 = m1.circuits()
    circuits2 = m2.circuits()
    # circuits indexed by their highest element, checked as soon as complete
    circ1_by_top = [[] for _ in range(m1.n)]
    for c in circuits1:
        circ1_by_top[c.bit_length() - 1].append(c)
    circ2_set = set(circuits2)
    circ1_set = set(circuits1)
    circ2_by_elem = [[] for _ in range(m2.n)]
    for c in circuits2:
        mm = c
        while mm:
            bit = mm & -mm
            mm ^= bit
            circ2_by_elem[bit.bit_length() - 1].append(c)

    n = m1.n
    image = [-1] * n
    used = [False] * n

    def apply_mask(mask: int) -> int:
        out = 0
        mm = mask
        while mm:
            bit = mm & -mm
            mm ^= bit
            out |= 1 << image[bit.bit_length() - 1]
        return out

    def unapply_mask(mask: int, inv: Dict[int, int]) -> Optional[int]:
        out = 0
        mm = mask
        while mm:
            bit = mm & -mm
            mm ^= bit
            e = inv.get(bit.bit_length() - 1)
            if e is None:
                return None
            out |= 1 << e
        return out

    inv: Dict[int, int] = {}

    def extend(e: int) -> bool:
        if e == n:
            return all(apply_mask(b) in bases2 for b in m1.bases_masks)
        for f in candidates[e]:
            if used[f]:
                continue
            image[e] = f
            used[f] = True
            inv[f] = e
            ok = True
            for c in circ1_by_top[e]:
                if apply_mask(c) not in circ2_set:
                    ok = False
                    break
            if ok:
                for c in circ2_by_elem[f]:
                    pre = unapply_mask(c, inv)
                    if pre is not None and pre not in circ1_set:
                        ok = False
                        break
            if ok and extend(e + 1):
                return True
            used[f] = False
            del inv[f]
            image[e] = -1
        return False

    return extend(0)


def is_equivalent(m1: Matroid, m2: Matroid, limit: int = DEFAULT_ISO_LIMIT) -> bool:
    """Isomorphic after independently dualizing any subset of components.

    This is exactly the equivalence class the genus-g polynomial cannot see
    past, so it is the right notion of success for reconstruction.
    """
    comps1 = [m1.restriction(c) for c in m1.components()]
    comps2 = [m2.restriction(c) for c in m2.components()]
    if len(comps1) != len(comps2):
        return False
    comps1.sort(key=lambda m: (m.n, len(m.bases_masks)))
    remaining = list(comps2)

    def match(i: int) -> bool:
        if i == len(comps1):
            return True
        a = comps1[i]
        for j, b in enumerate(remaining):
            if b is None or b.n != a.n:
                continue
            if is_isomorphic(a, b, limit) or is_isomorphic(a, b.dual(), limit):
                remaining[j] = None
                if match(i + 1):
                    return True
                remaining[j] = b
        return False

    return match(0)
