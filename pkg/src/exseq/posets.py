"""Exceptional sets of line bundles and their poset of exceptional orders.

An ordered pair (A, B) of members is *forced* (A must come before B in any
exceptional order) exactly when A - B is not anti-immaculate.  The forced
pairs F generate, via transitive hull, the intersection P of all exceptional
orders; total orders containing F are precisely the exceptional ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from . import cohomology as coh
from .varieties import LB, VarietySpec, neg, rank_k0, sub, vlex_key


class NotExceptionalError(ValueError):
    pass


class AntisymmetryError(ValueError):
    """A relation forced a cycle; carries one offending cycle for diagnosis."""

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__(f"forced cycle {self.cycle}")


@dataclass(frozen=True)
class Relation:
    """A reflexive relation on an indexed ground set of line bundles."""

    ground: tuple[LB, ...]
    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        n = len(self.ground)
        object.__setattr__(
            self, "pairs", self.pairs | frozenset((k, k) for k in range(n))
        )

    def __contains__(self, pair):
        return pair in self.pairs

    def off_diagonal(self):
        return {(a, b) for a, b in self.pairs if a != b}

    def as_bundle_pairs(self):
        g = self.ground
        return {(g[a], g[b]) for a, b in self.off_diagonal()}


def is_exceptional_sequence(spec: VarietySpec, bundles) -> bool:
    """Every earlier-minus-later difference must be immaculate."""
    bundles = list(bundles)
    if len(set(bundles)) != len(bundles):
        raise ValueError("duplicate line bundles in sequence")
    return all(
        coh.is_immaculate(spec, sub(bundles[a], bundles[b]))
        for a in range(len(bundles))
        for b in range(a + 1, len(bundles))
    )


def delta(a: LB, b: LB) -> LB:
    return sub(b, a)


def is_pairwise_comparable(spec: VarietySpec, bundles) -> bool:
    """Each difference lies in Imm or -Imm, a prerequisite for any
    exceptional order to exist."""
    for a in range(len(bundles)):
        for b in range(a + 1, len(bundles)):
            d = sub(bundles[a], bundles[b])
            if not (coh.is_immaculate(spec, d) or coh.is_immaculate(spec, neg(d))):
                return False
    return True


def compute_F(spec: VarietySpec, bundles) -> Relation:
    """The generating relation of forced pairs, with the diagonal included.

    Both available characterisations are evaluated and compared: the direct
    one (A - B not anti-immaculate) and the delta-fiber one (B - A equal to
    the trivial class or anti-immaculate without being mutually orthogonal).
    A mismatch would mean a cohomology bug, hence the hard assert.
    """
    bundles = tuple(bundles)
    n = len(bundles)
    direct, fiber = set(), set()
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            d = sub(bundles[a], bundles[b])
            if not coh.is_immaculate(spec, neg(d)):
                direct.add((a, b))
            dd = sub(bundles[b], bundles[a])
            if coh.is_immaculate(spec, neg(dd)) and not coh.is_immaculate(spec, dd):
                fiber.add((a, b))
    assert direct == fiber, "the two characterisations of F disagree"
    return Relation(bundles, frozenset(direct))


def transitive_hull(rel: Relation) -> Relation:
    """Warshall closure; raises AntisymmetryError on a forced cycle."""
    n = len(rel.ground)
    reach = [[(a, b) in rel.pairs for b in range(n)] for a in range(n)]
    via = [[None] * n for _ in range(n)]
    for k in range(n):
        for a in range(n):
            if not reach[a][k]:
                continue
            for b in range(n):
                if reach[k][b] and not reach[a][b]:
                    reach[a][b] = True
                    via[a][b] = k
    for a in range(n):
        for b in range(a + 1, n):
            if reach[a][b] and reach[b][a]:
                raise AntisymmetryError(_expand_cycle(via, a, b))
    pairs = frozenset(
        (a, b) for a in range(n) for b in range(n) if reach[a][b]
    )
    return Relation(rel.ground, pairs)


def _expand_cycle(via, a, b):
    def path(x, y):
        k = via[x][y]
        if k is None:
            return [x, y]
        return path(x, k)[:-1] + path(k, y)

    return tuple(path(a, b)[:-1] + path(b, a)[:-1])


def associated_poset(spec: VarietySpec, bundles) -> Relation:
    return transitive_hull(compute_F(spec, bundles))


def extend_partial_order(rel: Relation, forced_pair) -> Relation:
    """Extend a partial order by one comparable pair (order-extension lemma)."""
    a, b = forced_pair
    if (b, a) in rel.pairs and a != b:
        raise ValueError(f"reverse of {forced_pair} already present")
    return transitive_hull(Relation(rel.ground, rel.pairs | {(a, b)}))


def linear_extensions(rel: Relation, limit: int | None = None):
    """All linear extensions of a partial order, lexicographic in the
    vertical-lex order of the ground bundles.  Returns (orders, truncated)."""
    n = len(rel.ground)
    succ = [set() for _ in range(n)]
    indeg = [0] * n
    for a, b in rel.off_diagonal():
        if b not in succ[a]:
            succ[a].add(b)
            indeg[b] += 1
    out, prefix = [], []
    truncated = False

    def rec():
        nonlocal truncated
        if limit is not None and len(out) >= limit:
            truncated = True
            return
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        avail = [k for k in range(n) if indeg[k] == 0 and k not in placed]
        avail.sort(key=lambda k: vlex_key(rel.ground[k]))
        for k in avail:
            placed.add(k)
            prefix.append(k)
            for m in succ[k]:
                indeg[m] -= 1
            rec()
            for m in succ[k]:
                indeg[m] += 1
            prefix.pop()
            placed.remove(k)

    placed: set[int] = set()
    rec()
    return out, truncated


@dataclass(frozen=True)
class ExceptionalSet:
    """An unordered exceptional set with one witnessing exceptional order."""

    spec: VarietySpec
    bundles: tuple[LB, ...]          # canonical vertical-lex listing
    certificate: tuple[LB, ...]      # a verified exceptional order

    @property
    def points(self) -> frozenset:
        return frozenset(self.bundles)

    def __len__(self):
        return len(self.bundles)


def exceptional_set(spec: VarietySpec, points, certificate=None) -> ExceptionalSet:
    """Build an ExceptionalSet, finding a witnessing order if none is given."""
    bundles = tuple(sorted(set(points), key=vlex_key))
    if certificate is None:
        if not is_pairwise_comparable(spec, bundles):
            raise NotExceptionalError("differences leave Imm union -Imm")
        poset = associated_poset(spec, bundles)  # raises on forced cycles
        orders, _ = linear_extensions(poset, limit=1)
        certificate = tuple(bundles[k] for k in orders[0])
    certificate = tuple(certificate)
    if not is_exceptional_sequence(spec, certificate):
        raise NotExceptionalError(f"order {certificate} is not exceptional")
    if frozenset(certificate) != frozenset(bundles):
        raise ValueError("certificate is not an order of the given set")
    return ExceptionalSet(spec, bundles, certificate)


def exceptional_orders(spec: VarietySpec, points, limit: int = 10000):
    """All exceptional orders of a set: the linear extensions of its poset,
    each re-verified.  Returns (sequences, truncated)."""
    es = points if isinstance(points, ExceptionalSet) else exceptional_set(spec, points)
    poset = associated_poset(spec, es.bundles)
    orders, truncated = linear_extensions(poset, limit=limit)
    seqs = []
    for order in orders:
        seq = tuple(es.bundles[k] for k in order)
        assert is_exceptional_sequence(spec, seq)
        seqs.append(seq)
    return seqs, truncated


def eff_relation(spec: VarietySpec, bundles) -> Relation:
    """Forced pairs whose forward difference is effective (plus diagonal)."""
    bundles = tuple(bundles)
    n = len(bundles)
    pairs = set()
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            d = sub(bundles[b], bundles[a])
            if coh.is_effective(spec, d) and coh.is_immaculate(spec, neg(d)):
                pairs.add((a, b))
    return Relation(bundles, frozenset(pairs))


def is_strongly_exceptional(spec: VarietySpec, points) -> bool:
    """delta(F) inside the acyclic locus, per the strongness criterion."""
    bundles = _as_bundles(spec, points)
    f = compute_F(spec, bundles)
    return all(
        coh.is_acyclic(spec, sub(bundles[b], bundles[a]))
        for a, b in f.off_diagonal()
    )


def is_strongly_exceptional_direct(spec: VarietySpec, points) -> bool:
    """Definitional check: every difference in both directions is acyclic."""
    bundles = _as_bundles(spec, points)
    return all(
        coh.is_acyclic(spec, sub(b, a))
        for a in bundles
        for b in bundles
        if a != b
    )


def is_effective_set(spec: VarietySpec, points) -> bool:
    bundles = _as_bundles(spec, points)
    f = compute_F(spec, bundles)
    return f.pairs == eff_relation(spec, bundles).pairs


def is_maximal(spec: VarietySpec, points) -> bool:
    return len(_as_bundles(spec, points)) == rank_k0(spec)


def _as_bundles(spec, points):
    if isinstance(points, ExceptionalSet):
        return points.bundles
    return tuple(sorted(set(points), key=vlex_key))


def exceptional_permutations_bruteforce(spec: VarietySpec, points):
    """Every permutation that is an exceptional sequence; test oracle."""
    bundles = _as_bundles(spec, points)
    return [
        perm
        for perm in permutations(bundles)
        if all(
            coh.is_immaculate(spec, sub(perm[a], perm[b]))
            for a in range(len(perm))
            for b in range(a + 1, len(perm))
        )
    ]
