"""Counting labelled forests and inclusive direct systems over a chain."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb
from typing import NamedTuple

from scipy.cluster.hierarchy import DisjointSet

from . import config
from .errors import BadRange, CapacityExceeded, InternalInconsistency, InvalidSemilattice
from .finbool import BooleanAlgebra, BooleanHom
from .plonka import DirectSystem, find_isomorphism, is_injective_ibsl, plonka_sum, validate_system
from .semilattice import JoinSemilattice, from_order


def _cayley(q: int) -> int:
    # q**(q-2) with 1**(-1) read as 1
    return 1 if q == 1 else q ** (q - 2)


@lru_cache(maxsize=None)
def forests(m: int) -> int:
    """Labelled forests on ``m`` vertices, by the size of the tree holding vertex 1."""
    if m < 0:
        raise BadRange(f"m = {m} must be nonnegative")
    if m == 0:
        return 1
    return sum(comb(m - 1, q - 1) * _cayley(q) * forests(m - q) for q in range(1, m + 1))


def forest_oracle(m: int) -> int:
    """Brute force: count acyclic edge subsets of the complete graph on ``m`` vertices."""
    if m < 0:
        raise BadRange(f"m = {m} must be nonnegative")
    cap = config.get_caps().forest_oracle
    if m > cap:
        raise CapacityExceeded(f"forest oracle capped at {cap} vertices")
    edges = list(combinations(range(m), 2))
    count = 0
    for mask in range(1 << len(edges)):
        ds = DisjointSet(range(m))
        for e, (u, v) in enumerate(edges):
            if mask >> e & 1:
                if ds.connected(u, v):
                    break
                ds.merge(u, v)
        else:
            count += 1
    return count


class ChainFactor(NamedTuple):
    enumerated: int
    binomial: int


def chain_factor(n: int, h: int) -> ChainFactor:
    """``Σ_s s·|P_s(h)|`` over ``h``-subsets of ``{1..n}`` with least element ``s``, and ``C(n+1, h+1)``."""
    if not 1 <= h <= n:
        raise BadRange(f"need 1 <= h <= n, got n = {n}, h = {h}")
    enumerated = sum(min(X) for X in combinations(range(1, n + 1), h))
    binomial = comb(n + 1, h + 1)
    if enumerated != binomial:
        raise InternalInconsistency(f"chain factor routes disagree at n = {n}, h = {h}")
    return ChainFactor(enumerated, binomial)


@dataclass(frozen=True)
class CountingResult:
    n: int
    k: int
    value: int
    chain_factor: int
    forest_count: int


def n_d(n: int, k: int) -> CountingResult:
    if k < 2 or k - 2 > n or n < 1:
        raise BadRange(f"need k >= 2 and k - 2 <= n, got n = {n}, k = {k}")
    chain = comb(n + 1, k - 1)
    f = forests(k - 2)
    return CountingResult(n, k, chain * f, chain, f)


# -- inclusive systems ---------------------------------------------------------

def chain_member(m: int) -> BooleanAlgebra:
    """The ``m``-atom algebra of the maximal chain: atoms ``{0}, …, {m-2}`` and the rest."""
    return BooleanAlgebra(m)


def inclusion(small: BooleanAlgebra, large: BooleanAlgebra) -> BooleanHom:
    l = small.atom_count
    return BooleanHom(small, large, tuple(min(t, l - 1) for t in range(large.atom_count)))


@dataclass(frozen=True, eq=False)
class InclusiveStructure:
    labels: tuple[int, ...]          # atoms of the algebra at each index
    order: frozenset[tuple[int, int]]
    system: DirectSystem


@dataclass(frozen=True, eq=False)
class InclusiveEnumeration:
    n: int
    k: int
    structures: tuple[InclusiveStructure, ...]
    candidates: int
    formula: int

    @property
    def count(self) -> int:
        return len(self.structures)

    @property
    def agrees(self) -> bool:
        return self.count == self.formula


def _middle_orders(h: int):
    """Partial orders on ``0..h-1`` in which ``u < v`` only if ``u < v`` as integers."""
    pairs = [(u, v) for u in range(h) for v in range(u + 1, h)]
    seen = set()
    for pick in product((False, True), repeat=len(pairs)):
        rel = {p for p, on in zip(pairs, pick) if on}
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in product(list(rel), repeat=2):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
        key = frozenset(rel)
        if key not in seen:
            seen.add(key)
            yield key


def _build(n: int, labels: tuple[int, ...], middle: frozenset) -> DirectSystem | None:
    h = len(labels) - 2
    top = h + 1
    pairs = [(0, v) for v in range(1, top + 1)] + [(v, top) for v in range(1, top)]
    pairs += [(u + 1, v + 1) for (u, v) in middle]
    try:
        L = from_order(h + 2, pairs)
    except InvalidSemilattice:
        return None
    names = ["i0"] + [f"m{v}" for v in range(1, top)] + ["top"]
    L = JoinSemilattice(L.join_table, L.bottom, tuple(names))
    comps = [chain_member(m) for m in labels]
    homs = {(i, j): inclusion(comps[i], comps[j])
            for i, j in L.comparable_pairs() if i != j}
    return validate_system(L, comps, homs)


def enumerate_inclusive(n: int, k: int) -> InclusiveEnumeration:
    """Enumerate inclusive systems of weight ``k`` over the chain ``A_1 ⊂ … ⊂ A_n``.

    Interpretation: ``k - 2`` middle indices carry distinct chain members, the
    order among them is any partial order along which labels increase, the
    least index carries a member at most the smallest middle label (any
    member when there are no middles) and the top carries ``A_n``.  Systems
    whose index is not a join-semilattice are dropped and the rest are
    deduplicated up to isomorphism.
    """
    caps = config.get_caps()
    if n > caps.inclusive_n or k > caps.inclusive_k:
        raise CapacityExceeded(f"enumeration capped at n <= {caps.inclusive_n}, k <= {caps.inclusive_k}")
    if n < 1 or k < 2 or k - 2 > n:
        raise BadRange(f"need k >= 2 and k - 2 <= n, got n = {n}, k = {k}")
    h = k - 2
    found: list[InclusiveStructure] = []
    candidates = 0
    for mids in combinations(range(1, n + 1), h):
        bottoms = range(1, (min(mids) if mids else n) + 1)
        for middle in _middle_orders(h):
            for s in bottoms:
                labels = (s, *mids, n)
                S = _build(n, labels, middle)
                if S is None:
                    continue
                candidates += 1
                if not is_injective_ibsl(plonka_sum(S)):
                    raise InternalInconsistency("inclusive system is not injective")
                if any(find_isomorphism(S, other.system) is not None for other in found):
                    continue
                found.append(InclusiveStructure(labels, middle, S))
    return InclusiveEnumeration(n, k, tuple(found), candidates, n_d(n, k).value)
