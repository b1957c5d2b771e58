"""Seeded random instances for property tests and the CLI ``--seed`` flag."""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import InvalidSemilattice
from .finbool import BooleanAlgebra, BooleanHom, Measure
from .plonka import DirectSystem, RawAlgebra, validate_system
from .semilattice import JoinSemilattice, from_order


def random_semilattice(rng: random.Random, max_size: int = 4) -> JoinSemilattice:
    """A random join-semilattice; index 0 is always the least element."""
    while True:
        n = rng.randint(1, max_size)
        pairs = [(0, j) for j in range(1, n)]
        pairs += [(i, j) for i in range(1, n) for j in range(i + 1, n) if rng.random() < 0.5]
        try:
            L = from_order(n, pairs)
        except InvalidSemilattice:
            continue
        names = ["i0"] + [f"i{k}" for k in range(1, n)]
        return JoinSemilattice(L.join_table, L.bottom, tuple(names))


def random_system(rng: random.Random, max_index: int = 4, max_atoms: int = 3,
                  trivial_rate: float = 0.1, injective: bool | None = None) -> DirectSystem:
    """A random valid direct system.

    Homs are built upwards one cover at a time, each target atom choosing a
    source atom consistent with every route already fixed.  ``injective``
    forces (True) or merely permits (None) embeddings only; False is treated
    as None.
    """
    while True:
        S = _try_system(rng, max_index, max_atoms, trivial_rate, injective)
        if S is not None:
            return S


def _try_system(rng, max_index, max_atoms, trivial_rate, injective):
    L = random_semilattice(rng, max_index)
    order = L.topological_order()
    atoms = [0] * L.size
    for j in order:
        below = [i for i in L.indices if i != j and L.leq(i, j)]
        if any(atoms[i] == 0 for i in below) or rng.random() < trivial_rate:
            atoms[j] = 0
        else:
            lo = max([atoms[i] for i in below], default=1) if injective else 1
            if lo > max_atoms:
                return None
            atoms[j] = rng.randint(max(lo, 1), max_atoms)
    comps = [BooleanAlgebra(n) for n in atoms]
    duals: dict[tuple[int, int], tuple[int, ...]] = {}
    for j in order:
        covers = [i for (i, jj) in L.covers() if jj == j]
        known: dict[int, list[int | None]] = {}
        for i in covers:
            dual = []
            for t in range(atoms[j]):
                cands = [s for s in range(atoms[i])
                         if all(known.get(k, [None] * atoms[j])[t] in (None, duals[k, i][s])
                                for k in L.indices if k != i and L.leq(k, i))]
                if not cands:
                    return None
                dual.append(rng.choice(cands))
            if injective and atoms[i] and set(dual) != set(range(atoms[i])):
                return None
            duals[i, j] = tuple(dual)
            known.setdefault(i, [None] * atoms[j])
            known[i] = list(dual)
            for k in L.indices:
                if k != i and L.leq(k, i):
                    known[k] = [duals[k, i][s] for s in dual]
        for k in L.indices:
            if k != j and L.leq(k, j) and (k, j) not in duals:
                if k not in known:
                    return None
                duals[k, j] = tuple(known[k])
    homs = {(i, j): BooleanHom(comps[i], comps[j], d) for (i, j), d in duals.items()}
    return validate_system(L, comps, homs)


def random_measure(rng: random.Random, algebra: BooleanAlgebra, zero_rate: float = 0.0,
                   denominator: int = 12) -> Measure:
    """Random rational weights; with ``zero_rate`` some atoms get weight 0."""
    n = algebra.atom_count
    while True:
        raw = [0 if rng.random() < zero_rate else rng.randint(1, denominator) for _ in range(n)]
        total = sum(raw)
        if total:
            return Measure(algebra, tuple(Fraction(w, total) for w in raw))


def random_boolean_hom(rng: random.Random, source: BooleanAlgebra,
                       target: BooleanAlgebra) -> BooleanHom:
    return BooleanHom(source, target,
                      tuple(rng.randrange(source.atom_count) for _ in range(target.atom_count)))


def permute_raw(R: RawAlgebra, perm: list[int]) -> RawAlgebra:
    """Relabel raw element ``a`` as ``perm[a]``."""
    n = R.size
    inv = [0] * n
    for a, p in enumerate(perm):
        inv[p] = a
    names = None if R.names is None else [R.names[inv[p]] for p in range(n)]
    return RawAlgebra(
        [[perm[R.join[inv[x]][inv[y]]] for y in range(n)] for x in range(n)],
        [[perm[R.meet[inv[x]][inv[y]]] for y in range(n)] for x in range(n)],
        [perm[R.neg[inv[x]]] for x in range(n)],
        perm[R.zero], perm[R.one], names)


def systems(seed: int, count: int, **kw) -> list[DirectSystem]:
    rng = random.Random(seed)
    return [random_system(rng, **kw) for _ in range(count)]
