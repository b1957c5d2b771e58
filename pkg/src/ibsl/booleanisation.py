"""Booleanisation (direct limit) of a finite direct system.

For a finite index the limit is realised concretely as the top component
with ``π = p_{i⊤}``.  The quotient is also computed the slow way, by
union-find over every identification ``a ~ p_ij(a)``, and the two are
required to produce the same partition.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from scipy.cluster.hierarchy import DisjointSet

from .errors import InternalInconsistency, NotAHomomorphism, Violation
from .finbool import BooleanAlgebra, BooleanHom
from .plonka import (
    Decomposition,
    DirectSystem,
    PlonkaElement,
    plonka_eval,
    plonka_sum,
    validate_system,
)
from .semilattice import JoinSemilattice, chain


@dataclass(frozen=True, eq=False)
class Booleanisation:
    system: DirectSystem
    quotient: BooleanAlgebra
    pi: Mapping[PlonkaElement, int]
    classes: tuple[tuple[PlonkaElement, ...], ...]

    def project(self, x) -> int:
        return self.pi[PlonkaElement(*x)]

    def class_of(self, x) -> tuple[PlonkaElement, ...]:
        return self.classes[self.project(x)]

    def class_name(self, c: int) -> str:
        return self.system.element_name(PlonkaElement(self.system.top, c))

    @property
    def fibers_singleton(self) -> bool:
        return all(len(c) == 1 for c in self.classes)


def union_find_classes(S: DirectSystem) -> list[frozenset[PlonkaElement]]:
    ds = DisjointSet(S.elements)
    for (i, j), h in S.homs.items():
        for a in S.components[i].elements():
            ds.merge(PlonkaElement(i, a), PlonkaElement(j, h.apply(a)))
    return [frozenset(c) for c in ds.subsets()]


def booleanise(S: DirectSystem) -> Booleanisation:
    top = S.top
    pi = {x: S.to_top(x) for x in S.elements}
    quotient = S.components[top]
    fibers: list[list[PlonkaElement]] = [[] for _ in quotient.elements()]
    for x in S.elements:
        fibers[pi[x]].append(x)
    shortcut = {frozenset(f) for f in fibers}
    slow = set(union_find_classes(S))
    if shortcut != slow:
        raise InternalInconsistency("union-find quotient differs from the top-component realisation")
    for c in quotient.elements():
        if pi[PlonkaElement(top, c)] != c:
            raise InternalInconsistency("π is not the identity on the top component")
    B = Booleanisation(S, quotient, pi, tuple(tuple(sorted(f)) for f in fibers))
    v = check_projection(B)
    if v is not None:
        raise InternalInconsistency(f"π is not a homomorphism: {v}")
    return B


def check_projection(B: Booleanisation) -> Violation | None:
    """π commutes with every basic operation, checked on all elements."""
    S, A, pi = B.system, B.quotient, B.pi
    for x, y in product(S.elements, repeat=2):
        for op in ("join", "meet"):
            if pi[plonka_eval(S, op, x, y)] != getattr(A, op)(pi[x], pi[y]):
                return Violation(op, {"x": S.element_name(x), "y": S.element_name(y)})
    for x in S.elements:
        if pi[plonka_eval(S, "complement", x)] != A.complement(pi[x]):
            return Violation("complement", {"x": S.element_name(x)})
    if pi[plonka_eval(S, "zero")] != A.zero or pi[plonka_eval(S, "one")] != A.one:
        return Violation("constants")
    return None


def class_structure(B: Booleanisation) -> tuple[bool, bool]:
    """(every class meets an up-set of indices, every class meets each index at most once)."""
    L = B.system.index
    upsets = True
    single = True
    for cls in B.classes:
        met = {x.index for x in cls}
        if any(L.leq(i, j) and j not in met for i in met for j in L.indices):
            upsets = False
        if len(met) != len(cls):
            single = False
    return upsets, single


def is_trivial_booleanisation(S: DirectSystem) -> bool:
    B = booleanise(S)
    trivial = B.project(plonka_eval(S, "zero")) == B.project(plonka_eval(S, "one"))
    if trivial != S.has_trivial_component:
        raise InternalInconsistency("trivial quotient disagrees with the component scan")
    return trivial


# -- induced homomorphisms -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class InducedHom:
    hom: BooleanHom
    square_commutes: bool
    state_preserved: bool | None = None


def check_ibsl_hom(dec1: Decomposition, dec2: Decomposition, h: Sequence[int]) -> Violation | None:
    R1, R2 = dec1.raw, dec2.raw
    if len(h) != R1.size or any(not 0 <= v < R2.size for v in h):
        return Violation("Range", {}, "map is not total into the target carrier")
    for a, b in product(range(R1.size), repeat=2):
        if h[R1.join[a][b]] != R2.join[h[a]][h[b]]:
            return Violation("join", {"a": R1.name(a), "b": R1.name(b)})
        if h[R1.meet[a][b]] != R2.meet[h[a]][h[b]]:
            return Violation("meet", {"a": R1.name(a), "b": R1.name(b)})
    for a in range(R1.size):
        if h[R1.neg[a]] != R2.neg[h[a]]:
            return Violation("neg", {"a": R1.name(a)})
    if h[R1.zero] != R2.zero or h[R1.one] != R2.one:
        return Violation("constants")
    return None


def induce_hom(dec1: Decomposition, dec2: Decomposition, h: Sequence[int] | Mapping[int, int],
               states=None) -> InducedHom:
    """The hom ``[a] ↦ [h(a)]`` between Booleanisations.

    ``h`` maps raw ids of ``dec1`` to raw ids of ``dec2``.  With
    ``states = (s1, s2)`` (objects exposing ``value`` on Płonka elements and
    ``top`` measures), preservation by ``h`` is tested and, when it holds,
    preservation of the transported measures by the induced hom too.
    """
    h = [h[a] for a in range(dec1.size)]
    v = check_ibsl_hom(dec1, dec2, h)
    if v is not None:
        raise NotAHomomorphism(v)
    B1, B2 = booleanise(dec1.system), booleanise(dec2.system)
    image: dict[int, int] = {}
    for a in range(dec1.size):
        c = B1.project(dec1.labeling[a])
        img = B2.project(dec2.labeling[h[a]])
        if image.setdefault(c, img) != img:
            raise InternalInconsistency(f"induced map not well defined at class {B1.class_name(c)}")
    try:
        hbar = BooleanHom.from_element_map(B1.quotient, B2.quotient, image)
    except NotAHomomorphism as exc:
        raise InternalInconsistency(f"induced map is not a Boolean hom: {exc}") from None
    square = all(B2.project(dec2.labeling[h[a]]) == hbar.apply(B1.project(dec1.labeling[a]))
                 for a in range(dec1.size))
    if not square:
        raise InternalInconsistency("π₂∘h ≠ h̄∘π₁")
    preserved = None
    if states is not None:
        s1, s2 = states
        preserved = all(s2.value(dec2.labeling[h[a]]) == s1.value(dec1.labeling[a])
                        for a in range(dec1.size))
        if preserved:
            m1, m2 = s1.top, s2.top
            if any(m2.value(hbar.apply(c)) != m1.value(c) for c in B1.quotient.elements()):
                raise InternalInconsistency("h preserves the states but h̄ does not preserve the measures")
    return InducedHom(hbar, square, preserved)


def projection_hom(dec: Decomposition) -> tuple[Decomposition, list[int]]:
    """π as an IBSL hom from ``dec`` onto the sum of the one-component system ``A_⊤``."""
    S = dec.system
    target = plonka_sum(single_top(S))
    pi = [target.id_of(PlonkaElement(0, S.to_top(x))) for x in dec.labeling]
    return target, pi


def single_top(S: DirectSystem) -> DirectSystem:
    top = S.top_algebra
    return validate_system(chain(1, [S.index.name(S.top)]), [top], {})


def restrict_up(S: DirectSystem, j0: int) -> DirectSystem:
    """The subsystem over the principal up-set of ``j0``."""
    L = S.index
    up = L.up_set(j0)
    pos = {i: n for n, i in enumerate(up)}
    table = [[pos[L.join(i, j)] for j in up] for i in up]
    index = JoinSemilattice(tuple(tuple(r) for r in table), pos[j0],
                            tuple(L.name(i) for i in up))
    homs = {(pos[i], pos[j]): S.hom(i, j) for i in up for j in up if L.leq(i, j)}
    return validate_system(index, [S.components[i] for i in up], homs)


def push_hom(dec: Decomposition, j0: int) -> tuple[Decomposition, list[int]]:
    """``x ↦ p_{i, i∨j0}(x)``, an IBSL hom onto the sum over the up-set of ``j0``."""
    S = dec.system
    L = S.index
    sub = restrict_up(S, j0)
    target = plonka_sum(sub)
    up = L.up_set(j0)
    pos = {i: n for n, i in enumerate(up)}
    out = []
    for x in dec.labeling:
        k = L.join(x.index, j0)
        out.append(target.id_of(PlonkaElement(pos[k], S.push(x, k))))
    return target, out


def boolean_hom_as_raw(source: Decomposition, target: Decomposition, g: BooleanHom) -> list[int]:
    """A Boolean hom between one-component sums, as a raw-id map."""
    return [target.id_of(PlonkaElement(0, g.apply(x.inner))) for x in source.labeling]


def compose_raw(g: Sequence[int], h: Sequence[int]) -> list[int]:
    """``g ∘ h`` on raw ids."""
    return [g[v] for v in h]
