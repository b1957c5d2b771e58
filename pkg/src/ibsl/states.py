"""States on involutive bisemilattices.

A state is stored canonically as a measure on the top component; every
other view (component measures, value tables) is derived from it.  The
checkers below do not trust that storage: they validate arbitrary value
tables directly against the additivity condition, or arbitrary component
weights against preservation, so the two routes can be compared.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import NamedTuple, Sequence

from .errors import InternalInconsistency, InvalidState, TrivialComponent, Violation
from .finbool import Measure, measure_check
from .plonka import Decomposition, DirectSystem, PlonkaElement

ALPHA = Fraction(37, 100)


@dataclass(frozen=True, eq=False)
class State:
    system: DirectSystem
    top: Measure

    def value(self, x) -> Fraction:
        return self.top.value(self.system.to_top(PlonkaElement(*x)))

    __call__ = value

    def component_measure(self, i: int) -> Measure:
        return self.top.pullback(self.system.hom(i, self.system.top))

    def component_weights(self) -> list[tuple[Fraction, ...]]:
        return [self.component_measure(i).weights for i in self.system.index.indices]

    def table(self, dec: Decomposition) -> tuple[Fraction, ...]:
        return tuple(self.value(x) for x in dec.labeling)

    def __eq__(self, other):
        if not isinstance(other, State):
            return NotImplemented
        return self.system is other.system and self.top == other.top

    __hash__ = None


@dataclass(frozen=True)
class StateReport:
    valid: bool
    faithful: bool
    violations: tuple[Violation, ...] = ()
    notes: tuple[str, ...] = field(default=(), compare=False)


def _as_table(dec: Decomposition, s) -> tuple[Fraction, ...]:
    if isinstance(s, State):
        return s.table(dec)
    return tuple(Fraction(v) for v in s)


def check_state_direct(dec: Decomposition, table) -> StateReport:
    """Validate a value table against ``s(1) = 1`` and local-zero additivity."""
    R = dec.raw
    s = _as_table(dec, table)
    if len(s) != R.size:
        return StateReport(False, False, (Violation("Length", {}, f"{len(s)} values for {R.size} elements"),))
    out: list[Violation] = []
    for a, v in enumerate(s):
        if not 0 <= v <= 1:
            out.append(Violation("Range", {"a": R.name(a)}, f"s = {v}"))
    if s[R.one] != 1:
        out.append(Violation("Unit", {}, f"s(1) = {s[R.one]}"))
    zeros = dec.local_zeros
    for a, b in product(range(R.size), repeat=2):
        if R.meet[a][b] in zeros and s[R.join[a][b]] != s[a] + s[b]:
            out.append(Violation("Additivity", {"a": R.name(a), "b": R.name(b)},
                                 f"s(a∨b) = {s[R.join[a][b]]}, s(a)+s(b) = {s[a] + s[b]}"))
            break
    valid = not out
    faithful = valid and all(s[a] > 0 for a in range(R.size) if a not in zeros)
    notes = []
    if valid:
        derived = (s[R.zero] == 0 and all(s[z] == 0 for z in zeros)
                   and all(s[o] == 1 for o in dec.local_ones)
                   and all(s[R.neg[a]] == 1 - s[a] for a in range(R.size)))
        if not derived:
            raise InternalInconsistency("valid state violates s(0_i)=0, s(1_i)=1 or s(a')=1-s(a)")
        notes.append("derived laws hold: s(0)=0, s(0_i)=0, s(1_i)=1, s(a')=1-s(a)")
    return StateReport(valid, faithful, tuple(out), tuple(notes))


def check_state_componentwise(S: DirectSystem, weights: Sequence[Sequence]) -> StateReport:
    """Validate one weight vector per component plus preservation along every hom."""
    out: list[Violation] = []
    if len(weights) != S.index.size:
        return StateReport(False, False, (Violation("Length", {}, "one weight vector per component"),))
    ws = [tuple(Fraction(w) for w in row) for row in weights]
    ok = []
    for i, comp in enumerate(S.components):
        r = measure_check(comp, ws[i])
        ok.append(r.valid)
        if not r.valid:
            out.append(Violation("Measure", {"i": S.index.name(i)}, f"{r.reason}: {r.detail}"))
    for (i, j), h in sorted(S.homs.items()):
        if i == j or not (ok[i] and ok[j]):
            continue
        for t in range(S.components[i].atom_count):
            img = h.apply(1 << t)
            mj = sum((ws[j][u] for u in range(S.components[j].atom_count) if img >> u & 1), Fraction(0))
            if mj != ws[i][t]:
                a = S.element_name(PlonkaElement(i, 1 << t))
                out.append(Violation("Preservation", {"i": S.index.name(i), "j": S.index.name(j), "a": a},
                                     f"m_j(p_ij(a)) = {mj}, m_i(a) = {ws[i][t]}"))
                break
    valid = not out
    faithful = valid and all(w > 0 for row in ws for w in row)
    return StateReport(valid, faithful, tuple(out))


def componentwise_table(dec: Decomposition, weights: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """``s(x) = m_i(x)`` for ``x`` in component ``i``; no validity assumed."""
    out = []
    for x in dec.labeling:
        row = weights[x.index]
        out.append(sum((Fraction(row[t]) for t in range(len(row)) if x.inner >> t & 1), Fraction(0)))
    return tuple(out)


def state_from_table(dec: Decomposition, table) -> State:
    report = check_state_direct(dec, table)
    if not report.valid:
        raise InvalidState(report.violations)
    s = _as_table(dec, table)
    S = dec.system
    return State(S, Measure(S.top_algebra, tuple(
        s[dec.id_of(PlonkaElement(S.top, 1 << t))] for t in range(S.top_algebra.atom_count))))


def state_from_components(S: DirectSystem, weights: Sequence[Sequence]) -> State:
    report = check_state_componentwise(S, weights)
    if not report.valid:
        raise InvalidState(report.violations)
    return State(S, Measure(S.top_algebra, weights[S.top]))


def phi(dec: Decomposition, s) -> Measure:
    """The measure ``[b] ↦ s(b)`` on the top component.

    Every element of a class must carry the same value; this is checked
    rather than assumed.
    """
    S = dec.system
    table = _as_table(dec, s)
    seen: dict[int, Fraction] = {}
    for a, x in enumerate(dec.labeling):
        c = S.to_top(x)
        if seen.setdefault(c, table[a]) != table[a]:
            raise InternalInconsistency(f"state not constant on the class of {dec.name(a)}")
    return Measure(S.top_algebra, tuple(seen[1 << t] for t in range(S.top_algebra.atom_count)))


def phi_inverse(S: DirectSystem, m: Measure) -> State:
    """``s_i(a) = m(p_{i⊤}(a))``."""
    if S.has_trivial_component:
        raise TrivialComponent("a system with a trivial component carries no state")
    if m.algebra != S.top_algebra:
        raise ValueError("measure must live on the top component")
    return State(S, m)


def carries_state(S: DirectSystem) -> tuple[bool, State | None]:
    """Existence of a state, with the uniform top measure as witness."""
    if S.has_trivial_component:
        return False, None
    return True, phi_inverse(S, Measure.uniform(S.top_algebra))


def is_faithful(dec: Decomposition, s) -> bool:
    table = _as_table(dec, s)
    return all(table[a] > 0 for a in range(dec.size) if a not in dec.local_zeros)


class FaithfulDiagnosis(NamedTuple):
    faithful: bool
    regular_restrictions: bool
    injective_homs: bool


def faithful_diagnosis(dec: Decomposition, state: State) -> FaithfulDiagnosis:
    """Faithfulness against (regular restrictions and injective homs); both must agree."""
    S = dec.system
    faithful = is_faithful(dec, state)
    regular = all(state.component_measure(i).is_regular for i in S.index.indices)
    injective = S.is_injective
    if faithful != (regular and injective):
        raise InternalInconsistency("faithfulness disagrees with regularity and injectivity")
    return FaithfulDiagnosis(faithful, regular, injective)


def integral_representation_check(dec: Decomposition, s) -> bool:
    """``s(b) = Σ μ(t)`` over the atoms ``t`` of the top component below ``π(b)``."""
    S = dec.system
    table = _as_table(dec, s)
    mu = phi(dec, table)
    top = S.top_algebra
    for a, x in enumerate(dec.labeling):
        total = sum((mu.weights[t] for t in top.atoms_below(S.to_top(x))), Fraction(0))
        if total != table[a]:
            return False
    return True


def state_space_vertices(S: DirectSystem) -> list[State]:
    """The extreme states: Dirac measures on the atoms of the top component."""
    if S.has_trivial_component:
        raise TrivialComponent("no states exist")
    top = S.top_algebra
    return [phi_inverse(S, Measure.dirac(top, t)) for t in range(top.atom_count)]


def convex_combination(S: DirectSystem, coeffs: Sequence[Fraction]) -> State:
    vs = state_space_vertices(S)
    w = [sum((Fraction(c) * v.top.weights[t] for c, v in zip(coeffs, vs)), Fraction(0))
         for t in range(S.top_algebra.atom_count)]
    return State(S, Measure(S.top_algebra, w))


# -- the alternative notion (additivity only when a ∧ b = 0) -------------------

def check_alt_state(dec: Decomposition, t) -> Violation | None:
    R = dec.raw
    table = _as_table(dec, t)
    if table[R.one] != 1:
        return Violation("Unit", {}, f"t(1) = {table[R.one]}")
    for a, b in product(range(R.size), repeat=2):
        if R.meet[a][b] == R.zero and table[R.join[a][b]] != table[a] + table[b]:
            return Violation("Additivity", {"a": R.name(a), "b": R.name(b)},
                             f"t(a∨b) = {table[R.join[a][b]]}, t(a)+t(b) = {table[a] + table[b]}")
    return None


def alt_extension(dec: Decomposition, m0: Measure, alpha: Fraction = ALPHA) -> tuple[Fraction, ...]:
    """``m0`` on the least component, the constant ``alpha`` everywhere else."""
    bottom = dec.system.bottom
    return tuple(m0.value(x.inner) if x.index == bottom else Fraction(alpha) for x in dec.labeling)


def restricts_to_measure(dec: Decomposition, t) -> bool:
    S = dec.system
    A0 = S.components[S.bottom]
    table = _as_table(dec, t)
    w = [table[dec.id_of(PlonkaElement(S.bottom, 1 << k))] for k in range(A0.atom_count)]
    if not measure_check(A0, w).valid:
        return False
    m = Measure(A0, w)
    return all(table[dec.id_of(PlonkaElement(S.bottom, a))] == m.value(a) for a in A0.elements())


@dataclass(frozen=True)
class AltCertificate:
    forward_checked: int
    forward_holds: bool
    backward_checked: int
    backward_holds: bool
    family: str


def _measures_on(rng: random.Random, algebra, extra: int) -> list[Measure]:
    out = [Measure.dirac(algebra, t) for t in range(algebra.atom_count)]
    out.append(Measure.uniform(algebra))
    for _ in range(extra):
        raw = [rng.randint(0, 9) for _ in range(algebra.atom_count)]
        if sum(raw):
            out.append(Measure(algebra, [Fraction(r, sum(raw)) for r in raw]))
    return out


def alt_state_equivalence(dec: Decomposition, seed: int = 0, samples: int = 6) -> AltCertificate:
    """Check both directions of the alternative-state characterisation.

    Forward: every candidate table satisfying the alternative condition
    restricts to a measure on the least component.  Candidates are the
    states (vertices, uniform, random mixtures), alpha-extensions of random
    measures, and random perturbations of those; a universally quantified
    claim over all real maps is out of reach.  Backward: every alpha
    extension satisfies the alternative condition.
    """
    rng = random.Random(seed)
    S = dec.system
    A0 = S.components[S.bottom]
    if A0.is_trivial:
        return AltCertificate(0, True, 0, True, "least component trivial: both sides empty")
    alphas = [ALPHA, Fraction(1, 2)] + [Fraction(rng.randint(1, 98), 99) for _ in range(2)]
    m0s = _measures_on(rng, A0, samples)
    backward = [alt_extension(dec, m, a) for m in m0s for a in alphas]
    backward_holds = all(check_alt_state(dec, t) is None for t in backward)

    candidates = list(backward)
    if not S.has_trivial_component:
        tops = _measures_on(rng, S.top_algebra, samples)
        candidates += [State(S, m).table(dec) for m in tops]
    for t in list(candidates):
        for _ in range(2):
            u = list(t)
            a = rng.randrange(dec.size)
            u[a] = Fraction(rng.randint(0, 10), 10)
            candidates.append(tuple(u))
    satisfied = [t for t in candidates if check_alt_state(dec, t) is None]
    forward_holds = all(restricts_to_measure(dec, t) for t in satisfied)
    return AltCertificate(len(satisfied), forward_holds, len(backward), backward_holds,
                          "states, alpha-extensions and single-cell perturbations")
