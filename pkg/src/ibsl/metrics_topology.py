"""The state pseudometric ``d(a, b) = s(a △ b)`` and its finite topology.

On a finite carrier the pseudometric topology is the partition topology of
the zero-distance classes: a set is open iff it is a union of classes, and
open and closed sets coincide.  Subsets are handled as int bitmasks over
raw element ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from typing import Callable, Sequence

from . import config
from .booleanisation import Booleanisation, booleanise
from .errors import BadChooser, HypothesesUnmet, InternalInconsistency, InvalidState
from .plonka import Decomposition
from .states import _as_table, check_state_direct, is_faithful, phi


@dataclass(frozen=True, eq=False)
class PseudometricSpace:
    dec: Decomposition
    values: tuple[Fraction, ...]
    d: tuple[tuple[Fraction, ...], ...]
    zero_classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.d)

    def class_mask(self, c: int) -> int:
        return sum(1 << a for a in self.zero_classes[c])


def symdiff_raw(dec: Decomposition, a: int, b: int) -> int:
    """``(a ∧ b') ∨ (a' ∧ b)`` evaluated with the raw tables."""
    R = dec.raw
    return R.join[R.meet[a][R.neg[b]]][R.meet[R.neg[a]][b]]


def pseudometric(dec: Decomposition, s) -> PseudometricSpace:
    """Build ``d_s`` and verify the pseudometric axioms on all pairs and triples."""
    report = check_state_direct(dec, s)
    if not report.valid:
        raise InvalidState(report.violations)
    table = _as_table(dec, s)
    N = range(dec.size)
    d = tuple(tuple(table[symdiff_raw(dec, a, b)] for b in N) for a in N)
    for a in N:
        if d[a][a] != 0:
            raise InternalInconsistency(f"d(x, x) ≠ 0 at {dec.name(a)}")
        for b in N:
            if d[a][b] < 0 or d[a][b] != d[b][a]:
                raise InternalInconsistency("d is negative or asymmetric")
    for a, b, c in product(N, repeat=3):
        if d[a][c] > d[a][b] + d[b][c]:
            raise InternalInconsistency("triangle inequality fails")
    classes, owner = [], [-1] * dec.size
    for a in N:
        if owner[a] < 0:
            cls = tuple(b for b in N if d[a][b] == 0)
            for b in cls:
                owner[b] = len(classes)
            classes.append(cls)
    return PseudometricSpace(dec, table, d, tuple(classes), tuple(owner))


def is_metric(space: PseudometricSpace) -> bool:
    """All zero-classes singletons; when the state is faithful this must match ``B ≅ A_∞``."""
    metric = all(len(c) == 1 for c in space.zero_classes)
    if is_faithful(space.dec, space.values):
        iso = booleanise(space.dec.system).fibers_singleton
        if metric != iso:
            raise InternalInconsistency("metric criterion disagrees with the Booleanisation size")
    return metric


def is_continuous(space: PseudometricSpace, t: Sequence) -> bool:
    """A real-valued table is continuous iff it is constant on every zero-class."""
    return all(len({Fraction(t[a]) for a in cls}) == 1 for cls in space.zero_classes)


# -- Kolmogorov quotient -------------------------------------------------------

def indistinguishability_classes(space: PseudometricSpace) -> list[frozenset[int]]:
    """Points lying in exactly the same open balls."""
    N = range(space.size)
    positive = sorted({v for row in space.d for v in row if v > 0})
    radii = positive + [positive[-1] + 1] if positive else [Fraction(1)]
    signature = []
    for x in N:
        signature.append(tuple(space.d[z][x] < r for z in N for r in radii))
    groups: dict[tuple, set[int]] = {}
    for x in N:
        groups.setdefault(signature[x], set()).add(x)
    return [frozenset(g) for g in groups.values()]


def sim_classes(dec: Decomposition, B: Booleanisation | None = None) -> list[frozenset[int]]:
    B = B or booleanise(dec.system)
    return [frozenset(dec.id_of(x) for x in cls) for cls in B.classes]


@dataclass(frozen=True)
class KolmogorovCertificate:
    classes: tuple[tuple[int, ...], ...]
    hypotheses_met: bool
    equals_booleanisation: bool


def kolmogorov_quotient(space: PseudometricSpace) -> KolmogorovCertificate:
    dec = space.dec
    kq = set(indistinguishability_classes(space))
    if kq != {frozenset(c) for c in space.zero_classes}:
        raise InternalInconsistency("indistinguishability differs from the zero-distance relation")
    hyp = dec.system.is_injective and is_faithful(dec, space.values)
    equal = kq == set(sim_classes(dec))
    if hyp and not equal:
        raise InternalInconsistency("Kolmogorov classes differ from the Booleanisation classes")
    return KolmogorovCertificate(space.zero_classes, hyp, equal)


# -- sections ------------------------------------------------------------------

def default_chooser(dec: Decomposition, cls: Sequence[int]) -> int:
    return min(cls)


def make_section(dec: Decomposition, chooser: Callable | None = None,
                 B: Booleanisation | None = None) -> tuple[int, ...]:
    """``σ[c]`` is the raw id picked from class ``c`` of the Booleanisation."""
    B = B or booleanise(dec.system)
    chooser = chooser or default_chooser
    sigma = []
    for c, cls in enumerate(B.classes):
        ids = sorted(dec.id_of(x) for x in cls)
        pick = chooser(dec, ids)
        if pick is None:
            raise BadChooser(f"class {B.class_name(c)} left uncovered")
        if pick not in ids:
            raise BadChooser(f"chooser picked {dec.name(pick)} outside class {B.class_name(c)}")
        sigma.append(pick)
    return tuple(sigma)


def section_count(dec: Decomposition) -> int:
    return prod(len(c) for c in booleanise(dec.system).classes)


@dataclass(frozen=True)
class SectionCertificate:
    pi_sigma_identity: bool
    continuous: bool
    dense: bool
    state_preserved: bool

    @property
    def ok(self) -> bool:
        return self.pi_sigma_identity and self.continuous and self.dense and self.state_preserved


def _partition_continuous(f: Sequence[int], dom_owner: Sequence[int], cod_owner: Sequence[int]) -> bool:
    """Preimages of unions of codomain classes are unions of domain classes."""
    image: dict[int, int] = {}
    for x, y in enumerate(f):
        if image.setdefault(dom_owner[x], cod_owner[y]) != cod_owner[y]:
            return False
    return True


def quotient_classes(space: PseudometricSpace) -> list[int]:
    """Zero-classes of ``d_∞`` on the top component, as an owner list."""
    dec = space.dec
    m = phi(dec, space.values)
    A = dec.system.top_algebra
    owner = [-1] * A.size
    k = 0
    for c in A.elements():
        if owner[c] < 0:
            for e in A.elements():
                if m.distance(c, e) == 0:
                    owner[e] = k
            k += 1
    return owner


def verify_section(space: PseudometricSpace, sigma: Sequence[int]) -> SectionCertificate:
    dec = space.dec
    S = dec.system
    m = phi(dec, space.values)
    pi_sigma = all(S.to_top(dec.labeling[sigma[c]]) == c for c in range(len(sigma)))
    continuous = _partition_continuous(sigma, quotient_classes(space), space.class_of)
    hit = {space.class_of[a] for a in sigma}
    dense = len(hit) == len(space.zero_classes)
    preserved = all(space.values[sigma[c]] == m.value(c) for c in range(len(sigma)))
    return SectionCertificate(pi_sigma, continuous, dense, preserved)


# -- topology report -----------------------------------------------------------

@dataclass(frozen=True)
class TopologyReport:
    hypotheses_met: bool
    open_count: int | None
    saturated: bool | None
    pi_open: bool | None
    pi_closed: bool | None
    interior_preserving: bool | None
    interior_witness: int | None
    interior_method: str
    singleton_witness: int | None
    fibers_singleton: bool
    reg_size: int | None
    reg_isomorphic: bool | None
    skipped: tuple[str, ...] = ()

    def witness_ids(self, mask: int | None) -> list[int]:
        return [] if mask is None else [a for a in range(mask.bit_length()) if mask >> a & 1]


def _opens(class_masks: Sequence[int]):
    for pick in range(1 << len(class_masks)):
        u = 0
        for c, m in enumerate(class_masks):
            if pick >> c & 1:
                u |= m
        yield u


def _image(mask: int, pi: Sequence[int]) -> int:
    out = 0
    while mask:
        low = mask & -mask
        out |= 1 << pi[low.bit_length() - 1]
        mask ^= low
    return out


def _interior(mask: int, class_masks: Sequence[int]) -> int:
    return sum(m for m in class_masks if mask & m == m)


def _closure(mask: int, class_masks: Sequence[int]) -> int:
    return sum(m for m in class_masks if mask & m)


def topology_report(space: PseudometricSpace) -> TopologyReport:
    caps = config.get_caps()
    dec = space.dec
    S = dec.system
    B = booleanise(S)
    hyp = S.is_injective and is_faithful(dec, space.values)
    pi = [S.to_top(x) for x in dec.labeling]
    cm = [space.class_mask(c) for c in range(len(space.zero_classes))]
    qown = quotient_classes(space)
    qcm = [sum(1 << e for e in range(len(qown)) if qown[e] == k) for k in range(max(qown) + 1)]
    full = (1 << dec.size) - 1
    qfull = (1 << len(qown)) - 1
    skipped = []

    saturated = pi_open = pi_closed = None
    open_count = None
    if len(cm) <= caps.classes:
        open_count = 1 << len(cm)
        preimage = lambda q: sum(1 << a for a in range(dec.size) if q >> pi[a] & 1)  # noqa: E731
        saturated = pi_open = pi_closed = True
        for u in _opens(cm):
            img = _image(u, pi)
            if preimage(img) != u:
                saturated = False
            if _interior(img, qcm) != img:
                pi_open = False
            closed = full & ~u
            cimg = _image(closed, pi)
            if _closure(cimg, qcm) != cimg:
                pi_closed = False
    else:
        skipped.append(f"saturation: {len(cm)} classes exceed cap {caps.classes}")

    def preserves(x: int) -> bool:
        return _image(_interior(x, cm), pi) == _interior(_image(x, pi), qcm)

    witness = None
    if dec.size <= caps.subsets:
        method = "all subsets"
        for x in range(full + 1):
            if not preserves(x):
                witness = x
                break
    else:
        method = "unions of classes and single-point deletions"
        family = list(_opens(cm)) if len(cm) <= caps.classes else []
        family += [full & ~(1 << b) for b in range(dec.size)]
        for x in family:
            if not preserves(x):
                witness = x
                break
    singleton_witness = next((full & ~(1 << b) for b in range(dec.size)
                              if not preserves(full & ~(1 << b))), None)
    preserving = witness is None
    fibers = B.fibers_singleton
    if hyp and preserving != fibers:
        raise InternalInconsistency("interior preservation disagrees with singleton fibers")

    reg_size = reg_iso = None
    if len(cm) <= caps.classes and len(qcm) <= caps.classes:
        reg_b = [u for u in _opens(cm) if _interior(_closure(u, cm), cm) == u]
        reg_q = [u for u in _opens(qcm) if _interior(_closure(u, qcm), qcm) == u]
        reg_size = len(reg_b)
        if reg_size <= caps.reg_table:
            f = {u: _image(u, pi) for u in reg_b}
            reg_iso = sorted(f.values()) == sorted(reg_q) and len(set(f.values())) == len(reg_b)
            if reg_iso:
                for u, v in product(reg_b, repeat=2):
                    meet_b = u & v
                    join_b = _interior(_closure(u | v, cm), cm)
                    if f[meet_b] != f[u] & f[v] or \
                            f[join_b] != _interior(_closure(f[u] | f[v], qcm), qcm):
                        reg_iso = False
                        break
                for u in reg_b:
                    if f[_interior(full & ~u, cm)] != _interior(qfull & ~f[u], qcm):
                        reg_iso = False
            if hyp and not reg_iso:
                raise InternalInconsistency("π does not induce an isomorphism of regular opens")
        else:
            skipped.append(f"regular-open tables: {reg_size} exceed cap {caps.reg_table}")
    else:
        skipped.append("regular opens: class count exceeds cap")
    return TopologyReport(hyp, open_count, saturated, pi_open, pi_closed, preserving, witness,
                          method, singleton_witness, fibers, reg_size, reg_iso, tuple(skipped))


# -- uniqueness of the continuous extension ------------------------------------

@dataclass(frozen=True)
class UniquenessCertificate:
    extensions: int | float
    equals_state: bool
    extension: tuple[Fraction, ...] | None


def state_uniqueness_check(space: PseudometricSpace, sigma: Sequence[int] | None = None
                           ) -> UniquenessCertificate:
    """Count continuous tables ``t`` with ``t∘σ = Φ(s)``.

    Continuity forces ``t`` to be constant on zero-classes, so a class hit by
    ``σ`` has its value fixed; any class missed by ``σ`` would leave a free
    parameter and infinitely many extensions.
    """
    dec = space.dec
    if not (dec.system.is_injective and is_faithful(dec, space.values)):
        raise HypothesesUnmet("needs a faithful state on an injective algebra")
    sigma = sigma if sigma is not None else make_section(dec)
    m = phi(dec, space.values)
    fixed: dict[int, Fraction] = {}
    for c, a in enumerate(sigma):
        k = space.class_of[a]
        if fixed.setdefault(k, m.value(c)) != m.value(c):
            return UniquenessCertificate(0, False, None)
    if len(fixed) < len(space.zero_classes):
        return UniquenessCertificate(float("inf"), False, None)
    t = tuple(fixed[space.class_of[a]] for a in range(dec.size))
    if not is_continuous(space, t):
        raise InternalInconsistency("class-constant extension is not continuous")
    return UniquenessCertificate(1, t == space.values, t)

