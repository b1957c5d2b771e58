"""Finite Boolean algebras, homomorphisms and finitely additive measures.

Elements of an ``n``-atom algebra are the integers ``0 .. 2**n - 1`` read as
bit sets of atoms.  A homomorphism ``A -> C`` is stored by its dual atom map
``atoms(C) -> atoms(A)``; ``h(a)`` is the set of target atoms whose dual lands
in ``a``.  Every such map is a Boolean homomorphism, and it is injective
exactly when the dual map is onto.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

from . import config
from .errors import (
    CapacityExceeded,
    ElementOutOfRange,
    HomMismatch,
    InvalidMeasure,
    NotAHomomorphism,
    Violation,
)

OPS = ("meet", "join", "complement", "symdiff")


@dataclass(frozen=True)
class BooleanAlgebra:
    atom_count: int
    atom_names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.atom_count < 0:
            raise ValueError("atom_count must be nonnegative")
        if self.atom_count > config.get_caps().atoms:
            raise CapacityExceeded(
                f"{self.atom_count} atoms exceeds cap {config.get_caps().atoms}")
        if self.atom_names is not None and len(self.atom_names) != self.atom_count:
            raise ValueError("atom_names must name every atom")

    @property
    def size(self) -> int:
        return 1 << self.atom_count

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return (1 << self.atom_count) - 1

    @property
    def is_trivial(self) -> bool:
        return self.atom_count == 0

    def elements(self) -> range:
        return range(self.size)

    def atoms(self) -> list[int]:
        """Atoms as elements (singleton bit sets)."""
        return [1 << t for t in range(self.atom_count)]

    def atoms_below(self, a: int) -> list[int]:
        """Atom indices contained in ``a``."""
        return [t for t in range(self.atom_count) if a >> t & 1]

    def check(self, a: int) -> int:
        if not 0 <= a < self.size:
            raise ElementOutOfRange(f"{a} is not an element of a {self.atom_count}-atom algebra")
        return a

    def meet(self, a: int, b: int) -> int:
        return self.check(a) & self.check(b)

    def join(self, a: int, b: int) -> int:
        return self.check(a) | self.check(b)

    def complement(self, a: int) -> int:
        return self.one & ~self.check(a)

    def symdiff(self, a: int, b: int) -> int:
        # (a ∧ b') ∨ (a' ∧ b), spelled out rather than as xor
        return self.join(self.meet(a, self.complement(b)), self.meet(self.complement(a), b))

    def leq(self, a: int, b: int) -> bool:
        return self.meet(a, b) == a

    def atom_name(self, t: int) -> str:
        if self.atom_names is not None:
            return self.atom_names[t]
        return f"#{t}"


def bool_eval(algebra: BooleanAlgebra, op: str, *args: int) -> int:
    """Evaluate ``op`` (one of ``meet``, ``join``, ``complement``, ``symdiff``)."""
    if op not in OPS:
        raise ValueError(f"unknown operation {op!r}")
    return getattr(algebra, op)(*args)


@dataclass(frozen=True)
class BooleanHom:
    source: BooleanAlgebra
    target: BooleanAlgebra
    dual: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "dual", tuple(self.dual))
        if len(self.dual) != self.target.atom_count:
            raise HomMismatch(
                f"dual map has {len(self.dual)} entries for {self.target.atom_count} target atoms")
        for t, s in enumerate(self.dual):
            if not 0 <= s < self.source.atom_count:
                raise HomMismatch(
                    f"target atom {t} is sent to {s}, outside {self.source.atom_count} source atoms")

    @classmethod
    def identity(cls, algebra: BooleanAlgebra) -> BooleanHom:
        return cls(algebra, algebra, tuple(range(algebra.atom_count)))

    @classmethod
    def from_element_map(cls, source: BooleanAlgebra, target: BooleanAlgebra,
                         mapping: Sequence[int] | Mapping[int, int]) -> BooleanHom:
        """Build a hom from its values on every element, validating it.

        The dual atom map is read off the images of the source atoms; the
        resulting hom is then compared with ``mapping`` on every element.
        """
        values = [mapping[a] for a in source.elements()]
        for a, v in enumerate(values):
            if not 0 <= v < target.size:
                raise NotAHomomorphism(Violation("Range", {"a": a}, f"image {v} not in target"))
        dual = []
        for t in range(target.atom_count):
            owners = [s for s in range(source.atom_count) if values[1 << s] >> t & 1]
            if len(owners) != 1:
                raise NotAHomomorphism(Violation(
                    "AtomPartition", {"target_atom": t},
                    f"covered by {len(owners)} source-atom images, expected 1"))
            dual.append(owners[0])
        hom = cls(source, target, tuple(dual))
        for a, v in enumerate(values):
            if hom.apply(a) != v:
                raise NotAHomomorphism(Violation(
                    "Hom", {"a": a}, f"given image {v}, homomorphic extension gives {hom.apply(a)}"))
        return hom

    @cached_property
    def table(self) -> tuple[int, ...]:
        out = []
        for a in self.source.elements():
            out.append(sum(1 << t for t, s in enumerate(self.dual) if a >> s & 1))
        return tuple(out)

    def apply(self, a: int) -> int:
        return self.table[self.source.check(a)]

    __call__ = apply

    def compose(self, inner: BooleanHom) -> BooleanHom:
        """``self ∘ inner``: first ``inner``, then ``self``."""
        return hom_compose(self, inner)

    @property
    def is_injective(self) -> bool:
        return set(self.dual) == set(range(self.source.atom_count))

    @property
    def is_identity(self) -> bool:
        return (self.source.atom_count == self.target.atom_count
                and self.dual == tuple(range(self.source.atom_count)))


def hom_apply(h: BooleanHom, a: int) -> int:
    return h.apply(a)


def hom_compose(g: BooleanHom, h: BooleanHom) -> BooleanHom:
    """Return ``g ∘ h``; duals compose the other way round."""
    if h.target != g.source:
        raise HomMismatch(
            f"cannot compose: inner target has {h.target.atom_count} atoms, "
            f"outer source has {g.source.atom_count}")
    return BooleanHom(h.source, g.target, tuple(h.dual[s] for s in g.dual))


def hom_is_injective(h: BooleanHom) -> bool:
    return h.is_injective


class MeasureCheck(NamedTuple):
    valid: bool
    reason: str | None = None
    detail: str = ""


def measure_check(algebra: BooleanAlgebra, weights: Sequence) -> MeasureCheck:
    """Exact validation of atom weights; no tolerance anywhere."""
    if algebra.is_trivial:
        return MeasureCheck(False, "NoMeasureOnTrivial", "the one-element algebra carries no measure")
    if len(weights) != algebra.atom_count:
        return MeasureCheck(False, "WrongLength",
                            f"{len(weights)} weights for {algebra.atom_count} atoms")
    ws = [Fraction(w) for w in weights]
    for t, w in enumerate(ws):
        if w < 0:
            return MeasureCheck(False, "NegativeWeight", f"atom {algebra.atom_name(t)} has weight {w}")
    total = sum(ws, Fraction(0))
    if total != 1:
        return MeasureCheck(False, "BadTotal", f"weights sum to {total}")
    return MeasureCheck(True)


@dataclass(frozen=True)
class Measure:
    algebra: BooleanAlgebra
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))
        result = measure_check(self.algebra, self.weights)
        if not result.valid:
            raise InvalidMeasure(result.reason, result.detail)

    @classmethod
    def uniform(cls, algebra: BooleanAlgebra) -> Measure:
        n = algebra.atom_count
        return cls(algebra, tuple(Fraction(1, n) for _ in range(n)))

    @classmethod
    def dirac(cls, algebra: BooleanAlgebra, atom: int) -> Measure:
        return cls(algebra, tuple(Fraction(int(t == atom)) for t in range(algebra.atom_count)))

    def value(self, a: int) -> Fraction:
        self.algebra.check(a)
        return sum((w for t, w in enumerate(self.weights) if a >> t & 1), Fraction(0))

    __call__ = value

    def distance(self, a: int, b: int) -> Fraction:
        return self.value(self.algebra.symdiff(a, b))

    @property
    def is_regular(self) -> bool:
        return all(w > 0 for w in self.weights)

    def pullback(self, h: BooleanHom) -> Measure:
        """The measure ``self ∘ h`` on the source of ``h``."""
        if h.target != self.algebra:
            raise HomMismatch("measure lives on a different algebra than the hom target")
        return Measure(h.source, tuple(self.value(h.apply(1 << s))
                                       for s in range(h.source.atom_count)))


def measure_value(m: Measure, a: int) -> Fraction:
    return m.value(a)


def measure_is_regular(m: Measure) -> bool:
    return m.is_regular


def all_homs(source: BooleanAlgebra, target: BooleanAlgebra) -> Iterable[BooleanHom]:
    """Every homomorphism ``source -> target`` (one per dual map)."""
    from itertools import product
    for dual in product(range(source.atom_count), repeat=target.atom_count):
        yield BooleanHom(source, target, dual)
