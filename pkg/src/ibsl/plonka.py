"""Semilattice direct systems of Boolean algebras and their Płonka sums.

The forward direction builds the sum of a :class:`DirectSystem` as explicit
operation tables.  The backward direction, :func:`decompose`, recovers the
system from bare tables through the partition function
``x·y = x ∧ (x ∨ y)``.  Both directions are cross-checked: a decomposition
is only returned after its own sum has been compared with the input table
by table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations, product
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from . import config
from .errors import (
    CapacityExceeded,
    InternalInconsistency,
    InvalidSemilattice,
    InvalidSystem,
    MalformedElement,
    NotAHomomorphism,
    NotIBSL,
    Violation,
)
from .finbool import BooleanAlgebra, BooleanHom, hom_compose
from .semilattice import JoinSemilattice, chain, from_order


class PlonkaElement(NamedTuple):
    index: int
    inner: int


@dataclass(frozen=True, eq=False)
class DirectSystem:
    index: JoinSemilattice
    components: tuple[BooleanAlgebra, ...]
    homs: Mapping[tuple[int, int], BooleanHom]

    def hom(self, i: int, j: int) -> BooleanHom:
        return self.homs[i, j]

    @property
    def bottom(self) -> int:
        return self.index.bottom

    @property
    def top(self) -> int:
        return self.index.top

    @property
    def top_algebra(self) -> BooleanAlgebra:
        return self.components[self.top]

    def push(self, x: PlonkaElement, j: int) -> int:
        """``p_{i j}(x)`` for ``x`` in component ``i <= j``."""
        return self.homs[x.index, j].apply(x.inner)

    def to_top(self, x: PlonkaElement) -> int:
        return self.push(x, self.top)

    @cached_property
    def elements(self) -> tuple[PlonkaElement, ...]:
        return tuple(PlonkaElement(i, a) for i, comp in enumerate(self.components)
                     for a in comp.elements())

    @property
    def size(self) -> int:
        return sum(c.size for c in self.components)

    def check_element(self, x) -> PlonkaElement:
        try:
            i, a = x
        except (TypeError, ValueError):
            raise MalformedElement(f"{x!r} is not an (index, inner) pair") from None
        if not 0 <= i < self.index.size or not 0 <= a < self.components[i].size:
            raise MalformedElement(f"{x!r} is not an element of the system")
        return PlonkaElement(i, a)

    def local_zero(self, i: int) -> PlonkaElement:
        return PlonkaElement(i, 0)

    def local_one(self, i: int) -> PlonkaElement:
        return PlonkaElement(i, self.components[i].one)

    @property
    def is_injective(self) -> bool:
        return all(h.is_injective for h in self.homs.values())

    @property
    def has_trivial_component(self) -> bool:
        return any(c.is_trivial for c in self.components)

    def element_name(self, x: PlonkaElement) -> str:
        return self._names[x]

    @cached_property
    def _names(self) -> dict[PlonkaElement, str]:
        names = {x: _raw_element_name(self, x) for x in self.elements}
        seen: dict[str, int] = {}
        for v in names.values():
            seen[v] = seen.get(v, 0) + 1
        return {x: (v if seen[v] == 1 else f"{v}@{self.index.name(x.index)}")
                for x, v in names.items()}

    def element_by_name(self, name: str) -> PlonkaElement:
        for x, v in self._names.items():
            if v == name:
                return x
        raise MalformedElement(f"no element named {name!r}")


def _raw_element_name(S: DirectSystem, x: PlonkaElement) -> str:
    comp = S.components[x.index]
    bottom = x.index == S.bottom
    sub = "" if bottom else f"_{S.index.name(x.index)}"
    if comp.atom_names is not None:
        for t in range(comp.atom_count):
            if x.inner == 1 << t:
                return comp.atom_names[t]
        for t in range(comp.atom_count):
            if x.inner == comp.one & ~(1 << t):
                return comp.atom_names[t] + "'"
    if x.inner == 0:
        return "0" + sub
    if x.inner == comp.one:
        return "1" + sub
    parts = [comp.atom_name(t) for t in comp.atoms_below(x.inner)]
    return "{" + ",".join(parts) + "}" + sub


def validate_system(index: JoinSemilattice, components: Sequence[BooleanAlgebra],
                    homs: Mapping[tuple[int, int], BooleanHom]) -> DirectSystem:
    """Check a candidate direct system; diagonal homs default to identities."""
    components = tuple(components)
    if len(components) != index.size:
        raise InvalidSystem(Violation(
            "ComponentCount", {}, f"{len(components)} components for {index.size} indices"))
    full: dict[tuple[int, int], BooleanHom] = {}
    for (i, j), h in homs.items():
        if not (0 <= i < index.size and 0 <= j < index.size):
            raise InvalidSystem(Violation("UnknownIndex", {"i": i, "j": j}))
        if not index.leq(i, j):
            raise InvalidSystem(Violation(
                "UnexpectedHom", {"i": i, "j": j}, "indices are not comparable"))
        if h.source != components[i] or h.target != components[j]:
            raise InvalidSystem(Violation(
                "HomMismatch", {"i": i, "j": j}, "hom source/target differ from the components"))
        if i == j and not h.is_identity:
            raise InvalidSystem(Violation(
                "NotIdentityOnDiagonal", {"i": i}, f"dual map {h.dual}"))
        full[i, j] = h
    for i, j in index.comparable_pairs():
        if (i, j) not in full:
            if i != j:
                raise InvalidSystem(Violation("MissingHom", {"i": i, "j": j}))
            full[i, i] = BooleanHom.identity(components[i])
    for i, j, k in product(index.indices, repeat=3):
        if index.leq(i, j) and index.leq(j, k):
            direct = full[i, k]
            composed = hom_compose(full[j, k], full[i, j])
            if direct.dual != composed.dual:
                t = next(t for t in range(len(direct.dual)) if direct.dual[t] != composed.dual[t])
                raise InvalidSystem(Violation(
                    "BrokenCoherence", {"i": i, "j": j, "k": k, "atom": t},
                    f"p_ik sends target atom {t} to {direct.dual[t]}, p_jk∘p_ij to {composed.dual[t]}"))
    return DirectSystem(index, components, full)


def single_component(algebra: BooleanAlgebra, name: str = "i0") -> DirectSystem:
    return validate_system(chain(1, [name]), [algebra], {})


def plonka_eval(S: DirectSystem, op: str, *args) -> PlonkaElement:
    """Evaluate a basic operation in the Płonka sum over ``S``.

    Arguments are pushed to the component at the join of their indices and
    the operation is computed there; the constants ``zero``/``one`` live in
    the component of the least index.
    """
    if op == "zero":
        return PlonkaElement(S.bottom, 0)
    if op == "one":
        return PlonkaElement(S.bottom, S.components[S.bottom].one)
    xs = [S.check_element(x) for x in args]
    arity = {"join": 2, "meet": 2, "symdiff": 2, "complement": 1}.get(op)
    if arity is None:
        raise ValueError(f"unknown operation {op!r}")
    if len(xs) != arity:
        raise MalformedElement(f"{op} takes {arity} arguments, got {len(xs)}")
    j = S.index.join_all(x.index for x in xs)
    alg = S.components[j]
    pushed = [S.push(x, j) for x in xs]
    return PlonkaElement(j, getattr(alg, op)(*pushed))


@dataclass(frozen=True, eq=False)
class RawAlgebra:
    """An algebra of type (2, 2, 1, 0, 0) given by explicit tables."""

    join: tuple[tuple[int, ...], ...]
    meet: tuple[tuple[int, ...], ...]
    neg: tuple[int, ...]
    zero: int
    one: int
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        n = len(self.neg)
        object.__setattr__(self, "join", tuple(tuple(r) for r in self.join))
        object.__setattr__(self, "meet", tuple(tuple(r) for r in self.meet))
        object.__setattr__(self, "neg", tuple(self.neg))
        if n == 0:
            raise MalformedElement("empty carrier")
        for tname in ("join", "meet"):
            t = getattr(self, tname)
            if len(t) != n or any(len(r) != n for r in t):
                raise MalformedElement(f"{tname} table is not {n}x{n}")
            if any(not 0 <= v < n for r in t for v in r):
                raise MalformedElement(f"{tname} table has entries outside the carrier")
        if any(not 0 <= v < n for v in self.neg):
            raise MalformedElement("neg table has entries outside the carrier")
        if not (0 <= self.zero < n and 0 <= self.one < n):
            raise MalformedElement("constants outside the carrier")
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
            if len(self.names) != n:
                raise MalformedElement("one name per element required")

    @property
    def size(self) -> int:
        return len(self.neg)

    def name(self, a: int) -> str:
        return self.names[a] if self.names is not None else str(a)

    def __eq__(self, other):
        if not isinstance(other, RawAlgebra):
            return NotImplemented
        return (self.join, self.meet, self.neg, self.zero, self.one) == \
            (other.join, other.meet, other.neg, other.zero, other.one)

    __hash__ = None

    @cached_property
    def dot(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.meet[a][self.join[a][b]] for b in range(self.size))
                     for a in range(self.size))


@dataclass(frozen=True, eq=False)
class Decomposition:
    """A raw algebra together with a Płonka-sum representation of it.

    ``labeling[a]`` is the element of ``system`` that raw element ``a``
    stands for; ``back`` is the inverse map.
    """

    system: DirectSystem
    raw: RawAlgebra
    labeling: tuple[PlonkaElement, ...]
    back: Mapping[PlonkaElement, int] = field(repr=False)

    @property
    def size(self) -> int:
        return self.raw.size

    def name(self, a: int) -> str:
        return self.raw.name(a)

    def id_of(self, x: PlonkaElement) -> int:
        return self.back[tuple(x)]

    def index_of(self, a: int) -> int:
        return self.labeling[a].index

    @cached_property
    def local_zeros(self) -> frozenset[int]:
        return frozenset(self.back[PlonkaElement(i, 0)] for i in self.system.index.indices)

    @cached_property
    def local_ones(self) -> frozenset[int]:
        S = self.system
        return frozenset(self.back[PlonkaElement(i, c.one)] for i, c in enumerate(S.components))

    def component_ids(self, i: int) -> list[int]:
        return [self.back[PlonkaElement(i, a)] for a in self.system.components[i].elements()]


def plonka_sum(S: DirectSystem) -> Decomposition:
    """Materialise the Płonka sum of ``S`` as tables over the disjoint union."""
    cap = config.get_caps().carrier
    if S.size > cap:
        raise CapacityExceeded(f"Płonka sum has {S.size} elements, cap is {cap}")
    elems = S.elements
    back = {x: n for n, x in enumerate(elems)}
    join = [[back[plonka_eval(S, "join", x, y)] for y in elems] for x in elems]
    meet = [[back[plonka_eval(S, "meet", x, y)] for y in elems] for x in elems]
    neg = [back[plonka_eval(S, "complement", x)] for x in elems]
    raw = RawAlgebra(join, meet, neg, back[plonka_eval(S, "zero")], back[plonka_eval(S, "one")],
                     tuple(S.element_name(x) for x in elems))
    return Decomposition(S, raw, elems, back)


# -- identities over raw tables ------------------------------------------------

Term = Callable[..., int]
VARS = "xyzw"


def check_identity(R: RawAlgebra, lhs: Term, rhs: Term, arity: int, law: str) -> Violation | None:
    """Evaluate ``lhs ≈ rhs`` on every tuple; return the least failing binding."""
    for args in product(range(R.size), repeat=arity):
        left, right = lhs(R, *args), rhs(R, *args)
        if left != right:
            return Violation(law, {VARS[n]: R.name(a) for n, a in enumerate(args)},
                             f"lhs = {R.name(left)}, rhs = {R.name(right)}")
    return None


IBSL_AXIOMS: list[tuple[str, Term, Term, int]] = [
    ("I1", lambda R, x: R.join[x][x], lambda R, x: x, 1),
    ("I2", lambda R, x, y: R.join[x][y], lambda R, x, y: R.join[y][x], 2),
    ("I3", lambda R, x, y, z: R.join[x][R.join[y][z]], lambda R, x, y, z: R.join[R.join[x][y]][z], 3),
    ("I4", lambda R, x: R.neg[R.neg[x]], lambda R, x: x, 1),
    ("I5", lambda R, x, y: R.meet[x][y], lambda R, x, y: R.neg[R.join[R.neg[x]][R.neg[y]]], 2),
    ("I6", lambda R, x, y: R.meet[x][R.join[R.neg[x]][y]], lambda R, x, y: R.meet[x][y], 2),
    ("I7", lambda R, x: R.join[R.zero][x], lambda R, x: x, 1),
    ("I8", lambda R: R.one, lambda R: R.neg[R.zero], 0),
]


def _check_cap(R: RawAlgebra) -> None:
    cap = config.get_caps().carrier
    if R.size > cap:
        raise CapacityExceeded(f"carrier has {R.size} elements, cap is {cap}")


def check_ibsl(R: RawAlgebra) -> Violation | None:
    """Check axioms I1–I8 exhaustively; ``None`` means every axiom holds."""
    _check_cap(R)
    for law, lhs, rhs, arity in IBSL_AXIOMS:
        v = check_identity(R, lhs, rhs, arity, law)
        if v is not None:
            return v
    return None


def check_absorption(R: RawAlgebra) -> Violation | None:
    """The lattice absorption law ``x ∧ (x ∨ y) ≈ x``, which IBSLs may fail."""
    return check_identity(R, lambda R, x, y: R.meet[x][R.join[x][y]], lambda R, x, y: x,
                          2, "absorption")


BOOLEAN_EXTRA: list[tuple[str, Term, Term, int]] = [
    ("absorption", lambda R, x, y: R.meet[x][R.join[x][y]], lambda R, x, y: x, 2),
    ("distributive", lambda R, x, y, z: R.meet[x][R.join[y][z]],
     lambda R, x, y, z: R.join[R.meet[x][y]][R.meet[x][z]], 3),
    ("complemented", lambda R, x: R.join[x][R.neg[x]], lambda R, x: R.one, 1),
]


def check_boolean(R: RawAlgebra) -> Violation | None:
    """IBSL axioms plus absorption, distributivity and ``x ∨ x' ≈ 1``."""
    return check_ibsl(R) or next(
        (v for law, lhs, rhs, arity in BOOLEAN_EXTRA
         if (v := check_identity(R, lhs, rhs, arity, law)) is not None), None)


# -- partition function --------------------------------------------------------

def partition_apply(R: RawAlgebra, a: int, b: int) -> int:
    """``a · b = a ∧ (a ∨ b)``."""
    return R.meet[a][R.join[a][b]]


def check_partition_function(R: RawAlgebra) -> Violation | None:
    """Verify PF1–PF6 for ``x·y = x ∧ (x ∨ y)`` against ∨, ∧, ′, 0 and 1."""
    _check_cap(R)
    d = R.dot
    n = range(R.size)

    def fail(law, detail, **w):
        return Violation(law, {k: R.name(v) for k, v in w.items()}, detail)

    for a in n:
        if d[a][a] != a:
            return fail("PF1", "a·a ≠ a", a=a)
    for a, b, c in product(n, repeat=3):
        if d[a][d[b][c]] != d[d[a][b]][c]:
            return fail("PF2", "a·(b·c) ≠ (a·b)·c", a=a, b=b, c=c)
    for a, b, c in product(n, repeat=3):
        if d[a][d[b][c]] != d[a][d[c][b]]:
            return fail("PF3", "a·(b·c) ≠ a·(c·b)", a=a, b=b, c=c)
    for op in ("join", "meet"):
        g = getattr(R, op)
        for a1, a2, b in product(n, repeat=3):
            if d[g[a1][a2]][b] != g[d[a1][b]][d[a2][b]]:
                return fail(f"PF4[{op}]", "g(a1,a2)·b ≠ g(a1·b,a2·b)", a1=a1, a2=a2, b=b)
    for a, b in product(n, repeat=2):
        if d[R.neg[a]][b] != R.neg[d[a][b]]:
            return fail("PF4[neg]", "a'·b ≠ (a·b)'", a=a, b=b)
    for op in ("join", "meet"):
        g = getattr(R, op)
        for b, a1, a2 in product(n, repeat=3):
            if d[b][g[a1][a2]] != d[d[b][a1]][a2]:
                return fail(f"PF5[{op}]", "b·g(a1,a2) ≠ b·a1·a2", b=b, a1=a1, a2=a2)
    for b, a in product(n, repeat=2):
        if d[b][R.neg[a]] != d[b][a]:
            return fail("PF5[neg]", "b·a' ≠ b·a", b=b, a=a)
    for a in n:
        for cname, c in (("0", R.zero), ("1", R.one)):
            if d[a][c] != a:
                return fail(f"PF6[{cname}]", "a·c ≠ a", a=a)
    return None


# -- decomposition -------------------------------------------------------------

def decompose(R: RawAlgebra) -> Decomposition:
    """Recover the direct system of Boolean algebras whose Płonka sum is ``R``.

    Components are ordered by size, then by least raw element.  Each hom
    ``p_ij`` is read off as ``x ↦ x · 1_j`` and checked against every other
    choice of ``b`` in ``A_j``.  Raises :class:`NotIBSL` when ``R`` fails an
    axiom; any other failure is an :class:`InternalInconsistency`.
    """
    v = check_ibsl(R)
    if v is not None:
        raise NotIBSL(v)
    pf = check_partition_function(R)
    if pf is not None:
        raise InternalInconsistency(f"partition function fails on an IBSL: {pf}")
    d = R.dot
    N = R.size
    same = [[d[a][b] == a and d[b][a] == b for b in range(N)] for a in range(N)]
    classes: list[tuple[int, ...]] = []
    owner = [-1] * N
    for a in range(N):
        if owner[a] < 0:
            cls = tuple(b for b in range(N) if same[a][b])
            for b in cls:
                if tuple(c for c in range(N) if same[b][c]) != cls:
                    raise InternalInconsistency("component relation is not an equivalence")
                owner[b] = len(classes)
            classes.append(cls)
    classes.sort(key=lambda c: (len(c), c[0]))
    owner = [-1] * N
    for i, cls in enumerate(classes):
        for a in cls:
            owner[a] = i
    m = len(classes)

    pairs = set()
    for a, b in product(range(N), repeat=2):
        if d[b][a] == b:
            pairs.add((owner[a], owner[b]))
    names = ["i?"] * m
    try:
        index = from_order(m, pairs)
    except InvalidSemilattice as exc:
        raise InternalInconsistency(f"component order is not a semilattice: {exc}") from None
    for (i, j) in pairs:
        if not index.leq(i, j):
            raise InternalInconsistency("component order not closed")
    k = 1
    for i in index.topological_order():
        if i == index.bottom:
            names[i] = "i0"
        else:
            names[i] = f"i{k}"
            k += 1
    index = JoinSemilattice(index.join_table, index.bottom, tuple(names))

    components, encode = [], []
    for i, cls in enumerate(classes):
        alg, code = _boolean_component(R, cls, i)
        components.append(alg)
        encode.append(code)

    homs: dict[tuple[int, int], BooleanHom] = {}
    for i, j in index.comparable_pairs():
        if i == j:
            continue
        cj = classes[j]
        one_j = next(b for b in cj if encode[j][b] == components[j].one)
        image = {}
        for x in classes[i]:
            y = d[x][one_j]
            if owner[y] != j:
                raise InternalInconsistency(f"x·1_j leaves component {j}")
            for b in cj:
                if d[x][b] != y:
                    raise InternalInconsistency(
                        f"p_ij depends on the chosen element of A_j ({R.name(x)}, {R.name(b)})")
            image[encode[i][x]] = encode[j][y]
        try:
            homs[i, j] = BooleanHom.from_element_map(components[i], components[j], image)
        except NotAHomomorphism as exc:
            raise InternalInconsistency(f"extracted p_{i}{j} is not a homomorphism: {exc}") from None
    try:
        system = validate_system(index, components, homs)
    except InvalidSystem as exc:
        raise InternalInconsistency(f"extracted system invalid: {exc}") from None
    labeling = tuple(PlonkaElement(owner[a], encode[owner[a]][a]) for a in range(N))
    back = {x: a for a, x in enumerate(labeling)}
    dec = Decomposition(system, R, labeling, back)
    mismatch = transport_mismatch(dec)
    if mismatch is not None:
        raise InternalInconsistency(f"decomposition does not reproduce the tables: {mismatch}")
    return dec


def _boolean_component(R: RawAlgebra, cls: tuple[int, ...], i: int):
    """Identify a component with the power set of its atoms, verifying it."""
    members = set(cls)
    le = lambda x, y: R.join[x][y] == y  # noqa: E731
    zeros = [z for z in cls if all(le(z, x) for x in cls)]
    if len(zeros) != 1:
        raise InternalInconsistency(f"component {i} has no unique bottom")
    z = zeros[0]
    atoms = [x for x in cls if x != z and not any(y not in (z, x) and le(y, x) for y in cls)]
    code = {x: sum(1 << t for t, at in enumerate(atoms) if le(at, x)) for x in cls}
    if sorted(code.values()) != list(range(1 << len(atoms))):
        raise InternalInconsistency(f"component {i} is not a power set of its atoms")
    full = (1 << len(atoms)) - 1
    for x in cls:
        if R.neg[x] not in members or code[R.neg[x]] != full & ~code[x]:
            raise InternalInconsistency(f"component {i}: complement mismatch at {R.name(x)}")
        for y in cls:
            if code.get(R.join[x][y]) != code[x] | code[y] or R.join[x][y] not in members:
                raise InternalInconsistency(f"component {i}: join mismatch")
            if code.get(R.meet[x][y]) != code[x] & code[y] or R.meet[x][y] not in members:
                raise InternalInconsistency(f"component {i}: meet mismatch")
    names = tuple(R.name(a) for a in atoms) if R.names is not None else None
    return BooleanAlgebra(len(atoms), names), code


def transport_mismatch(dec: Decomposition) -> str | None:
    """Compare the raw tables with the Płonka-sum operations along the labeling."""
    S, R, lab = dec.system, dec.raw, dec.labeling
    for a, b in product(range(R.size), repeat=2):
        for op in ("join", "meet"):
            if lab[getattr(R, op)[a][b]] != plonka_eval(S, op, lab[a], lab[b]):
                return f"{op}({R.name(a)}, {R.name(b)})"
    for a in range(R.size):
        if lab[R.neg[a]] != plonka_eval(S, "complement", lab[a]):
            return f"neg({R.name(a)})"
    if lab[R.zero] != plonka_eval(S, "zero") or lab[R.one] != plonka_eval(S, "one"):
        return "constants"
    return None


# -- quasi-identities ----------------------------------------------------------

def injectivity_quasi_identity(R: RawAlgebra) -> Violation | None:
    """``x·y ≈ x & y·x ≈ y & x·z ≈ y·z ⇒ x ≈ y`` over all triples."""
    d = R.dot
    N = range(R.size)
    for x, y in product(N, repeat=2):
        if x == y or d[x][y] != x or d[y][x] != y:
            continue
        for z in N:
            if d[x][z] == d[y][z]:
                return Violation("Injectivity", {"x": R.name(x), "y": R.name(y), "z": R.name(z)},
                                 "premises hold but x ≠ y")
    return None


def injectivity_routes(R: RawAlgebra | Decomposition) -> tuple[bool, bool]:
    """(quasi-identity route, hom-level route); callers expect them to agree."""
    dec = R if isinstance(R, Decomposition) else decompose(R)
    route1 = injectivity_quasi_identity(dec.raw) is None
    route2 = dec.system.is_injective
    return route1, route2


def is_injective_ibsl(R: RawAlgebra | Decomposition) -> bool:
    route1, route2 = injectivity_routes(R)
    if route1 != route2:
        raise InternalInconsistency(
            f"injectivity routes disagree: quasi-identity {route1}, homs {route2}")
    return route1


def ngib_quasi_identity(R: RawAlgebra) -> Violation | None:
    """``x ≈ x' ⇒ y ≈ z``."""
    fixed = [x for x in range(R.size) if R.neg[x] == x]
    if fixed and R.size > 1:
        y, z = 0, 1
        return Violation("NGIB", {"x": R.name(fixed[0]), "y": R.name(y), "z": R.name(z)},
                         "x = x' but y ≠ z")
    return None


def is_ngib(R: RawAlgebra | Decomposition) -> bool:
    """The NGIB quasi-identity, cross-checked with the component scan.

    The one-element algebra satisfies the quasi-identity vacuously even
    though its single component is trivial; every larger algebra satisfies
    it exactly when no component is trivial.
    """
    dec = R if isinstance(R, Decomposition) else decompose(R)
    holds = ngib_quasi_identity(dec.raw) is None
    scan = not dec.system.has_trivial_component or dec.raw.size == 1
    if holds != scan:
        raise InternalInconsistency("NGIB quasi-identity disagrees with the component scan")
    return holds


# -- isomorphism of direct systems ---------------------------------------------

def find_isomorphism(S: DirectSystem, T: DirectSystem):
    """Exhaustively search for an isomorphism of direct systems.

    Returns ``(index_map, atom_maps)`` where ``index_map[i]`` is the image of
    index ``i`` and ``atom_maps[i][t]`` the image of atom ``t`` of ``A_i``,
    or ``None`` when the systems are not isomorphic.
    """
    n = S.index.size
    if n != T.index.size:
        return None
    if sorted(c.atom_count for c in S.components) != sorted(c.atom_count for c in T.components):
        return None
    for perm in permutations(range(n)):
        if any(S.components[i].atom_count != T.components[perm[i]].atom_count for i in range(n)):
            continue
        if any(perm[S.index.join(i, j)] != T.index.join(perm[i], perm[j])
               for i in range(n) for j in range(n)):
            continue
        order = sorted(range(n), key=lambda i: -len([k for k in range(n) if S.index.leq(k, i)]))
        found = _match_atoms(S, T, perm, order, 0, {})
        if found is not None:
            return list(perm), found
    return None


def _match_atoms(S, T, perm, order, pos, beta):
    if pos == len(order):
        return dict(beta)
    i = order[pos]
    for cand in permutations(range(S.components[i].atom_count)):
        beta[i] = cand
        ok = True
        for j in beta:
            for a, b in ((i, j), (j, i)):
                if a != b and S.index.leq(a, b):
                    ds = S.hom(a, b).dual
                    dt = T.hom(perm[a], perm[b]).dual
                    if any(beta[a][ds[t]] != dt[beta[b][t]] for t in range(len(ds))):
                        ok = False
                        break
            if not ok:
                break
        if ok:
            found = _match_atoms(S, T, perm, order, pos + 1, beta)
            if found is not None:
                return found
        del beta[i]
    return None


def systems_isomorphic(S: DirectSystem, T: DirectSystem) -> bool:
    return find_isomorphism(S, T) is not None


def raw_from_system_transport(dec: Decomposition) -> RawAlgebra:
    """The Płonka sum of ``dec.system`` written in ``dec``'s raw numbering."""
    S, lab, back = dec.system, dec.labeling, dec.back
    N = range(len(lab))
    return RawAlgebra(
        [[back[plonka_eval(S, "join", lab[a], lab[b])] for b in N] for a in N],
        [[back[plonka_eval(S, "meet", lab[a], lab[b])] for b in N] for a in N],
        [back[plonka_eval(S, "complement", lab[a])] for a in N],
        back[plonka_eval(S, "zero")], back[plonka_eval(S, "one")], dec.raw.names)


def raw_boolean(algebra: BooleanAlgebra) -> RawAlgebra:
    """The operation tables of a Boolean algebra, elements in bit-set order."""
    els = algebra.elements()
    return RawAlgebra([[algebra.join(a, b) for b in els] for a in els],
                      [[algebra.meet(a, b) for b in els] for a in els],
                      [algebra.complement(a) for a in els], 0, algebra.one)


def iter_elements(dec: Decomposition) -> Iterable[int]:
    return range(dec.size)
