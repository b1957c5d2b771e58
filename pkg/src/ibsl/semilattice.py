"""Finite join-semilattices with least element, stored as full join tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .errors import IndexOutOfRange, InvalidSemilattice, Violation


@dataclass(frozen=True)
class JoinSemilattice:
    """A validated join table; build through :func:`validate_semilattice`."""

    join_table: tuple[tuple[int, ...], ...]
    bottom: int
    names: tuple[str, ...] | None = field(default=None, compare=False)

    @property
    def size(self) -> int:
        return len(self.join_table)

    @property
    def indices(self) -> range:
        return range(self.size)

    def _check(self, *idx: int) -> None:
        for i in idx:
            if not 0 <= i < self.size:
                raise IndexOutOfRange(f"index {i} not in 0..{self.size - 1}")

    def join(self, i: int, j: int) -> int:
        self._check(i, j)
        return self.join_table[i][j]

    def join_all(self, idx: Iterable[int]) -> int:
        out = self.bottom
        for i in idx:
            out = self.join(out, i)
        return out

    def leq(self, i: int, j: int) -> bool:
        return self.join(i, j) == j

    @cached_property
    def top(self) -> int:
        return self.join_all(self.indices)

    def up_set(self, i: int) -> list[int]:
        return [j for j in self.indices if self.leq(i, j)]

    def comparable_pairs(self) -> list[tuple[int, int]]:
        """All ``(i, j)`` with ``i <= j``, including the diagonal."""
        return [(i, j) for i in self.indices for j in self.indices if self.leq(i, j)]

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges ``(i, j)``: ``i < j`` with nothing strictly between."""
        out = []
        for i, j in self.comparable_pairs():
            if i == j:
                continue
            if not any(k not in (i, j) and self.leq(i, k) and self.leq(k, j) for k in self.indices):
                out.append((i, j))
        return out

    def name(self, i: int) -> str:
        return self.names[i] if self.names is not None else str(i)

    def topological_order(self) -> list[int]:
        """Indices sorted so that ``i < j`` implies ``i`` comes first."""
        return sorted(self.indices, key=lambda i: (len([k for k in self.indices if self.leq(k, i)]), i))


def validate_semilattice(join_table: Sequence[Sequence[int]],
                         names: Sequence[str] | None = None) -> JoinSemilattice:
    """Check the semilattice laws exhaustively and locate the least element.

    Laws are checked in the order idempotent, commutative, associative, least
    element; the first failure raises :class:`InvalidSemilattice` carrying the
    lexicographically least witness.
    """
    n = len(join_table)
    if n == 0:
        raise InvalidSemilattice(Violation("Empty", {}, "a semilattice needs at least one element"))
    table = tuple(tuple(int(v) for v in row) for row in join_table)
    for i, row in enumerate(table):
        if len(row) != n:
            raise InvalidSemilattice(Violation("NotSquare", {"row": i}, f"row has {len(row)} entries"))
        for j, v in enumerate(row):
            if not 0 <= v < n:
                raise InvalidSemilattice(Violation("OutOfRange", {"i": i, "j": j}, f"entry {v}"))
    for i in range(n):
        if table[i][i] != i:
            raise InvalidSemilattice(Violation("NotIdempotent", {"i": i}, f"i∨i = {table[i][i]}"))
    for i, j in product(range(n), repeat=2):
        if table[i][j] != table[j][i]:
            raise InvalidSemilattice(Violation(
                "NotCommutative", {"i": i, "j": j}, f"i∨j = {table[i][j]}, j∨i = {table[j][i]}"))
    for i, j, k in product(range(n), repeat=3):
        left, right = table[i][table[j][k]], table[table[i][j]][k]
        if left != right:
            raise InvalidSemilattice(Violation(
                "NotAssociative", {"i": i, "j": j, "k": k}, f"i∨(j∨k) = {left}, (i∨j)∨k = {right}"))
    bottoms = [b for b in range(n) if all(table[b][i] == i for i in range(n))]
    if not bottoms:
        raise InvalidSemilattice(Violation("NoLeastElement", {}, "no index lies below every other"))
    if names is not None:
        names = tuple(names)
        if len(names) != n:
            raise ValueError("one name per index required")
    return JoinSemilattice(table, bottoms[0], names)


def from_order(size: int, leq_pairs: Iterable[tuple[int, int]],
               names: Sequence[str] | None = None) -> JoinSemilattice:
    """Build the semilattice whose order is generated by ``leq_pairs``.

    Joins are least upper bounds in the reflexive-transitive closure; a pair
    without a least upper bound raises :class:`InvalidSemilattice`.
    """
    le = [[i == j for j in range(size)] for i in range(size)]
    for i, j in leq_pairs:
        le[i][j] = True
    for k in range(size):
        for i in range(size):
            if le[i][k]:
                for j in range(size):
                    if le[k][j]:
                        le[i][j] = True
    for i in range(size):
        for j in range(size):
            if i != j and le[i][j] and le[j][i]:
                raise InvalidSemilattice(Violation(
                    "NotAntisymmetric", {"i": i, "j": j}, "order has a cycle"))
    table = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            ubs = [k for k in range(size) if le[i][k] and le[j][k]]
            least = [k for k in ubs if all(le[k][u] for u in ubs)]
            if not least:
                raise InvalidSemilattice(Violation(
                    "NoJoin", {"i": i, "j": j}, "no least upper bound"))
            table[i][j] = least[0]
    return validate_semilattice(table, names)


def chain(n: int, names: Sequence[str] | None = None) -> JoinSemilattice:
    return validate_semilattice([[max(i, j) for j in range(n)] for i in range(n)], names)


def leq(L: JoinSemilattice, i: int, j: int) -> bool:
    return L.leq(i, j)


def join(L: JoinSemilattice, i: int, j: int) -> int:
    return L.join(i, j)


def top(L: JoinSemilattice) -> int:
    return L.top
