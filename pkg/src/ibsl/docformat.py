"""Line-oriented text documents for systems, raw algebras, states and measures.

A document starts with optional ``#`` comment lines (kept as metadata) and
a header ``<kind> [name]``.  Example system::

    system ex14
    semilattice
      elements i0 i j k
      le i0 i
      le i0 j
      le i k
      le j k
    end
    component i0 atoms=1
    component i atoms=2 a a'
    hom i -> k: c=a, d=a', e=a'

Homs are written as dual atom maps, ``target-atom=source-atom``; ``#t``
names atom ``t`` of an algebra without atom names.  Homs between
comparable indices that are omitted are composed from the given ones.
Rationals are written ``p/q``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .errors import DocumentSyntaxError, DuplicateName, InvalidSystem, UnresolvedReference, Violation
from .finbool import BooleanAlgebra, BooleanHom, Measure
from .plonka import DirectSystem, PlonkaElement, RawAlgebra, validate_system
from .semilattice import JoinSemilattice, from_order

KINDS = ("system", "raw", "state", "measure")
TOKEN = re.compile(r"->|[:,=]|[^\s:,=]+")


@dataclass(frozen=True)
class SystemBody:
    indices: tuple[str, ...]
    order: frozenset[tuple[str, str]]        # strict, transitively closed
    components: tuple[tuple[int, tuple[str, ...] | None], ...]
    homs: tuple[tuple[str, str, tuple[int, ...]], ...]


@dataclass(frozen=True)
class RawBody:
    elements: tuple[str, ...]
    zero: int
    one: int
    neg: tuple[int, ...]
    join: tuple[tuple[int, ...], ...]
    meet: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class WeightsBody:
    """``form`` is ``top``, ``components`` or ``values``; entries are (scope, ((name, q), …))."""

    form: str
    entries: tuple[tuple[str, tuple[tuple[str, Fraction], ...]], ...]


@dataclass(frozen=True)
class Document:
    kind: str
    name: str
    body: SystemBody | RawBody | WeightsBody
    comments: tuple[str, ...] = field(default=())


# -- lexing --------------------------------------------------------------------

@dataclass
class _Tok:
    text: str
    line: int
    col: int


def _lines(text: str) -> Iterator[tuple[int, list[_Tok]]]:
    for n, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield n, [_Tok(m.group(), n, m.start() + 1) for m in TOKEN.finditer(raw)]


def _err(cls, tok: _Tok | None, msg: str, line: int = 0):
    if tok is None:
        return cls(msg, line, 1 if line else 0)
    return cls(msg, tok.line, tok.col)


class _Cursor:
    def __init__(self, toks: list[_Tok], line: int):
        self.toks, self.pos, self.line = toks, 0, line

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self, expected: str) -> _Tok:
        tok = self.peek()
        if tok is None:
            end = self.toks[-1]
            raise DocumentSyntaxError(f"expected {expected}, found end of line",
                                      self.line, end.col + len(end.text))
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next(repr(text))
        if tok.text != text:
            raise _err(DocumentSyntaxError, tok, f"expected {text!r}, found {tok.text!r}")
        return tok

    def done(self) -> bool:
        return self.pos >= len(self.toks)

    def end(self) -> None:
        tok = self.peek()
        if tok is not None:
            raise _err(DocumentSyntaxError, tok, f"unexpected {tok.text!r}")

    def pairs(self, allow_empty: bool = False) -> list[tuple[_Tok, _Tok]]:
        """``key=value, key=value, …`` up to the end of the line."""
        out = []
        if allow_empty and self.done():
            return out
        while True:
            key = self.next("a name")
            self.expect("=")
            out.append((key, self.next("a value")))
            if self.done():
                return out
            self.expect(",")


def _rational(tok: _Tok) -> Fraction:
    try:
        return Fraction(tok.text)
    except (ValueError, ZeroDivisionError):
        raise _err(DocumentSyntaxError, tok, f"expected a rational p/q, found {tok.text!r}") from None


def _int(tok: _Tok) -> int:
    if not tok.text.isdigit():
        raise _err(DocumentSyntaxError, tok, f"expected a nonnegative integer, found {tok.text!r}")
    return int(tok.text)


# -- parsing -------------------------------------------------------------------

def parse(text: str) -> Document:
    comments = []
    for raw in text.splitlines():
        s = raw.strip()
        if not s:
            continue
        if not s.startswith("#"):
            break
        comments.append(s[1:].strip())
    lines = list(_lines(text))
    if not lines:
        raise DocumentSyntaxError("empty document: expected a header line", 1, 1)
    n, head = lines[0]
    kind = head[0]
    if kind.text not in KINDS:
        raise _err(DocumentSyntaxError, kind, f"expected one of {', '.join(KINDS)}, found {kind.text!r}")
    if len(head) > 2:
        raise _err(DocumentSyntaxError, head[2], f"unexpected {head[2].text!r}")
    name = head[1].text if len(head) > 1 else ""
    body_lines = lines[1:]
    if kind.text == "system":
        body = _parse_system(body_lines)
    elif kind.text == "raw":
        body = _parse_raw(body_lines)
    else:
        body = _parse_weights(body_lines, kind.text)
    return Document(kind.text, name, body, tuple(comments))


def _parse_system(lines) -> SystemBody:
    indices: list[str] | None = None
    pairs: set[tuple[str, str]] = set()
    joins: list[tuple[_Tok, _Tok, _Tok]] = []
    comps: dict[str, tuple[int, tuple[str, ...] | None]] = {}
    homs: dict[tuple[str, str], tuple[int, ...]] = {}
    pending_homs = []
    it = iter(lines)
    seen_block = False
    last_line = 0

    def index_ref(tok: _Tok) -> str:
        if indices is None:
            raise _err(DocumentSyntaxError, tok, "semilattice block must come first")
        if tok.text not in indices:
            raise _err(UnresolvedReference, tok, f"undeclared index {tok.text!r}")
        return tok.text

    for n, toks in it:
        last_line = n
        cur = _Cursor(toks, n)
        word = cur.next("a keyword")
        if word.text == "semilattice":
            if seen_block:
                raise _err(DuplicateName, word, "second semilattice block")
            seen_block = True
            cur.end()
            for n2, toks2 in it:
                last_line = n2
                c2 = _Cursor(toks2, n2)
                w2 = c2.next("a keyword")
                if w2.text == "end":
                    c2.end()
                    break
                if w2.text == "elements":
                    if indices is not None:
                        raise _err(DuplicateName, w2, "elements declared twice")
                    names = []
                    while not c2.done():
                        t = c2.next("an index name")
                        if t.text in names:
                            raise _err(DuplicateName, t, f"index {t.text!r} declared twice")
                        names.append(t.text)
                    if not names:
                        raise _err(DocumentSyntaxError, w2, "elements needs at least one index")
                    indices = names
                elif w2.text == "le":
                    a, b = index_ref(c2.next("an index")), index_ref(c2.next("an index"))
                    c2.end()
                    if a != b:
                        pairs.add((a, b))
                elif w2.text == "join":
                    x, y = c2.next("an index"), c2.next("an index")
                    c2.expect("=")
                    z = c2.next("an index")
                    c2.end()
                    for t in (x, y, z):
                        index_ref(t)
                    joins.append((x, y, z))
                    for t in (x, y):
                        if t.text != z.text:
                            pairs.add((t.text, z.text))
                else:
                    raise _err(DocumentSyntaxError, w2, f"expected elements, le, join or end, found {w2.text!r}")
            else:
                raise DocumentSyntaxError("semilattice block not closed with 'end'", last_line + 1, 1)
        elif word.text == "component":
            idx = cur.next("an index")
            i = index_ref(idx)
            if i in comps:
                raise _err(DuplicateName, idx, f"component {i!r} declared twice")
            spec = cur.next("atoms=<n>")
            if spec.text != "atoms":
                raise _err(DocumentSyntaxError, spec, f"expected 'atoms', found {spec.text!r}")
            cur.expect("=")
            count = _int(cur.next("an atom count"))
            names = []
            while not cur.done():
                t = cur.next("an atom name")
                if t.text in names or t.text.startswith("#"):
                    raise _err(DuplicateName, t, f"atom name {t.text!r} repeated or reserved")
                names.append(t.text)
            if names and len(names) != count:
                raise _err(DocumentSyntaxError, spec, f"{len(names)} atom names for {count} atoms")
            comps[i] = (count, tuple(names) if names else None)
        elif word.text == "hom":
            src = cur.next("an index")
            i = index_ref(src)
            cur.expect("->")
            tgt = cur.next("an index")
            j = index_ref(tgt)
            cur.expect(":")
            if (i, j) in homs or any(h[0] == (i, j) for h in pending_homs):
                raise _err(DuplicateName, word, f"hom {i} -> {j} given twice")
            pending_homs.append(((i, j), cur.pairs(allow_empty=True), word))  # empty when A_j is trivial
        else:
            raise _err(DocumentSyntaxError, word, f"expected semilattice, component or hom, found {word.text!r}")

    if indices is None:
        raise DocumentSyntaxError("missing semilattice block", last_line + 1, 1)
    order = _closure(indices, pairs)
    for x, y, z in joins:
        ubs = [k for k in indices if _le(order, x.text, k) and _le(order, y.text, k)]
        least = [k for k in ubs if all(_le(order, k, u) for u in ubs)]
        if least != [z.text]:
            raise _err(DocumentSyntaxError, z, f"join {x.text} {y.text} = {z.text} contradicts the order")
    for i in indices:
        if i not in comps:
            raise DocumentSyntaxError(f"index {i!r} has no component", last_line + 1, 1)
    for (i, j), items, word in pending_homs:
        src_names, tgt_names = _atom_names(comps[i]), _atom_names(comps[j])
        dual: list[int | None] = [None] * comps[j][0]
        for key, val in items:
            if key.text not in tgt_names:
                raise _err(UnresolvedReference, key, f"{key.text!r} is not an atom of {j}")
            if val.text not in src_names:
                raise _err(UnresolvedReference, val, f"{val.text!r} is not an atom of {i}")
            t = tgt_names.index(key.text)
            if dual[t] is not None:
                raise _err(DuplicateName, key, f"atom {key.text!r} mapped twice")
            dual[t] = src_names.index(val.text)
        if any(d is None for d in dual):
            missing = tgt_names[dual.index(None)]
            raise _err(DocumentSyntaxError, word, f"hom {i} -> {j} leaves atom {missing!r} unmapped")
        homs[i, j] = tuple(dual)
    pos = {name: p for p, name in enumerate(indices)}
    return SystemBody(
        tuple(indices), order, tuple(comps[i] for i in indices),
        tuple(sorted(((i, j, d) for (i, j), d in homs.items()), key=lambda h: (pos[h[0]], pos[h[1]]))))


def _atom_names(comp: tuple[int, tuple[str, ...] | None]) -> list[str]:
    count, names = comp
    return list(names) if names else [f"#{t}" for t in range(count)]


def _closure(indices, pairs) -> frozenset[tuple[str, str]]:
    rel = set(pairs)
    for k in indices:
        for i in indices:
            if (i, k) in rel:
                for j in indices:
                    if (k, j) in rel and i != j:
                        rel.add((i, j))
    return frozenset(rel)


def _le(order, a: str, b: str) -> bool:
    return a == b or (a, b) in order


def _parse_raw(lines) -> RawBody:
    elements: list[str] | None = None
    fields: dict[str, object] = {}
    rows: dict[str, dict[int, tuple[int, ...]]] = {"join": {}, "meet": {}}
    last = 0

    def ref(tok: _Tok) -> int:
        if elements is None:
            raise _err(DocumentSyntaxError, tok, "elements must be declared first")
        if tok.text not in elements:
            raise _err(UnresolvedReference, tok, f"undeclared element {tok.text!r}")
        return elements.index(tok.text)

    def vector(cur: _Cursor) -> tuple[int, ...]:
        vals = []
        while not cur.done():
            vals.append(ref(cur.next("an element")))
        if len(vals) != len(elements):
            raise DocumentSyntaxError(f"expected {len(elements)} entries, found {len(vals)}", cur.line, 1)
        return tuple(vals)

    for n, toks in lines:
        last = n
        cur = _Cursor(toks, n)
        word = cur.next("a keyword")
        if word.text == "elements":
            if elements is not None:
                raise _err(DuplicateName, word, "elements declared twice")
            names = []
            while not cur.done():
                t = cur.next("an element name")
                if t.text in names:
                    raise _err(DuplicateName, t, f"element {t.text!r} declared twice")
                names.append(t.text)
            if not names:
                raise _err(DocumentSyntaxError, word, "elements needs at least one name")
            elements = names
        elif word.text in ("zero", "one"):
            if word.text in fields:
                raise _err(DuplicateName, word, f"{word.text} given twice")
            fields[word.text] = ref(cur.next("an element"))
            cur.end()
        elif word.text == "neg":
            if "neg" in fields:
                raise _err(DuplicateName, word, "neg given twice")
            cur.expect(":")
            fields["neg"] = vector(cur)
        elif word.text in ("join", "meet"):
            x = cur.next("an element")
            a = ref(x)
            cur.expect(":")
            if a in rows[word.text]:
                raise _err(DuplicateName, x, f"{word.text} row {x.text!r} given twice")
            rows[word.text][a] = vector(cur)
        else:
            raise _err(DocumentSyntaxError, word,
                       f"expected elements, zero, one, neg, join or meet, found {word.text!r}")
    if elements is None:
        raise DocumentSyntaxError("missing elements line", last + 1, 1)
    for key in ("zero", "one", "neg"):
        if key not in fields:
            raise DocumentSyntaxError(f"missing {key} line", last + 1, 1)
    for op in ("join", "meet"):
        for a, name in enumerate(elements):
            if a not in rows[op]:
                raise DocumentSyntaxError(f"missing {op} row for {name!r}", last + 1, 1)
    N = range(len(elements))
    return RawBody(tuple(elements), fields["zero"], fields["one"], fields["neg"],
                   tuple(rows["join"][a] for a in N), tuple(rows["meet"][a] for a in N))


def _parse_weights(lines, kind: str) -> WeightsBody:
    form = None
    entries: dict[str, list[tuple[str, Fraction]]] = {}
    order: list[str] = []
    last = 0
    for n, toks in lines:
        last = n
        cur = _Cursor(toks, n)
        word = cur.next("a keyword")
        if word.text == "top-measure":
            this, scope = "top", "top"
        elif word.text == "component" and kind == "state":
            this = "components"
            scope = cur.next("an index").text
        elif word.text == "values" and kind == "state":
            this, scope = "values", "values"
        else:
            allowed = "top-measure" if kind == "measure" else "top-measure, component or values"
            raise _err(DocumentSyntaxError, word, f"expected {allowed}, found {word.text!r}")
        if form is not None and form != this:
            raise _err(DocumentSyntaxError, word, f"cannot mix {form} and {this} lines")
        form = this
        cur.expect(":")
        if scope in entries and this != "values":
            raise _err(DuplicateName, word, f"{scope} given twice")
        items = entries.setdefault(scope, [])
        if scope not in order:
            order.append(scope)
        for key, val in cur.pairs():
            if any(key.text == k for k, _ in items):
                raise _err(DuplicateName, key, f"{key.text!r} given twice")
            items.append((key.text, _rational(val)))
    if form is None:
        raise DocumentSyntaxError("no weights given", last + 1, 1)
    return WeightsBody(form, tuple((s, tuple(entries[s])) for s in order))


# -- printing ------------------------------------------------------------------

def _q(v: Fraction) -> str:
    return str(Fraction(v))


def print_document(doc: Document) -> str:
    out = [f"# {c}" if c else "#" for c in doc.comments]
    out.append(f"{doc.kind} {doc.name}".rstrip())
    b = doc.body
    if isinstance(b, SystemBody):
        out.append("semilattice")
        out.append("  elements " + " ".join(b.indices))
        for x, y in _covers(b):
            out.append(f"  le {x} {y}")
        out.append("end")
        for i, (count, names) in zip(b.indices, b.components):
            out.append(f"component {i} atoms={count}" + ("" if names is None else " " + " ".join(names)))
        comp = dict(zip(b.indices, b.components))
        for i, j, dual in b.homs:
            src, tgt = _atom_names(comp[i]), _atom_names(comp[j])
            out.append(f"hom {i} -> {j}: " + ", ".join(f"{tgt[t]}={src[s]}" for t, s in enumerate(dual)))
    elif isinstance(b, RawBody):
        e = b.elements
        out.append("elements " + " ".join(e))
        out.append(f"zero {e[b.zero]}")
        out.append(f"one {e[b.one]}")
        out.append("neg: " + " ".join(e[v] for v in b.neg))
        for op in ("join", "meet"):
            for a, row in enumerate(getattr(b, op)):
                out.append(f"{op} {e[a]}: " + " ".join(e[v] for v in row))
    else:
        for scope, items in b.entries:
            lead = {"top": "top-measure", "values": "values", "components": f"component {scope}"}[b.form]
            out.append(f"{lead}: " + ", ".join(f"{k}={_q(v)}" for k, v in items))
    return "\n".join(out) + "\n"


def _covers(b: SystemBody) -> list[tuple[str, str]]:
    out = []
    for x, y in sorted(b.order, key=lambda p: (b.indices.index(p[0]), b.indices.index(p[1]))):
        if not any((x, k) in b.order and (k, y) in b.order for k in b.indices):
            out.append((x, y))
    return out


# -- conversion ----------------------------------------------------------------

def to_system(doc: Document) -> DirectSystem:
    b = doc.body
    if not isinstance(b, SystemBody):
        raise DocumentSyntaxError(f"expected a system document, found {doc.kind}", 1, 1)
    pos = {name: p for p, name in enumerate(b.indices)}
    L0 = from_order(len(b.indices), [(pos[x], pos[y]) for x, y in b.order])
    L = JoinSemilattice(L0.join_table, L0.bottom, b.indices)
    comps = [BooleanAlgebra(count, names) for count, names in b.components]
    given = {(pos[i], pos[j]): BooleanHom(comps[pos[i]], comps[pos[j]], d) for i, j, d in b.homs}
    homs = dict(given)
    for j in L.topological_order():
        for i in reversed(L.topological_order()):
            if i == j or not L.leq(i, j) or (i, j) in homs:
                continue
            for k in L.indices:
                if k not in (i, j) and (i, k) in homs and (k, j) in homs:
                    homs[i, j] = homs[k, j].compose(homs[i, k])
                    break
    try:
        return validate_system(L, comps, homs)
    except InvalidSystem as exc:
        v = exc.violation
        named = {k: L.name(x) if k in ("i", "j", "k") else x for k, x in v.witness.items()}
        raise InvalidSystem(Violation(v.law, named, v.detail)) from None


def from_system(S: DirectSystem, name: str = "", comments=()) -> Document:
    L = S.index
    names = tuple(L.name(i) for i in L.indices)
    order = frozenset((names[i], names[j]) for i, j in L.comparable_pairs() if i != j)
    comps = tuple((c.atom_count, c.atom_names) for c in S.components)
    covers = L.covers()
    homs = tuple((names[i], names[j], S.hom(i, j).dual) for i, j in covers)
    return Document("system", name, SystemBody(names, order, comps, homs), tuple(comments))


def to_raw(doc: Document) -> RawAlgebra:
    b = doc.body
    if not isinstance(b, RawBody):
        raise DocumentSyntaxError(f"expected a raw document, found {doc.kind}", 1, 1)
    return RawAlgebra(b.join, b.meet, b.neg, b.zero, b.one, b.elements)


def from_raw(R: RawAlgebra, name: str = "", comments=()) -> Document:
    names = tuple(R.name(a) for a in range(R.size))
    return Document("raw", name, RawBody(names, R.zero, R.one, R.neg, R.join, R.meet), tuple(comments))


def _resolve_atoms(alg: BooleanAlgebra, items, where: str) -> list[Fraction]:
    names = [alg.atom_name(t) for t in range(alg.atom_count)]
    w: list[Fraction | None] = [None] * alg.atom_count
    for key, val in items:
        if key not in names:
            raise UnresolvedReference(f"{key!r} is not an atom of {where}")
        w[names.index(key)] = val
    if any(v is None for v in w):
        raise DocumentSyntaxError(f"{where}: atom {names[w.index(None)]!r} has no weight")
    return w


def measure_from_doc(doc: Document, S: DirectSystem) -> Measure:
    b = doc.body
    if not isinstance(b, WeightsBody) or b.form != "top":
        raise DocumentSyntaxError("expected a top-measure document", 1, 1)
    return Measure(S.top_algebra, _resolve_atoms(S.top_algebra, b.entries[0][1], "the top component"))


def state_views(doc: Document, S: DirectSystem, dec) -> tuple[tuple[Fraction, ...], list[list[Fraction]]]:
    """Both views of a state document: the value table on ``dec`` and component weights.

    Whichever view the document gives is taken verbatim; the other is read
    off it without any validation.
    """
    from .states import componentwise_table
    b = doc.body
    if not isinstance(b, WeightsBody):
        raise DocumentSyntaxError(f"expected a state document, found {doc.kind}", 1, 1)
    L = S.index
    if b.form == "values":
        names = {dec.name(a): a for a in range(dec.size)}
        table: list[Fraction | None] = [None] * dec.size
        for key, val in b.entries[0][1]:
            if key not in names:
                raise UnresolvedReference(f"{key!r} is not an element")
            table[names[key]] = val
        if any(v is None for v in table):
            raise DocumentSyntaxError(f"element {dec.name(table.index(None))!r} has no value")
        weights = [[table[dec.id_of(PlonkaElement(i, 1 << t))] for t in range(c.atom_count)]
                   for i, c in enumerate(S.components)]
        return tuple(table), weights
    if b.form == "components":
        given = {}
        for scope, items in b.entries:
            if scope not in [L.name(i) for i in L.indices]:
                raise UnresolvedReference(f"undeclared index {scope!r}")
            i = [L.name(k) for k in L.indices].index(scope)
            given[i] = _resolve_atoms(S.components[i], items, f"component {scope}")
        missing = [L.name(i) for i in L.indices if i not in given]
        if missing:
            raise DocumentSyntaxError(f"component {missing[0]!r} has no weights")
        weights = [given[i] for i in L.indices]
        return componentwise_table(dec, weights), weights
    top = _resolve_atoms(S.top_algebra, b.entries[0][1], "the top component")
    weights = []
    for i in L.indices:
        h = S.hom(i, S.top)
        weights.append([sum((top[u] for u in range(len(top)) if h.apply(1 << t) >> u & 1), Fraction(0))
                        for t in range(S.components[i].atom_count)])
    return componentwise_table(dec, weights), weights


def weights_document(kind: str, form: str, entries, name: str = "", comments=()) -> Document:
    return Document(kind, name, WeightsBody(form, tuple((s, tuple((k, Fraction(v)) for k, v in items))
                                                       for s, items in entries)), tuple(comments))


def state_document(S: DirectSystem, m: Measure, name: str = "", comments=()) -> Document:
    top = S.top_algebra
    return weights_document("state", "top", [("top", [(top.atom_name(t), w) for t, w in enumerate(m.weights)])],
                            name, comments)


def read(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
