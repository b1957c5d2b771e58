"""Command-line front end.

Exit status: 0 when every check passes, 1 when a check fails (the report
names it), 2 on usage or document errors.  ``--format json`` prints one
JSON object per run; the keys are listed in the README.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import config
from .booleanisation import booleanise, class_structure, is_trivial_booleanisation
from .counting import chain_factor, enumerate_inclusive, forests, n_d
from .docformat import (
    from_raw,
    from_system,
    measure_from_doc,
    print_document,
    read,
    state_views,
    to_raw,
    to_system,
)
from .errors import DocumentError, IBSLError, InvalidSemilattice, InvalidSystem, NotIBSL
from .generators import random_system
from .metrics_topology import (
    is_metric,
    kolmogorov_quotient,
    make_section,
    pseudometric,
    section_count,
    state_uniqueness_check,
    topology_report,
    verify_section,
)
from .plonka import PlonkaElement, check_ibsl, decompose, is_injective_ibsl, is_ngib, plonka_sum
from .states import (
    State,
    alt_state_equivalence,
    check_state_componentwise,
    check_state_direct,
    faithful_diagnosis,
    integral_representation_check,
    phi,
    phi_inverse,
    state_from_table,
)


class Outcome:
    def __init__(self, ok: bool = True):
        self.ok = ok
        self.lines: list[str] = []
        self.data: dict = {}

    def say(self, line: str) -> None:
        self.lines.append(line)

    def fail(self, line: str) -> None:
        self.ok = False
        self.lines.append(line)


def _q(v) -> str:
    return str(Fraction(v))


def _load_algebra(path: str):
    """A system document, or a raw document decomposed into one."""
    doc = read(path)
    if doc.kind == "system":
        S = to_system(doc)
        return S, plonka_sum(S)
    if doc.kind == "raw":
        dec = decompose(to_raw(doc))
        return dec.system, dec
    raise DocumentError(f"{path}: expected a system or raw document, found {doc.kind}", 1, 1)


def _load_state(system_path: str, state_path: str):
    S, dec = _load_algebra(system_path)
    table, weights = state_views(read(state_path), S, dec)
    return S, dec, table, weights


def _valid_state(out: Outcome, dec, table) -> State | None:
    report = check_state_direct(dec, table)
    if not report.valid:
        out.fail("invalid state: " + "; ".join(str(v) for v in report.violations))
        return None
    return state_from_table(dec, table)


# -- subcommands ---------------------------------------------------------------

def cmd_validate(args, out: Outcome) -> None:
    doc = read(args.file)
    if doc.kind == "system":
        try:
            S = to_system(doc)
        except (InvalidSystem, InvalidSemilattice) as exc:
            out.fail(f"Invalid direct system: {exc}")
            out.data["violation"] = str(exc)
            return
        v = check_ibsl(plonka_sum(S).raw)
        out.data.update(kind="system", indices=S.index.size, elements=S.size)
        if v is None:
            out.say("Valid direct system; Płonka sum passes I1–I8")
        else:
            out.fail(f"Płonka sum fails {v}")
    elif doc.kind == "raw":
        R = to_raw(doc)
        v = check_ibsl(R)
        out.data.update(kind="raw", elements=R.size)
        if v is None:
            out.say("Raw algebra passes I1–I8")
        else:
            out.fail(f"Raw algebra fails {v}")
            out.data["violation"] = str(v)
    else:
        raise DocumentError(f"cannot validate a {doc.kind} document on its own", 1, 1)


def _describe_system(S, out: Outcome) -> None:
    L = S.index
    out.say("indices: " + " ".join(L.name(i) for i in L.indices))
    out.say("order: " + ", ".join(f"{L.name(i)} < {L.name(j)}" for i, j in L.covers()))
    for i, c in enumerate(S.components):
        atoms = " ".join(c.atom_name(t) for t in range(c.atom_count))
        out.say(f"component {L.name(i)}: {c.atom_count} atoms ({c.size} elements) {atoms}".rstrip())
    out.data["indices"] = [L.name(i) for i in L.indices]
    out.data["order"] = [[L.name(i), L.name(j)] for i, j in L.covers()]
    out.data["components"] = {L.name(i): c.atom_count for i, c in enumerate(S.components)}


def cmd_decompose(args, out: Outcome) -> None:
    doc = read(args.file)
    R = to_raw(doc) if doc.kind == "raw" else plonka_sum(to_system(doc)).raw
    try:
        dec = decompose(R)
    except NotIBSL as exc:
        out.fail(str(exc))
        return
    S = dec.system
    _describe_system(S, out)
    for i in S.index.indices:
        out.say(f"  {S.index.name(i)} = {{" + ", ".join(dec.name(a) for a in dec.component_ids(i)) + "}")
    homs = {}
    for (i, j), h in sorted(S.homs.items()):
        if i != j:
            img = ", ".join(f"{dec.name(dec.id_of(PlonkaElement(i, a)))}↦{dec.name(dec.id_of(PlonkaElement(j, h.apply(a))))}"
                            for a in S.components[i].elements())
            out.say(f"p_{S.index.name(i)}{S.index.name(j)}: {img}")
            homs[f"{S.index.name(i)}->{S.index.name(j)}"] = list(h.dual)
    injective = is_injective_ibsl(dec)
    out.say(f"injective: {str(injective).lower()}; no trivial component: {str(is_ngib(dec)).lower()}")
    out.data.update(homs=homs, injective=injective, ngib=is_ngib(dec))
    out.data["classes"] = {S.index.name(i): [dec.name(a) for a in dec.component_ids(i)] for i in S.index.indices}
    if args.emit:
        out.say(print_document(from_system(S, doc.name)).rstrip())


def cmd_sum(args, out: Outcome) -> None:
    doc = read(args.file)
    dec = plonka_sum(to_system(doc))
    text = print_document(from_raw(dec.raw, doc.name))
    out.say(text.rstrip())
    out.data["document"] = text
    out.data["elements"] = dec.size


def cmd_booleanise(args, out: Outcome) -> None:
    S, dec = _load_algebra(args.file)
    B = booleanise(S)
    out.say(f"A_∞ = component {S.index.name(S.top)} ({B.quotient.atom_count} atoms, {B.quotient.size} elements)")
    classes = {}
    for c, cls in enumerate(B.classes):
        names = [dec.name(dec.id_of(x)) for x in cls]
        classes[B.class_name(c)] = names
        out.say(f"[{B.class_name(c)}] = {{{', '.join(names)}}}")
    trivial = is_trivial_booleanisation(S)
    upsets, single = class_structure(B)
    out.say(f"trivial: {str(trivial).lower()}; classes meet up-sets: {str(upsets).lower()}; "
            f"one element per index: {str(single).lower()}")
    out.data.update(top=S.index.name(S.top), classes=classes, trivial=trivial,
                    upsets=upsets, one_per_index=single)


def cmd_check_state(args, out: Outcome) -> None:
    S, dec, table, weights = _load_state(args.system, args.state)
    direct = check_state_direct(dec, table)
    comp = check_state_componentwise(S, weights)
    out.data.update(valid=direct.valid, faithful=direct.faithful,
                    componentwise_valid=comp.valid, componentwise_faithful=comp.faithful,
                    violations=[str(v) for v in direct.violations + comp.violations])
    if (direct.valid, direct.faithful) != (comp.valid, comp.faithful):
        out.fail("direct and componentwise validation disagree")
        return
    if not direct.valid:
        out.fail("invalid: " + "; ".join(str(v) for v in direct.violations + comp.violations))
        return
    out.say("valid, faithful" if direct.faithful else "valid, not faithful")
    if args.alt:
        cert = alt_state_equivalence(dec, seed=args.seed)
        out.data["alt"] = vars(cert)
        line = (f"alternative notion: forward {cert.forward_holds} on {cert.forward_checked} tables, "
                f"backward {cert.backward_holds} on {cert.backward_checked} tables")
        (out.say if cert.forward_holds and cert.backward_holds else out.fail)(line)


def cmd_phi(args, out: Outcome) -> None:
    S, dec, table, _ = _load_state(args.system, args.state)
    if _valid_state(out, dec, table) is None:
        return
    m = phi(dec, table)
    top = S.top_algebra
    pairs = {top.atom_name(t): _q(w) for t, w in enumerate(m.weights)}
    out.say("top-measure: " + ", ".join(f"{k}={v}" for k, v in pairs.items()))
    ok = integral_representation_check(dec, table)
    (out.say if ok else out.fail)(f"atom-sum representation: {'holds' if ok else 'fails'}")
    out.data.update(weights=pairs, representation=ok)


def cmd_phi_inverse(args, out: Outcome) -> None:
    S, dec = _load_algebra(args.system)
    try:
        m = measure_from_doc(read(args.measure), S)
        s = phi_inverse(S, m)
    except IBSLError as exc:
        if isinstance(exc, DocumentError):
            raise
        out.fail(f"no state: {exc}")
        return
    table = s.table(dec)
    report = check_state_direct(dec, table)
    for a in range(dec.size):
        out.say(f"s({dec.name(a)}) = {_q(table[a])}")
    (out.say if report.valid else out.fail)("valid, faithful" if report.faithful else
                                             "valid, not faithful" if report.valid else "invalid")
    out.data.update(values={dec.name(a): _q(table[a]) for a in range(dec.size)},
                    valid=report.valid, faithful=report.faithful)


def cmd_faithful(args, out: Outcome) -> None:
    S, dec, table, _ = _load_state(args.system, args.state)
    s = _valid_state(out, dec, table)
    if s is None:
        return
    diag = faithful_diagnosis(dec, s)
    out.say(f"faithful: {str(diag.faithful).lower()}; regular restrictions: "
            f"{str(diag.regular_restrictions).lower()}; injective homs: {str(diag.injective_homs).lower()}")
    out.data.update(diag._asdict())
    if not diag.faithful:
        out.ok = False


def cmd_metric(args, out: Outcome) -> None:
    S, dec, table, _ = _load_state(args.system, args.state)
    if _valid_state(out, dec, table) is None:
        return
    space = pseudometric(dec, table)
    names = [dec.name(a) for a in range(dec.size)]
    width = max(len(n) for n in names)
    out.say(" " * width + " " + " ".join(n.rjust(5) for n in names))
    for a in range(dec.size):
        out.say(names[a].rjust(width) + " " + " ".join(_q(v).rjust(5) for v in space.d[a]))
    metric = is_metric(space)
    out.say("pseudometric axioms verified on all pairs and triples")
    out.say(f"metric: {str(metric).lower()}")
    out.data.update(distances={names[a]: {names[b]: _q(space.d[a][b]) for b in range(dec.size)}
                               for a in range(dec.size)}, metric=metric)


def cmd_quotient(args, out: Outcome) -> None:
    S, dec, table, _ = _load_state(args.system, args.state)
    if _valid_state(out, dec, table) is None:
        return
    space = pseudometric(dec, table)
    cert = kolmogorov_quotient(space)
    classes = [[dec.name(a) for a in cls] for cls in cert.classes]
    for cls in classes:
        out.say("{" + ", ".join(cls) + "}")
    out.say(f"{len(classes)} classes; hypotheses met: {str(cert.hypotheses_met).lower()}; "
            f"equal to Booleanisation classes: {str(cert.equals_booleanisation).lower()}")
    out.data.update(classes=classes, hypotheses_met=cert.hypotheses_met,
                    equals_booleanisation=cert.equals_booleanisation)


def cmd_topology(args, out: Outcome) -> None:
    S, dec, table, _ = _load_state(args.system, args.state)
    if _valid_state(out, dec, table) is None:
        return
    space = pseudometric(dec, table)
    rep = topology_report(space)
    sigma = make_section(dec)
    sec = verify_section(space, sigma)
    b = lambda v: "skipped" if v is None else str(v).lower()  # noqa: E731
    out.say(f"hypotheses met: {b(rep.hypotheses_met)}")
    out.say(f"opens: {rep.open_count}; saturated: {b(rep.saturated)}; π open: {b(rep.pi_open)}; "
            f"π closed: {b(rep.pi_closed)}")
    line = f"interior preserving: {b(rep.interior_preserving)} ({rep.interior_method})"
    if rep.interior_witness is not None:
        line += "; witness {" + ", ".join(dec.name(a) for a in rep.witness_ids(rep.interior_witness)) + "}"
    out.say(line)
    out.say(f"singleton fibers: {b(rep.fibers_singleton)}")
    out.say(f"regular opens: {rep.reg_size}; isomorphic to those of A_∞: {b(rep.reg_isomorphic)}")
    out.say(f"section: π∘σ = id {b(sec.pi_sigma_identity)}, continuous {b(sec.continuous)}, "
            f"dense {b(sec.dense)}, state preserved {b(sec.state_preserved)}; "
            f"{section_count(dec)} sections in total")
    data = {k: v for k, v in vars(rep).items()}
    data["interior_witness"] = [dec.name(a) for a in rep.witness_ids(rep.interior_witness)]
    data["singleton_witness"] = [dec.name(a) for a in rep.witness_ids(rep.singleton_witness)]
    data["skipped"] = list(rep.skipped)
    data["section"] = vars(sec)
    if rep.hypotheses_met:
        u = state_uniqueness_check(space, sigma)
        out.say(f"continuous extensions of Φ(s) along σ: {u.extensions}; equals s: {b(u.equals_state)}")
        data["extensions"] = u.extensions
        if not (sec.ok and u.extensions == 1 and u.equals_state and rep.reg_isomorphic is not False
                and rep.saturated is not False):
            out.ok = False
    for s in rep.skipped:
        out.say(f"skipped: {s}")
    out.data.update(data)


def cmd_count(args, out: Outcome) -> None:
    if args.nd:
        r = n_d(*args.nd)
        out.say(f"N_d = {r.value} (chain {r.chain_factor} × forests {r.forest_count})")
        out.data.update(n=r.n, k=r.k, value=r.value, chain=r.chain_factor, forests=r.forest_count)
    elif args.forests is not None:
        v = forests(args.forests)
        out.say(f"a({args.forests}) = {v}")
        out.data.update(m=args.forests, value=v)
    else:
        c = chain_factor(*args.chain)
        out.say(f"chain factor = {c.enumerated} (enumerated) = {c.binomial} (binomial)")
        out.data.update(enumerated=c.enumerated, binomial=c.binomial)


def cmd_enumerate(args, out: Outcome) -> None:
    e = enumerate_inclusive(args.n, args.k)
    for s in e.structures:
        L = s.system.index
        order = ", ".join(f"{L.name(i)}<{L.name(j)}" for i, j in L.covers())
        out.say(f"labels {list(s.labels)}: {order}")
    line = f"{e.count} isomorphism classes; formula gives {e.formula}"
    (out.say if e.agrees else out.fail)(line + ("" if e.agrees else " (disagreement)"))
    out.data.update(count=e.count, formula=e.formula, agrees=e.agrees,
                    structures=[list(s.labels) for s in e.structures])


def cmd_generate(args, out: Outcome) -> None:
    rng = random.Random(args.seed)
    S = random_system(rng, injective=True if args.injective else None)
    text = print_document(from_system(S, f"random{args.seed}"))
    out.say(text.rstrip())
    out.data["document"] = text


# -- argument parsing ----------------------------------------------------------

def _cap(text: str) -> tuple[str, int]:
    name, sep, value = text.partition("=")
    if not sep or not value.isdigit() or name not in config.Caps.__dataclass_fields__:
        raise argparse.ArgumentTypeError(
            f"expected name=value with name in {', '.join(config.Caps.__dataclass_fields__)}")
    return name, int(value)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ibsl", description="Finite involutive bisemilattices, exactly.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0, help="seed for randomised checks")
    p.add_argument("--cap", type=_cap, action="append", default=[], metavar="NAME=VALUE",
                   help="override an enumeration cap (repeatable)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, *files, **kw):
        sp = sub.add_parser(name, **kw)
        for f in files:
            sp.add_argument(f)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "file", help="check a system or raw algebra")
    add("decompose", cmd_decompose, "file", help="recover the direct system of an algebra").add_argument(
        "--emit", action="store_true", help="also print the recovered system document")
    add("sum", cmd_sum, "file", help="print the Płonka sum of a system as a raw document")
    add("booleanise", cmd_booleanise, "file", help="classes and projection of the Booleanisation")
    add("check-state", cmd_check_state, "system", "state", help="validate a state both ways").add_argument(
        "--alt", action="store_true", help="also test the alternative additivity notion")
    add("phi", cmd_phi, "system", "state", help="transport a state to the top component")
    add("phi-inverse", cmd_phi_inverse, "system", "measure", help="state induced by a top measure")
    add("faithful", cmd_faithful, "system", "state", help="faithfulness diagnosis")
    add("metric", cmd_metric, "system", "state", help="distance table of the state pseudometric")
    add("quotient", cmd_quotient, "system", "state", help="Kolmogorov quotient classes")
    add("topology", cmd_topology, "system", "state", help="quotient topology report")
    c = add("count", cmd_count, help="counting formulas")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--nd", type=int, nargs=2, metavar=("N", "K"))
    g.add_argument("--forests", type=int, metavar="M")
    g.add_argument("--chain", type=int, nargs=2, metavar=("N", "H"))
    e = add("enumerate", cmd_enumerate, help="enumerate inclusive systems")
    e.add_argument("n", type=int)
    e.add_argument("k", type=int)
    add("generate", cmd_generate, help="print a random system document").add_argument(
        "--injective", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Outcome()
    saved = config.get_caps()
    try:
        if args.cap:
            config.set_caps(**dict(args.cap))
        args.func(args, out)
    except (DocumentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IBSLError as exc:
        out.fail(f"{type(exc).__name__}: {exc}")
    finally:
        config.set_caps(**vars(saved))
    if args.format == "json":
        payload = {"command": args.command, "ok": out.ok, "report": out.lines, **out.data}
        print(json.dumps(payload, indent=2, ensure_ascii=False, default=str))
    else:
        print("\n".join(out.lines))
    return 0 if out.ok else 1


if __name__ == "__main__":
    sys.exit(main())
