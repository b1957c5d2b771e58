import random
from itertools import product

import pytest

from ibsl import docformat
from ibsl.catalog import golden_text
from ibsl.config import caps_override
from ibsl.errors import CapacityExceeded, InvalidSystem, MalformedElement, NotIBSL
from ibsl.finbool import BooleanAlgebra, BooleanHom
from ibsl.generators import permute_raw
from ibsl.plonka import (
    PlonkaElement,
    RawAlgebra,
    check_absorption,
    check_boolean,
    check_ibsl,
    check_partition_function,
    decompose,
    find_isomorphism,
    injectivity_quasi_identity,
    is_injective_ibsl,
    is_ngib,
    ngib_quasi_identity,
    partition_apply,
    plonka_eval,
    plonka_sum,
    raw_boolean,
    raw_from_system_transport,
    single_component,
    systems_isomorphic,
    validate_system,
)
from ibsl.semilattice import chain, from_order

from conftest import generated_systems


def ex22_oracle():
    """Tables of the six-element algebra read off its Hasse diagram."""
    names = ["0", "1", "a", "a'", "b", "b'"]
    ix = {n: k for k, n in enumerate(names)}
    cover = [("0", "a"), ("0", "a'"), ("a", "1"), ("a'", "1"), ("1", "b"), ("a'", "b'"), ("b'", "b")]
    le = {(x, x) for x in names} | set(cover)
    changed = True
    while changed:
        changed = False
        for (x, y), (u, v) in product(list(le), repeat=2):
            if y == u and (x, v) not in le:
                le.add((x, v))
                changed = True

    def lub(x, y):
        ubs = [z for z in names if (x, z) in le and (y, z) in le]
        least = [z for z in ubs if all((z, w) in le for w in ubs)]
        assert len(least) == 1
        return least[0]

    swap = {"0": "1", "1": "0", "a": "a'", "a'": "a", "b": "b'", "b'": "b"}
    join = [[ix[lub(x, y)] for y in names] for x in names]
    neg = [ix[swap[x]] for x in names]
    meet = [[neg[join[neg[x]][neg[y]]] for y in range(6)] for x in range(6)]
    return RawAlgebra(join, meet, neg, ix["0"], ix["1"], tuple(names))


def el(dec, name):
    return dec.raw.names.index(name)


def test_diamond_values(diamond, diamond_sum):
    D = diamond_sum
    a, b, ap = el(D, "a"), el(D, "b"), el(D, "a'")
    assert D.name(D.raw.join[a][b]) == "d'"
    assert D.name(D.raw.meet[a][ap]) == "0_i"
    assert D.name(partition_apply(D.raw, a, el(D, "1_k"))) == "c"
    assert D.size == 18


def test_diamond_plonka_eval(diamond):
    a = diamond.element_by_name("a")
    b = diamond.element_by_name("b")
    assert diamond.element_name(plonka_eval(diamond, "join", a, b)) == "d'"
    assert plonka_eval(diamond, "zero") == PlonkaElement(0, 0)
    assert plonka_eval(diamond, "one") == PlonkaElement(0, 1)
    with pytest.raises(MalformedElement):
        plonka_eval(diamond, "join", a)
    with pytest.raises(MalformedElement):
        plonka_eval(diamond, "complement", (5, 0))


def test_diamond_is_ibsl_not_lattice(diamond_sum):
    R = diamond_sum.raw
    assert check_ibsl(R) is None
    assert check_absorption(R) is not None
    a, b = el(diamond_sum, "a"), el(diamond_sum, "b")
    assert R.name(R.meet[a][R.join[a][b]]) == "c"
    assert check_boolean(R) is not None


def test_absorption_least_witness(diamond_sum):
    v = check_absorption(diamond_sum.raw)
    assert v.law == "absorption"
    assert v.witness == {"x": "0", "y": "0_i"}


def test_ex22_oracle_matches_golden_and_sum():
    oracle = ex22_oracle()
    golden = docformat.to_raw(docformat.parse(golden_text("ex22.raw")))
    assert golden == oracle
    S = docformat.to_system(docformat.parse(golden_text("ex22.system")))
    dec = decompose(oracle)
    assert systems_isomorphic(dec.system, S)
    assert raw_from_system_transport(dec) == oracle


def test_ex22_decomposition():
    dec = decompose(ex22_oracle())
    S = dec.system
    assert S.index.size == 2
    assert S.components[S.bottom].size == 4 and S.components[S.top].size == 2
    lab = dec.labeling
    p = S.hom(S.bottom, S.top)
    b, bp = lab[el(dec, "b")].inner, lab[el(dec, "b'")].inner
    assert p(lab[el(dec, "a")].inner) == b
    assert p(lab[el(dec, "a'")].inner) == bp
    assert p(lab[el(dec, "0")].inner) == bp
    assert p(lab[el(dec, "1")].inner) == b
    assert not S.is_injective


def test_ex22_injectivity_witness():
    R = ex22_oracle()
    v = injectivity_quasi_identity(R)
    assert v is not None
    x, y, z = (R.names.index(v.witness[k]) for k in "xyz")
    d = R.dot
    assert x != y and d[x][y] == x and d[y][x] == y and d[x][z] == d[y][z]
    assert not is_injective_ibsl(R)


def test_boolean_algebra_is_one_component():
    for n in range(4):
        R = raw_boolean(BooleanAlgebra(n))
        assert check_boolean(R) is None
        dec = decompose(R)
        assert dec.system.index.size == 1


def test_partition_function_laws(sums):
    for D in sums[:60]:
        assert check_partition_function(D.raw) is None


def test_decompose_rejects_non_ibsl(diamond_sum):
    R = diamond_sum.raw
    join = [list(r) for r in R.join]
    a, b = el(diamond_sum, "a"), el(diamond_sum, "b")
    join[a][b] = a
    bad = RawAlgebra(join, R.meet, R.neg, R.zero, R.one, R.names)
    with pytest.raises(NotIBSL) as exc:
        decompose(bad)
    assert exc.value.violation.law == "I2"


def test_raw_malformed():
    with pytest.raises(MalformedElement):
        RawAlgebra([[0]], [[0]], [], 0, 0)
    with pytest.raises(MalformedElement):
        RawAlgebra([[0, 2], [1, 1]], [[0, 0], [0, 1]], [1, 0], 0, 1)


def test_carrier_cap(diamond):
    with caps_override(carrier=10):
        with pytest.raises(CapacityExceeded):
            plonka_sum(diamond)


def test_validate_system_violations():
    L = chain(2, ["i0", "j"])
    A, B = BooleanAlgebra(2), BooleanAlgebra(1)
    with pytest.raises(InvalidSystem) as exc:
        validate_system(L, [A, B], {})
    assert exc.value.violation.law == "MissingHom"
    with pytest.raises(InvalidSystem) as exc:
        validate_system(L, [A], {})
    assert exc.value.violation.law == "ComponentCount"
    with pytest.raises(InvalidSystem) as exc:
        validate_system(L, [A, B], {(1, 0): BooleanHom(B, A, (0, 0))})
    assert exc.value.violation.law == "UnexpectedHom"
    with pytest.raises(InvalidSystem) as exc:
        validate_system(L, [A, B], {(0, 1): BooleanHom(A, B, (0,)), (0, 0): BooleanHom(A, A, (1, 0))})
    assert exc.value.violation.law == "NotIdentityOnDiagonal"


def test_broken_coherence_witness():
    L = from_order(4, [(0, 1), (0, 2), (1, 3), (2, 3)], ["i0", "i", "j", "k"])
    A = [BooleanAlgebra(2), BooleanAlgebra(2), BooleanAlgebra(2), BooleanAlgebra(2)]
    ident = (0, 1)
    swap = (1, 0)
    homs = {(0, 1): BooleanHom(A[0], A[1], ident), (0, 2): BooleanHom(A[0], A[2], ident),
            (1, 3): BooleanHom(A[1], A[3], ident), (2, 3): BooleanHom(A[2], A[3], ident),
            (0, 3): BooleanHom(A[0], A[3], swap)}
    with pytest.raises(InvalidSystem) as exc:
        validate_system(L, A, homs)
    v = exc.value.violation
    assert v.law == "BrokenCoherence" and v.witness["k"] == 3 and v.witness["i"] == 0


def test_sum_axioms_generated(sums):
    for D in sums:
        assert check_ibsl(D.raw) is None


def test_round_trip_generated(systems, sums):
    for S, D in zip(systems, sums):
        dec = decompose(D.raw)
        assert systems_isomorphic(dec.system, S)
        assert raw_from_system_transport(dec) == D.raw


def test_decompose_after_permutation(sums):
    rng = random.Random(11)
    for D in sums[:50]:
        perm = list(range(D.size))
        rng.shuffle(perm)
        R = permute_raw(D.raw, perm)
        dec = decompose(R)
        assert systems_isomorphic(dec.system, D.system)
        assert raw_from_system_transport(dec) == R


def test_isomorphism_is_genuine(systems):
    for S in systems[:40]:
        dec = decompose(plonka_sum(S).raw)
        perm, atom_maps = find_isomorphism(S, dec.system)
        T = dec.system
        for i, j in S.index.comparable_pairs():
            ds, dt = S.hom(i, j).dual, T.hom(perm[i], perm[j]).dual
            assert all(atom_maps[i][ds[t]] == dt[atom_maps[j][t]] for t in range(len(ds)))


def test_non_isomorphic_detected():
    L = chain(2)
    A, B = BooleanAlgebra(1), BooleanAlgebra(2)
    S = validate_system(L, [A, B], {(0, 1): BooleanHom(A, B, (0, 0))})
    T = validate_system(L, [B, B], {(0, 1): BooleanHom(B, B, (0, 1))})
    assert not systems_isomorphic(S, T)
    assert systems_isomorphic(S, S)


def element_level_injective(S):
    for (i, j), h in S.homs.items():
        imgs = [h(a) for a in S.components[i].elements()]
        if len(set(imgs)) != len(imgs):
            return False
    return True


def test_injectivity_quasi_identity_matches_homs(sums):
    for D in sums:
        qi = injectivity_quasi_identity(D.raw) is None
        assert qi == element_level_injective(D.system) == D.system.is_injective


def test_ngib_matches_trivial_components(sums):
    for D in sums:
        if D.size == 1:
            continue
        assert is_ngib(D) == (not D.system.has_trivial_component)
        assert (ngib_quasi_identity(D.raw) is None) == (not D.system.has_trivial_component)


def test_one_element_algebra_is_vacuously_ngib():
    D = plonka_sum(single_component(BooleanAlgebra(0)))
    assert D.size == 1 and is_ngib(D)


def test_generated_family_has_variety():
    S = generated_systems()
    assert any(s.is_injective for s in S) and any(not s.is_injective for s in S)
    assert any(s.has_trivial_component for s in S)
    assert any(s.index.size == 4 for s in S)
    assert all(s.index.size <= 4 and all(c.atom_count <= 3 for c in s.components) for s in S)
