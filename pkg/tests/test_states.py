import random
from fractions import Fraction as F

import pytest

from ibsl.catalog import DIAMOND_STATE_WEIGHTS
from ibsl.errors import InvalidState, TrivialComponent
from ibsl.finbool import Measure
from ibsl.generators import random_measure
from ibsl.states import (
    ALPHA,
    alt_extension,
    alt_state_equivalence,
    carries_state,
    check_alt_state,
    check_state_componentwise,
    check_state_direct,
    componentwise_table,
    convex_combination,
    faithful_diagnosis,
    integral_representation_check,
    is_faithful,
    phi,
    phi_inverse,
    restricts_to_measure,
    state_from_components,
    state_from_table,
    state_space_vertices,
)

WEIGHTS = [DIAMOND_STATE_WEIGHTS[k] for k in ("i0", "i", "j", "k")]


def test_reference_state_direct(diamond_sum, diamond_state_table):
    r = check_state_direct(diamond_sum, diamond_state_table)
    assert r.valid and r.faithful and not r.violations


def test_reference_state_componentwise(diamond, diamond_sum, diamond_state_table):
    r = check_state_componentwise(diamond, WEIGHTS)
    assert r.valid and r.faithful
    assert componentwise_table(diamond_sum, WEIGHTS) == diamond_state_table


def test_phi_of_reference(diamond_sum, diamond_state_table):
    assert phi(diamond_sum, diamond_state_table).weights == (F(1, 2), F(1, 6), F(1, 3))
    assert integral_representation_check(diamond_sum, diamond_state_table)


def test_state_objects_agree(diamond, diamond_sum, diamond_state_table):
    s1 = state_from_table(diamond_sum, diamond_state_table)
    s2 = state_from_components(diamond, WEIGHTS)
    assert s1 == s2
    assert s1.table(diamond_sum) == diamond_state_table
    assert s1.component_weights() == WEIGHTS


def test_broken_additivity(diamond_sum, diamond_state_table):
    t = list(diamond_state_table)
    names = diamond_sum.raw.names
    t[names.index("d'")] = F(4, 5)
    t[names.index("d")] = F(1, 5)
    r = check_state_direct(diamond_sum, t)
    assert not r.valid and r.violations[0].law == "Additivity"
    with pytest.raises(InvalidState):
        state_from_table(diamond_sum, t)


def test_bad_unit_and_range(diamond_sum, diamond_state_table):
    t = list(diamond_state_table)
    t[diamond_sum.raw.one] = F(1, 2)
    assert "Unit" in {v.law for v in check_state_direct(diamond_sum, t).violations}
    t = list(diamond_state_table)
    t[0] = F(-1)
    assert "Range" in {v.law for v in check_state_direct(diamond_sum, t).violations}


def test_preservation_failure(diamond):
    w = list(WEIGHTS)
    w[1] = (F(1, 3), F(2, 3))
    r = check_state_componentwise(diamond, w)
    assert not r.valid and r.violations[0].law == "Preservation"
    assert r.violations[0].witness["a"] == "a"


def test_routes_agree_on_random_tables(sums):
    rng = random.Random(21)
    for dec in sums[:80]:
        S = dec.system
        for _ in range(3):
            ws = []
            for comp in S.components:
                if comp.is_trivial:
                    ws.append(())
                else:
                    ws.append(random_measure(rng, comp, zero_rate=0.3, denominator=3).weights)
            direct = check_state_direct(dec, componentwise_table(dec, ws))
            comp = check_state_componentwise(S, ws)
            assert direct.valid == comp.valid
            if direct.valid:
                assert direct.faithful == comp.faithful


def test_routes_agree_on_genuine_states(sums):
    rng = random.Random(22)
    for dec in sums:
        S = dec.system
        if S.has_trivial_component:
            continue
        s = phi_inverse(S, random_measure(rng, S.top_algebra, zero_rate=0.3))
        direct = check_state_direct(dec, s)
        comp = check_state_componentwise(S, s.component_weights())
        assert direct.valid and comp.valid
        assert direct.faithful == comp.faithful == is_faithful(dec, s)


def test_phi_round_trip(sums):
    rng = random.Random(23)
    for dec in sums:
        S = dec.system
        if S.has_trivial_component:
            continue
        m = random_measure(rng, S.top_algebra, zero_rate=0.2)
        s = phi_inverse(S, m)
        assert phi(dec, s) == m
        assert phi_inverse(S, phi(dec, s)) == s
        assert check_state_direct(dec, s).valid


def test_state_exists_iff_no_trivial_component(sums):
    for dec in sums:
        S = dec.system
        exists, witness = carries_state(S)
        assert exists == (not S.has_trivial_component)
        if exists:
            assert check_state_direct(dec, witness).valid
        else:
            with pytest.raises(TrivialComponent):
                phi_inverse(S, None)


def test_faithful_iff_regular_and_injective(sums):
    rng = random.Random(24)
    seen = set()
    for dec in sums:
        S = dec.system
        if S.has_trivial_component:
            continue
        for zr in (0.0, 0.4):
            s = phi_inverse(S, random_measure(rng, S.top_algebra, zero_rate=zr))
            d = faithful_diagnosis(dec, s)
            assert d.faithful == (d.regular_restrictions and d.injective_homs)
            seen.add(d)
    assert len({d.faithful for d in seen}) == 2


def test_faithful_means_regular_top(injective_faithful):
    for dec, m in injective_faithful:
        s = phi_inverse(dec.system, m)
        assert is_faithful(dec, s) and m.is_regular


def test_vertices_and_mixtures(diamond, diamond_sum):
    vs = state_space_vertices(diamond)
    assert len(vs) == 3
    s = convex_combination(diamond, [F(1, 2), F(1, 6), F(1, 3)])
    assert s.top.weights == (F(1, 2), F(1, 6), F(1, 3))
    assert check_state_direct(diamond_sum, s).valid


def test_integral_representation_generated(sums):
    rng = random.Random(25)
    for dec in sums:
        S = dec.system
        if S.has_trivial_component:
            continue
        s = phi_inverse(S, random_measure(rng, S.top_algebra))
        assert integral_representation_check(dec, s)


def test_alt_extension_satisfies_condition(sums):
    rng = random.Random(26)
    for dec in sums:
        A0 = dec.system.components[dec.system.bottom]
        if A0.is_trivial:
            continue
        m0 = random_measure(rng, A0)
        t = alt_extension(dec, m0)
        assert check_alt_state(dec, t) is None
        assert restricts_to_measure(dec, t)


def test_genuine_states_satisfy_alt(sums):
    rng = random.Random(27)
    for dec in sums:
        S = dec.system
        if S.has_trivial_component:
            continue
        s = phi_inverse(S, random_measure(rng, S.top_algebra, zero_rate=0.3))
        assert check_alt_state(dec, s) is None


def test_alt_rejects_bad_unit(diamond_sum):
    t = list(alt_extension(diamond_sum, Measure.uniform(diamond_sum.system.components[0])))
    t[diamond_sum.raw.one] = F(1, 2)
    v = check_alt_state(diamond_sum, t)
    assert v is not None and v.law == "Unit"


def test_alt_extension_is_not_a_state(diamond_sum):
    t = alt_extension(diamond_sum, Measure.uniform(diamond_sum.system.components[0]))
    assert ALPHA == F(37, 100)
    assert not check_state_direct(diamond_sum, t).valid


def test_alt_equivalence_certificate(sums):
    for dec in sums[:40]:
        c = alt_state_equivalence(dec, seed=1)
        assert c.forward_holds and c.backward_holds
