import math
import random

import pytest

from adehodge.defect import RankResult
from adehodge.errors import AssumptionViolated, UnsupportedCover, UnsupportedFiberTopology
from adehodge.hodge import (
    CohomologyInputs,
    CoverSpec,
    HodgeReport,
    cover_h12_constant,
    euler_check,
    hodge_big_cover,
    hodge_big_general,
    hodge_small,
    path_independence_check,
    small_big_conversion,
)
from adehodge.singular import A


def test_big_general_p4_specialization():
    rng = random.Random(8)
    for _ in range(20):
        d = rng.randint(3, 8)
        mu = rng.randint(0, 30)
        rank = rng.randint(0, mu)
        dim_v = math.comb(2 * d - 1, 4) - rank
        rep = hodge_big_general(CohomologyInputs.projective_p4(d), mu, mu - rank)
        assert rep.h11 == 1 + 2 * mu + dim_v - math.comb(2 * d - 1, 4)
        assert rep.h12 == dim_v - 5 * math.comb(d, 4)


def test_big_general_trivial_cases():
    assert hodge_big_general(CohomologyInputs.projective_p4(5), 0, 0).h12 == 101
    assert hodge_big_general(CohomologyInputs(h1_Omega=1), 0, 0).h11 == 1
    with pytest.raises(AssumptionViolated):
        hodge_big_general(CohomologyInputs(h2_OX=1), 0, 0)
    assert hodge_big_general(CohomologyInputs(h2_OX=1), 0, 0, want_h12=False).h12 is None
    with pytest.raises(ValueError):
        CohomologyInputs(h0_Y_K=-1)


def test_big_cover_constants():
    assert hodge_big_cover(CoverSpec(8, 2), 0).h12 == 149
    assert hodge_big_cover(CoverSpec(6, 3), 0).h12 == 103
    assert hodge_big_cover(CoverSpec(6, 3, {"A2": 30}), 40).h11 == 161
    with pytest.raises(UnsupportedCover):
        CoverSpec(7, 2)
    with pytest.raises(UnsupportedCover):
        hodge_big_cover(CoverSpec(6, 3, {"A3": 1}), 0)


def test_big_cover_h3():
    assert hodge_big_cover(CoverSpec(8, 2), 0).h3_O == 1
    assert hodge_big_cover(CoverSpec(12, 2), 0).h3_O == math.comb(5, 3)


def test_small_examples():
    rep = hodge_small(CoverSpec(6, 3, {"A2": 30}), [25, 55])
    assert (rep.h11, rep.h12) == (11, 23)
    rep = hodge_small(CoverSpec(6, 3, {"A2": 10}), [9, 19])
    assert (rep.h11, rep.h12) == (3, 75)
    rep = hodge_small(CoverSpec(8, 2, {"A3": 64}), [RankResult(122, "numeric", True, 512)])
    assert (rep.h11, rep.h12) == (7, 27)
    with pytest.raises(UnsupportedCover):
        hodge_small(CoverSpec(8, 2, {"A2": 1}), [0])


def test_conversion_examples():
    spec = CoverSpec(6, 3, {"A2": 30})
    small = hodge_small(spec, [25, 55])
    assert small_big_conversion(spec, small).h11 == 161
    spec8 = CoverSpec(8, 2, {"A3": 64})
    small8 = hodge_small(spec8, [122])
    big8 = small_big_conversion(spec8, small8)
    assert big8.h11 == 135 and big8.h12 == small8.h12
    assert hodge_big_cover(spec8, 6).h11 == 135
    assert small_big_conversion(spec8, big8).h11 == 7
    spec0 = CoverSpec(6, 3)
    s0 = hodge_small(spec0, [0, 0])
    assert small_big_conversion(spec0, s0).h11 == s0.h11
    with pytest.raises(UnsupportedFiberTopology):
        small_big_conversion(CoverSpec(8, 2, {"A2": 1}), s0)


def test_euler_examples():
    spec = CoverSpec(6, 3, {"A2": 30})
    chk = euler_check(hodge_small(spec, [25, 55]), spec)
    assert chk["pass"] and chk["computed"] == -24
    spec8 = CoverSpec(8, 2, {"A3": 64})
    chk = euler_check(hodge_small(spec8, [122]), spec8)
    assert chk["pass"] and chk["computed"] == -40
    spec0 = CoverSpec(6, 3)
    chk = euler_check(hodge_small(spec0, [0, 0]), spec0)
    assert chk["pass"] and chk["computed"] == -204


def test_path_independence_formula_level():
    rng = random.Random(17)
    for _ in range(30):
        nu = rng.randint(0, 40)
        r4 = rng.randint(0, min(nu, 35))
        r6 = rng.randint(0, min(2 * nu, 84))
        spec = CoverSpec(6, 3, {"A2": nu})
        small = hodge_small(spec, [r4, r6])
        big = hodge_big_cover(spec, small.delta)
        assert path_independence_check(spec, small, big)["pass"]


def test_nfold_at_two_matches_double():
    rng = random.Random(21)
    for _ in range(30):
        d = 2 * rng.randint(2, 8)
        a1 = rng.randint(0, 50)
        delta = rng.randint(0, 20)
        spec = CoverSpec(d, 2, {"A1": a1})
        assert spec.branch_nodal
        double = hodge_big_cover(spec, delta)
        assert double.formula_id == "double"
        h12_nfold = cover_h12_constant(d, 2) - a1 + delta
        assert double.h12 == h12_nfold and double.h11 == 1 + a1 + delta


def test_weighted_toric_inputs_match_cover_formula():
    rng = random.Random(23)
    seen = 0
    while seen < 25:
        n = rng.randint(2, 6)
        d = n * rng.randint(1, 6)
        if d <= n:
            continue
        mu, delta = rng.randint(0, 40), rng.randint(0, 10)
        general = hodge_big_general(CohomologyInputs.weighted_cover(d, n), mu, delta)
        assert general.h12 == cover_h12_constant(d, n) - mu + delta
        assert general.h11 == 1 + mu + delta
        seen += 1


def test_report_json_round_trip():
    spec = CoverSpec(8, 2, {"A3": 64})
    rep = hodge_small(spec, [RankResult(122, "numeric", True, 512)])
    rep.checks = [euler_check(rep, spec)]
    back = HodgeReport.from_json(rep.to_json())
    assert back.to_json() == rep.to_json()
    assert {"h11", "h12", "mu", "delta", "euler", "resolution", "formula_id", "rank_inputs", "checks"} <= set(rep.to_json())


def test_lifted_inventory_mu():
    assert CoverSpec(6, 3, {"A2": 30}).mu() == 120
    assert CoverSpec(8, 4, {A(1): 3}).mu() == 6
