import json
import random
from fractions import Fraction

import pytest

from _oracles import minor_rank, random_rational_matrix
from adehodge.defect import (
    build_condition_matrix,
    build_vanishing_matrix,
    defect_double,
    defect_nfold,
    defect_triple,
    rank,
    rank_of_rows,
)
from adehodge.errors import DimensionMismatch, DivisibilityError, MissingFrame, UnsupportedSpecialization
from adehodge.gallery import _sextic30_surface, residual27_points, sextic30_points, verify_inventory
from adehodge.poly import ProjectivePoint
from adehodge.singular import A, SingularPointRecord


@pytest.fixture(scope="module")
def sextic30():
    B = _sextic30_surface()
    return B, verify_inventory(B, sextic30_points())


def test_vanishing_matrix_examples(sextic30):
    _, recs = sextic30
    M = build_vanishing_matrix(4, [r.point for r in recs])
    assert M.shape == (35, 30)
    assert rank(M).rank == 25
    empty = build_vanishing_matrix(4, [])
    assert empty.shape == (35, 0) and rank(empty).rank == 0
    two = build_vanishing_matrix(1, [ProjectivePoint([1, 0, 0, 0]), ProjectivePoint([0, 1, 0, 0])])
    assert rank(two).rank == 2
    with pytest.raises(DimensionMismatch):
        build_vanishing_matrix(2, [ProjectivePoint([1, 0, 0, 0]), ProjectivePoint([1, 0, 0])])


def test_triple_cusp_matrix(sextic30):
    B, recs = sextic30
    M = build_condition_matrix(6, recs, "triple_cusp", B)
    assert M.shape == (84, 60)
    r = rank(M)
    assert (r.rank, r.backend, r.certified) == (55, "exact", True)


def test_single_node_column():
    rec = SingularPointRecord(ProjectivePoint([1, 2, 3, 4]), A(1))
    for deg in (1, 3, 5):
        M = build_condition_matrix(deg, [rec], "double_A_chain")
        assert M.shape[1] == 1 and rank(M).rank == 1


def test_missing_frames_and_bad_specialization(sextic30):
    B, recs = sextic30
    bare = SingularPointRecord(recs[0].point, A(2))
    with pytest.raises(MissingFrame):
        build_condition_matrix(6, [bare], "triple_cusp", B)
    with pytest.raises(UnsupportedSpecialization):
        build_condition_matrix(6, recs, "bogus", B)


def test_small_rank_examples():
    assert rank_of_rows([[1, 2], [2, 4]]).rank == 1
    rng = random.Random(12)
    M = random_rational_matrix(rng, 12, 9)
    assert rank_of_rows(M).rank == minor_rank(M)


def test_exact_numeric_agree(sextic30):
    _, recs = sextic30
    M = build_vanishing_matrix(4, [r.point for r in recs])
    ex = rank(M, "exact")
    nu = rank(M, "numeric")
    assert ex.rank == nu.rank == 25
    assert nu.certified and nu.precision_used == 512


def test_residual_m4_numeric():
    pts = residual27_points()
    r = rank(build_vanishing_matrix(4, pts))
    assert (r.rank, r.backend, r.certified) == (24, "numeric", True)
    with pytest.raises(UnsupportedSpecialization):
        rank(build_vanishing_matrix(4, pts), "exact")


def test_defect_triple(sextic30):
    B, recs = sextic30
    res = defect_triple(6, recs, B)
    assert res.delta == 40
    c = res.components
    assert c["long_form"] == res.delta
    assert c["mu"] == 120 and c["rank_vanishing"] == 25 and c["rank_conditions"] == 55
    assert defect_triple(6, []).delta == 0
    with pytest.raises(DivisibilityError):
        defect_triple(8, recs, B)


def test_defect_double_small_cases():
    assert defect_double(8, []).delta == 0
    node = SingularPointRecord(ProjectivePoint([1, 0, 0, 0]), A(1))
    res = defect_double(4, [node])
    assert (res.delta, res.components["degree_conditions"], res.components["rank_conditions"]) == (0, 2, 1)


def test_defect_nfold():
    rng = random.Random(4)
    pts = [ProjectivePoint([rng.randint(-5, 5) for _ in range(4)]) for _ in range(12)]
    nodes = [SingularPointRecord(p, A(1)) for p in pts]
    for d in (4, 6, 8):
        assert defect_nfold(d, 2, nodes).delta == defect_double(d, nodes).delta
    assert defect_nfold(8, 4, []).delta == 0
    one = defect_nfold(8, 4, [ProjectivePoint([1, 2, 3, 4])])
    assert one.delta == 0
    assert sorted(k for k in one.components if k.startswith("rank_degree")) == ["rank_degree_10", "rank_degree_8"]
    with pytest.raises(DivisibilityError):
        defect_nfold(9, 2, [])


def test_dump_formats(sextic30):
    B, recs = sextic30
    M = build_condition_matrix(6, recs[:3], "triple_cusp", B)
    csv_text = M.to_csv()
    lines = csv_text.strip().splitlines()
    assert len(lines) == 85
    assert lines[0].split(",")[1:] == ["P0:value", "P0:d1/v1", "P1:value", "P1:d1/v1", "P2:value", "P2:d1/v1"]
    side = M.sidecar_json()
    assert all(all(row) for row in side["exact"])
    assert json.loads(json.dumps(side)) == side
    rr = rank(M).to_json()
    assert set(rr) == {"rank", "backend", "certified", "precision"}


def test_rank_invariance_quick(sextic30):
    B, recs = sextic30
    M = build_condition_matrix(6, recs, "triple_cusp", B)
    base = rank(M).rank
    perm = list(range(84))
    random.Random(0).shuffle(perm)
    assert rank(M.permute_rows(perm)).rank == base
    assert rank(M.with_frame_substitution(Fraction(-3, 2), Fraction(5))).rank == base
    scaled = verify_inventory(B, [r.point.rescaled(Fraction(7, 3) * (i + 1)) for i, r in enumerate(recs)])
    assert rank(build_condition_matrix(6, scaled, "triple_cusp", B)).rank == base
