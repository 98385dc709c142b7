from fractions import Fraction as F
from itertools import product

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from fractalsum.cloud import BudgetExceeded, PointCloud, minkowski_sum
from fractalsum.exact import OrthoMatrix, matvec, point
from fractalsum.ifs import (
    DigitSet,
    HomogeneousIFS,
    SSCStatus,
    difference_digits,
    load_ifs,
    prefix_points,
    similarity_dimension,
    ssc_check,
    translation_intersection_digits,
)
from fractalsum.subset import grid_box_count

from conftest import ORTHO_2D


def digits(*xs):
    return DigitSet(tuple(point(x) if not isinstance(x, tuple) else point(*x) for x in xs))


def test_difference_digits_examples():
    assert difference_digits(digits(0, "2/3")).digits == tuple(point(x) for x in ("-2/3", 0, "2/3"))
    assert difference_digits(digits(0, 1, 3)).digits == tuple(point(x) for x in range(-3, 4))
    assert difference_digits(digits((0, 0), (1, 0))).digits == (point(-1, 0), point(0, 0), point(1, 0))


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=2, max_size=6, unique=True))
def test_difference_digits_invariants(pts):
    D = digits(*pts)
    diff = set(difference_digits(D).digits)
    assert len(diff) <= len(D) ** 2 - len(D) + 1
    assert diff == {tuple(-c for c in p) for p in diff}
    assert point(0, 0) in diff


def test_digit_set_needs_two():
    with pytest.raises(ValueError):
        digits(1, 1)


def test_prefix_points_examples(cantor):
    assert prefix_points(cantor, 2).points == tuple(point(x) for x in (0, "2/9", "2/3", "8/9"))
    assert prefix_points(cantor, 0).points == (point(0),)
    ifs = HomogeneousIFS.simple("1/5", ["0", "4/5"])
    assert prefix_points(ifs, 1).points == (point(0), point("4/5"))


def test_prefix_budget(cantor):
    with pytest.raises(BudgetExceeded) as exc:
        prefix_points(cantor, 12, cap=1000)
    assert exc.value.required == 4096


def test_prefix_points_2d_recursion_against_levels():
    # independent route: depth-n prefix is the sumset of the per-position digit images
    ifs = HomogeneousIFS(F(1, 3), OrthoMatrix.rotation("3/5", "4/5"), digits((0, 0), (1, 0), (0, 1)))
    for n in range(4):
        levels = [PointCloud.from_points([matvec(ifs.linear_power(k), b) for b in ifs.digits]) for k in range(n)]
        expected = minkowski_sum(levels) if levels else PointCloud.origin(2)
        assert prefix_points(ifs, n) == expected


def _brute_prefix(ifs, n):
    out = set()
    for w in product(ifs.digits.digits, repeat=n):
        p = (F(0),) * ifs.dimension
        for k, b in enumerate(w):
            p = tuple(a + c for a, c in zip(p, matvec(ifs.linear_power(k), b)))
        out.add(p)
    return tuple(sorted(out))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(ORTHO_2D), st.integers(2, 5),
       st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size=2, max_size=3, unique=True),
       st.integers(0, 4))
def test_prefix_points_match_brute_force(ortho, q, pts, n):
    ifs = HomogeneousIFS(F(1, q), ortho, digits(*pts))
    assert prefix_points(ifs, n).points == _brute_prefix(ifs, n)


def test_self_similar_recursion(cantor):
    for n in range(5):
        nxt = prefix_points(cantor, n + 1)
        scaled = prefix_points(cantor, n).transform(cantor.linear)
        union = set()
        for b in cantor.digits:
            union |= set(scaled.translate(b).points)
        assert nxt.points == tuple(sorted(union))


def test_prefix_cardinality_under_ssc():
    for ifs in [HomogeneousIFS.simple("1/3", ["0", "2/3"]), HomogeneousIFS.simple("1/7", ["0", "3/7", "6/7"])]:
        assert ssc_check(ifs).holds
        for n in range(7):
            assert len(prefix_points(ifs, n)) == ifs.m**n


def test_prefix_tail_bound(cantor):
    assert prefix_points(cantor, 3).tail_radius_sq == F(1, 3**6)


def test_ssc_examples(cantor):
    assert ssc_check(cantor, 4).status is SSCStatus.HOLDS
    v = ssc_check(HomogeneousIFS.simple("1/5", ["-4/5", "0", "4/5"]), 2)
    assert v.status is SSCStatus.HOLDS and v.depth <= 2
    v = ssc_check(HomogeneousIFS.simple("1/2", ["0", "1/2"]), 3)
    assert v.status is SSCStatus.FAILS
    assert v.witness["point"] == "(1/2)"


def test_ssc_cantor_difference_not_separated(cantor):
    v = ssc_check(cantor.difference_ifs(), 4)
    assert v.status is SSCStatus.FAILS
    assert v.witness["point"] in {"(-1/3)", "(1/3)"}


def test_ssc_coinciding_maps():
    # 1/3 + 0 and 0 + 1/3 * 1: words "21" ... digits {0,1/3,1} with ratio 1/3 overlap exactly
    ifs = HomogeneousIFS.simple("1/3", ["0", "1/9", "1/3", "4/9"])
    assert ssc_check(ifs, 3).status is SSCStatus.FAILS


def test_ssc_unknown_when_probe_too_shallow():
    # separated, but gaps are too small for the outer-ball test at depth 1
    ifs = HomogeneousIFS.simple("2/5", ["0", "3/5"])
    shallow = ssc_check(ifs, 1)
    assert shallow.status is SSCStatus.UNKNOWN
    assert ssc_check(ifs, 8).status is SSCStatus.HOLDS


def test_ssc_two_dimensional():
    ifs = HomogeneousIFS(F(1, 4), OrthoMatrix.rotation(0, 1), digits((0, 0), (1, 0), (0, 1)))
    assert ssc_check(ifs, 4).holds


def test_similarity_dimension_examples(cantor):
    mpmath.mp.dps = 40
    assert abs(float(similarity_dimension(cantor)) - 0.63093) < 1e-5
    assert abs(float(similarity_dimension(HomogeneousIFS.simple("1/5", ["0", "4/5"]))) - 0.43068) < 1e-5
    assert similarity_dimension(HomogeneousIFS.simple("1/3", ["0", "1/3", "2/3"])).value == 1
    # box-count cross-check at depth 10: one occupied cell per cylinder
    grid = grid_box_count(prefix_points(cantor, 10), F(1, 3**10))
    assert abs(float(grid.estimate) - float(similarity_dimension(cantor))) < 1e-12


def test_translation_intersection_examples():
    D = digits(0, "2/3")
    assert translation_intersection_digits(D, [point(0)] * 3) == [tuple(D.digits)] * 3
    assert translation_intersection_digits(D, [point("2/3")]) == [(point("2/3"),)]
    assert translation_intersection_digits(D, [point("-2/3")]) == [(point(0),)]
    with pytest.raises(ValueError):
        translation_intersection_digits(D, [point("1/3")])


def test_ifs_json_round_trip(tmp_path):
    ifs = HomogeneousIFS(F(1, 4), OrthoMatrix.rotation("3/5", "4/5"), digits((0, 0), (1, "1/2")), True)
    data = ifs.to_json()
    assert data["ratio"] == "1/4" and data["digits"] == ["(0,0)", "(1,1/2)"]
    path = tmp_path / "ifs.json"
    import json
    path.write_text(json.dumps(data))
    assert load_ifs(path) == ifs
    nested = dict(data, ortho=[["3/5", "-4/5"], ["4/5", "3/5"]])
    assert load_ifs(nested) == ifs


def test_normalization_records_translation():
    ifs = HomogeneousIFS.simple("1/3", ["1", "5/3"])
    norm, t = ifs.normalized()
    assert norm.digits.digits == (point(0), point("2/3")) and t == point(-1)
    assert norm.normalized_zero_digit
