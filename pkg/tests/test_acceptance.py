"""Acceptance suite: each test is one criterion, run at its stated tolerance and time limit.

A PASS/FAIL line per criterion is printed in the terminal summary (see conftest.py).
"""

import io
import json
import math
import time
from fractions import Fraction as F

import pytest

from fractalsum.cli import run
from fractalsum.exact import AffineMap, OrthoMatrix, point
from fractalsum.ifs import HomogeneousIFS, SSCStatus, prefix_points, ssc_check
from fractalsum.indexsets import ResidueClass, greedy_checkpoints, natural_numbers, partition_limsup
from fractalsum.moran import b_ell_containment, ev_params, moran_dim_estimate
from fractalsum.subset import (
    SubsetCantorSpec,
    address_boxdim_estimate,
    covering_shadow,
    grid_box_count,
    homogenization_containment,
    homogenize,
    psp_decompose,
    subset_prefix,
)
from fractalsum.cloud import minkowski_sum
from fractalsum.sumset import e_rho_n_certificate, exhaustive_translate_oracle, gamma_of, hsp_beta

LOG2_LOG3 = math.log(2) / math.log(3)


@pytest.fixture
def criterion(record_property):
    def mark(number, title):
        record_property("criterion", number)
        record_property("title", title)
    return mark


def cantor():
    return HomogeneousIFS.simple("1/3", ["0", "2/3"])


def test_criterion_01_translate_bound_exhaustive(criterion):
    criterion(1, "exhaustive translate-intersection bound, A in {0..5}, #A <= 5")
    t0 = time.perf_counter()
    verdict = exhaustive_translate_oracle(5, 1, 5)
    elapsed = time.perf_counter() - t0
    assert verdict.violations == ()
    assert verdict.sets_checked == sum(math.comb(6, s) for s in range(2, 6))
    assert verdict.cases_checked > 0
    assert elapsed < 60


def test_criterion_02_gamma_table(criterion):
    criterion(2, "gamma table and strictness up to 10^4 digits")
    g2, g3, g4 = gamma_of(2), gamma_of(3), gamma_of(4)
    assert (g2.best_product, g3.best_product, g4.best_product) == (2, 4, 6)
    # gamma(2) = log #D for two digits
    assert abs(float(g2.value) - math.log(2)) < 1e-15
    assert abs(float(g3.value) - math.log(4)) < 1e-15
    assert abs(float(g4.value) - math.log(6)) < 1e-15
    for m in range(2, 10_001):
        # full enumeration of the splits, independent of the closed form in gamma_of
        assert max(j * (m + 1 - j) for j in range(1, m + 1)) < m * m
        assert gamma_of(m).strictly_below_full


def test_criterion_03_e_family_certificate(criterion):
    criterion(3, "E_{1/5,1}: separated difference system, beta and dim to 1e-12, strict symbolically")
    t0 = time.perf_counter()
    ifs = HomogeneousIFS.simple("1/5", ["0", "4/5"])
    psi = ssc_check(ifs.difference_ifs(), probe_depth=2)
    cert = hsp_beta(ifs, probe_depth=2)
    record = e_rho_n_certificate("1/5", 1, probe_depth=2)
    elapsed = time.perf_counter() - t0
    assert psi.status is SSCStatus.HOLDS and psi.depth <= 2
    assert abs(float(cert.beta) - math.log(2) / (2 * math.log(5))) < 1e-12
    assert abs(float(cert.dim) - math.log(2) / math.log(5)) < 1e-12
    assert cert.beta_below_dim and record.verified
    assert record.exact_values["symbolic_strictness"] == "2 < 4"
    assert elapsed < 1


def test_criterion_04_psp_equality(criterion):
    criterion(4, "Cantor PSP equality: residues at depth 9, checkpoint partition at depth 20")
    t0 = time.perf_counter()
    for ell in (2, 3):
        c = psp_decompose(cantor(), ell, 9, "residues")
        assert c.verified and c.cardinalities["sum"] == c.cardinalities["K_prefix"] == 512
    c = psp_decompose(cantor(), 2, 20, "checkpoints", rounds=2)
    assert c.details["checkpoints"] == [1, 3, 10, 41]
    assert c.verified and c.cardinalities["K_prefix"] == 2**20
    elapsed = time.perf_counter() - t0
    assert elapsed < 30


def test_criterion_05_checkpoints(criterion):
    criterion(5, "greedy checkpoints on N: n_k = k n_(k-1) + 1, minimal, recount to k = 12")
    N = natural_numbers()
    cps = greedy_checkpoints(N, 1, 12)
    assert cps.ns[:5] == (1, 3, 10, 41, 206)
    ns = cps.all
    assert all(ns[k] == k * ns[k - 1] + 1 for k in range(1, 13))
    assert cps.verify(N)
    # n_k - 1 fails the inequality whenever it lies past n_(k-1)
    for k in range(2, 13):
        n = ns[k] - 1
        assert not F(N.count_between(ns[k - 1] + 1, n), n) > 1 - F(1, k)
    assert cps.is_minimal(N)


def test_criterion_06_address_estimates(criterion):
    criterion(6, "address estimates: odds at n=10, checkpoint piece S_1, Cantor grid count 64")
    odds = address_boxdim_estimate(cantor(), ResidueClass(2, 1), 10)
    assert abs(float(odds.estimate) - 0.5 * LOG2_LOG3) < 1e-12
    part = partition_limsup(natural_numbers(), 2, 6)
    S1 = part.subsets[0]
    ns = part.checkpoints.all
    reached = 0
    for k in range(len(ns)):
        idx = 2 * k + 1
        if idx >= len(ns):
            break
        n = ns[idx]
        c = S1.prefix_count(n)
        # estimate = (c/n) log2/log3, so the comparison is exact on c/n
        assert F(c, n) >= 1 - F(1, idx)
        est = address_boxdim_estimate(cantor(), S1, n)
        assert float(est.estimate) >= (1 - 1 / idx) * LOG2_LOG3 - 1e-15
        reached += 1
    assert reached == 6
    assert grid_box_count(prefix_points(cantor(), 6), F(1, 3**6)).count == 64


def test_criterion_07_covering_shadow(criterion):
    criterion(7, "covering inequality at prefix level for Cantor, S = odds, n in {4, 6, 8}")
    for n in (4, 6, 8):
        row = covering_shadow(cantor(), ResidueClass(2, 1), n)
        assert row["K_count"] <= row["cylinder_factor"] * row["K_S_count"] * row["constant"]
        assert row["holds"]


def test_criterion_08_moran(criterion):
    criterion(8, "Moran set: exact prefix ratios, digitwise and pointwise containment, s_k >= 2/5")
    for alpha in (F(1, 2), F(1, 3)):
        p = ev_params(alpha, 6)
        assert all(moran_dim_estimate(p, k).equals_alpha for k in range(1, 7))
    p20 = ev_params("1/2", 20, ell=2)
    for k in range(3, 21):
        assert 2 * (p20.m_prime[k] - 1) <= p20.m[k - 1] - 1
    cert = b_ell_containment(p20, 4, digitwise_to=20)
    assert cert.verified
    assert cert.witness["sum_subset_of_K_prefix"] and cert.witness["sum_equals_digit_range_set"]
    assert cert.witness["cardinalities"]["K_prefix"] == 2 * 6 * 24 * 120
    p = ev_params("2/5", 6)
    assert all(moran_dim_estimate(p, k).at_least_alpha for k in range(1, 7))


def test_criterion_09_homogenization(criterion):
    criterion(9, "homogenization: Cantor pair, R^2 rotation pair, word-substitution containment")
    f1, f2 = AffineMap.scalar("1/3", 0), AffineMap.scalar("1/3", "2/3")
    h = homogenize([f1, f2])
    assert h.ifs.ratio == F(1, 9) and set(h.ifs.digits.digits) == {point("2/9"), point("2/3")}
    assert homogenization_containment(h, [f1, f2], 3)["subset"]

    R = OrthoMatrix.rotation(0, 1)
    g1, g2 = AffineMap("1/2", R, point(0, 0)), AffineMap("1/2", R, point(1, 0))
    h2 = homogenize([g1, g2])
    assert h2.ifs.ratio == F(1, 16) and h2.ifs.ortho == OrthoMatrix.identity(2)
    # exact-composition oracle, written out by hand:
    # g1∘g1∘g2∘g2(x) = x/16 + (R/2)^2 (R/2 (1,0) + (1,0)) = x/16 + (-1/4)(1, 1/2)
    # g2∘g2∘g1∘g1(x) = x/16 + R/2 (1,0) + (1,0) = x/16 + (1, 1/2)
    assert set(h2.ifs.digits.digits) == {point("-1/4", "-1/8"), point(1, "1/2")}
    res = homogenization_containment(h2, [g1, g2], 3)
    assert res["family_depth"] == 12 and res["word_substitution"] and res["subset"]


ACCEPTANCE_COMMANDS = [
    ["lemma21", "--exhaustive", "--max-size", "5", "--dimension", "1", "--range", "5"],
    ["e-family", "--rho", "1/5", "--N", "1", "--probe-depth", "2"],
    ["psp", "--rho", "1/3", "--digits", "0,2/3", "--ell", "2", "--depth", "9"],
    ["psp", "--rho", "1/3", "--digits", "0,2/3", "--ell", "3", "--depth", "9"],
    ["psp", "--rho", "1/3", "--digits", "0,2/3", "--ell", "2", "--depth", "20", "--partition", "lemma32",
     "--rounds", "2"],
    ["boxdim", "--rho", "1/3", "--digits", "0,2/3", "--S", "mod:2,1", "--depths", "4-10"],
    ["pdsp", "--rho", "1/3", "--digits", "0,2/3", "--ell", "2", "--depth", "4"],
    ["moran", "--alpha", "1/2", "--ell", "2", "--depth", "4", "--digitwise-to", "20", "--k-max", "20"],
    ["moran", "--alpha", "2/5", "--ell", "2", "--depth", "3"],
]


def _certificates(argv, tmp_path):
    out = tmp_path / "report.json"
    status, _ = run(argv + ["--out", str(out)], io.StringIO())
    text = out.read_text()
    data = json.loads(text)
    data.pop("timing")
    return status, json.dumps(data["certificates"], sort_keys=True, indent=2), text


def test_criterion_10_determinism(criterion, tmp_path):
    criterion(10, "repeated acceptance commands give byte-identical certificates")
    maps = tmp_path / "maps.json"
    maps.write_text(json.dumps({"dimension": 2, "maps": [
        {"ratio": "1/2", "ortho": ["0", "-1", "1", "0"], "shift": "(0,0)"},
        {"ratio": "1/2", "ortho": ["0", "-1", "1", "0"], "shift": "(1,0)"}]}))
    for argv in ACCEPTANCE_COMMANDS + [["homogenize", "--maps", str(maps)]]:
        s1, c1, full1 = _certificates(argv, tmp_path)
        s2, c2, full2 = _certificates(argv, tmp_path)
        assert s1 == s2 == 0, argv
        assert c1 == c2, argv
        strip = lambda t: "\n".join(line for line in t.splitlines() if '"seconds"' not in line)
        assert strip(full1) == strip(full2), argv
