"""Translate-intersection combinatorics and the HSP-2 failure bound.

For a homogeneous set ``K`` whose difference system is strongly separated,
any ``K_1 + K_2 ⊂ K`` has ``dim K_1 + dim K_2 <= gamma / (-log rho)`` with

    gamma = max_{1 <= j <= #D} log(j) + log(#D + 1 - j),

which is strictly below ``2 log #D``. Everything here is checked with exact
integers; logarithms are only rendered for reporting.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Optional, Sequence

from . import _numeric as num
from .certificates import Certificate
from .cloud import BudgetExceeded
from .exact import Point, add, format_point, rational, sub
from .ifs import (
    DigitSet,
    HomogeneousIFS,
    SeparationVerdict,
    difference_digits,
    similarity_dimension,
    ssc_check,
    translation_intersection_digits,
)


class BoundViolation(AssertionError):
    """A translate intersection exceeded ``#A + 1 - l``; this is a bug, never data."""


def _as_points(items: Iterable) -> list[Point]:
    out = []
    for p in items:
        if isinstance(p, tuple):
            out.append(tuple(rational(c) for c in p))
        else:
            out.append((rational(p),))
    return out


@dataclass(frozen=True)
class IntersectionReport:
    A: tuple
    translations: tuple
    intersection: tuple
    bound: int

    @property
    def cardinality(self) -> int:
        return len(self.intersection)

    @property
    def satisfied(self) -> bool:
        return self.cardinality <= self.bound


def translate_intersection(A: Iterable, T: Iterable) -> IntersectionReport:
    """``⋂_j (A + t_j)`` together with the bound ``#A + 1 - l``."""
    a = sorted(set(_as_points(A)))
    t = _as_points(T)
    if len(a) < 2:
        raise ValueError("need #A >= 2")
    if len(set(t)) != len(t):
        raise ValueError("translations must be pairwise distinct")
    ell = len(t)
    if not 1 <= ell <= len(a) + 1:
        raise ValueError(f"need 1 <= l <= #A + 1 = {len(a) + 1}, got l = {ell}")
    common = set(add(x, t[0]) for x in a)
    for tj in t[1:]:
        common &= {add(x, tj) for x in a}
    report = IntersectionReport(tuple(a), tuple(t), tuple(sorted(common)), len(a) + 1 - ell)
    if not report.satisfied:
        raise BoundViolation(f"#intersection = {report.cardinality} > {report.bound} for A={a}, T={t}")
    return report


@dataclass(frozen=True)
class OracleVerdict:
    sets_checked: int
    cases_checked: int
    tight_cases: int = 0  # intersections meeting the bound with equality
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def _grid(coordinate_range: int, d: int) -> list[tuple[int, ...]]:
    pts = [()]
    for _ in range(d):
        pts = [p + (c,) for p in pts for c in range(coordinate_range + 1)]
    return pts


def _check_one_set(A: tuple) -> tuple[int, int, list]:
    # doubled coordinates so the half-integer offsets stay integral
    d = len(A[0])
    a2 = [tuple(2 * c for c in x) for x in A]
    diffs = {tuple(x - y for x, y in zip(p, q)) for p in a2 for q in a2}
    half = (1,) * d
    universe = sorted(diffs | {tuple(c + h for c, h in zip(t, half)) for t in diffs})
    shifted = [frozenset(tuple(x + y for x, y in zip(p, t)) for p in a2) for t in universe]
    size = len(A)
    max_ell = size + 1
    cases = tight = 0
    bad = []

    def dfs(start: int, ell: int, current: frozenset, chosen: list) -> None:
        nonlocal cases, tight
        for i in range(start, len(universe)):
            inter = current & shifted[i] if ell else shifted[i]
            cases += 1
            bound = size - ell  # size + 1 - (ell + 1)
            if len(inter) > bound:
                bad.append((A, tuple(universe[j] for j in chosen + [i])))
            elif len(inter) == bound:
                tight += 1
            if ell + 1 < max_ell:
                dfs(i + 1, ell + 1, inter, chosen + [i])

    dfs(0, 0, frozenset(), [])
    return cases, tight, bad


def exhaustive_translate_oracle(max_size: int, dimension: int, coordinate_range: int,
                              budget: int = 50_000_000, workers: int = 1) -> OracleVerdict:
    """Brute-force the translate-intersection bound over a small grid.

    Every ``A ⊂ {0..range}^d`` with ``2 <= #A <= max_size`` is paired with every
    set of ``l <= #A + 1`` distinct translations from ``(A-A) ∪ ((A-A) + ½)``.
    """
    grid = _grid(coordinate_range, dimension)
    sets = [A for s in range(2, max_size + 1) for A in combinations(grid, s)]
    # rough upper estimate of the work before starting
    est = 0
    for A in sets:
        u = min(2 * len(A) ** 2, 2 * (2 * coordinate_range + 1) ** dimension)
        est += sum(comb(u, k) for k in range(1, len(A) + 2))
    if est > budget:
        raise BudgetExceeded("translate-intersection oracle", est, budget)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_check_one_set, sets, chunksize=8))
    else:
        results = [_check_one_set(A) for A in sets]
    cases = sum(r[0] for r in results)
    tight = sum(r[1] for r in results)
    bad = tuple(b for r in results for b in r[2])
    return OracleVerdict(len(sets), cases, tight, bad)


@dataclass(frozen=True)
class GammaValue:
    """``gamma = log(max_j j (m + 1 - j))`` for digit count ``m``."""

    digit_count: int
    best_product: int
    argmax: tuple
    value: object

    @property
    def strictly_below_full(self) -> bool:
        """``gamma < 2 log m`` decided on integers: ``best_product < m^2``."""
        return self.best_product < self.digit_count**2


def gamma_of(m: int) -> GammaValue:
    if m < 2:
        raise ValueError("gamma needs at least two digits")
    # j (m + 1 - j) is a concave parabola in j, peaking at the middle split(s)
    argmax = tuple(sorted({(m + 1) // 2, (m + 2) // 2}))
    best = argmax[0] * (m + 1 - argmax[0])
    return GammaValue(m, best, argmax, num.log(best))


@dataclass(frozen=True)
class HspCertificate:
    ifs: HomogeneousIFS
    translation: Point
    gamma: GammaValue
    beta: object
    dim: object
    psi_verdict: SeparationVerdict

    @property
    def beta_below_dim(self) -> bool:
        # beta < dim  <=>  gamma < 2 log m, independent of rho
        return self.gamma.strictly_below_full

    @property
    def verified(self) -> bool:
        return self.psi_verdict.holds and self.beta_below_dim

    @property
    def sharpened(self) -> bool:
        """With two digits ``2 beta = dim``: ``dim K_1 + dim K_2 <= dim K``."""
        return self.ifs.m == 2

    def record(self, inputs: dict, claim: Optional[str] = None, extra_hypotheses: Sequence[dict] = ()) -> Certificate:
        m, rho = self.ifs.m, self.ifs.ratio
        norm, _ = self.ifs.normalized()
        hyps = [*extra_hypotheses,
                {"name": "difference system strongly separated", "holds": self.psi_verdict.holds,
                 "verdict": self.psi_verdict.to_json()}]
        numeric = {"gamma": num.decimal(self.gamma.value), "beta": num.decimal(self.beta),
                   "dim_H_K": num.decimal(self.dim), "two_beta": num.decimal(2 * self.beta)}
        exact = {
            "ratio": str(rho), "digit_count": str(m),
            "gamma": f"log({self.gamma.best_product})",
            "gamma_argmax": [str(j) for j in self.gamma.argmax],
            "beta": f"log({self.gamma.best_product})/(-2*log({rho}))",
            "dim_H_K": f"log({m})/(-log({rho}))",
            "symbolic_strictness": f"{self.gamma.best_product} < {m * m}",
            "digits_original": [format_point(b) for b in self.ifs.digits],
            "digits_normalized": [format_point(b) for b in norm.digits],
            "normalizing_translation": format_point(self.translation),
        }
        witness = {"beta_below_dim": self.beta_below_dim}
        if self.sharpened:
            witness["sharpened"] = "dim_H K1 + dim_H K2 <= dim_H K"
        return Certificate(
            kind="hsp-bound",
            claim=claim or "K1 + K2 ⊂ K forces dim_H K1 + dim_H K2 <= 2*beta < 2*dim_H K",
            hypotheses=hyps, witness=witness, verified=self.verified,
            numeric_values=numeric, exact_values=exact, inputs=inputs,
        )


def hsp_beta(ifs: HomogeneousIFS, probe_depth: int = 4) -> HspCertificate:
    """Failure bound for the 2-sumset property; conditional unless ``Ψ`` separates."""
    norm, translation = ifs.normalized()
    verdict = ssc_check(norm.difference_ifs(), probe_depth)
    g = gamma_of(ifs.m)
    neg_log_rho = -num.log(ifs.ratio)
    return HspCertificate(ifs, translation, g, g.value / (2 * neg_log_rho),
                          similarity_dimension(ifs).value, verdict)


@dataclass(frozen=True)
class PerPositionDigits:
    """Digit sets ``Λ_j ⊂ D-D`` seen at each coding position, and the counts ``m_j``."""

    digits: DigitSet
    lambdas: tuple
    counts: tuple = field(init=False)

    def __post_init__(self) -> None:
        lambdas = tuple(tuple(sorted(set(_as_points(lam)))) for lam in self.lambdas)
        object.__setattr__(self, "lambdas", lambdas)
        if not lambdas:
            raise ValueError("horizon must be at least 1")
        diff = set(difference_digits(self.digits).digits)
        z = (Fraction(0),) * self.digits.dimension
        counts = []
        for j, lam in enumerate(lambdas, 1):
            if z not in lam:
                raise ValueError(f"position {j}: 0 must belong to the digit set")
            if not set(lam) <= diff:
                raise ValueError(f"position {j}: digits outside D - D")
            common = set(self.digits.digits)
            for b in lam:
                common &= {add(x, b) for x in self.digits}
            mj = len(common)
            if mj and mj + len(lam) > len(self.digits) + 1:
                raise BoundViolation(f"position {j}: m_j + #Λ_j = {mj + len(lam)} > #D + 1")
            counts.append(mj)
        object.__setattr__(self, "counts", tuple(counts))

    @property
    def horizon(self) -> int:
        return len(self.lambdas)


def coding_pair_bound(ifs: HomogeneousIFS, lam: PerPositionDigits):
    """Horizon-k bound ``sum_j (log m_j + log #Λ_j) / (-k log rho)``; ``-inf`` if some ``m_j = 0``."""
    if lam.horizon == 0:
        raise ValueError("horizon must be at least 1")
    if any(c == 0 for c in lam.counts):
        return num.NEG_INF
    total = sum(num.log(c * len(l)) for c, l in zip(lam.counts, lam.lambdas))
    return total / (-lam.horizon * num.log(ifs.ratio))


def e_family_ifs(rho, N: int) -> HomogeneousIFS:
    rho = rational(rho)
    return HomogeneousIFS.simple(rho, [(1 - rho) * j / N for j in range(N + 1)])


def e_rho_n_certificate(rho, N: int, probe_depth: int = 4) -> Certificate:
    """HSP-2 failure for ``E_{rho,N}``; refuses unless ``rho < 1/(2N+1)``."""
    rho = rational(rho)
    if N < 1 or not 0 < rho < 1:
        raise ValueError("need N >= 1 and 0 < rho < 1")
    inputs = {"kind": "e-family", "rho": str(rho), "N": N, "probe_depth": probe_depth}
    threshold = Fraction(1, 2 * N + 1)
    hyp = {"name": f"rho < 1/(2N+1) = {threshold}", "holds": rho < threshold}
    claim = f"E_{{{rho},{N}}} fails the HSP-2"
    if rho >= threshold:
        return Certificate(kind="e-family", claim=claim, hypotheses=[hyp], witness={"refused": True},
                           verified=False, numeric_values={}, exact_values={"ratio": str(rho), "N": str(N)},
                           inputs=inputs)
    cert = hsp_beta(e_family_ifs(rho, N), probe_depth).record(inputs, claim, [hyp])
    cert.kind = "e-family"
    return cert


__all__ = [
    "GammaValue", "HspCertificate", "IntersectionReport", "BoundViolation", "OracleVerdict",
    "PerPositionDigits", "coding_pair_bound", "e_family_ifs", "e_rho_n_certificate", "gamma_of",
    "hsp_beta", "exhaustive_translate_oracle", "translate_intersection", "translation_intersection_digits",
]
