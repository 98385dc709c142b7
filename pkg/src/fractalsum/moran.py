"""The factorial Moran set and its sumset-closed subsets.

With ``m_k = (k+1)!`` and ``N_k = ⌊m_k^{1/α}⌋``,

    K   = { sum_k d_k / (N_1 ... N_k) : 0 <= d_k < m_k },
    B_l = { sum_{k>l} d_k / (N_1 ... N_k) : 0 <= d_k < m_k / l },

and ``l B_l ⊂ K`` because ``l (m_k/l - 1) = m_k - l <= m_k - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Optional

import gmpy2

from . import _numeric as num
from .certificates import Certificate
from .cloud import DEFAULT_CAP, PointCloud, check_budget, minkowski_sum
from .exact import rational


def floor_power(m: int, alpha: Fraction) -> int:
    """``⌊m^{1/α}⌋`` for rational ``α = p/q`` as the integer ``p``-th root of ``m^q``."""
    p, q = alpha.numerator, alpha.denominator
    root, _ = gmpy2.iroot(gmpy2.mpz(m) ** q, p)
    return int(root)


@dataclass(frozen=True)
class MoranParams:
    alpha: Fraction
    k_max: int
    ell: Optional[int]
    m: tuple  # m_1..m_kmax
    N: tuple
    m_prime: dict  # k -> m_k / l for k > l

    def strict_branching(self) -> bool:
        """``m_k < N_k`` at every level (can fail at small k when α is close to 1)."""
        return all(a < b for a, b in zip(self.m, self.N))


def ev_params(alpha, k_max: int, ell: Optional[int] = None) -> MoranParams:
    alpha = rational(alpha)
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    m = tuple(factorial(k + 1) for k in range(1, k_max + 1))
    N = tuple(floor_power(mk, alpha) for mk in m)
    assert all(a <= b for a, b in zip(m, N))  # digits 0..m_k-1 never carry
    mp = {}
    if ell is not None:
        if ell < 2:
            raise ValueError("l must be at least 2")
        for k in range(ell + 1, k_max + 1):
            mk = m[k - 1]
            if mk % ell:
                raise AssertionError(f"l={ell} does not divide m_{k}={mk}")
            mp[k] = mk // ell
    return MoranParams(alpha, k_max, ell, m, N, mp)


def _level_cloud(digit_count: int, weight: int) -> PointCloud:
    return PointCloud(1, 1, tuple((d * weight,) for d in range(digit_count)))


def _digit_cloud(params: MoranParams, n: int, counts: list[int], cap: int, what: str) -> PointCloud:
    if n > params.k_max:
        raise ValueError(f"depth {n} exceeds k_max {params.k_max}")
    check_budget(what, prod(counts), cap)
    den = prod(params.N[:n])
    # d_k / (N_1...N_k) = d_k * N_{k+1}...N_n / den
    levels = [_level_cloud(c, prod(params.N[k:n])) for k, c in enumerate(counts, 1)]
    if not levels:
        return PointCloud.origin(1, depth=n)
    out = minkowski_sum([PointCloud(1, den, lv.numerators) for lv in levels], cap)
    return PointCloud(1, out.denominator, out.numerators, depth=n, description=what)


def ev_prefix(params: MoranParams, n: int, cap: int = DEFAULT_CAP) -> PointCloud:
    """Depth-n truncation of ``K``."""
    return _digit_cloud(params, n, list(params.m[:n]), cap, f"depth-{n} prefix of K")


def b_ell_prefix(params: MoranParams, n: int, cap: int = DEFAULT_CAP) -> PointCloud:
    ell = params.ell
    counts = [1 if k <= ell else params.m_prime[k] for k in range(1, n + 1)]
    return _digit_cloud(params, n, counts, cap, f"depth-{n} prefix of B_{ell}")


def b_ell_containment(params: MoranParams, n: int, digitwise_to: Optional[int] = None,
                      cap: int = DEFAULT_CAP) -> Certificate:
    """``l B_l ⊂ K``: digitwise for every level up to ``k_max``, pointwise at depth ``n``."""
    ell = params.ell
    if ell is None:
        raise ValueError("parameters were built without l")
    if n <= ell:
        raise ValueError("need depth > l")
    top = digitwise_to or params.k_max
    digitwise = {}
    no_carry = True
    for k in range(ell + 1, top + 1):
        mk, nk = params.m[k - 1], params.N[k - 1]
        digitwise[str(k)] = ell * (params.m_prime[k] - 1) <= mk - 1
        no_carry &= ell * (params.m_prime[k] - 1) < nk
    b = b_ell_prefix(params, n, cap)
    sum_cloud = minkowski_sum([b] * ell, cap)
    ranges = [1 if k <= ell else ell * (params.m_prime[k] - 1) + 1 for k in range(1, n + 1)]
    displayed = _digit_cloud(params, n, ranges, cap, f"digit-range form of {ell}B_{ell}")
    k_prefix = ev_prefix(params, n, cap)
    equal = sum_cloud == displayed
    contained = sum_cloud.issubset(k_prefix)
    verified = all(digitwise.values()) and no_carry and equal and contained
    return Certificate(
        kind="moran-containment",
        claim=f"{ell}B_{ell} ⊂ K for alpha={params.alpha}",
        hypotheses=[{"name": "0 < alpha < 1", "holds": True},
                    {"name": "no carries: l(m'_k - 1) < N_k", "holds": no_carry}],
        witness={"digitwise": digitwise, "depth": n, "sum_equals_digit_range_set": equal,
                 "sum_subset_of_K_prefix": contained,
                 "cardinalities": {"B_prefix": len(b), "sum": len(sum_cloud), "K_prefix": len(k_prefix)}},
        verified=verified,
        exact_values={"m": [str(v) for v in params.m[:top]], "N": [str(v) for v in params.N[:top]],
                      "m_prime": {str(k): str(v) for k, v in params.m_prime.items() if k <= top}},
        inputs={"kind": "moran-containment", "alpha": str(params.alpha), "ell": ell, "depth": n,
                "k_max": params.k_max},
    )


@dataclass(frozen=True)
class MoranDimEstimate:
    """``s_k = log(m_1...m_k) / log(N_1...N_k)`` with exactly decided comparisons to α."""

    k: int
    value: object
    equals_alpha: bool
    at_least_alpha: bool


def moran_dim_estimate(params: MoranParams, k: int) -> MoranDimEstimate:
    if not 1 <= k <= params.k_max:
        raise ValueError(f"level must lie in [1, {params.k_max}]")
    M, Np = prod(params.m[:k]), prod(params.N[:k])
    p, q = params.alpha.numerator, params.alpha.denominator
    # s_k vs p/q  <=>  q log M vs p log N  <=>  M^q vs N^p
    lhs, rhs = gmpy2.mpz(M) ** q, gmpy2.mpz(Np) ** p
    return MoranDimEstimate(k, num.log(M) / num.log(Np), lhs == rhs, lhs >= rhs)


def moran_table(params: MoranParams) -> list[dict]:
    rows = []
    for k in range(1, params.k_max + 1):
        est = moran_dim_estimate(params, k)
        rows.append({"k": k, "m_k": params.m[k - 1], "N_k": params.N[k - 1], "s_k": num.decimal(est.value),
                     "s_k_equals_alpha": est.equals_alpha, "s_k_at_least_alpha": est.at_least_alpha})
    return rows
