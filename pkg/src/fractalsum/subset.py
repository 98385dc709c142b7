"""Digit-position subsets ``K_S`` of a homogeneous attractor and their sumsets.

``K_S`` frees the digit at positions in ``S`` and forces the zero digit
elsewhere. Because position contributions are independent, disjoint index
sets give ``K_{S ∪ T} = K_S + K_T`` exactly; this drives both the packing
decomposition (a partition of ℕ reassembles ``K``) and the positive-dimension
containment (residue classes ``lℕ + j - 1``).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import isqrt
from typing import Optional, Sequence

from . import _numeric as num
from .certificates import Certificate
from .cloud import DEFAULT_CAP, PointCloud, check_budget, minkowski_sum
from .exact import AffineMap, DimensionError, compose_all, format_point, matvec, zero
from .ifs import DigitSet, HomogeneousIFS, prefix_points, similarity_dimension
from .indexsets import (
    HorizonError,
    IndexSet,
    Partition,
    greedy_checkpoints,
    natural_numbers,
    partition_limsup,
    residue_cover,
    residue_partition,
)


@dataclass(frozen=True)
class SubsetCantorSpec:
    ifs: HomogeneousIFS
    S: IndexSet
    depth: int

    def __post_init__(self) -> None:
        if not self.ifs.has_zero_digit:
            raise ValueError("K_S needs the zero vector as a digit; normalize the IFS first")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if self.S.horizon is not None and self.depth > self.S.horizon:
            raise HorizonError(f"depth {self.depth} exceeds index-set horizon {self.S.horizon}")


def free_positions(S: IndexSet, n: int) -> list[int]:
    return [k for k in range(1, n + 1) if k in S]


def subset_prefix(spec: SubsetCantorSpec, cap: int = DEFAULT_CAP) -> PointCloud:
    """Depth-n truncation of ``K_S``: ``sum_{k in S, k <= n} (rho O)^(k-1) b_k``."""
    ifs, n = spec.ifs, spec.depth
    free = free_positions(spec.S, n)
    check_budget(f"K_S prefix at depth {n}", ifs.m ** len(free), cap)
    levels = [PointCloud.from_points([matvec(ifs.linear_power(k - 1), b) for b in ifs.digits])
              for k in free]
    _, r_sq = ifs.outer_bound()
    meta = dict(depth=n, description=f"depth-{n} prefix of K_S, S={spec.S.literal()}",
                tail_radius_sq=ifs.ratio ** (2 * n) * r_sq)
    if not levels:
        return PointCloud.origin(ifs.dimension, **meta)
    out = minkowski_sum(levels, cap)
    return PointCloud(out.dimension, out.denominator, out.numerators, **meta)


@dataclass
class DecompositionCertificate:
    kind: str
    ell: int
    index_sets: list
    depth: int
    verdict: bool
    cardinalities: dict
    details: dict = field(default_factory=dict)
    hypotheses: list = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return self.verdict

    def record(self, inputs: dict, claim: str) -> Certificate:
        witness = {k: v for k, v in self.details.items() if not k.startswith("_")}
        return Certificate(
            kind=self.kind, claim=claim, hypotheses=self.hypotheses,
            witness={"ell": self.ell, "depth": self.depth, "index_sets": self.index_sets,
                     "cardinalities": self.cardinalities, **witness},
            verified=self.verdict,
            numeric_values=dict(self.details.get("_numeric", {})),
            exact_values=dict(self.details.get("_exact", {})),
            inputs=inputs,
        )


def _check_partition(sets: Sequence[IndexSet], n: int) -> None:
    seen: dict[int, int] = {}
    for j, S in enumerate(sets, 1):
        for k in free_positions(S, n):
            if k in seen:
                raise ValueError(f"position {k} lies in S_{seen[k]} and S_{j}")
            seen[k] = j
    missing = [k for k in range(1, n + 1) if k not in seen]
    if missing:
        raise ValueError(f"partition does not cover positions {missing[:10]}")


def _checkpoint_partition(ell: int, depth: int, rounds: Optional[int]) -> Partition:
    N = natural_numbers()
    if rounds is None:
        rounds = 1
        while greedy_checkpoints(N, 1, rounds * ell).ns[-1] < depth:
            rounds += 1
    part = partition_limsup(N, ell, rounds)
    if depth > part.checkpoints.ns[-1]:
        raise HorizonError(f"depth {depth} exceeds last checkpoint {part.checkpoints.ns[-1]}")
    return part


def psp_decompose(ifs: HomogeneousIFS, ell: int, depth: int, partition_source: str = "residues",
                  rounds: Optional[int] = None, cap: int = DEFAULT_CAP) -> DecompositionCertificate:
    """Exact check of ``K_{S_1} + ... + K_{S_l} = K`` at depth ``n`` for a partition of ℕ."""
    norm, translation = ifs.normalized()
    part = None
    if partition_source == "residues":
        sets = residue_cover(ell)
    elif partition_source in ("checkpoints", "lemma32"):
        part = _checkpoint_partition(ell, depth, rounds)
        sets = list(part.subsets)
    else:
        raise ValueError(f"unknown partition source {partition_source!r}")
    _check_partition(sets, depth)
    summands = [subset_prefix(SubsetCantorSpec(norm, S, depth), cap) for S in sets]
    total = minkowski_sum(summands, cap)
    target = prefix_points(norm, depth, cap)
    details: dict = {"normalizing_translation": format_point(translation)}
    hyps = [{"name": "index sets partition [1, depth]", "holds": True}]
    if part is not None:
        cps = part.checkpoints
        dens = {f"S_{j}": part.density_witness(j) for j in range(1, ell + 1)}
        ok = cps.verify(natural_numbers()) and all(w["exceeds"] for ws in dens.values() for w in ws)
        details["checkpoints"] = list(cps.ns)
        details["density_at_checkpoints"] = {k: [{**w, "exceeds": bool(w["exceeds"])} for w in v]
                                             for k, v in dens.items()}
        hyps.append({"name": "each S_j has prefix density > 1 - 1/(kl+j) at its checkpoints "
                             "(consistent with upper density 1 at the certified horizon)", "holds": ok})
    else:
        details["prefix_counts"] = {f"S_{j}": S.prefix_count(depth) for j, S in enumerate(sets, 1)}
    return DecompositionCertificate(
        kind="psp-equality", ell=ell, index_sets=[S.literal() for S in sets], depth=depth,
        verdict=total == target and all(h["holds"] for h in hyps),
        cardinalities={"summands": [len(s) for s in summands], "sum": len(total), "K_prefix": len(target)},
        details=details, hypotheses=hyps,
    )


def pdsp_decompose(ifs: HomogeneousIFS, ell: int, depth: int, cap: int = DEFAULT_CAP) -> DecompositionCertificate:
    """Exact check of ``K_{S_1} + ... + K_{S_l} ⊂ K`` with ``S_j = lℕ + j - 1``.

    Also checks on prefixes that ``K_{S_1}`` is ``(rho O)^(l-1)`` times the
    attractor of ``{(rho O)^l x + b}`` and that ``K_{S_j} = (rho O)^(j-1) K_{S_1}``.
    """
    norm, translation = ifs.normalized()
    sets = residue_partition(ell)
    summands = [subset_prefix(SubsetCantorSpec(norm, S, depth), cap) for S in sets]
    total = minkowski_sum(summands, cap)
    target = prefix_points(norm, depth, cap)
    contained = total.issubset(target)

    q = depth // ell
    powered = norm.power(ell)
    lhs = subset_prefix(SubsetCantorSpec(norm, sets[0], q * ell), cap)
    rhs = prefix_points(powered, q, cap).transform(norm.linear_power(ell - 1))
    self_similar = lhs == rhs

    first = summands[0]
    scaling = {}
    for j, S in enumerate(sets[1:], 2):
        shifted = subset_prefix(SubsetCantorSpec(norm, S, depth + j - 1), cap)
        scaling[f"S_{j}"] = shifted == first.transform(norm.linear_power(j - 1))
    dim1 = similarity_dimension(powered)
    positive = dim1.value > 0  # log m > 0 since m >= 2
    verdict = contained and self_similar and all(scaling.values()) and positive
    return DecompositionCertificate(
        kind="pdsp-containment", ell=ell, index_sets=[S.literal() for S in sets], depth=depth,
        verdict=verdict,
        cardinalities={"summands": [len(s) for s in summands], "sum": len(total), "K_prefix": len(target)},
        details={
            "normalizing_translation": format_point(translation),
            "containment": contained,
            "K_S1_self_similar_prefix_check": {"depth": q * ell, "holds": self_similar},
            "scaling_relation": scaling,
            "_numeric": {"dim_K_S1": num.decimal(dim1.value)},
            "_exact": {"dim_K_S1": f"log({norm.m})/(-{ell}*log({norm.ratio}))",
                       "K_S1_ifs_ratio": str(powered.ratio),
                       "K_S1_ifs_ortho": powered.ortho.flat()},
        },
        hypotheses=[{"name": "similarity dimension of K_S1 positive", "holds": positive}],
    )


_EXPLICIT_EXPONENT = 64  # larger powers are reported as "base^exponent" strings


@dataclass(frozen=True)
class BoxCountReport:
    """A covering count at scale ``delta`` and the estimate ``log count / -log delta``.

    Cylinder-address counts are kept as exact powers ``count = base^exponent`` at
    ``delta = ratio^depth``, so depths in the hundreds of millions stay cheap.
    """

    kind: str
    estimate: object
    constant: Optional[int] = None
    cells: Optional[int] = None
    power: tuple = (1, 0)
    scale: tuple = (Fraction(1), 1)

    @property
    def count(self) -> int:
        return self.cells if self.cells is not None else self.power[0] ** self.power[1]

    @property
    def delta(self) -> Fraction:
        return self.scale[0] ** self.scale[1]

    def to_json(self) -> dict:
        small = self.power[1] <= _EXPLICIT_EXPONENT and self.scale[1] <= _EXPLICIT_EXPONENT
        count = self.count if self.cells is not None or small else "{}^{}".format(*self.power)
        delta = str(self.delta) if small else f"({self.scale[0]})^{self.scale[1]}"
        return {"delta": delta, "count": count, "kind": self.kind,
                "estimate": None if self.estimate is None else num.decimal(self.estimate),
                "grid_vs_ball_constant": self.constant}


def address_boxdim_estimate(ifs: HomogeneousIFS, S: IndexSet, n: int) -> BoxCountReport:
    """``m^{#(S∩[1,n])}`` depth-n cylinders meet ``Ω_S``; estimate ``#(S∩[1,n]) log m / (-n log rho)``."""
    if n < 1:
        raise ValueError("depth must be at least 1")
    c = S.prefix_count(n)
    est = c * num.log(ifs.m) / (-n * num.log(ifs.ratio))
    return BoxCountReport("cylinder-address", est, power=(ifs.m, c), scale=(ifs.ratio, n))


def grid_constant(d: int) -> int:
    """Grid cells of side δ versus closed δ-balls: ``(2⌈√d⌉ + 1)^d``."""
    root = isqrt(d - 1) + 1
    return (2 * root + 1) ** d


def grid_box_count(cloud: PointCloud, delta) -> BoxCountReport:
    """Number of half-open cells ``[iδ, (i+1)δ)^d`` hit by the cloud."""
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    scale = cloud.denominator * delta.numerator
    q = delta.denominator
    cells = {tuple(c * q // scale for c in x) for x in cloud.numerators}
    est = num.log(len(cells)) / -num.log(delta) if delta < 1 else None
    return BoxCountReport("grid", est, grid_constant(cloud.dimension), cells=len(cells), scale=(delta, 1))


def covering_shadow(ifs: HomogeneousIFS, S: IndexSet, n: int, delta=None, cap: int = DEFAULT_CAP) -> dict:
    """Prefix-level form of ``N(K) <= m^{n - #(S∩[1,n])} N(K_S)`` on a δ-grid."""
    norm, _ = ifs.normalized()
    delta = Fraction(delta) if delta is not None else norm.ratio**n
    k_count = grid_box_count(prefix_points(norm, n, cap), delta)
    s_count = grid_box_count(subset_prefix(SubsetCantorSpec(norm, S, n), cap), delta)
    factor = norm.m ** (n - S.prefix_count(n))
    rhs = factor * s_count.count * s_count.constant
    return {"n": n, "delta": str(delta), "K_count": k_count.count, "K_S_count": s_count.count,
            "cylinder_factor": factor, "constant": s_count.constant, "rhs": rhs,
            "holds": k_count.count <= rhs}


def boxdim_sweep(ifs: HomogeneousIFS, S: IndexSet, depths: Sequence[int], cap: int = DEFAULT_CAP) -> list[dict]:
    """Address estimate and grid estimate of ``K_S`` at ``δ = rho^n`` for each depth."""
    norm, _ = ifs.normalized()
    rows = []
    for n in depths:
        addr = address_boxdim_estimate(norm, S, n)
        grid = grid_box_count(subset_prefix(SubsetCantorSpec(norm, S, n), cap), norm.ratio**n)
        rows.append({"n": n, "address": addr.to_json(), "grid": grid.to_json()})
    return rows


def sweep_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "count", "estimate", "estimator"])
    for r in rows:
        for kind in ("address", "grid"):
            w.writerow([r["n"], r[kind]["count"], r[kind]["estimate"], r[kind]["kind"]])
    return buf.getvalue()


def family_point(maps: Sequence[AffineMap], word: Sequence[int]):
    """``f_{w_1} ∘ ... ∘ f_{w_k}(0)`` for 1-based letters."""
    p = zero(maps[0].dimension)
    for i in reversed(word):
        p = maps[i - 1](p)
    return p


def family_prefix_points(maps: Sequence[AffineMap], n: int, cap: int = DEFAULT_CAP) -> PointCloud:
    """``{f_w(0) : |w| = n}`` for an arbitrary (inhomogeneous) map family."""
    check_budget(f"depth-{n} family prefix", len(maps) ** n, cap)
    pts = {zero(maps[0].dimension)}
    for _ in range(n):
        pts = {f(p) for f in maps for p in pts}
    return PointCloud.from_points(pts, depth=n, description=f"depth-{n} prefix of map family")


@dataclass(frozen=True)
class Homogenization:
    ifs: HomogeneousIFS
    dictionary: dict  # digit index (1-based, lex order) -> word over original map indices
    pair: tuple

    def substitute(self, word: Sequence[int]) -> tuple[int, ...]:
        return tuple(c for i in word for c in self.dictionary[i])

    def word_strings(self) -> dict:
        sep = "" if max(self.pair) < 10 else "."
        return {str(i): sep.join(map(str, w)) for i, w in sorted(self.dictionary.items())}


def homogenize(maps: Sequence[AffineMap]) -> Homogenization:
    """Homogeneous sub-system of a self-similar family in ℝ or ℝ².

    Picks the first pair with distinct fixed points. In ℝ uses
    ``{f_i∘f_j, f_j∘f_i}``; in ℝ² squares each map first (removing
    reflections so the linear parts commute) and uses
    ``{f_i∘f_i∘f_j∘f_j, f_j∘f_j∘f_i∘f_i}``.
    """
    maps = list(maps)
    if len(maps) < 2:
        raise ValueError("need at least two maps")
    d = maps[0].dimension
    if any(f.dimension != d for f in maps):
        raise DimensionError("maps of mixed dimension")
    if d > 2:
        raise ValueError("homogenization is only available in dimension 1 or 2")
    fixed = [f.fixed_point() for f in maps]
    pair = next(((i, j) for i in range(len(maps)) for j in range(i + 1, len(maps)) if fixed[i] != fixed[j]), None)
    if pair is None:
        raise ValueError("all maps share one fixed point: the attractor is a singleton")
    i, j = pair
    a, b = i + 1, j + 1
    words = [(a, b), (b, a)] if d == 1 else [(a, a, b, b), (b, b, a, a)]
    comps = [compose_all(maps[c - 1] for c in w) for w in words]
    g, h = comps
    if g.ratio != h.ratio or g.ortho != h.ortho:
        raise AssertionError("homogenized maps do not share a linear part")
    ifs = HomogeneousIFS(g.ratio, g.ortho, DigitSet((g.shift, h.shift)), zero(d) in (g.shift, h.shift))
    dictionary = {ifs.digits.index(c.shift): w for c, w in zip(comps, words)}
    return Homogenization(ifs, dictionary, (a, b))


def homogenization_containment(h: Homogenization, maps: Sequence[AffineMap], depth: int,
                               cap: int = DEFAULT_CAP) -> dict:
    """Every depth-k prefix point of the homogeneous system is a prefix point of the family
    at the substituted word; also checks set containment in the full family prefix."""
    word_len = len(next(iter(h.dictionary.values())))
    own = prefix_points(h.ifs, depth, cap)
    words_ok = True
    for w in product(range(1, h.ifs.m + 1), repeat=depth):
        mine = zero(h.ifs.dimension)
        for k, letter in enumerate(w):
            mine = tuple(x + y for x, y in zip(mine, matvec(h.ifs.linear_power(k), h.ifs.digits.digits[letter - 1])))
        if mine != family_point(maps, h.substitute(w)):
            words_ok = False
            break
    family = family_prefix_points(maps, depth * word_len, cap)
    return {"depth": depth, "family_depth": depth * word_len, "word_substitution": words_ok,
            "subset": own.issubset(family), "own_points": len(own), "family_points": len(family)}
