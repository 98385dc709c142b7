"""Homogeneous iterated function systems ``{x -> rho*O*x + b : b in D}``.

Provides the difference-digit system, depth-n prefix clouds of the coding map,
a three-valued strong separation check, and similarity dimension.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce
from itertools import product
from math import lcm
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from . import _numeric as num
from .cloud import DEFAULT_CAP, PointCloud, check_budget
from .exact import (
    AffineMap,
    DimensionError,
    Matrix,
    OrthoMatrix,
    ParseError,
    Point,
    add,
    format_point,
    matvec,
    norm_sq,
    parse_point,
    rational,
    scale,
    solve,
    sub,
    zero,
)


@dataclass(frozen=True)
class DigitSet:
    """Lex-sorted, duplicate-free translation vectors; at least two of them."""

    digits: tuple

    def __post_init__(self) -> None:
        pts = sorted(set(tuple(rational(c) for c in p) for p in self.digits))
        if len(pts) < 2:
            raise ValueError("a digit set needs at least two distinct digits")
        d = len(pts[0])
        if any(len(p) != d for p in pts):
            raise DimensionError("digits of mixed dimension")
        object.__setattr__(self, "digits", tuple(pts))

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __contains__(self, p) -> bool:
        return tuple(p) in set(self.digits)

    @property
    def dimension(self) -> int:
        return len(self.digits[0])

    def index(self, p: Point) -> int:
        """1-based position in lex order."""
        return self.digits.index(tuple(p)) + 1


def difference_digits(digits: DigitSet) -> DigitSet:
    """``D - D``; contains zero and is symmetric under negation."""
    return DigitSet(tuple(sub(a, b) for a in digits for b in digits))


@dataclass(frozen=True)
class HomogeneousIFS:
    ratio: Fraction
    ortho: OrthoMatrix
    digits: DigitSet
    normalized_zero_digit: bool = False

    def __post_init__(self) -> None:
        ratio = rational(self.ratio)
        if not 0 < ratio < 1:
            raise ValueError(f"ratio must lie in (0,1), got {ratio}")
        object.__setattr__(self, "ratio", ratio)
        if not isinstance(self.digits, DigitSet):
            object.__setattr__(self, "digits", DigitSet(tuple(self.digits)))
        if self.ortho.dimension != self.digits.dimension:
            raise DimensionError("matrix and digits disagree on dimension")
        if self.normalized_zero_digit and not self.has_zero_digit:
            raise ValueError("normalized_zero_digit set but 0 is not a digit")

    @classmethod
    def simple(cls, ratio, digits: Iterable, ortho: Optional[OrthoMatrix] = None) -> "HomogeneousIFS":
        pts = [parse_point(p) if not isinstance(p, tuple) else tuple(rational(c) for c in p) for p in digits]
        d = len(pts[0])
        return cls(rational(ratio), ortho or OrthoMatrix.identity(d), DigitSet(tuple(pts)),
                   normalized_zero_digit=zero(d) in set(pts))

    @property
    def dimension(self) -> int:
        return self.digits.dimension

    @property
    def m(self) -> int:
        return len(self.digits)

    @property
    def has_zero_digit(self) -> bool:
        return zero(self.dimension) in self.digits

    @property
    def linear(self) -> Matrix:
        return tuple(tuple(self.ratio * v for v in row) for row in self.ortho.rows)

    def linear_power(self, k: int) -> Matrix:
        o = self.ortho.power(k)
        r = self.ratio**k
        return tuple(tuple(r * v for v in row) for row in o.rows)

    def maps(self) -> list[AffineMap]:
        return [AffineMap(self.ratio, self.ortho, b) for b in self.digits]

    def normalized(self) -> tuple["HomogeneousIFS", Point]:
        """Translate the digits so that 0 is a digit; returns (ifs, translation).

        The attractor moves by a fixed vector, so dimensions and sumset
        properties are unchanged. When 0 is already a digit nothing moves.
        """
        if self.has_zero_digit:
            return HomogeneousIFS(self.ratio, self.ortho, self.digits, True), zero(self.dimension)
        c = self.digits.digits[0]
        shifted = DigitSet(tuple(sub(b, c) for b in self.digits))
        return HomogeneousIFS(self.ratio, self.ortho, shifted, True), scale(Fraction(-1), c)

    def difference_ifs(self) -> "HomogeneousIFS":
        return HomogeneousIFS(self.ratio, self.ortho, difference_digits(self.digits), True)

    def power(self, ell: int) -> "HomogeneousIFS":
        """Same digits, linear part ``(rho O)^ell``."""
        return HomogeneousIFS(self.ratio**ell, self.ortho.power(ell), self.digits, self.normalized_zero_digit)

    def outer_bound(self) -> tuple[Point, Fraction]:
        """Centre ``z`` and squared radius of a closed ball containing the attractor.

        ``z`` is the origin when 0 is a digit, else the fixed point of the
        first map. Every map then sends the ball into itself.
        """
        d = self.dimension
        if self.has_zero_digit:
            z = zero(d)
        else:
            z = AffineMap(self.ratio, self.ortho, self.digits.digits[0]).fixed_point()
        mz = matvec(self.linear, z)
        far = max(norm_sq(sub(add(mz, b), z)) for b in self.digits)
        return z, far / (1 - self.ratio) ** 2

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "ratio": str(self.ratio),
            "ortho": self.ortho.flat(),
            "digits": [format_point(b) for b in self.digits],
            "normalized_zero_digit": self.normalized_zero_digit,
        }

    @classmethod
    def from_json(cls, data: dict) -> "HomogeneousIFS":
        try:
            d = int(data["dimension"])
            digits = tuple(parse_point(p) for p in data["digits"])
            ortho = OrthoMatrix.from_entries(data.get("ortho") or OrthoMatrix.identity(d).flat(), d)
            ifs = cls(rational(data["ratio"]), ortho, DigitSet(digits), bool(data.get("normalized_zero_digit", False)))
        except KeyError as exc:
            raise ParseError(f"IFS description lacks field {exc}") from None
        if ifs.dimension != d:
            raise ParseError("declared dimension disagrees with digits")
        return ifs


def load_ifs(source: Union[str, Path, dict]) -> HomogeneousIFS:
    if isinstance(source, dict):
        return HomogeneousIFS.from_json(source)
    return HomogeneousIFS.from_json(json.loads(Path(source).read_text()))


def _integer_matrix(matrix: Matrix) -> tuple[int, list[list[int]]]:
    den = reduce(lcm, (v.denominator for row in matrix for v in row), 1)
    return den, [[int(v * den) for v in row] for row in matrix]


def _integer_vectors(vectors: Sequence[Point]) -> tuple[int, list[tuple[int, ...]]]:
    den = reduce(lcm, (c.denominator for v in vectors for c in v), 1)
    return den, [tuple(int(c * den) for c in v) for v in vectors]


def prefix_points(ifs: HomogeneousIFS, n: int, cap: int = DEFAULT_CAP) -> PointCloud:
    """All depth-n truncations ``sum_{k<=n} (rho O)^(k-1) b_{i_k}`` of codings.

    Built by the self-similar recursion ``P_{j+1} = U_b (b + rho O P_j)`` in
    integer arithmetic over a common denominator.
    """
    if n < 0:
        raise ValueError("depth must be non-negative")
    check_budget(f"depth-{n} prefix", ifs.m**n, cap)
    d = ifs.dimension
    dm, mi = _integer_matrix(ifs.linear)
    db, bi = _integer_vectors(ifs.digits.digits)
    q = 1
    pts = {(0,) * d}
    for _ in range(n):
        q2 = lcm(q * dm, db)
        a, c = q2 // (q * dm), q2 // db
        shifts = [tuple(c * v for v in b) for b in bi]
        nxt = set()
        if d == 1:
            s = a * mi[0][0]
            for (x,) in pts:
                y = s * x
                nxt.update((y + b[0],) for b in shifts)
        else:
            for x in pts:
                y = tuple(a * sum(r * v for r, v in zip(row, x)) for row in mi)
                nxt.update(tuple(u + v for u, v in zip(y, b)) for b in shifts)
        q, pts = q2, nxt
    _, r_sq = ifs.outer_bound()
    return PointCloud.from_integers(
        d, q, pts, depth=n, description=f"depth-{n} prefix of homogeneous IFS",
        tail_radius_sq=ifs.ratio ** (2 * n) * r_sq,
    )


class SSCStatus(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    UNKNOWN = "UnknownAtDepth"


@dataclass(frozen=True)
class SeparationVerdict:
    status: SSCStatus
    probe_depth: int
    depth: int
    witness: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status is SSCStatus.HOLDS

    def to_json(self) -> dict:
        return {"status": self.status.value, "probe_depth": self.probe_depth, "depth": self.depth,
                "witness": self.witness}


def _word_str(w: tuple) -> str:
    return "".join(str(i) for i in w) if max(w, default=0) < 10 else ".".join(map(str, w))


def ssc_check(ifs: HomogeneousIFS, probe_depth: int = 4, conflict_cap: int = 20000) -> SeparationVerdict:
    """Certify or refute that the first-level pieces of the attractor are disjoint.

    Depth-k cylinders sit in balls of radius ``rho^k r`` around the images of
    the outer-bound centre. Pairs of balls with different first letters that
    meet are refined; an empty conflict list certifies separation. A conflict
    whose maps coincide, or whose pieces share an exact point built from
    fixed points of short words, certifies failure.
    """
    if probe_depth < 1:
        raise ValueError("probe depth must be at least 1")
    m, d = ifs.m, ifs.dimension
    z, r_sq = ifs.outer_bound()
    maps = ifs.maps()
    # fixed points of words of length 1 and 2 lie in the attractor
    tails: list[Point] = []
    for w in list(product(range(m), repeat=1)) + list(product(range(m), repeat=2)):
        lin = ifs.linear_power(len(w))
        p = zero(d)
        for i in reversed(w):
            p = maps[i](p)
        a = tuple(tuple(int(i == j) - lin[i][j] for j in range(d)) for i in range(d))
        tails.append(solve(a, p))
    tails = sorted(set(tails))

    # a word is represented by (letters, prefix point f_w(0)); f_w(x) = prefix + M^k x
    def children(word):
        letters, pre, k = word
        mk = ifs.linear_power(k)
        return [(letters + (i + 1,), add(pre, matvec(mk, b)), k + 1) for i, b in enumerate(ifs.digits)]

    level = [((i + 1,), b, 1) for i, b in enumerate(ifs.digits)]
    conflicts = [(u, v) for a, u in enumerate(level) for v in level[a + 1:]]
    for k in range(1, probe_depth + 1):
        mk = ifs.linear_power(k)
        mz = matvec(mk, z)
        limit = 4 * ifs.ratio ** (2 * k) * r_sq
        kept = []
        for u, v in conflicts:
            cu, cv = add(u[1], mz), add(v[1], mz)
            if norm_sq(sub(cu, cv)) <= limit:
                kept.append((u, v))
        for u, v in kept:
            if u[1] == v[1]:
                return SeparationVerdict(SSCStatus.FAILS, probe_depth, k, {
                    "reason": "coinciding cylinder maps",
                    "words": [_word_str(u[0]), _word_str(v[0])],
                    "point": format_point(u[1]),
                })
            tu = {add(u[1], matvec(mk, p)) for p in tails}
            tv = {add(v[1], matvec(mk, p)) for p in tails}
            common = sorted(tu & tv)
            if common:
                return SeparationVerdict(SSCStatus.FAILS, probe_depth, k, {
                    "reason": "common attractor point of two first-level pieces",
                    "words": [_word_str(u[0]), _word_str(v[0])],
                    "point": format_point(common[0]),
                })
        if not kept:
            return SeparationVerdict(SSCStatus.HOLDS, probe_depth, k, {
                "reason": "depth-k cylinder balls with distinct first letters are pairwise disjoint",
                "center": format_point(z),
                "radius_sq": str(r_sq),
                "cylinder_radius_sq": str(ifs.ratio ** (2 * k) * r_sq),
                "pairs_refined": len(conflicts),
            })
        if k == probe_depth:
            break
        nxt = []
        for u, v in kept:
            cu, cv = children(u), children(v)
            nxt.extend((a, b) for a in cu for b in cv)
            if len(nxt) > conflict_cap:
                return SeparationVerdict(SSCStatus.UNKNOWN, probe_depth, k, {
                    "reason": "conflict budget exhausted", "conflicts": len(nxt)})
        conflicts = nxt
    return SeparationVerdict(SSCStatus.UNKNOWN, probe_depth, probe_depth, {
        "reason": "overlapping cylinder balls remain at probe depth", "conflicts": len(kept)})


@dataclass(frozen=True)
class DimensionValue:
    """``log m / (-log rho)`` with its exact generators."""

    m: int
    ratio: Fraction
    value: object

    def __float__(self) -> float:
        return float(self.value)


def similarity_dimension(ifs: HomogeneousIFS) -> DimensionValue:
    return DimensionValue(ifs.m, ifs.ratio, num.log(ifs.m) / -num.log(ifs.ratio))


def translation_intersection_digits(digits: DigitSet, t_digits: Sequence[Point],
                                    horizon: Optional[int] = None) -> list[tuple[Point, ...]]:
    """Per-position digit sets ``D ∩ (D + t_k)`` for ``k = 1..horizon``.

    An empty position means ``K ∩ (K + t)`` is empty when the difference
    system is strongly separated.
    """
    horizon = len(t_digits) if horizon is None else horizon
    if horizon > len(t_digits):
        raise ValueError(f"only {len(t_digits)} translation digits for horizon {horizon}")
    diff = set(difference_digits(digits).digits)
    dset = set(digits.digits)
    out = []
    for t in t_digits[:horizon]:
        t = tuple(rational(c) for c in t)
        if t not in diff:
            raise ValueError(f"{format_point(t)} is not a difference of two digits")
        out.append(tuple(sorted(dset & {add(b, t) for b in digits})))
    return out
