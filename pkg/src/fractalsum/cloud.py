"""Canonical finite point sets over a shared integer denominator.

A :class:`PointCloud` stores all points as integer numerator tuples over one
common denominator, reduced so the denominator is minimal. Two clouds with
the same dimension, denominator and numerators are the same exact point set,
which makes equality, containment and hashing structural and fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm, prod
from typing import Iterable, Optional, Sequence

from .exact import Matrix, Point, DimensionError

DEFAULT_CAP = 10**7


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its point budget."""

    def __init__(self, what: str, required: int, cap: int):
        super().__init__(f"{what} needs {required} points, budget is {cap}")
        self.what = what
        self.required = required
        self.cap = cap


def check_budget(what: str, required: int, cap: int) -> None:
    if required > cap:
        raise BudgetExceeded(what, required, cap)


def _reduce(denominator: int, nums: set) -> tuple[int, tuple]:
    g = denominator
    for x in nums:
        for c in x:
            g = gcd(g, c)
            if g == 1:
                break
        if g == 1:
            break
    if g > 1:
        denominator //= g
        nums = {tuple(c // g for c in x) for x in nums}
    return denominator, tuple(sorted(nums))


@dataclass(frozen=True)
class PointCloud:
    """Sorted, duplicate-free exact point set.

    ``tail_radius_sq`` bounds the squared distance from any prefix point to
    the attractor points whose codings it truncates (``None`` when unknown).
    """

    dimension: int
    denominator: int
    numerators: tuple
    depth: Optional[int] = field(default=None, compare=False)
    description: str = field(default="", compare=False)
    tail_radius_sq: Optional[Fraction] = field(default=None, compare=False)

    @classmethod
    def from_integers(cls, dimension: int, denominator: int, nums: Iterable[tuple], **meta) -> "PointCloud":
        den, canon = _reduce(denominator, set(nums))
        return cls(dimension, den, canon, **meta)

    @classmethod
    def from_points(cls, points: Iterable[Point], dimension: Optional[int] = None, **meta) -> "PointCloud":
        points = list(points)
        if not points:
            raise ValueError("a point cloud needs at least one point")
        d = dimension if dimension is not None else len(points[0])
        if any(len(p) != d for p in points):
            raise DimensionError("points of mixed dimension")
        den = reduce(lcm, (c.denominator for p in points for c in p), 1)
        nums = {tuple(c.numerator * (den // c.denominator) for c in p) for p in points}
        return cls.from_integers(d, den, nums, **meta)

    @classmethod
    def origin(cls, d: int, **meta) -> "PointCloud":
        return cls(d, 1, ((0,) * d,), **meta)

    def __len__(self) -> int:
        return len(self.numerators)

    @property
    def points(self) -> tuple[Point, ...]:
        q = self.denominator
        return tuple(tuple(Fraction(c, q) for c in x) for x in self.numerators)

    def __iter__(self):
        return iter(self.points)

    def _rescaled(self, denominator: int) -> set:
        f = denominator // self.denominator
        return {tuple(c * f for c in x) for x in self.numerators}

    def issubset(self, other: "PointCloud") -> bool:
        if self.dimension != other.dimension:
            raise DimensionError("dimension mismatch")
        # reduced denominators: self ⊆ other forces self.denominator | other.denominator
        if other.denominator % self.denominator:
            return False
        return self._rescaled(other.denominator) <= set(other.numerators)

    def __contains__(self, p: Point) -> bool:
        q = self.denominator
        if any(q % c.denominator for c in p):
            return False
        x = tuple(c.numerator * (q // c.denominator) for c in p)
        return x in set(self.numerators)

    def same_points(self, other: "PointCloud") -> bool:
        return self == other

    def transform(self, matrix: Matrix, **meta) -> "PointCloud":
        """Image under an exact rational linear map."""
        dm = reduce(lcm, (v.denominator for row in matrix for v in row), 1)
        mi = [[int(v * dm) for v in row] for row in matrix]
        nums = {tuple(sum(r * c for r, c in zip(row, x)) for row in mi) for x in self.numerators}
        return PointCloud.from_integers(self.dimension, self.denominator * dm, nums, **meta)

    def translate(self, v: Point, **meta) -> "PointCloud":
        den = reduce(lcm, (c.denominator for c in v), self.denominator)
        shift = tuple(c.numerator * (den // c.denominator) for c in v)
        nums = {tuple(a + b for a, b in zip(x, shift)) for x in self._rescaled(den)}
        return PointCloud.from_integers(self.dimension, den, nums, **meta)


def minkowski_sum(clouds: Sequence[PointCloud], cap: int = DEFAULT_CAP, description: str = "") -> PointCloud:
    """Exact sumset ``X_1 + ... + X_l`` of finite point sets, canonicalized."""
    if not clouds:
        raise ValueError("need at least one summand")
    d = clouds[0].dimension
    if any(c.dimension != d for c in clouds):
        raise DimensionError("summands of mixed dimension")
    check_budget("minkowski sum", prod(len(c) for c in clouds), cap)
    den = reduce(lcm, (c.denominator for c in clouds), 1)
    acc = {(0,) * d}
    for c in clouds:
        other = c._rescaled(den)
        if d == 1:
            acc = {(a[0] + b[0],) for a in acc for b in other}
        else:
            acc = {tuple(x + y for x, y in zip(a, b)) for a in acc for b in other}
    return PointCloud.from_integers(d, den, acc, description=description)
