"""Exact rational geometry: points, orthogonal matrices and affine contractions.

Scalars are :class:`fractions.Fraction`; a point is a tuple of Fractions.
Python's tuple ordering is already the lexicographic order used throughout
(first differing coordinate decides), so points sort canonically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

Point = Tuple[Fraction, ...]
Matrix = Tuple[Tuple[Fraction, ...], ...]
RationalLike = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")


class ParseError(ValueError):
    """Malformed rational, point or matrix literal."""


class DimensionError(ValueError):
    """Operands live in different dimensions."""


def rational(x: RationalLike) -> Fraction:
    """Parse ``x`` as an exact rational.

    Accepts ints, Fractions and strings ``"p"`` or ``"p/q"``. Floats and
    decimal strings are rejected so nothing is silently approximated.
    """
    if isinstance(x, bool):
        raise ParseError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if not _RATIONAL_RE.match(x):
            raise ParseError(f"not a rational literal: {x!r}")
        try:
            return Fraction(x.replace(" ", ""))
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in {x!r}") from None
    raise ParseError(f"cannot read {type(x).__name__} {x!r} as an exact rational")


def format_rational(x: Fraction) -> str:
    return str(x)


def point(*coords: RationalLike) -> Point:
    if not coords:
        raise ParseError("a point needs at least one coordinate")
    return tuple(rational(c) for c in coords)


def parse_point(text: Union[str, Sequence[RationalLike]]) -> Point:
    """Read ``"(1/3,-2/5)"``, a bare ``"1/3"`` or a list of rational literals."""
    if isinstance(text, str):
        body = text.strip()
        if body.startswith("(") and body.endswith(")"):
            body = body[1:-1]
        parts = [p for p in body.split(",")]
        if not parts or any(not p.strip() for p in parts):
            raise ParseError(f"malformed point literal: {text!r}")
        return point(*parts)
    if isinstance(text, (int, Fraction)):
        return point(text)
    return point(*text)


def format_point(p: Point) -> str:
    return "(" + ",".join(str(c) for c in p) + ")"


def zero(d: int) -> Point:
    return (Fraction(0),) * d


def _check_dims(*vs: Sequence) -> int:
    d = len(vs[0])
    for v in vs[1:]:
        if len(v) != d:
            raise DimensionError(f"dimension mismatch: {d} vs {len(v)}")
    return d


def add(x: Point, y: Point) -> Point:
    _check_dims(x, y)
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Point, y: Point) -> Point:
    _check_dims(x, y)
    return tuple(a - b for a, b in zip(x, y))


def neg(x: Point) -> Point:
    return tuple(-a for a in x)


def scale(c: Fraction, x: Point) -> Point:
    return tuple(c * a for a in x)


def norm_sq(x: Point) -> Fraction:
    return sum((a * a for a in x), Fraction(0))


def lex_less(x: Point, y: Point) -> bool:
    """Strict lexicographic order: the first differing coordinate decides."""
    _check_dims(x, y)
    return tuple(x) < tuple(y)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    _check_dims(a, b)
    cols = list(zip(*b))
    return tuple(tuple(sum((r * c for r, c in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def matvec(a: Matrix, x: Point) -> Point:
    _check_dims(a, x)
    return tuple(sum((r * c for r, c in zip(row, x)), Fraction(0)) for row in a)


def identity_matrix(d: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d))


def solve(a: Matrix, b: Point) -> Point:
    """Solve ``a x = b`` exactly by Gaussian elimination; ``a`` must be invertible."""
    d = _check_dims(a, b)
    rows = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for col in range(d):
        pivot = next((r for r in range(col, d) if rows[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        pv = rows[col][col]
        rows[col] = [v / pv for v in rows[col]]
        for r in range(d):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[col])]
    return tuple(row[d] for row in rows)


@dataclass(frozen=True)
class OrthoMatrix:
    """A d×d orthogonal matrix with rational entries, checked exactly."""

    rows: Matrix

    def __post_init__(self) -> None:
        rows = tuple(tuple(rational(v) for v in row) for row in self.rows)
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise DimensionError("orthogonal matrix must be square and non-empty")
        object.__setattr__(self, "rows", rows)
        transpose = tuple(zip(*rows))
        if matmul(transpose, rows) != identity_matrix(d):
            raise ValueError(f"matrix is not orthogonal: {rows}")

    @classmethod
    def identity(cls, d: int) -> "OrthoMatrix":
        return cls(identity_matrix(d))

    @classmethod
    def rotation(cls, cos: RationalLike, sin: RationalLike) -> "OrthoMatrix":
        c, s = rational(cos), rational(sin)
        return cls(((c, -s), (s, c)))

    @classmethod
    def from_entries(cls, entries: Sequence, d: int | None = None) -> "OrthoMatrix":
        """Build from nested rows or a flat row-major list."""
        if entries and isinstance(entries[0], (list, tuple)):
            return cls(tuple(tuple(rational(v) for v in row) for row in entries))
        flat = [rational(v) for v in entries]
        d = d if d is not None else int(round(len(flat) ** 0.5))
        if d * d != len(flat):
            raise ParseError(f"{len(flat)} entries do not form a square matrix")
        return cls(tuple(tuple(flat[i * d:(i + 1) * d]) for i in range(d)))

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def __matmul__(self, other: "OrthoMatrix") -> "OrthoMatrix":
        return OrthoMatrix(matmul(self.rows, other.rows))

    def apply(self, x: Point) -> Point:
        return matvec(self.rows, x)

    def power(self, k: int) -> "OrthoMatrix":
        out = OrthoMatrix.identity(self.dimension)
        for _ in range(k):
            out = out @ self
        return out

    def determinant(self) -> Fraction:
        d = self.dimension
        if d == 1:
            return self.rows[0][0]
        if d == 2:
            (a, b), (c, e) = self.rows
            return a * e - b * c
        # orthogonal => det is ±1; recover the sign by elimination
        rows = [list(r) for r in self.rows]
        det = Fraction(1)
        for col in range(d):
            pivot = next(r for r in range(col, d) if rows[r][col] != 0)
            if pivot != col:
                rows[col], rows[pivot] = rows[pivot], rows[col]
                det = -det
            det *= rows[col][col]
            for r in range(col + 1, d):
                f = rows[r][col] / rows[col][col]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[col])]
        return det

    def flat(self) -> list[str]:
        return [str(v) for row in self.rows for v in row]


@dataclass(frozen=True)
class AffineMap:
    """The contraction ``x -> ratio * ortho @ x + shift`` with ``0 < ratio < 1``."""

    ratio: Fraction
    ortho: OrthoMatrix
    shift: Point

    def __post_init__(self) -> None:
        ratio = rational(self.ratio)
        if not 0 < ratio < 1:
            raise ValueError(f"contraction ratio must lie in (0,1), got {ratio}")
        object.__setattr__(self, "ratio", ratio)
        object.__setattr__(self, "shift", tuple(rational(c) for c in self.shift))
        _check_dims(self.ortho.rows, self.shift)

    @classmethod
    def scalar(cls, ratio: RationalLike, shift: RationalLike = 0, sign: int = 1) -> "AffineMap":
        """One-dimensional map ``x -> sign*ratio*x + shift``."""
        return cls(rational(ratio), OrthoMatrix(((Fraction(sign),),)), (rational(shift),))

    @property
    def dimension(self) -> int:
        return len(self.shift)

    @property
    def linear(self) -> Matrix:
        return tuple(tuple(self.ratio * v for v in row) for row in self.ortho.rows)

    def __call__(self, x: Point) -> Point:
        return apply(self, x)

    def fixed_point(self) -> Point:
        d = self.dimension
        lin = self.linear
        a = tuple(tuple(int(i == j) - lin[i][j] for j in range(d)) for i in range(d))
        return solve(a, self.shift)


def apply(f: AffineMap, x: Point) -> Point:
    _check_dims(f.shift, x)
    return add(scale(f.ratio, f.ortho.apply(x)), f.shift)


def compose(f: AffineMap, g: AffineMap) -> AffineMap:
    """Return ``f ∘ g``."""
    if f.dimension != g.dimension:
        raise DimensionError(f"dimension mismatch: {f.dimension} vs {g.dimension}")
    return AffineMap(f.ratio * g.ratio, f.ortho @ g.ortho, apply(f, g.shift))


def compose_all(maps: Iterable[AffineMap]) -> AffineMap:
    """``f_1 ∘ f_2 ∘ ... ∘ f_k`` for the maps in the given order."""
    maps = list(maps)
    out = maps[-1]
    for f in reversed(maps[:-1]):
        out = compose(f, out)
    return out
