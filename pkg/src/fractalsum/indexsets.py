"""Subsets of ℕ = {1, 2, 3, ...} with exact prefix counts.

Infinite sets are only residue classes; everything else carries an explicit
horizon past which membership is unknown and queries raise.
"""

from __future__ import annotations

import bisect
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .exact import rational


class HorizonError(ValueError):
    """Membership was requested beyond what an index set certifies."""


class IndexSet(ABC):
    horizon: Optional[int] = None  # None: membership known everywhere

    def _check(self, n: int) -> None:
        if self.horizon is not None and n > self.horizon:
            raise HorizonError(f"{self.literal()} is only known up to {self.horizon}, asked {n}")

    @abstractmethod
    def prefix_count(self, n: int) -> int:
        """``#(S ∩ [1, n])``."""

    @abstractmethod
    def literal(self) -> str:
        ...

    def __contains__(self, k: int) -> bool:
        return self.prefix_count(k) - self.prefix_count(k - 1) == 1 if k >= 1 else False

    def count_between(self, lo: int, hi: int) -> int:
        """``#(S ∩ [lo, hi])``."""
        if hi < lo:
            return 0
        return self.prefix_count(hi) - self.prefix_count(max(lo, 1) - 1)

    def members_upto(self, n: int) -> list[int]:
        self._check(n)
        return [k for k in range(1, n + 1) if k in self]

    def runs(self, lo: int) -> Iterator[tuple[int, Optional[int], bool]]:
        """Maximal runs ``(a, b, is_member)`` covering ``[lo, ...)``; ``b=None`` is unbounded."""
        k = lo
        while True:
            if self.horizon is not None and k > self.horizon:
                return
            member = k in self
            b = k
            while (self.horizon is None or b + 1 <= self.horizon) and ((b + 1) in self) == member:
                b += 1
            yield k, b, member
            k = b + 1

    def first_exceeding(self, lo: int, c: Fraction, limit: Optional[int] = None) -> Optional[int]:
        """Smallest ``n > lo`` with ``#(S ∩ [lo+1, n]) > c * n``, or ``None``."""
        cnt = 0
        for a, b, member in self.runs(lo + 1):
            sigma = 1 if member else 0
            g_a = cnt + sigma - c * a
            if g_a > 0:
                return a if limit is None or a <= limit else None
            slope = sigma - c
            if slope > 0:
                n = a + int((-g_a) // slope) + 1
                if b is None or n <= b:
                    return n if limit is None or n <= limit else None
            if b is None:
                return None
            if limit is not None and b >= limit:
                return None
            cnt += sigma * (b - a + 1)
        return None

    def __repr__(self) -> str:
        return f"IndexSet({self.literal()!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IndexSet):
            return NotImplemented
        return (self.literal(), self.horizon) == (other.literal(), other.horizon)

    def __hash__(self) -> int:
        return hash((self.literal(), self.horizon))


class ResidueClass(IndexSet):
    """``{k >= start : k ≡ residue (mod modulus)}``."""

    def __init__(self, modulus: int, residue: int, start: int = 1):
        if modulus < 1 or start < 1:
            raise ValueError("modulus and start must be positive")
        self.modulus, self.residue, self.start = modulus, residue % modulus, start

    def literal(self) -> str:
        s = f"mod:{self.modulus},{self.residue}"
        return s if self.start == 1 else f"{s},{self.start}"

    def _upto(self, n: int) -> int:
        # members of ℤ in [1, n] with the residue
        return (n - self.residue) // self.modulus - (0 - self.residue) // self.modulus

    def prefix_count(self, n: int) -> int:
        if n < self.start:
            return 0
        return self._upto(n) - self._upto(self.start - 1)

    def __contains__(self, k: int) -> bool:
        return k >= self.start and k % self.modulus == self.residue

    def runs(self, lo: int):
        k = lo
        while k < self.start:
            yield k, self.start - 1, False
            k = self.start
        if self.modulus == 1:
            yield k, None, True
            return
        while True:
            if k in self:
                yield k, k, True
                k += 1
            else:
                nxt = k + (self.residue - k) % self.modulus
                yield k, nxt - 1, False
                k = nxt

    def first_exceeding(self, lo: int, c: Fraction, limit: Optional[int] = None) -> Optional[int]:
        L = self.modulus
        base = max(lo, self.start) + 1
        # short direct scan before the periodic regime
        for n in range(lo + 1, base + L):
            if self.count_between(lo + 1, n) > c * n:
                return n if limit is None or n <= limit else None
        base += L
        best = None
        slope = 1 - c * L
        for o in range(L):
            n0 = base + o
            g0 = self.count_between(lo + 1, n0) - c * n0
            if g0 > 0:
                q = 0
            elif slope > 0:
                q = int((-g0) // slope) + 1
            else:
                continue
            n = n0 + q * L
            best = n if best is None else min(best, n)
        if best is not None and limit is not None and best > limit:
            return None
        return best


def natural_numbers() -> ResidueClass:
    return ResidueClass(1, 0)


class Blocks(IndexSet):
    """Finite union of disjoint integer intervals ``[a, b]``, optionally truncated at ``horizon``."""

    def __init__(self, blocks: Sequence[tuple[int, int]], horizon: Optional[int] = None):
        blocks = sorted((int(a), int(b)) for a, b in blocks)
        for a, b in blocks:
            if a < 1 or b < a:
                raise ValueError(f"bad block [{a},{b}]")
        merged: list[tuple[int, int]] = []
        for a, b in blocks:
            if merged and a <= merged[-1][1]:
                raise ValueError("blocks overlap")
            if merged and a == merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], b)
            else:
                merged.append((a, b))
        blocks = merged
        if horizon is not None and blocks and blocks[-1][1] > horizon:
            raise ValueError("block extends past horizon")
        self.blocks = tuple(blocks)
        self.horizon = horizon
        self._starts = [a for a, _ in blocks]
        self._cum = [0]
        for a, b in blocks:
            self._cum.append(self._cum[-1] + b - a + 1)

    def literal(self) -> str:
        s = "blocks:" + ",".join(f"{a}-{b}" for a, b in self.blocks)
        return s if self.horizon is None else f"{s}@{self.horizon}"

    def prefix_count(self, n: int) -> int:
        self._check(n)
        i = bisect.bisect_right(self._starts, n)
        if i == 0:
            return 0
        a, b = self.blocks[i - 1]
        return self._cum[i - 1] + min(n, b) - a + 1

    def __contains__(self, k: int) -> bool:
        self._check(k)
        i = bisect.bisect_right(self._starts, k)
        return i > 0 and k <= self.blocks[i - 1][1]

    def runs(self, lo: int):
        k = lo
        for a, b in self.blocks:
            if b < k:
                continue
            if a > k:
                yield k, a - 1, False
            yield max(a, k), b, True
            k = b + 1
        if self.horizon is None:
            yield k, None, False
        elif k <= self.horizon:
            yield k, self.horizon, False


class ExplicitPrefix(IndexSet):
    """Members listed explicitly up to a horizon."""

    def __init__(self, members: Sequence[int], horizon: int):
        members = sorted(set(int(k) for k in members))
        if members and (members[0] < 1 or members[-1] > horizon):
            raise ValueError("members must lie in [1, horizon]")
        self.members = tuple(members)
        self.horizon = horizon

    def literal(self) -> str:
        return "list:" + ",".join(map(str, self.members)) + f"@{self.horizon}"

    def prefix_count(self, n: int) -> int:
        self._check(n)
        return bisect.bisect_right(self.members, n)


def parse_index_set(text: str) -> IndexSet:
    """Read ``mod:l,r[,start]``, ``blocks:a-b,c-d[@H]``, ``list:1,4,10@H`` or ``all``."""
    text = text.strip()
    if text in ("all", "N"):
        return natural_numbers()
    kind, _, body = text.partition(":")
    try:
        if kind == "mod":
            parts = [int(p) for p in body.split(",")]
            return ResidueClass(*parts)
        if kind == "blocks":
            body, _, h = body.partition("@")
            blocks = [tuple(int(v) for v in blk.split("-")) for blk in body.split(",") if blk]
            return Blocks(blocks, int(h) if h else None)
        if kind == "list":
            body, sep, h = body.partition("@")
            if not sep:
                raise ValueError("list literal needs a horizon '@H'")
            return ExplicitPrefix([int(v) for v in body.split(",") if v], int(h))
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad index-set literal {text!r}: {exc}") from None
    raise ValueError(f"unknown index-set literal {text!r}")


@dataclass(frozen=True)
class Checkpoints:
    """``0 = n_0 < n_1 < ... < n_K`` with ``#(S ∩ [n_{k-1}+1, n_k]) / n_k > beta - 1/k``."""

    ns: tuple
    beta: Fraction
    counts: tuple

    @property
    def all(self) -> tuple:
        return (0,) + self.ns

    def verify(self, S: IndexSet) -> bool:
        """Recount every block and recheck the inequality exactly."""
        prev = 0
        for k, (n, c) in enumerate(zip(self.ns, self.counts), 1):
            if n <= prev or S.count_between(prev + 1, n) != c:
                return False
            if not Fraction(c, n) > self.beta - Fraction(1, k):
                return False
            prev = n
        return True

    def is_minimal(self, S: IndexSet) -> bool:
        """``n_k - 1`` fails the inequality whenever it is a candidate."""
        prev = 0
        for k, n in enumerate(self.ns, 1):
            if n - 1 > prev and Fraction(S.count_between(prev + 1, n - 1), n - 1) > self.beta - Fraction(1, k):
                return False
            prev = n
        return True


def greedy_checkpoints(S: IndexSet, beta, count: int, limit: Optional[int] = None) -> Checkpoints:
    """Each ``n_k`` is the least integer past ``n_{k-1}`` meeting the density inequality."""
    beta = rational(beta)
    ns, counts = [], []
    prev = 0
    for k in range(1, count + 1):
        n = S.first_exceeding(prev, beta - Fraction(1, k), limit)
        if n is None:
            where = S.horizon if S.horizon is not None else limit
            raise HorizonError(f"checkpoint {k} for beta={beta} not found within {where}")
        counts.append(S.count_between(prev + 1, n))
        ns.append(n)
        prev = n
    return Checkpoints(tuple(ns), beta, tuple(counts))


@dataclass(frozen=True)
class Partition:
    subsets: tuple
    checkpoints: Checkpoints
    ell: int

    def density_witness(self, S_index: int) -> list[dict]:
        """Counts of ``S_j`` at its own checkpoints ``n_{kl+j}`` against ``beta - 1/(kl+j)``."""
        j = S_index
        sub = self.subsets[j - 1]
        out = []
        ns = self.checkpoints.all
        k = 0
        while k * self.ell + j < len(ns):
            idx = k * self.ell + j
            n = ns[idx]
            c = sub.prefix_count(n)
            out.append({"checkpoint": idx, "n": n, "count": c,
                        "exceeds": Fraction(c, n) > self.checkpoints.beta - Fraction(1, idx)})
            k += 1
        return out


def partition_limsup(S: IndexSet, ell: int, rounds: int, beta=1, limit: Optional[int] = None) -> Partition:
    """Split ``S`` into ``l`` pieces, each keeping upper density ``beta`` at its checkpoints.

    Piece ``j`` collects ``S ∩ [n_{kl+j-1}+1, n_{kl+j}]`` for ``k = 0..rounds-1``.
    The pieces are truncated at ``n_{rounds*l}``.
    """
    if ell < 2:
        raise ValueError("need l >= 2")
    cps = greedy_checkpoints(S, beta, rounds * ell, limit)
    ns = cps.all
    horizon = ns[-1]
    pieces = []
    for j in range(1, ell + 1):
        blocks = []
        for k in range(rounds):
            lo, hi = ns[k * ell + j - 1] + 1, ns[k * ell + j]
            for a, b, member in S.runs(lo):
                if a > hi:
                    break
                if member:
                    blocks.append((a, min(b, hi) if b is not None else hi))
                if b is None or b >= hi:
                    break
        pieces.append(Blocks(blocks, horizon))
    return Partition(tuple(pieces), cps, ell)


def residue_partition(ell: int) -> list[ResidueClass]:
    """``S_j = lℕ + j - 1``: ``{l + j - 1, 2l + j - 1, ...}`` for ``j = 1..l``."""
    if ell < 2:
        raise ValueError("need l >= 2")
    return [ResidueClass(ell, j - 1, start=ell + j - 1) for j in range(1, ell + 1)]


def residue_cover(ell: int) -> list[ResidueClass]:
    """The ``l`` residue classes mod ``l`` restricted to ℕ; together they cover ℕ."""
    if ell < 2:
        raise ValueError("need l >= 2")
    return [ResidueClass(ell, j % ell) for j in range(1, ell + 1)]
