"""Hypermetric inequalities, cut semimetrics and the metric families.

Points are indexed ``0 .. n-1``.  Pair-indexed vectors use the lexicographic
pair order ``(0,1), (0,2), ..., (n-2,n-1)`` everywhere.  A b-inequality reads
``sum_{i<j} b_i b_j d(i,j) <= s(s+1)`` with ``sum(b) = 2s + 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Iterator, Sequence

from .exactla import fmt_rat, parse_rat, rank


@lru_cache(maxsize=None)
def pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(combinations(range(n), 2))


@lru_cache(maxsize=None)
def pair_index(n: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(pairs(n))}


def n_pairs(n: int) -> int:
    return n * (n - 1) // 2


def n_from_pairs(length: int) -> int:
    n = 1
    while n_pairs(n) < length:
        n += 1
    if n_pairs(n) != length:
        raise ValueError(f"{length} is not a triangular number C(n,2)")
    return n


@dataclass(frozen=True)
class DistVec:
    n: int
    d: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.d) != n_pairs(self.n):
            raise ValueError(f"distance vector for n={self.n} needs {n_pairs(self.n)} entries, got {len(self.d)}")
        object.__setattr__(self, "d", tuple(Fraction(x) for x in self.d))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        if i == j:
            return Fraction(0)
        if i > j:
            i, j = j, i
        return self.d[pair_index(self.n)[(i, j)]]

    def scale(self, lam) -> "DistVec":
        return DistVec(self.n, tuple(lam * x for x in self.d))

    def to_json(self) -> dict:
        return {"n": self.n, "d": [fmt_rat(x) for x in self.d]}

    @classmethod
    def from_json(cls, data: dict) -> "DistVec":
        return cls(int(data["n"]), tuple(parse_rat(x) for x in data["d"]))

    @classmethod
    def from_function(cls, n: int, f) -> "DistVec":
        return cls(n, tuple(Fraction(f(i, j)) for i, j in pairs(n)))


class EvenSumError(ValueError):
    pass


@dataclass(frozen=True)
class BInequality:
    b: tuple[int, ...]

    def __post_init__(self):
        b = tuple(int(x) for x in self.b)
        object.__setattr__(self, "b", b)
        if sum(b) % 2 == 0:
            raise EvenSumError(f"b = {b} has even sum")

    @property
    def n(self) -> int:
        return len(self.b)

    @property
    def s(self) -> int:
        return (sum(self.b) - 1) // 2

    @property
    def rhs(self) -> int:
        return self.s * (self.s + 1)

    @property
    def homogeneous(self) -> bool:
        return self.rhs == 0

    @property
    def trivial(self) -> bool:
        """At most one nonzero entry: the left-hand side vanishes identically."""
        return sum(1 for x in self.b if x) <= 1

    @property
    def gonal(self) -> int | None:
        """``2k+1`` for {0,+-1}-valued b with support ``2k+1``, else None."""
        if all(x in (-1, 0, 1) for x in self.b):
            return sum(1 for x in self.b if x)
        return None

    def normal(self) -> tuple[int, ...]:
        """Coefficients of ``-H(b, .)``; the cone facet reads ``normal . d >= -rhs``."""
        b = self.b
        return tuple(-b[i] * b[j] for i, j in pairs(self.n))

    def homogenized(self) -> tuple[int, ...]:
        """``(rhs, -b_i b_j ...)``: nonnegative on ``(1, d)`` iff d satisfies the inequality."""
        return (self.rhs, *self.normal())

    def to_json(self) -> dict:
        return {"n": self.n, "b": list(self.b), "rhs": fmt_rat(self.rhs)}

    @classmethod
    def from_json(cls, data: dict) -> "BInequality":
        q = cls(tuple(int(x) for x in data["b"]))
        if "n" in data and int(data["n"]) != q.n:
            raise ValueError("n does not match the length of b")
        if "rhs" in data and parse_rat(data["rhs"]) != q.rhs:
            raise ValueError(f"rhs {data['rhs']} inconsistent with b (expected {q.rhs})")
        return q


@dataclass(frozen=True)
class CutVec:
    n: int
    S: frozenset[int]

    @property
    def vec(self) -> tuple[int, ...]:
        return cut_vector(self.S, self.n)


def normalize_subset(S: Iterable[int], n: int) -> frozenset[int]:
    """Representative of ``S`` modulo complement that avoids point 0."""
    S = frozenset(S)
    if any(not 0 <= i < n for i in S):
        raise ValueError(f"subset {sorted(S)} out of range for n={n}")
    if 0 in S:
        S = frozenset(range(n)) - S
    return S


def cut_vector(S: Iterable[int], n: int) -> tuple[int, ...]:
    S = frozenset(S)
    return tuple(int((i in S) != (j in S)) for i, j in pairs(n))


def cuts(n: int, include_zero: bool = False) -> list[CutVec]:
    """All cuts modulo complement, ordered by the bitmask of ``S`` over points ``1..n-1``."""
    out = []
    for mask in range(0 if include_zero else 1, 1 << (n - 1)):
        S = frozenset(i + 1 for i in range(n - 1) if mask >> i & 1)
        out.append(CutVec(n, S))
    return out


def eval_H(q: BInequality, d: DistVec) -> Fraction:
    if q.n != d.n:
        raise ValueError("n mismatch")
    b = q.b
    return sum((b[i] * b[j] * x for (i, j), x in zip(pairs(d.n), d.d) if b[i] and b[j]), Fraction(0))


def eval_on_cut(q: BInequality, S: Iterable[int]) -> int:
    """``H(b, delta_S)`` in closed form ``t (2s + 1 - t)`` with ``t = sum_{i in S} b_i``."""
    S = set(S)
    if any(not 0 <= i < q.n for i in S):
        raise ValueError("subset out of range")
    t = sum(q.b[i] for i in S)
    return t * (2 * q.s + 1 - t)


def cut_incidence(q: BInequality, include_zero_cut: bool = False) -> list[CutVec]:
    s = q.s
    out = []
    for c in cuts(q.n, include_zero=include_zero_cut):
        t = sum(q.b[i] for i in c.S)
        if t == s or t == s + 1:
            out.append(c)
    return out


def cut_incidence_count(q: BInequality, include_zero_cut: bool = False) -> int:
    return len(cut_incidence(q, include_zero_cut))


def cut_rank(q: BInequality) -> int:
    """Rank of the incident cut semimetrics (the zero cut adds nothing)."""
    inc = [list(c.vec) for c in cut_incidence(q)]
    return rank(inc) if inc else 0


def met_family(n: int) -> list[BInequality]:
    """The ``3 C(n,3)`` triangle inequalities ``d(i,j) <= d(i,k) + d(j,k)``."""
    out = []
    for tri in combinations(range(n), 3):
        for neg in tri:
            b = [0] * n
            for i in tri:
                b[i] = -1 if i == neg else 1
            out.append(BInequality(tuple(b)))
    return out


def metp_family(n: int) -> list[BInequality]:
    """Triangle plus the ``C(n,3)`` perimeter inequalities ``d_ij + d_ik + d_jk <= 2``."""
    out = met_family(n)
    for tri in combinations(range(n), 3):
        b = [0] * n
        for i in tri:
            b[i] = 1
        out.append(BInequality(tuple(b)))
    return out


def gen_b(n: int, max_abs: int, target: str = "cone", per_class: bool = False) -> Iterator[BInequality]:
    """One Sym(n)-canonical b per orbit with ``|b_i| <= max_abs``.

    ``target="cone"`` yields ``sum(b) = 1``; ``"polytope"`` yields every odd
    positive sum (``b`` and ``-b`` give the same inequality).  Representatives
    are the nondecreasing arrangements.  With ``per_class`` only the first
    member of each switching class (same multiset of ``|b_i|``) is kept.
    Trivial b (at most one nonzero entry, zero left-hand side) are skipped.
    """
    if max_abs < 1:
        raise ValueError("max_abs must be >= 1")
    if target not in ("cone", "polytope"):
        raise ValueError(f"unknown target {target!r}")
    seen: set[tuple[int, ...]] = set()
    for prof in combinations_with_replacement(range(-max_abs, max_abs + 1), n):
        t = sum(prof)
        if target == "cone" and t != 1:
            continue
        if target == "polytope" and (t <= 0 or t % 2 == 0):
            continue
        if sum(1 for x in prof if x) <= 1:
            continue
        if per_class:
            key = tuple(sorted(abs(x) for x in prof))
            if key in seen:
                continue
            seen.add(key)
        yield BInequality(prof)


def switch_dist(d: DistVec, S: Iterable[int]) -> DistVec:
    S = frozenset(S)
    return DistVec(d.n, tuple((1 - x) if ((i in S) != (j in S)) else x for (i, j), x in zip(pairs(d.n), d.d)))


def switch_ineq(q: BInequality, S: Iterable[int]) -> BInequality:
    S = frozenset(S)
    return BInequality(tuple(-x if i in S else x for i, x in enumerate(q.b)))


def brute_force_max_violation(d: DistVec, max_abs: int, target: str = "cone") -> tuple[Fraction, tuple[int, ...] | None]:
    """Largest ``H(b, d) - rhs(b)`` over all ``|b_i| <= max_abs`` (pure Python, small n only)."""
    from itertools import product

    best, arg = None, None
    for b in product(range(-max_abs, max_abs + 1), repeat=d.n):
        t = sum(b)
        if (target == "cone" and t != 1) or t % 2 == 0:
            continue
        q = BInequality(b)
        v = eval_H(q, d) - q.rhs
        if best is None or v > best:
            best, arg = v, b
    return best, arg
