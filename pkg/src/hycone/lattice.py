"""Covariance forms, empty spheres and exact lattice membership tests.

For ``d`` on points ``0..n-1`` put ``v_0 = 0`` and ``v_i = e_i``.  The
covariance form ``q`` on ``Z^(n-1)`` satisfies ``d(i,j) = q(v_i - v_j)``.
A b-vector with ``sum(b) = 1`` corresponds to the lattice point
``v = (b_1, ..., b_{n-1})`` and

    H(b, d) = r^2 - q[v - c]

where ``c``, ``r^2`` are the circumcentre and squared circumradius of the
standard simplex.  So ``d`` is a hypermetric exactly when no lattice point
lies strictly inside that sphere.

Every membership question is reduced to: does the quadratic function
``f(z) = A[z] + 2 beta.z + gamma`` take a negative value on ``Z^k``?  Positive
definite ``A`` goes to a closest-vector enumeration; singular and indefinite
``A`` are handled exactly (kernel reduction / scaled negative directions).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, count
from math import floor, ceil, isqrt, lcm
from typing import Sequence

import numpy as np

from .exactla import (
    LDLT,
    NoSolution,
    NonUnique,
    as_matrix,
    column_hermite,
    dot,
    fmt_rat,
    ldlt,
    matvec,
    parse_rat,
    primitive,
    quad,
    solve,
    transpose,
)
from .hypfamilies import BInequality, DistVec, eval_H, pairs


class NotPositiveDefinite(ValueError):
    pass


class NoCommonSphere(ValueError):
    pass


@dataclass(frozen=True)
class QuadForm:
    q: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        q = tuple(tuple(Fraction(x) for x in row) for row in self.q)
        object.__setattr__(self, "q", q)
        m = len(q)
        if any(len(row) != m for row in q) or any(q[i][j] != q[j][i] for i in range(m) for j in range(i)):
            raise ValueError("quadratic form must be a symmetric square matrix")

    @property
    def m(self) -> int:
        return len(self.q)

    @cached_property
    def factor(self) -> LDLT:
        return ldlt([list(r) for r in self.q])

    @property
    def classification(self) -> str:
        return self.factor.kind

    def __call__(self, x: Sequence) -> Fraction:
        return quad(self.q, x)

    def to_json(self) -> list[list[str]]:
        return [[fmt_rat(x) for x in row] for row in self.q]

    @classmethod
    def from_json(cls, data) -> "QuadForm":
        return cls(tuple(tuple(parse_rat(x) for x in row) for row in data))


@dataclass(frozen=True)
class Circumsphere:
    center: tuple[Fraction, ...]
    r2: Fraction


@dataclass
class MembershipResult:
    member: bool
    witness: BInequality | None = None
    violation: Fraction = Fraction(0)

    @property
    def verdict(self) -> str:
        return "Member" if self.member else "Violated"


# --- covariance correspondence ------------------------------------------------


def covariance_form(d: DistVec) -> QuadForm:
    m = d.n - 1
    q = [[Fraction(0)] * m for _ in range(m)]
    for i in range(1, d.n):
        for j in range(i, d.n):
            if i == j:
                q[i - 1][i - 1] = d[0, i]
            else:
                q[i - 1][j - 1] = q[j - 1][i - 1] = (d[0, i] + d[0, j] - d[i, j]) / 2
    return QuadForm(tuple(tuple(r) for r in q))


def distance_from_form(q: QuadForm) -> DistVec:
    n = q.m + 1

    def dist(i, j):
        if i == 0:
            return q.q[j - 1][j - 1]
        return q.q[i - 1][i - 1] + q.q[j - 1][j - 1] - 2 * q.q[i - 1][j - 1]

    return DistVec(n, tuple(dist(i, j) for i, j in pairs(n)))


def circumsphere(q: QuadForm) -> Circumsphere:
    """Sphere through ``0, e_1, ..., e_m`` for a positive definite form."""
    if q.classification != "pd":
        raise NotPositiveDefinite(f"form is {q.classification}, circumsphere needs positive definite")
    rhs = [q.q[i][i] / 2 for i in range(q.m)]
    c = solve([list(r) for r in q.q], rhs)
    return Circumsphere(tuple(c), q(c))


# --- closest vector enumeration -----------------------------------------------


def _int_range(mu: Fraction, B: Fraction) -> tuple[int, int]:
    """Integers ``z`` with ``(z - mu)^2 <= B`` as an inclusive range (empty if lo > hi)."""
    if B < 0:
        return 1, 0
    r = isqrt(floor(B)) + 1
    hi = floor(mu) + r
    while hi >= floor(mu) - r and (hi - mu) ** 2 > B:
        hi -= 1
    lo = ceil(mu) - r
    while lo <= ceil(mu) + r and (lo - mu) ** 2 > B:
        lo += 1
    return lo, hi


def cvp_enum(q: QuadForm | Sequence[Sequence], c: Sequence, bound, strict: bool = True) -> list[tuple[int, ...]]:
    """All ``x in Z^m`` with ``q[x - c] < bound`` (``<=`` when not strict), sorted.

    Layer-by-layer enumeration on the LDL^T factors; each coordinate range is
    found by exact squared comparisons.
    """
    if not isinstance(q, QuadForm):
        q = QuadForm(tuple(tuple(r) for r in q))
    fac = q.factor
    if fac.kind != "pd":
        raise NotPositiveDefinite(f"cvp_enum needs a positive definite form, got {fac.kind}")
    m = q.m
    bound = Fraction(bound)
    c = [Fraction(x) for x in c]
    if len(c) != m:
        raise ValueError("center dimension mismatch")
    if m == 0:
        return [()] if (0 < bound if strict else 0 <= bound) else []
    L, D = fac.L, fac.D
    z = [0] * m
    out: list[tuple[int, ...]] = []

    def layer(i: int, remaining: Fraction) -> None:
        mu = c[i] - sum((L[j][i] * (z[j] - c[j]) for j in range(i + 1, m)), Fraction(0))
        lo, hi = _int_range(mu, remaining / D[i])
        for zi in range(lo, hi + 1):
            rest = remaining - D[i] * (zi - mu) ** 2
            if rest < 0:
                continue
            z[i] = zi
            if i == 0:
                if rest > 0 or (rest == 0 and not strict):
                    out.append(tuple(z))
            else:
                layer(i - 1, rest)
        z[i] = 0

    layer(m - 1, bound)
    return sorted(out)


# --- integer minimisation of quadratic functions ------------------------------


def _fvalue(A, beta, gamma, z) -> Fraction:
    return quad(A, z) + 2 * dot(beta, z) + gamma


def find_negative(A: Sequence[Sequence], beta: Sequence, gamma) -> tuple[tuple[int, ...], Fraction] | None:
    """A lattice point where ``A[z] + 2 beta.z + gamma < 0``, or None if there is none.

    When the function is bounded below the returned point is a minimiser
    (lexicographically least among minimisers).
    """
    A = as_matrix(A)
    beta = [Fraction(x) for x in beta]
    gamma = Fraction(gamma)
    k = len(A)
    if k == 0:
        return ((), gamma) if gamma < 0 else None
    fac = ldlt(A)
    if fac.kind == "indefinite":
        x = fac.witness
        # f(t x) = t^2 A[x] + 2 t beta.x + gamma with A[x] < 0
        for t in count(1):
            for s in (t, -t):
                z = tuple(s * xi for xi in x)
                v = _fvalue(A, beta, gamma, z)
                if v < 0:
                    return z, v
    if fac.kind == "psd":
        for kv in fac.kernel:
            bk = dot(beta, kv)
            if bk:
                # f(t kv) = 2 t beta.kv + gamma
                t = floor(abs(gamma) / (2 * abs(bk))) + 1
                sgn = -1 if bk > 0 else 1
                z = tuple(sgn * t * x for x in kv)
                return z, _fvalue(A, beta, gamma, z)
        return _reduce_singular(A, beta, gamma)
    c = solve(A, [-b for b in beta])
    bound = quad(A, c) - gamma
    if bound <= 0:
        return None
    pts = cvp_enum(QuadForm(tuple(tuple(r) for r in A)), c, bound, strict=True)
    if not pts:
        return None
    best = min(pts, key=lambda z: (quad(A, [zi - ci for zi, ci in zip(z, c)]), z))
    return best, _fvalue(A, beta, gamma, best)


def _reduce_singular(A, beta, gamma):
    """PSD singular ``A`` with ``beta`` orthogonal to the kernel: restrict to a lattice complement."""
    ints = [primitive(row) if any(row) else [0] * len(row) for row in A]
    H, U = column_hermite(ints)
    k = len(A)
    r = sum(1 for j in range(k) if any(H[i][j] for i in range(len(H))))
    Ut = transpose(U)
    AU = [matvec(A, col) for col in Ut]  # A u_j
    A_red = [[dot(Ut[i], AU[j]) for j in range(r)] for i in range(r)]
    beta_red = [dot(Ut[i], beta) for i in range(r)]
    res = find_negative(A_red, beta_red, gamma)
    if res is None:
        return None
    y, v = res
    z = tuple(sum(U[row][j] * y[j] for j in range(r)) for row in range(k))
    return z, v


# --- membership ---------------------------------------------------------------


def _unit_scan(d: DistVec, target: str) -> MembershipResult | None:
    """Most violated inequality with ``b`` in ``{0, +-1}^n`` (lexicographically least on ties).

    Used before the scaling search for indefinite forms, where the violation
    is unbounded and any witness would do: this picks a small readable one.
    """
    n = d.n
    den = lcm(*(x.denominator for x in d.d)) if d.d else 1
    D = np.zeros((n, n), dtype=object)
    for (i, j), x in zip(pairs(n), d.d):
        D[i, j] = D[j, i] = int(x * den)
    grid = np.array(list(np.ndindex(*(3,) * n)), dtype=np.int64) - 1
    sums = grid.sum(axis=1)
    if target == "cone":
        grid = grid[sums == 1]
    else:
        grid = grid[(sums > 0) & (sums % 2 == 1)]
    if not len(grid):
        return None
    G = grid.astype(object)
    H2 = ((G @ D) * G).sum(axis=1)  # 2 den H(b, d)
    s = (grid.sum(axis=1) - 1) // 2
    excess = H2 - 2 * den * (s * (s + 1)).astype(object)
    best = max(excess)
    if best <= 0:
        return None
    k = min(i for i in range(len(grid)) if excess[i] == best)
    q = BInequality(tuple(int(x) for x in grid[k]))
    return MembershipResult(False, q, eval_H(q, d) - q.rhs)



def member_hyp(d: DistVec) -> MembershipResult:
    """Exact test of ``H(b, d) <= 0`` for every integer b with ``sum(b) = 1``."""
    if d.n <= 2:
        # H((1 - x, x), d) = x (1 - x) d(0,1): nonpositive for all x iff d(0,1) >= 0
        if d.n == 2 and d.d[0] < 0:
            q = BInequality((-1, 2))
            return MembershipResult(False, q, eval_H(q, d))
        return MembershipResult(True)
    q = covariance_form(d)
    if q.classification == "indefinite":
        found = _unit_scan(d, "cone")
        if found is not None:
            return found
    m = q.m
    A = [list(r) for r in q.q]
    beta = [-q.q[i][i] / 2 for i in range(m)]
    # f(v) = q[v] - <diag q, v> = -H(b, d)
    res = find_negative(A, beta, 0)
    if res is None:
        return MembershipResult(True)
    v, f = res
    b = BInequality((1 - sum(v), *v))
    h = eval_H(b, d)
    assert h == -f and h > 0
    return MembershipResult(False, b, h)


def _odd_coset_basis(n: int) -> list[list[int]]:
    """Columns e_i - e_{i+1} (i < n-1) and 2 e_{n-1}: a basis of ``{x : sum(x) even}``."""
    cols = []
    for i in range(n - 1):
        col = [0] * n
        col[i], col[i + 1] = 1, -1
        cols.append(col)
    last = [0] * n
    last[n - 1] = 2
    cols.append(last)
    return cols


def member_hypp(d: DistVec) -> MembershipResult:
    """Exact test of ``H(b, d) <= s(s+1)`` for every integer b with odd sum ``2s+1``.

    With ``M = J/4 - D/2`` (``D`` the distance matrix) one has
    ``s(s+1) - H(b, d) = M[b] - 1/4``; b runs over ``e_0 + {x : sum(x) even}``.
    """
    n = d.n
    M = [[Fraction(1, 4) - (d[i, j] / 2 if i != j else 0) for j in range(n)] for i in range(n)]
    cols = _odd_coset_basis(n)
    MB = [matvec(M, col) for col in cols]
    A = [[dot(cols[i], MB[j]) for j in range(n)] for i in range(n)]
    beta = [MB[i][0] for i in range(n)]  # (B^T M e_0)_i
    gamma = M[0][0] - Fraction(1, 4)
    if ldlt(A).kind == "indefinite":
        found = _unit_scan(d, "polytope")
        if found is not None:
            return found
    res = find_negative(A, beta, gamma)
    if res is None:
        return MembershipResult(True)
    z, f = res
    b = [int(i == 0) for i in range(n)]
    for zi, col in zip(z, cols):
        for r in range(n):
            b[r] += zi * col[r]
    if sum(b) < 0:
        b = [-x for x in b]
    q = BInequality(tuple(b))
    viol = eval_H(q, d) - q.rhs
    assert viol == -f and viol > 0
    return MembershipResult(False, q, viol)


def _perimeter_bound(d: DistVec) -> Fraction:
    best = None
    for i, j, k in combinations(range(d.n), 3):
        p = d[i, j] + d[i, k] + d[j, k]
        if p > 0:
            lam = Fraction(2) / p
            best = lam if best is None else min(best, lam)
    if best is None:
        # b = 2 e_i + e_j: 2 d(i,j) <= 2
        pos = [x for x in d.d if x > 0]
        if not pos:
            raise ValueError("distance vector has no positive entry")
        best = 1 / max(pos)
    return best


def max_scale(d: DistVec, max_iter: int = 10_000) -> Fraction:
    """Largest ``lam`` with ``lam d`` in the hypermetric polytope (``d`` a nonzero hypermetric).

    Starts from the perimeter bound and tightens with the most violated
    inequality returned by :func:`member_hypp` until ``lam d`` is a member.
    """
    if not any(d.d):
        raise ValueError("max_scale needs a nonzero distance vector")
    if not member_hyp(d).member:
        raise ValueError("distance vector is not a hypermetric")
    lam = _perimeter_bound(d)
    for _ in range(max_iter):
        res = member_hypp(d.scale(lam))
        if res.member:
            return lam
        h = eval_H(res.witness, d)
        lam = Fraction(res.witness.rhs) / h
    raise RuntimeError("max_scale did not converge")


def is_empty_sphere(q: QuadForm, points: Sequence[Sequence[int]]) -> bool:
    """No lattice point strictly inside the sphere through ``points`` (centre in their affine hull)."""
    if q.classification != "pd":
        raise NotPositiveDefinite("is_empty_sphere needs a positive definite form")
    pts = [[Fraction(x) for x in p] for p in points]
    if not pts:
        raise ValueError("no points")
    p0 = pts[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    # c = p0 + sum lam_k diffs_k ; 2 diffs_i^T Q (c - p0) = q[p_i - p0]
    Q = [list(r) for r in q.q]
    if diffs:
        QD = [matvec(Q, dv) for dv in diffs]
        G = [[2 * dot(di, qj) for qj in QD] for di in diffs]
        rhs = [quad(Q, di) for di in diffs]
        try:
            lam = solve(G, rhs)
        except NoSolution:
            raise NoCommonSphere("points have no common circumsphere") from None
        except NonUnique as e:
            lam = e.particular
            # dependent points: every equation must still hold
        c = [p0[t] + sum((lam[k] * diffs[k][t] for k in range(len(diffs))), Fraction(0)) for t in range(q.m)]
    else:
        c = p0
    r2 = quad(Q, [a - b for a, b in zip(p0, c)])
    for p in pts:
        if quad(Q, [a - b for a, b in zip(p, c)]) != r2:
            raise NoCommonSphere("points have no common circumsphere")
    return not cvp_enum(q, c, r2, strict=True)
