"""Repartitioning polytopes: n+2 lattice points in Z^n and their two triangulations.

The points ``w_0 .. w_{n+1}`` carry a unique (up to sign) integer relation
``sum a_i w_i = 0``, ``sum a_i = 0``.  Omitting one point gives a simplex
``S_i``; the simplices omitting a point with ``a_i > 0`` triangulate the hull,
and so do those with ``a_i < 0``.  Going from one to the other is a flip.

Simplex volumes are normalised (multiplied by ``n!``), hence integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .exactla import det, kernel, primitive, rank
from .hypfamilies import BInequality, cut_vector, cuts, eval_H, eval_on_cut
from .hypfamilies import DistVec


class NotSpanning(ValueError):
    pass


class DegenerateConfig(ValueError):
    pass


class Unbounded(ValueError):
    pass


def _homogeneous_rows(points) -> list[list[int]]:
    return [[1, *map(int, p)] for p in points]


def signed_volume(points: Sequence[Sequence[int]]) -> int:
    """``det`` of the homogenised point rows (orientation sign kept)."""
    n = len(points) - 1
    if any(len(p) != n for p in points):
        raise ValueError(f"need n+1 points in Z^n, got {len(points)} points")
    return int(det(_homogeneous_rows(points)))


def simplex_volume(points: Sequence[Sequence[int]]) -> int:
    return abs(signed_volume(points))


def affine_relation(points: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Primitive ``a`` with ``sum a_i w_i = 0`` and ``sum a_i = 0``; first nonzero entry positive."""
    n = len(points) - 2
    if n < 1 or any(len(p) != n for p in points):
        raise NotSpanning(f"need n+2 points in Z^n, got {len(points)} points of dimension {len(points[0]) if points else 0}")
    cols = _homogeneous_rows(points)
    m = [list(r) for r in zip(*cols)]  # (n+1) x (n+2)
    if rank(m) != n + 1:
        raise NotSpanning("points do not affinely span")
    (k,) = kernel(m)
    a = primitive(k)
    first = next(x for x in a if x)
    return tuple(int(x) if first > 0 else -int(x) for x in a)


@dataclass(frozen=True)
class RepartitionConfig:
    points: tuple[tuple[int, ...], ...]
    alpha: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.points) - 2

    @property
    def s_plus(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.alpha) if a > 0)

    @property
    def s_minus(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.alpha) if a < 0)

    @property
    def degenerate(self) -> bool:
        """Some point lies on a facet hyperplane of the simplex on the others."""
        return 0 in self.alpha

    def volume(self, omit: int) -> int:
        return simplex_volume([p for i, p in enumerate(self.points) if i != omit])

    def to_json(self) -> dict:
        plus, minus = two_triangulations(self, allow_degenerate=True)
        return {
            "points": [list(p) for p in self.points],
            "alpha": list(self.alpha),
            "s_plus": list(self.s_plus),
            "s_minus": list(self.s_minus),
            "degenerate": self.degenerate,
            "triangulations": {"plus": plus.to_json(), "minus": minus.to_json()},
        }


def make_config(points: Sequence[Sequence[int]]) -> RepartitionConfig:
    pts = tuple(tuple(int(x) for x in p) for p in points)
    return RepartitionConfig(pts, affine_relation(pts))


@dataclass(frozen=True)
class Triangulation:
    side: str  # "plus" or "minus"
    simplices: tuple[tuple[int, ...], ...]  # point indices of each simplex
    volumes: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.volumes)

    def to_json(self) -> dict:
        return {"side": self.side, "simplices": [list(s) for s in self.simplices], "volumes": list(self.volumes)}


def _side(config: RepartitionConfig, side: str) -> Triangulation:
    omit = config.s_plus if side == "plus" else config.s_minus
    k = len(config.points)
    simplices = tuple(tuple(j for j in range(k) if j != i) for i in omit)
    return Triangulation(side, simplices, tuple(config.volume(i) for i in omit))


def two_triangulations(config: RepartitionConfig, allow_degenerate: bool = False) -> tuple[Triangulation, Triangulation]:
    plus, minus = _side(config, "plus"), _side(config, "minus")
    if not allow_degenerate and (0 in plus.volumes or 0 in minus.volumes):
        raise DegenerateConfig("a simplex of the triangulation has volume 0")
    if plus.total != minus.total:
        raise DegenerateConfig("triangulation volumes do not balance")
    return plus, minus


def flip(t: Triangulation, config: RepartitionConfig) -> Triangulation:
    """The other triangulation of the same point configuration."""
    return _side(config, "minus" if t.side == "plus" else "plus")


# --- candidate enumeration ----------------------------------------------------


@dataclass(frozen=True)
class CandidateBox:
    """Affine volume forms in an unknown point ``v`` for a fixed simplex.

    ``forms[i] = (w, k)`` gives the signed volume ``<w, v> + k`` of the
    simplex obtained by replacing fixed point ``i`` with ``v``.  Divided by
    ``base`` (the signed volume of the fixed simplex) these are the
    barycentric coordinates of ``v``.
    """

    fixed: tuple[tuple[int, ...], ...]
    forms: tuple[tuple[tuple[int, ...], int], ...]
    base: int

    @property
    def n(self) -> int:
        return len(self.fixed) - 1

    def evaluate(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * x for a, x in zip(w, v)) + k for w, k in self.forms)

    def barycentric(self, v: Sequence[int]):
        from fractions import Fraction

        return tuple(Fraction(x, self.base) for x in self.evaluate(v))


def cofactor_forms(fixed: Sequence[Sequence[int]]) -> CandidateBox:
    """Cofactor expansion of the volume determinant along the replaced row."""
    pts = [tuple(int(x) for x in p) for p in fixed]
    n = len(pts) - 1
    if any(len(p) != n for p in pts):
        raise ValueError("need n+1 points in Z^n")
    base = signed_volume(pts)
    if base == 0:
        raise Unbounded("fixed points are affinely dependent: the candidate region is unbounded")
    forms = []
    for i in range(n + 1):
        rows = _homogeneous_rows(pts)
        coeffs = []
        for col in range(n + 1):
            minor = [r[:col] + r[col + 1:] for k, r in enumerate(rows) if k != i]
            coeffs.append((-1) ** (i + col) * int(det(minor)) if minor else 1)
        forms.append((tuple(coeffs[1:]), coeffs[0]))
    return CandidateBox(tuple(pts), tuple(forms), base)


def _coordinate_bounds(box: CandidateBox, max_vol: int) -> list[tuple[int, int]]:
    # v = sum_i form_i(v) p_i / base with |form_i| <= max_vol
    out = []
    for t in range(box.n):
        r = sum(abs(p[t]) for p in box.fixed) * max_vol // abs(box.base)
        out.append((-r, r))
    return out


def enum_candidates(box: CandidateBox, max_vol: int) -> list[tuple[int, ...]]:
    """Lattice points ``v`` (not fixed points) with every ``|form_i(v)| <= max_vol``.

    The fixed simplex is the designated maximal one, so its volume must equal
    ``max_vol`` exactly; otherwise there are no candidates.  Coordinates are
    fixed one at a time, pruning with interval bounds on each form.
    """
    if max_vol <= 0 or abs(box.base) != max_vol:
        return []
    bounds = _coordinate_bounds(box, max_vol)
    n = box.n
    fixed = set(box.fixed)
    out = []
    v = [0] * n

    def feasible(t: int) -> bool:
        # coordinates < t are set, the rest range over their bounds
        for w, k in box.forms:
            lo = hi = k + sum(w[j] * v[j] for j in range(t))
            for j in range(t, n):
                a, b = w[j] * bounds[j][0], w[j] * bounds[j][1]
                lo += min(a, b)
                hi += max(a, b)
            if hi < -max_vol or lo > max_vol:
                return False
        return True

    def rec(t: int) -> None:
        if t == n:
            if tuple(v) not in fixed:
                out.append(tuple(v))
            return
        for x in range(bounds[t][0], bounds[t][1] + 1):
            v[t] = x
            if feasible(t + 1):
                rec(t + 1)
        v[t] = 0

    rec(0)
    return out


def hnf_simplices(n: int, vol: int) -> list[tuple[tuple[int, ...], ...]]:
    """Simplices ``{0, h_1, ..., h_n}`` for the lower triangular Hermite forms of determinant ``vol``.

    Every lattice simplex of normalised volume ``vol`` with a vertex at the
    origin is unimodularly equivalent to one of these.
    """
    out = []

    def diagonals(k, rem):
        if k == 0:
            if rem == 1:
                yield ()
            return
        for dgl in range(1, rem + 1):
            if rem % dgl == 0:
                for rest in diagonals(k - 1, rem // dgl):
                    yield (dgl, *rest)

    for diag in diagonals(n, vol):
        free = [(i, j) for i in range(n) for j in range(i)]
        ranges = [range(diag[i]) for i, j in free]
        for vals in product(*ranges):
            H = [[0] * n for _ in range(n)]
            for i in range(n):
                H[i][i] = diag[i]
            for (i, j), x in zip(free, vals):
                H[i][j] = x
            cols = tuple(tuple(H[r][c] for r in range(n)) for c in range(n))
            out.append(((0,) * n, *cols))
    return out


def generate_configs(n: int, max_vol: int) -> list[RepartitionConfig]:
    """Configs from every Hermite simplex of volume ``<= max_vol`` plus each admissible extra point."""
    out = []
    for vol in range(1, max_vol + 1):
        for simplex in hnf_simplices(n, vol):
            box = cofactor_forms(simplex)
            for v in enum_candidates(box, vol):
                out.append(make_config([*simplex, v]))
    return out


def barycentric_b(box: CandidateBox, v: Sequence[int]) -> BInequality:
    """b-vector of ``v`` relative to a unimodular fixed simplex (entries sum to 1)."""
    if abs(box.base) != 1:
        raise ValueError("barycentric b-vector needs a unimodular simplex")
    return BInequality(tuple(x * box.base for x in box.evaluate(v)))


def tight_cuts(q: BInequality) -> list[frozenset[int]]:
    """Nonzero cuts on which the cone inequality holds with equality."""
    return [c.S for c in cuts(q.n) if eval_on_cut(q, c.S) == 0]


def check_b_inequality(q: BInequality) -> bool:
    """Cone inequality valid on every cut (closed form agrees with evaluation) and tight on one."""
    if sum(q.b) != 1:
        return False
    tight = False
    for c in cuts(q.n):
        closed = eval_on_cut(q, c.S)
        if closed != eval_H(q, DistVec(q.n, cut_vector(c.S, q.n))) or closed > 0:
            return False
        tight = tight or closed == 0
    return tight
