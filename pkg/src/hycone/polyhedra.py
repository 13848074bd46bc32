"""Facet / extreme-ray conversion for pointed rational cones and polytopes.

The engine is the incremental double description method on primitive integer
vectors.  Zero sets are Python ints used as bitsets; the adjacency test of a
candidate pair is the combinatorial one (no third ray vanishes on every
constraint the pair shares), evaluated with per-constraint ray masks.

Conventions: a cone facet ``a`` means ``a . x >= 0``.  Polytopes are handled
through the homogenised cone ``{(t, t x)}`` with the extra coordinate first,
so a polytope facet ``h`` means ``h[0] + h[1:] . x >= 0``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from .exactla import fmt_rat, kernel, parse_rat, primitive, rank, rref

IntVec = tuple[int, ...]


class NotPointed(ValueError):
    """The cone contains a line; ``direction`` spans part of the lineality space."""

    def __init__(self, direction: Sequence[int]):
        super().__init__(f"cone is not pointed; lineality direction {list(direction)}")
        self.direction = tuple(direction)


@dataclass
class PolyCone:
    dim: int
    facets: list[IntVec] | None = None
    rays: list[IntVec] | None = None
    # linear equations a . x = 0 cutting out the span when it is not the whole space
    equations: list[IntVec] = field(default_factory=list)

    def to_json(self) -> dict:
        out: dict = {"dim": self.dim}
        if self.rays is not None:
            out["rays"] = [[fmt_rat(x) for x in r] for r in self.rays]
        if self.facets is not None:
            out["facets"] = [[fmt_rat(x) for x in f] for f in self.facets]
        if self.equations:
            out["equations"] = [[fmt_rat(x) for x in e] for e in self.equations]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "PolyCone":
        dim = int(data["dim"])

        def vecs(key):
            if key not in data:
                return None
            out = []
            for v in data[key]:
                if len(v) != dim:
                    raise ValueError(f"{key}: vector of length {len(v)}, expected {dim}")
                out.append(canonical_vector(parse_rat(x) for x in v))
            return out

        return cls(dim, facets=vecs("facets"), rays=vecs("rays"), equations=vecs("equations") or [])


@dataclass
class PolyTope:
    """Convex hull data; ``facets`` are homogenised (see module docstring)."""

    ambient: int
    dimension: int
    vertices: list[tuple[Fraction, ...]]
    facets: list[IntVec]
    equations: list[IntVec]
    cone: PolyCone

    def inequalities(self) -> list[tuple[IntVec, int]]:
        """Facets as pairs ``(a, c)`` meaning ``a . x <= c``."""
        return [(tuple(-x for x in h[1:]), h[0]) for h in self.facets]


def canonical_vector(v: Iterable) -> IntVec:
    """Primitive integer vector, obtained by positive scaling only (orientation kept)."""
    return tuple(primitive(v))


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _independent_rows(rows: Sequence[Sequence[int]], d: int) -> list[int]:
    """Greedy choice (input order) of row indices forming a basis of the row space."""
    echelon: list[tuple[int, list[Fraction]]] = []
    chosen = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for piv, e in echelon:
            if v[piv]:
                f = v[piv]
                v = [x - f * y for x, y in zip(v, e)]
        piv = next((j for j, x in enumerate(v) if x), None)
        if piv is None:
            continue
        inv = 1 / v[piv]
        echelon.append((piv, [x * inv for x in v]))
        chosen.append(idx)
        if len(chosen) == d:
            break
    return chosen


def extreme_rays(constraints: Sequence[Sequence[int]], d: int) -> list[IntVec]:
    """Extreme rays of ``{x in R^d : a . x >= 0 for every constraint a}``.

    The constraint matrix must have rank ``d`` (pointed cone); otherwise
    :class:`NotPointed` is raised with a kernel vector.
    """
    rows = [canonical_vector(a) for a in constraints]
    rows = [r for r in rows if any(r)]
    if len(rows[0] if rows else ()) not in (0, d) or any(len(r) != d for r in rows):
        raise ValueError("constraint length does not match dimension")
    basis = _independent_rows(rows, d)
    if len(basis) < d:
        ker = kernel([list(r) for r in rows], ncols=d) if rows else kernel([], ncols=d)
        raise NotPointed(canonical_vector(ker[0]))

    order = basis + [i for i in range(len(rows)) if i not in set(basis)]
    # initial simplicial cone: B r_j = e_j
    B = [[Fraction(x) for x in rows[i]] for i in basis]
    _, _, T = rref(B)
    rays: list[IntVec] = []
    zsets: list[int] = []
    for j in range(d):
        col = [T[i][j] for i in range(d)]
        rays.append(canonical_vector(col))
        zsets.append(sum(1 << k for k in range(d) if k != j))

    for step in range(d, len(order)):
        a = rows[order[step]]
        bit = 1 << step
        vals = [_dot(a, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        if not neg:
            zsets = [z | bit if vals[k] == 0 else z for k, z in enumerate(zsets)]
            continue
        row_masks = [0] * step
        for k, z in enumerate(zsets):
            for j in _bits(z):
                row_masks[j] |= 1 << k
        new_rays: list[IntVec] = []
        new_z: list[int] = []
        for p in pos:
            zp = zsets[p]
            for n in neg:
                common = zp & zsets[n]
                if common.bit_count() < d - 2:
                    continue
                pair = (1 << p) | (1 << n)
                shared = (1 << len(rays)) - 1
                for j in _bits(common):
                    shared &= row_masks[j]
                    if shared == pair:
                        break
                if shared != pair:
                    continue
                vp, vn = vals[p], -vals[n]
                r = tuple(vp * x + vn * y for x, y in zip(rays[n], rays[p]))
                new_rays.append(canonical_vector(r))
                new_z.append(common | bit)
        rays = [rays[k] for k in pos] + [rays[k] for k in zer] + new_rays
        zsets = [zsets[k] for k in pos] + [zsets[k] | bit for k in zer] + new_z
    return sorted(rays)


def _span_basis_columns(vectors: Sequence[Sequence[int]], d: int) -> tuple[list[int], list[IntVec]]:
    """Pivot columns of the span of ``vectors`` and an integer basis of its orthogonal complement."""
    if not vectors:
        return [], [tuple(int(i == j) for i in range(d)) for j in range(d)]
    _, pivots, _ = rref([list(v) for v in vectors], transform=False)
    eqs = [canonical_vector(k) for k in kernel([list(v) for v in vectors])]
    return pivots, sorted(eqs)


def rays_to_facets(rays: Sequence[Sequence[int]], d: int) -> tuple[list[IntVec], list[IntVec]]:
    """Facets (and equations of the linear span) of the cone generated by ``rays``.

    Lower-dimensional inputs are restricted to their span: the conversion runs
    on the pivot coordinates and facet normals are padded with zeros.
    """
    gens = [canonical_vector(r) for r in rays if any(r)]
    pivots, eqs = _span_basis_columns(gens, d)
    k = len(pivots)
    if k == 0:
        return [], eqs
    if k == d:
        return extreme_rays(gens, d), []
    proj = [tuple(g[c] for c in pivots) for g in gens]
    if k == 1:
        low = [(1,)]
    else:
        low = extreme_rays(proj, k)
    facets = []
    for f in low:
        full = [0] * d
        for c, x in zip(pivots, f):
            full[c] = x
        facets.append(tuple(full))
    return sorted(facets), eqs


def dd_convert(cone: PolyCone) -> PolyCone:
    """Fill in whichever representation is missing."""
    if cone.rays is not None and cone.facets is None:
        facets, eqs = rays_to_facets(cone.rays, cone.dim)
        rays = sorted(set(canonical_vector(r) for r in cone.rays if any(r)))
        # keep only extreme generators
        out = PolyCone(cone.dim, facets=facets, rays=rays, equations=eqs)
        out.rays = [r for r in rays if is_extreme_ray(r, out)]
        return out
    if cone.facets is not None and cone.rays is None:
        rays = extreme_rays(list(cone.facets) + [e for eq in cone.equations for e in (eq, tuple(-x for x in eq))], cone.dim)
        facets = _irredundant(cone.facets, rays)
        return PolyCone(cone.dim, facets=facets, rays=rays, equations=list(cone.equations))
    if cone.facets is None and cone.rays is None:
        raise ValueError("cone has neither rays nor facets")
    return cone


def _irredundant(facets: Iterable[Sequence[int]], rays: Sequence[IntVec]) -> list[IntVec]:
    """Facets among the given inequalities: those whose incident rays span a hyperplane of the cone."""
    rays = list(rays)
    if not rays:
        return []
    dim = rank([list(r) for r in rays])
    out = set()
    for f in facets:
        f = canonical_vector(f)
        if not any(f):
            continue
        inc = [list(r) for r in rays if _dot(f, r) == 0]
        if len(inc) == len(rays):
            continue  # an equation on the cone
        if dim == 1 or (len(inc) >= dim - 1 and rank(inc) == dim - 1):
            out.add(f)
    return sorted(out)


def homogenize(points: Iterable[Sequence]) -> list[IntVec]:
    return [canonical_vector([1, *map(Fraction, p)]) for p in points]


def hull(points: Sequence[Sequence]) -> PolyTope:
    """Convex hull of rational points, via the homogenised cone."""
    if not points:
        raise ValueError("hull of an empty point set")
    d = len(points[0])
    pts = sorted(set(tuple(Fraction(x) for x in p) for p in points))
    cone = dd_convert(PolyCone(d + 1, rays=homogenize(pts)))
    verts = sorted(tuple(Fraction(x, r[0]) for x in r[1:]) for r in cone.rays)
    return PolyTope(
        ambient=d,
        dimension=rank([list(r) for r in cone.rays]) - 1,
        vertices=verts,
        facets=cone.facets,
        equations=cone.equations,
        cone=cone,
    )


def incidence(cone: PolyCone) -> list[list[bool]]:
    if cone.rays is None or cone.facets is None:
        raise ValueError("incidence needs both representations")
    return [[_dot(f, r) == 0 for f in cone.facets] for r in cone.rays]


def _cone_dim(cone: PolyCone) -> int:
    return cone.dim - len(cone.equations)


def is_extreme_ray(v: Sequence, cone: PolyCone) -> bool:
    """Whether ``v`` spans an extreme ray of the cone given by its facets."""
    if cone.facets is None:
        raise ValueError("is_extreme_ray needs the facet description")
    v = canonical_vector(v)
    if not any(v):
        return False
    active = []
    for f in cone.facets:
        val = _dot(f, v)
        if val < 0:
            raise ValueError(f"vector violates facet {f}: not in the cone")
        if val == 0:
            active.append(list(f))
    for e in cone.equations:
        if _dot(e, v) != 0:
            raise ValueError("vector is outside the linear span of the cone")
    return (rank(active) if active else 0) == _cone_dim(cone) - 1


def are_adjacent(r1: Sequence, r2: Sequence, cone: PolyCone) -> bool:
    """Rank test: the common active facets of two rays have rank ``dim - 2``."""
    if cone.facets is None:
        raise ValueError("are_adjacent needs the facet description")
    a, b = canonical_vector(r1), canonical_vector(r2)
    if a == b:
        return False
    common = [list(f) for f in cone.facets if _dot(f, a) == 0 and _dot(f, b) == 0]
    return (rank(common) if common else 0) == _cone_dim(cone) - 2


def _combinatorial_graph(items: Sequence, masks: Sequence[int], dim: int) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(len(items)))
    by_element: dict[int, int] = {}
    for k, m in enumerate(masks):
        for j in _bits(m):
            by_element[j] = by_element.get(j, 0) | (1 << k)
    full = (1 << len(items)) - 1
    for i, j in combinations(range(len(items)), 2):
        common = masks[i] & masks[j]
        if common.bit_count() < dim - 2:
            continue
        pair = (1 << i) | (1 << j)
        shared = full
        for e in _bits(common):
            shared &= by_element[e]
            if shared == pair:
                break
        if shared == pair:
            g.add_edge(i, j)
    return g


def skeleton(cone: PolyCone) -> nx.Graph:
    """Ray adjacency graph; node ``k`` is ``cone.rays[k]``."""
    inc = incidence(cone)
    masks = [sum(1 << j for j, x in enumerate(row) if x) for row in inc]
    return _combinatorial_graph(cone.rays, masks, _cone_dim(cone))


def ridge_graph(cone: PolyCone) -> nx.Graph:
    """Facet adjacency graph (skeleton of the dual); node ``k`` is ``cone.facets[k]``."""
    inc = incidence(cone)
    masks = [sum(1 << i for i, row in enumerate(inc) if row[j]) for j in range(len(cone.facets))]
    return _combinatorial_graph(cone.facets, masks, _cone_dim(cone))


def diameter(g: nx.Graph) -> int:
    """Exact BFS diameter (graph must be connected)."""
    best = 0
    for s in g.nodes:
        dist = {s: 0}
        q = deque([s])
        while q:
            u = q.popleft()
            for w in g[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    q.append(w)
        if len(dist) != g.number_of_nodes():
            raise ValueError("graph is disconnected")
        best = max(best, max(dist.values()))
    return best
