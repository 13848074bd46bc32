"""Cut and metric polytopes of graphs, cycle inequalities and path lifting.

Edge vectors are indexed by the sorted edge list of the graph.  An
inequality ``sum_e a_e x_e <= C`` on ``K_n`` lifts to any graph containing
edge-disjoint paths ``P_ij`` between chosen terminals: put ``a_ij`` on
every edge of ``P_ij``.  When every positive coefficient sits on a path of
length one the lift stays valid on the cut polytope of the graph.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .exactla import fmt_rat, parse_rat
from .hypfamilies import BInequality, pairs
from .polyhedra import canonical_vector, hull

Edge = tuple[int, int]
MAX_BRUTE_VERTICES = 24


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class BudgetExceeded(ValueError):
    pass


class InvalidPathSystem(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        es = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range")
            e = _edge(u, v)
            if e in es:
                raise ValueError(f"repeated edge {e}")
            es.add(e)
        object.__setattr__(self, "edges", tuple(sorted(es)))

    @property
    def index(self) -> dict[Edge, int]:
        return {e: k for k, e in enumerate(self.edges)}

    def nx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> "Graph":
        return cls(int(data["n"]), tuple(tuple(e) for e in data["edges"]))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple(pairs(n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, tuple(_edge(i, (i + 1) % n) for i in range(n)))


@dataclass(frozen=True)
class EdgeIneq:
    """``sum coeffs[e] x_e <= rhs``; edges missing from ``coeffs`` have coefficient 0."""

    coeffs: dict[Edge, Fraction]
    rhs: Fraction
    provenance: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        c = {_edge(*e): Fraction(a) for e, a in self.coeffs.items() if a}
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def vector(self, g: Graph) -> tuple[Fraction, ...]:
        extra = set(self.coeffs) - set(g.edges)
        if extra:
            raise ValueError(f"coefficients on non-edges {sorted(extra)}")
        return tuple(self.coeffs.get(e, Fraction(0)) for e in g.edges)

    def value(self, x: dict[Edge, Fraction] | Sequence, g: Graph | None = None) -> Fraction:
        if g is not None:
            x = dict(zip(g.edges, x))
        return sum((a * x[e] for e, a in self.coeffs.items()), Fraction(0))

    def canonical(self, g: Graph) -> tuple[int, ...]:
        """Homogenised ``(C, -a)`` scaled to a primitive integer vector."""
        return canonical_vector([self.rhs, *(-a for a in self.vector(g))])

    def to_json(self) -> dict:
        out = {
            "coeffs": {f"{u},{v}": fmt_rat(a) for (u, v), a in sorted(self.coeffs.items())},
            "rhs": fmt_rat(self.rhs),
        }
        if self.provenance is not None:
            out["provenance"] = self.provenance
        return out

    @classmethod
    def from_json(cls, data: dict) -> "EdgeIneq":
        coeffs = {}
        for key, a in data["coeffs"].items():
            u, v = (int(t) for t in key.split(","))
            coeffs[(u, v)] = parse_rat(a)
        return cls(coeffs, parse_rat(data["rhs"]), data.get("provenance"))

    @classmethod
    def from_b(cls, q: BInequality) -> "EdgeIneq":
        """The b-inequality written on the edges of ``K_n``."""
        return cls({(i, j): q.b[i] * q.b[j] for i, j in pairs(q.n)}, q.rhs, {"b": list(q.b)})


@dataclass(frozen=True)
class PathSystem:
    terminals: tuple[int, ...]
    paths: dict[tuple[int, int], tuple[int, ...]]  # keyed by terminal index pair (i < j)

    def to_json(self) -> dict:
        return {"terminals": list(self.terminals), "paths": {f"{i},{j}": list(p) for (i, j), p in sorted(self.paths.items())}}

    @classmethod
    def from_json(cls, data: dict) -> "PathSystem":
        paths = {}
        for key, seq in data["paths"].items():
            i, j = (int(t) for t in key.split(","))
            paths[_edge(i, j)] = tuple(int(x) for x in seq)
        return cls(tuple(int(t) for t in data["terminals"]), paths)


# --- cuts and brute-force validity --------------------------------------------


def _cut_matrix(g: Graph, masks: np.ndarray) -> np.ndarray:
    u = np.array([e[0] for e in g.edges], dtype=np.int64)
    v = np.array([e[1] for e in g.edges], dtype=np.int64)
    return ((masks[:, None] >> u) ^ (masks[:, None] >> v)) & 1


def graph_cuts(g: Graph) -> list[tuple[int, ...]]:
    """Distinct edge vectors of the cuts ``delta(S)`` (``S`` not containing vertex 0), sorted."""
    if g.n > MAX_BRUTE_VERTICES:
        raise BudgetExceeded(f"{g.n} vertices exceed the enumeration budget of {MAX_BRUTE_VERTICES}")
    if g.n == 0:
        return [()]
    masks = np.arange(1 << (g.n - 1), dtype=np.int64) << 1
    if not g.edges:
        return [()]
    mat = _cut_matrix(g, masks)
    uniq = np.unique(mat, axis=0)
    return sorted(tuple(int(x) for x in row) for row in uniq)


@dataclass
class Validity:
    valid: bool
    maximum: Fraction
    rhs: Fraction
    cut: frozenset[int]


def check_valid(ineq: EdgeIneq, g: Graph, chunk: int = 1 << 16) -> Validity:
    """Maximise the left-hand side over all cuts of ``g`` and compare with the rhs."""
    if g.n > MAX_BRUTE_VERTICES:
        raise BudgetExceeded(f"{g.n} vertices exceed the brute-force budget of {MAX_BRUTE_VERTICES}")
    a = ineq.vector(g)
    den = lcm(*(x.denominator for x in a)) if a else 1
    w = np.array([int(x * den) for x in a], dtype=np.int64)
    best, best_mask = None, 0
    total = 1 << max(g.n - 1, 0)
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.int64) << 1
        vals = _cut_matrix(g, masks) @ w if len(w) else np.zeros(len(masks), dtype=np.int64)
        k = int(np.argmax(vals))
        if best is None or vals[k] > best:
            best, best_mask = int(vals[k]), int(masks[k])
    maximum = Fraction(best, den)
    S = frozenset(i for i in range(g.n) if best_mask >> i & 1)
    return Validity(maximum <= ineq.rhs, maximum, ineq.rhs, S)


# --- cycle inequalities and the metric polytope of a graph --------------------


def cycle_edges(cycle: Sequence[int]) -> list[Edge]:
    return [_edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]


def cycle_ineq(C: Sequence[Edge], F: Iterable[Edge]) -> EdgeIneq:
    """``sum_{F} x_e - sum_{C - F} x_e <= |F| - 1`` for odd ``|F|``."""
    C = [_edge(*e) for e in C]
    F = {_edge(*e) for e in F}
    if not F <= set(C):
        raise ValueError("F must be a subset of the cycle")
    if len(F) % 2 == 0:
        raise ValueError(f"|F| = {len(F)} must be odd")
    return EdgeIneq({e: (1 if e in F else -1) for e in C}, len(F) - 1)


def chordless_cycles(g: Graph, max_vertices: int = 10) -> list[list[int]]:
    if g.n > max_vertices:
        raise BudgetExceeded(f"cycle enumeration limited to {max_vertices} vertices")
    out = []
    for c in nx.chordless_cycles(g.nx()):
        if len(c) >= 3:
            k = c.index(min(c))
            c = c[k:] + c[:k]
            if c[1] > c[-1]:
                c = [c[0], *reversed(c[1:])]
            out.append(c)
    return sorted(out, key=lambda c: (len(c), c))


def metp_graph(g: Graph) -> list[EdgeIneq]:
    """Cycle inequalities of all chordless cycles plus ``0 <= x_e <= 1``."""
    out = []
    for c in chordless_cycles(g):
        C = cycle_edges(c)
        for k in range(1, len(C) + 1, 2):
            for F in combinations(C, k):
                out.append(cycle_ineq(C, F))
    for e in g.edges:
        out.append(EdgeIneq({e: -1}, 0))
        out.append(EdgeIneq({e: 1}, 1))
    return out


def cutp_facets(g: Graph) -> set[tuple[int, ...]]:
    return set(hull(graph_cuts(g)).facets)


def cutp_equals_metp(g: Graph) -> bool:
    """Every facet of the (full-dimensional) cut polytope is one of the metric inequalities."""
    metp = {q.canonical(g) for q in metp_graph(g)}
    return cutp_facets(g) <= metp


# --- lifting ------------------------------------------------------------------


def _path_edges(path: Sequence[int]) -> list[Edge]:
    return [_edge(path[i], path[i + 1]) for i in range(len(path) - 1)]


def lift_ineq(f: EdgeIneq, sys: PathSystem, g: Graph) -> EdgeIneq:
    """Put ``a_ij`` on every edge of ``P_ij``.

    Rejected when a path is not a walk in ``g`` between the right terminals,
    when paths share an edge, or when a positive coefficient sits on a path
    longer than one edge.
    """
    n = len(sys.terminals)
    if len(set(sys.terminals)) != n:
        raise InvalidPathSystem("terminals must be distinct")
    edges = set(g.edges)
    used: dict[Edge, tuple[int, int]] = {}
    coeffs: dict[Edge, Fraction] = {}
    for (i, j), a in sorted(f.coeffs.items()):
        if not (0 <= i < j < n):
            raise InvalidPathSystem(f"coefficient on pair ({i},{j}) outside the {n} terminals")
        path = sys.paths.get((i, j))
        if path is None:
            raise InvalidPathSystem(f"no path for pair ({i},{j})")
        ends = {path[0], path[-1]}
        if ends != {sys.terminals[i], sys.terminals[j]} or len(set(path)) != len(path):
            raise InvalidPathSystem(f"path for ({i},{j}) is not a simple path between its terminals")
        pe = _path_edges(path)
        if a > 0 and len(pe) != 1:
            raise InvalidPathSystem(f"pair ({i},{j}) has positive coefficient but its path has {len(pe)} edges")
        for e in pe:
            if e not in edges:
                raise InvalidPathSystem(f"path for ({i},{j}) uses non-edge {e}")
            if e in used:
                raise InvalidPathSystem(f"paths for {used[e]} and ({i},{j}) share edge {e}")
            used[e] = (i, j)
            coeffs[e] = a
    prov = {"source": f.to_json(), "paths": sys.to_json()}
    return EdgeIneq(coeffs, f.rhs, prov)
