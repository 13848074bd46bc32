"""Sym(n) and switching actions on pair-indexed vectors and on b-inequalities.

Two groups are supported: ``"sym"`` (permutations of the points) and
``"ares"`` (permutations together with the ``2^(n-1)`` switchings).  Switching
by ``S`` acts

* on a distance vector as ``d(i,j) -> 1 - d(i,j)`` for pairs cut by ``S``,
* on a homogenised facet ``(h0, h)`` by negating ``h`` on cut pairs and
  adding their old values to ``h0``,
* on a b-vector by negating the entries indexed by ``S``.

A b-inequality and its negative are the same inequality; b-vectors are stored
with positive sum.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from math import factorial, gcd, prod
from typing import Iterable, Sequence

from .hypfamilies import BInequality, n_from_pairs, pair_index, pairs

ACTIONS = ("pairs", "facets", "b")
GROUPS = ("sym", "ares")


@dataclass(frozen=True)
class PairAction:
    """Group element: permute by ``perm`` then switch by ``S`` (normalised, ``0 not in S``)."""

    n: int
    perm: tuple[int, ...]
    S: frozenset[int] = frozenset()

    def __post_init__(self):
        S = frozenset(self.S)
        if 0 in S:
            S = frozenset(range(self.n)) - S
        object.__setattr__(self, "S", S)

    def compose(self, other: "PairAction") -> "PairAction":
        """``self`` after ``other``.

        Switching commutes past a permutation as ``sigma . U_T = U_{sigma T} . sigma``,
        and switching sets combine by symmetric difference.
        """
        perm = tuple(self.perm[other.perm[i]] for i in range(self.n))
        moved = frozenset(self.perm[i] for i in other.S)
        return PairAction(self.n, perm, moved ^ self.S)


@dataclass
class OrbitSummary:
    representative: tuple
    size: int
    stabilizer: int
    members: list[tuple] | None = field(default=None, repr=False)


def group_order(n: int, group: str) -> int:
    if group == "sym":
        return factorial(n)
    if group == "ares":
        return factorial(n) * 2 ** (n - 1)
    raise ValueError(f"unknown group {group!r}")


def orbit_size_sym(b: Sequence[int]) -> int:
    """``n!`` over the product of multiplicity factorials."""
    return factorial(len(b)) // prod(factorial(c) for c in Counter(b).values())


# --- elementary actions --------------------------------------------------------


def _pair_perm(n: int, perm: Sequence[int]) -> tuple[int, ...]:
    """``src`` with ``image[k] = vec[src[k]]`` for the permutation action on pairs."""
    idx = pair_index(n)
    inv = [0] * n
    for i, p in enumerate(perm):
        inv[p] = i
    out = []
    for i, j in pairs(n):
        a, b = inv[i], inv[j]
        out.append(idx[(a, b) if a < b else (b, a)])
    return tuple(out)


def permute_pairs(vec: Sequence, perm: Sequence[int], n: int | None = None) -> tuple:
    n = n or n_from_pairs(len(vec))
    src = _pair_perm(n, perm)
    return tuple(vec[k] for k in src)


def permute_b(b: Sequence[int], perm: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(b)
    for i, x in enumerate(b):
        out[perm[i]] = x
    return tuple(out)


def _cut_mask(n: int, S: Iterable[int]) -> tuple[bool, ...]:
    S = frozenset(S)
    return tuple((i in S) != (j in S) for i, j in pairs(n))


def switch_pairs(vec: Sequence, S: Iterable[int], n: int | None = None) -> tuple:
    n = n or n_from_pairs(len(vec))
    return tuple(1 - x if c else x for x, c in zip(vec, _cut_mask(n, S)))


def switch_facet(h: Sequence, S: Iterable[int], n: int | None = None) -> tuple:
    n = n or n_from_pairs(len(h) - 1)
    mask = _cut_mask(n, S)
    h0 = h[0] + sum(x for x, c in zip(h[1:], mask) if c)
    return (h0, *(-x if c else x for x, c in zip(h[1:], mask)))


def switch_b(b: Sequence[int], S: Iterable[int]) -> tuple[int, ...]:
    S = frozenset(S)
    return _signed_rep(tuple(-x if i in S else x for i, x in enumerate(b)))


def _signed_rep(b: tuple[int, ...]) -> tuple[int, ...]:
    return b if sum(b) > 0 else tuple(-x for x in b)


def apply(g: PairAction, vec: Sequence, action: str) -> tuple:
    """Image of ``vec`` under ``g`` (permutation first, then switching)."""
    if action == "b":
        out = permute_b(vec, g.perm)
        return switch_b(out, g.S) if g.S else _signed_rep(tuple(out))
    if action == "pairs":
        out = permute_pairs(vec, g.perm, g.n)
        return switch_pairs(out, g.S, g.n) if g.S else out
    if action == "facets":
        out = (vec[0], *permute_pairs(vec[1:], g.perm, g.n))
        return switch_facet(out, g.S, g.n) if g.S else out
    raise ValueError(f"unknown action {action!r}")


def group_elements(n: int, group: str):
    """Iterate over the whole group (``n! 2^(n-1)`` elements for ARes)."""
    switchings = [frozenset()]
    if group == "ares":
        switchings = [frozenset(i + 1 for i in range(n - 1) if m >> i & 1) for m in range(1 << (n - 1))]
    elif group != "sym":
        raise ValueError(f"unknown group {group!r}")
    for perm in permutations(range(n)):
        for S in switchings:
            yield PairAction(n, perm, S)


def _generators(n: int, group: str) -> list[PairAction]:
    ident = tuple(range(n))
    gens = []
    if n >= 2:
        t = list(ident)
        t[0], t[1] = t[1], t[0]
        gens.append(PairAction(n, tuple(t)))
        cyc = tuple((i + 1) % n for i in range(n))
        gens.append(PairAction(n, cyc))
    if group == "ares":
        gens.extend(PairAction(n, ident, frozenset({i})) for i in range(1, n))
    return gens


def _n_of(vec: Sequence, action: str) -> int:
    if action == "b":
        return len(vec)
    if action == "pairs":
        return n_from_pairs(len(vec))
    return n_from_pairs(len(vec) - 1)


def _normalize_input(vec: Sequence, action: str) -> tuple:
    if action == "b":
        return _signed_rep(tuple(int(x) for x in vec))
    return tuple(vec)


# --- orbits and canonical forms -----------------------------------------------


def orbit(vec: Sequence, group: str = "sym", action: str = "pairs", members: bool = True) -> OrbitSummary:
    """Orbit closure under the group generators (breadth first)."""
    n = _n_of(vec, action)
    start = _normalize_input(vec, action)
    gens = _generators(n, group)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = apply(g, v, action)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    size = len(seen)
    order = group_order(n, group)
    ordered = sorted(seen)
    return OrbitSummary(ordered[0], size, order // size, ordered if members else None)


def canonical(vec: Sequence, group: str = "sym", action: str = "pairs") -> tuple:
    """Lexicographically least image over the whole group.

    b-vectors have closed forms: under Sym the sorted vector; under ARes the
    least sorted signed arrangement of ``|b|`` with positive sum.  Pair and
    facet vectors are minimised by brute force over all group elements.
    """
    v = _normalize_input(vec, action)
    if action == "b":
        if group == "sym":
            return tuple(sorted(v))
        if group == "ares":
            return _ares_canonical_b(v)
        raise ValueError(f"unknown group {group!r}")
    n = _n_of(v, action)
    return min(apply(g, v, action) for g in group_elements(n, group))


def canonical_bruteforce(vec: Sequence, group: str, action: str) -> tuple:
    """Full-group minimisation for any action (oracle for the closed forms)."""
    v = _normalize_input(vec, action)
    n = _n_of(v, action)
    return min(apply(g, v, action) for g in group_elements(n, group))


def _sign_patterns(b: Sequence[int]) -> set[tuple[int, ...]]:
    """Sym-canonical forms of every signed rearrangement of ``|b|`` (one switching class)."""
    mags = [abs(x) for x in b]
    nz = [i for i, x in enumerate(mags) if x]
    out = set()
    for signs in product((1, -1), repeat=len(nz)):
        w = list(mags)
        for i, s in zip(nz, signs):
            w[i] *= s
        out.add(tuple(sorted(_signed_rep(tuple(w)))))
    return out


def _ares_canonical_b(b: Sequence[int]) -> tuple[int, ...]:
    return min(_sign_patterns(b))


def ares_signature(b: Sequence[int]) -> tuple[int, ...]:
    """Complete ARes invariant of a b-vector: the sorted absolute values."""
    return tuple(sorted(abs(x) for x in b))


def ares_orbit_size_b(b: Sequence[int]) -> int:
    """Number of distinct inequalities in the switching class of ``b``."""
    return sum(orbit_size_sym(w) for w in _sign_patterns(b))


def sym_orbits_in_class(b: Sequence[int]) -> list[tuple[int, ...]]:
    """Sym-canonical representatives of the Sym-orbits composing the ARes orbit of ``b``."""
    return sorted(_sign_patterns(b))


@dataclass
class SwitchingClass:
    signature: tuple[int, ...]
    members: list[tuple[int, ...]]  # input reps in this class, input order
    size: int  # number of inequalities in the ARes orbit
    sym_orbits: list[tuple[int, ...]]
    homogeneous: list[tuple[int, ...]]  # Sym-orbits with rhs 0


def merge_classes(reps: Iterable[Sequence[int]]) -> list[SwitchingClass]:
    """Partition b-vectors into switching classes, in order of first appearance."""
    classes: dict[tuple[int, ...], SwitchingClass] = {}
    for b in reps:
        sig = ares_signature(b)
        if sig not in classes:
            orbs = sym_orbits_in_class(b)
            homo = [w for w in orbs if BInequality(w).rhs == 0]
            classes[sig] = SwitchingClass(sig, [], sum(orbit_size_sym(w) for w in orbs), orbs, homo)
        classes[sig].members.append(tuple(b))
    return list(classes.values())


def orbit_partition(vectors: Iterable[Sequence], group: str = "sym", action: str = "pairs") -> list[list[tuple]]:
    """Split a group-invariant set of vectors into orbits (generator closure inside the set)."""
    pool = {_normalize_input(v, action) for v in vectors}
    if not pool:
        return []
    n = _n_of(next(iter(pool)), action)
    gens = _generators(n, group)
    left = set(pool)
    out = []
    for v in sorted(pool):
        if v not in left:
            continue
        left.discard(v)
        orb = [v]
        frontier = [v]
        while frontier:
            nxt = []
            for u in frontier:
                for g in gens:
                    w = apply(g, u, action)
                    if w in left:
                        left.discard(w)
                        orb.append(w)
                        nxt.append(w)
                    elif w not in pool:
                        raise ValueError("vector set is not invariant under the group")
            frontier = nxt
        out.append(sorted(orb))
    return out


def orbit_sizes_gcd(sizes: Iterable[int]) -> int:
    g = 0
    for s in sizes:
        g = gcd(g, s)
    return g


def orbit_report_tsv(rows: Iterable[tuple[Sequence, int, int, int]]) -> str:
    """TSV lines: representative, orbit size, stabilizer order, class id."""
    lines = ["representative\torbit_size\tstabilizer\tclass"]
    for rep, size, stab, cls in rows:
        lines.append(f"{','.join(str(Fraction(x)) for x in rep)}\t{size}\t{stab}\t{cls}")
    return "\n".join(lines) + "\n"
