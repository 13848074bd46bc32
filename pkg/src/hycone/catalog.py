"""Published counts for the hypermetric cone/polytope on 8 points, and checks against them.

The tables live as JSON files next to this module (or in the directory named
by ``HYCONE_DATA``) with a sha256 manifest.  Each check recomputes a value
from first principles (the b-vector, a dual description, an orbit
decomposition) and compares it with the stored entry.  Reports are rows
``table, row, check, expected, computed, status``.
"""
from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from pathlib import Path

from .hypfamilies import BInequality, cut_incidence_count, cut_rank, cuts, met_family
from .polyhedra import PolyCone, dd_convert, hull
from .symmetry import (
    ares_orbit_size_b,
    ares_signature,
    canonical,
    merge_classes,
    orbit_partition,
    orbit_size_sym,
    orbit_sizes_gcd,
    sym_orbits_in_class,
)

DATA_FILES = ("table1.json", "table2.json", "table3.json", "table4.json", "table5.json", "table6.json", "totals.json")


class ChecksumError(RuntimeError):
    pass


def data_dir() -> Path:
    env = os.environ.get("HYCONE_DATA")
    return Path(env) if env else Path(__file__).with_name("data")


@lru_cache(maxsize=None)
def _manifest(root: str) -> dict:
    return json.loads((Path(root) / "manifest.json").read_text())["sha256"]


def load(name: str):
    """Read one data file, refusing it if its checksum differs from the manifest."""
    root = data_dir()
    raw = (root / name).read_bytes()
    want = _manifest(str(root)).get(name)
    got = hashlib.sha256(raw).hexdigest()
    if want != got:
        raise ChecksumError(f"{name}: checksum {got} does not match manifest {want}")
    return json.loads(raw)


def table1_counts(family: str, kind: str) -> dict[int, tuple[int, int]]:
    for row in load("table1.json"):
        if row["family"] == family and row["kind"] == kind:
            return {int(n): tuple(v) for n, v in row["counts"].items()}
    raise KeyError((family, kind))


# --- reports ------------------------------------------------------------------


@dataclass
class Check:
    table: str
    row: str
    check: str
    expected: object
    computed: object
    status: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = "OK" if self.expected == self.computed else "FAIL"


class Report(list):
    """List of :class:`Check` rows; ``INFO`` rows are recorded but never fail."""

    @property
    def ok(self) -> bool:
        return all(c.status != "FAIL" for c in self)

    def failures(self) -> list[Check]:
        return [c for c in self if c.status == "FAIL"]

    def to_tsv(self, header: bool = True) -> str:
        lines = ["table\trow\tcheck\texpected\tcomputed\tstatus"] if header else []
        for c in self:
            lines.append(f"{c.table}\t{c.row}\t{c.check}\t{c.expected}\t{c.computed}\t{c.status}")
        return "\n".join(lines) + "\n"


# --- Table 1, small n -----------------------------------------------------------


def cut_cone(n: int) -> PolyCone:
    return dd_convert(PolyCone(n * (n - 1) // 2, rays=[c.vec for c in cuts(n)]))


def met_cone(n: int) -> PolyCone:
    return dd_convert(PolyCone(n * (n - 1) // 2, facets=[q.normal() for q in met_family(n)]))


def cut_polytope(n: int):
    return hull([c.vec for c in cuts(n, include_zero=True)])


def _orbits(vectors, group, action) -> int:
    return len(orbit_partition(vectors, group, action))


def verify_table1_small() -> Report:
    rep = Report()
    cut_e, cut_f = table1_counts("CUT", "e"), table1_counts("CUT", "f")
    hyp_e, hyp_f = table1_counts("HYP", "e"), table1_counts("HYP", "f")
    for n in range(3, 7):
        cone = cut_cone(n)
        rays = (len(cone.rays), _orbits(cone.rays, "sym", "pairs"))
        facets = (len(cone.facets), _orbits(cone.facets, "sym", "pairs"))
        rep.append(Check("t1", f"CUT_{n}", "rays(orbits)", cut_e[n], rays))
        rep.append(Check("t1", f"CUT_{n}", "facets(orbits)", cut_f[n], facets))
        # HYP_n coincides with CUT_n in this range
        rep.append(Check("t1", f"HYP_{n}", "rays(orbits)", hyp_e[n], rays))
        rep.append(Check("t1", f"HYP_{n}", "facets(orbits)", hyp_f[n], facets))
    met_e, met_f = table1_counts("MET", "e"), table1_counts("MET", "f")
    for n in range(3, 9):
        fam = met_family(n)
        count = len({q.normal() for q in fam})
        orbits = _orbits([q.normal() for q in fam], "sym", "pairs")
        rep.append(Check("t1", f"MET_{n}", "facets(orbits) by construction", met_f[n], (count, orbits)))
        rep.append(Check("t1", f"MET_{n}", "3*C(n,3)", 3 * comb(n, 3), count))
    for n in range(3, 7):
        cone = met_cone(n)
        rays = (len(cone.rays), _orbits(cone.rays, "sym", "pairs"))
        rep.append(Check("t1", f"MET_{n}", "rays(orbits)", met_e[n], rays))
        # irredundancy: the facets recomputed from the rays are the whole family
        rep.append(Check("t1", f"MET_{n}", "irredundant facets", 3 * comb(n, 3), len(cone.facets)))
    hp_v, hp_f = table1_counts("HYPP", "v"), table1_counts("HYPP", "f")
    for n in range(3, 7):
        poly = cut_polytope(n)
        verts = [tuple(int(x) for x in v) for v in poly.vertices]
        rep.append(Check("t1", f"HYPP_{n}", "vertices(orbits)", hp_v[n], (len(verts), _orbits(verts, "ares", "pairs"))))
        facets = (len(poly.facets), _orbits(poly.facets, "ares", "facets"))
        if n <= 5:
            rep.append(Check("t1", f"HYPP_{n}", "facets(orbits)", hp_f[n], facets))
        else:
            status = "OK" if facets == hp_f[n] else "INFO"
            rep.append(Check("t1", f"HYPP_{n}", "facets(orbits) of hull(cuts), stored value not trusted", hp_f[n], facets, status))
    return rep


# --- Table 2 ----------------------------------------------------------------------


def _table2_row_checks(row: dict) -> list[Check]:
    label, b = row["label"], tuple(row["b"])
    out = [Check("t2", label, "sum(b)", 1, sum(b))]
    if sum(b) % 2 == 0:
        return out
    q = BInequality(b)
    inc = cut_incidence_count(q)
    rk = cut_rank(q)
    out.append(Check("t2", label, "orbit size", 56 * row["size_div_56"], orbit_size_sym(b)))
    out.append(Check("t2", label, "cut incidence", row["inc"][0], inc))
    out.append(Check("t2", label, "cut rank", row["cut_rank"], rk))
    # a simplicial facet has linearly independent incident extreme rays: 27 in total
    simplicial = sum(row["inc"]) == 27 and inc == rk
    out.append(Check("t2", label, "simplicial", row["simplicial"], simplicial))
    return out


def verify_table2(jobs: int = 1) -> Report:
    rows = load("table2.json")
    rep = Report()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for checks in ex.map(_table2_row_checks, rows):
                rep.extend(checks)
    else:
        for row in rows:
            rep.extend(_table2_row_checks(row))
    classes = merge_classes(tuple(r["b"]) for r in rows)
    rep.append(Check("t2", "all", "switching classes", table1_counts("HYPP", "f")[8][1], len(classes)))
    first = {cls.members[0] for cls in classes}
    for r in rows:
        rep.append(Check("t2", r["label"], "first of its switching class", r["bold"], tuple(r["b"]) in first))
    for cls in classes:
        want = sorted(canonical(m, "sym", "b") for m in cls.members)
        rep.append(Check("t2", "class " + ",".join(map(str, cls.signature)), "rows are all homogeneous orbits of the class",
                         want, sorted(cls.homogeneous)))
    total = sum(orbit_size_sym(r["b"]) for r in rows)
    rep.append(Check("t2", "all", "total facets", table1_counts("HYP", "f")[8][0], total))
    rep.append(Check("t2", "all", "orbits", table1_counts("HYP", "f")[8][1], len(rows)))
    return rep


# --- Table 4 ----------------------------------------------------------------------


def verify_table4() -> Report:
    rows = load("table4.json")
    t2 = load("table2.json")
    t2_classes = {c.signature: c for c in merge_classes(tuple(r["b"]) for r in t2)}
    rep = Report()
    matched = []
    for row in rows:
        label, b = row["label"], tuple(row["b"])
        q = BInequality(b)
        rep.append(Check("t4", label, "orbit size", 32 * row["size_div_32"], ares_orbit_size_b(b)))
        rep.append(Check("t4", label, "#classes", row["classes"], len(sym_orbits_in_class(b))))
        rep.append(Check("t4", label, "cut incidence with zero cut", row["inc"][0], cut_incidence_count(q, include_zero_cut=True)))
        sig = ares_signature(b)
        homo = [w for w in sym_orbits_in_class(b) if abs(sum(w)) == 1]
        t2c = t2_classes.get(sig)
        got = sorted(canonical(m, "sym", "b") for m in t2c.members) if t2c else None
        rep.append(Check("t4", label, "homogeneous members = cone facet class", sorted(homo), got))
        matched.append(sig)
    rep.append(Check("t4", "all", "bijection with cone switching classes", sorted(t2_classes), sorted(matched)))
    total = sum(ares_orbit_size_b(r["b"]) for r in rows)
    rep.append(Check("t4", "all", "total facets", table1_counts("HYPP", "f")[8][0], total))
    rep.append(Check("t4", "all", "orbits", table1_counts("HYPP", "f")[8][1], len(rows)))
    return rep


# --- totals -----------------------------------------------------------------------


def verify_totals() -> Report:
    tot = load("totals.json")
    rep = Report()
    rays = tot["hyp8_rays"]
    rep.append(Check("totals", "HYP_8 rays", "sum of parts", rays["total_rays"], sum(p["rays"] for p in rays["parts"])))
    rep.append(Check("totals", "HYP_8 rays", "sum of orbit parts", rays["total_orbits"], sum(p["orbits"] for p in rays["parts"])))
    rep.append(Check("totals", "HYP_8 rays", "Table 1 entry", table1_counts("HYP", "e")[8], (rays["total_rays"], rays["total_orbits"])))
    verts = tot["hypp8_vertex_orbits"]
    rep.append(Check("totals", "HYPP_8 vertices", "sum of orbit parts", verts["total"], sum(p["orbits"] for p in verts["parts"])))
    rep.append(Check("totals", "HYPP_8 vertices", "Table 1 orbits", table1_counts("HYPP", "v")[8][1], verts["total"]))
    t5 = load("table5.json")
    rep.append(Check("totals", "t5", "rows", next(p["orbits"] for p in verts["parts"] if p["kind"] == "2_21/3_21"), len(t5)))
    group = 2**7 * factorial(8)
    for row in t5:
        rep.append(Check("t5", row["label"], "|stab| * |orbit|", group, row["stab"] * 10752 * row["size_div_10752"]))
    t3 = load("table3.json")
    v1 = t3["rows"][0]
    rep.append(Check("t3", v1["label"], "row sum = HYP_7 facets", table1_counts("HYP", "f")[7][0], sum(v1["values"])))
    rep.append(Check("t3", v1["label"], "F1 = 3*C(7,3)", 3 * comb(7, 3), v1["values"][0]))
    return rep


# --- gcd of facet orbit sizes -------------------------------------------------------


def facet_orbit_sizes(n: int) -> list[int]:
    """Sym(n)-orbit sizes of the facets of the cut cone (the hypermetric cone for n <= 6)."""
    return sorted(len(o) for o in orbit_partition(cut_cone(n).facets, "sym", "pairs"))


def verify_gcd() -> Report:
    want = load("totals.json")["hyp_facet_gcd"]
    rep = Report()
    for n in range(3, 7):
        sizes = facet_orbit_sizes(n)
        rep.append(Check("gcd", f"n={n}", f"gcd of {sizes}", want[str(n)], orbit_sizes_gcd(sizes)))
    sizes8 = [orbit_size_sym(r["b"]) for r in load("table2.json")]
    rep.append(Check("gcd", "n=8", "gcd of catalog orbit sizes", want["8"], orbit_sizes_gcd(sizes8)))
    return rep


VERIFIERS = {
    "t1": verify_table1_small,
    "t2": verify_table2,
    "t4": verify_table4,
    "totals": verify_totals,
    "gcd": verify_gcd,
}


def verify(table: str = "all", jobs: int = 1) -> Report:
    names = list(VERIFIERS) if table == "all" else [table]
    rep = Report()
    for name in names:
        if name not in VERIFIERS:
            raise KeyError(f"unknown table {name!r}")
        rep.extend(VERIFIERS[name](jobs) if name == "t2" else VERIFIERS[name]())
    return rep
