"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Everything is exact, so every comparison is equality of integers or
Fractions.  Criterion 12 (the dim-7 repartitioning classification, the
full HYP_8 ray enumeration, HYPP_7/HYPP_8 and the Baranovskii cone facet
counts) is out of reach at this scale and has no test; its published
numbers are stored as data and only their internal consistency is checked
(criterion 6).
"""
import random
import time
from fractions import Fraction
from itertools import product
from math import comb

import pytest

from hycone.catalog import cut_cone, load, met_cone, verify
from hycone.graphs import (
    Graph,
    PathSystem,
    check_valid,
    cutp_equals_metp,
    cycle_edges,
    cycle_ineq,
    lift_ineq,
)
from hycone.hypfamilies import BInequality, DistVec, cut_rank, cuts, eval_H, met_family, n_pairs
from hycone.lattice import circumsphere, covariance_form, distance_from_form, member_hyp, member_hypp, QuadForm
from hycone.polyhedra import PolyCone, canonical_vector, dd_convert
from hycone.repartition import (
    check_b_inequality,
    barycentric_b,
    cofactor_forms,
    flip,
    generate_configs,
    hnf_simplices,
    enum_candidates,
    two_triangulations,
)
from hycone.symmetry import ares_orbit_size_b, merge_classes, orbit_partition, orbit_size_sym, orbit_sizes_gcd
from conftest import brute_max_violation
from test_graphs import random_lift_instance


@pytest.fixture
def say(capsys):
    def emit(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")

    return emit


def test_criterion_01_cut_cone_counts(say):
    want = {3: (3, 3, 1, 1), 4: (7, 12, 2, 1), 5: (15, 40, 2, 2), 6: (31, 210, 3, 4)}
    got, slowest = {}, 0.0
    for n in want:
        t0 = time.perf_counter()
        cone = dd_convert(cut_cone(n))
        slowest = max(slowest, time.perf_counter() - t0)
        got[n] = (
            len(cone.rays),
            len(cone.facets),
            len(orbit_partition(cone.rays, "sym", "pairs")),
            len(orbit_partition(cone.facets, "sym", "pairs")),
        )
    ok = got == want and slowest < 60
    say(1, ok, f"(rays, facets, ray orbits, facet orbits) {got}; slowest {slowest:.1f}s")
    assert got == want
    assert slowest < 60


def test_criterion_02_metric_cone_counts(say):
    facets = {n: len(met_family(n)) for n in range(3, 9)}
    facets_ok = facets == {n: 3 * comb(n, 3) for n in range(3, 9)} == {3: 3, 4: 12, 5: 30, 6: 60, 7: 105, 8: 168}
    rays, orbits, irredundant, slowest = {}, {}, True, 0.0
    for n in range(3, 7):
        t0 = time.perf_counter()
        cone = dd_convert(met_cone(n))
        slowest = max(slowest, time.perf_counter() - t0)
        rays[n] = len(cone.rays)
        orbits[n] = len(orbit_partition(cone.rays, "sym", "pairs"))
        # every triangle inequality survives the round trip, so none is redundant
        back = dd_convert(PolyCone(n_pairs(n), rays=cone.rays))
        irredundant &= set(back.facets) == set(met_cone(n).facets)
    rays_ok = rays == {3: 3, 4: 7, 5: 25, 6: 296}
    orbits_ok = orbits == {3: 1, 4: 2, 5: 3, 6: 7}
    ok = facets_ok and irredundant and rays_ok and orbits_ok and slowest < 600
    say(2, ok, f"facets {facets}, irredundant {irredundant}, rays {rays}, ray orbits {orbits} (want 1,2,3,7), slowest {slowest:.1f}s")
    assert facets_ok and irredundant
    assert rays_ok
    assert slowest < 600
    assert orbits_ok, f"ray orbits {orbits}"


def test_criterion_03_hyp_equals_cut_up_to_6(say):
    detail = {}
    ok = True
    for n in range(3, 7):
        cut_facets = set(dd_convert(cut_cone(n)).facets)
        dim = n_pairs(n)
        valid_all, facet_b = True, set()
        for b in product(range(-2, 3), repeat=n):
            if sum(b) != 1 or sum(1 for x in b if x) <= 1:
                continue
            q = BInequality(b)
            # each b-inequality holds on every cut, so CUT_n lies inside the b-cone
            valid_all &= all(eval_H(q, DistVec(n, c.vec)) <= 0 for c in cuts(n))
            if cut_rank(q) == dim - 1:
                facet_b.add(canonical_vector(q.normal()))
        same = facet_b == cut_facets
        detail[n] = (len(cut_facets), len(facet_b), valid_all)
        ok &= same and valid_all
    say(3, ok, f"n: (cut facets, facet-defining b with |b_i|<=2, all b valid on cuts) {detail}")
    assert ok


def test_criterion_04_table2(say):
    t0 = time.perf_counter()
    rep = verify("t2")
    rows = load("table2.json")
    total = sum(orbit_size_sym(r["b"]) for r in rows)
    classes = merge_classes([r["b"] for r in rows])
    sums_ok = all(sum(r["b"]) == 1 for r in rows)
    elapsed = time.perf_counter() - t0
    ok = rep.ok and len(rows) == 86 and total == 298592 and len(classes) == 22 and sums_ok and elapsed < 300
    say(4, ok, f"{len(rep)} row checks, {len(rep.failures())} failures, 86 rows -> {len(classes)} classes, total {total}, {elapsed:.1f}s")
    assert rep.ok, rep.failures()
    assert (len(rows), total, len(classes)) == (86, 298592, 22) and sums_ok
    assert elapsed < 300


def test_criterion_05_table4(say):
    rep = verify("t4")
    rows = load("table4.json")
    total = sum(ares_orbit_size_b(r["b"]) for r in rows)
    ok = rep.ok and len(rows) == 22 and total == 1374560
    say(5, ok, f"{len(rep)} checks, {len(rep.failures())} failures, 22 rows, total {total}")
    assert rep.ok, rep.failures()
    assert total == 1374560


def test_criterion_06_count_totals(say):
    rep = verify("totals")
    tot = load("totals.json")
    rays = sum(p["rays"] for p in tot["hyp8_rays"]["parts"])
    orbits = sum(p["orbits"] for p in tot["hyp8_rays"]["parts"])
    vparts = [p["orbits"] for p in tot["hypp8_vertex_orbits"]["parts"]]
    t5 = load("table5.json")
    stab_ok = len(t5) == 24 and all(r["stab"] * r["size_div_10752"] * 10752 == 2**7 * 40320 for r in t5)
    t3 = load("table3.json")
    v1 = next(r for r in t3["rows"] if r["label"] == "V1")
    f1 = v1["values"][0]
    ok = rep.ok and (rays, orbits) == (242695427, 9003) and vparts == [1, 24, 556] and stab_ok and sum(v1["values"]) == 3773 and f1 == 105
    say(6, ok, f"rays {rays}/{orbits} orbits, vertex orbits {'+'.join(map(str, vparts))}={sum(vparts)}, Table 5 rows {len(t5)}, V1 sum {sum(v1['values'])} with F1={f1}")
    assert rep.ok, rep.failures()
    assert ok


def test_criterion_07_gcds(say):
    rep = verify("gcd")
    sizes8 = [orbit_size_sym(r["b"]) for r in load("table2.json")]
    computed = {c.row: c.computed for c in rep}
    ok = rep.ok and orbit_sizes_gcd(sizes8) == 56 and [computed[f"n={n}"] for n in range(3, 7)] == [3, 12, 10, 30]
    say(7, ok, f"gcds {computed}")
    assert ok


def _random_distance(rng: random.Random) -> DistVec:
    n = rng.randint(3, 6)
    m = n_pairs(n)
    kind = rng.randrange(3)
    if kind == 0:
        vals = [Fraction(rng.randint(0, 12), rng.randint(1, 4)) for _ in range(m)]
    else:
        cs = cuts(n)
        vals = [Fraction(0)] * m
        for c in cs:
            w = Fraction(rng.randint(0, 3), rng.randint(1, 3))
            vals = [a + w * x for a, x in zip(vals, c.vec)]
        if kind == 2:
            # push a few entries around so some points leave the cone
            for k in rng.sample(range(m), rng.randint(1, 3)):
                vals[k] = max(Fraction(0), vals[k] + Fraction(rng.randint(-6, 6), rng.randint(1, 3)))
    return DistVec(n, tuple(vals))


def test_criterion_08_membership(say, k23):
    t0 = time.perf_counter()
    rng = random.Random(20240601)
    missed = unsound = violated = 0
    for _ in range(1000):
        d = _random_distance(rng)
        for target, fn in (("cone", member_hyp), ("polytope", member_hypp)):
            res = fn(d)
            best, _ = brute_max_violation(d, 3, target)
            if best is not None and best > 0 and res.member:
                missed += 1
            if not res.member:
                violated += 1
                w = res.witness
                if not (eval_H(w, d) - w.rhs == res.violation > 0):
                    unsound += 1
    cuts_ok = all(member_hyp(DistVec(n, c.vec)).member for n in range(2, 9) for c in cuts(n))
    k = member_hyp(k23)
    k_ok = not k.member and k.violation == 2 and eval_H(k.witness, k23) - k.witness.rhs == 2
    elapsed = time.perf_counter() - t0
    ok = missed == 0 and unsound == 0 and cuts_ok and k_ok and elapsed < 300
    say(8, ok, f"2000 verdicts, {violated} violated, {missed} missed, {unsound} unsound witnesses; cuts accepted {cuts_ok}; K23 violation {k.violation}; {elapsed:.1f}s")
    assert missed == 0 and unsound == 0
    assert cuts_ok and k_ok
    assert elapsed < 300


def _random_pd_instance(rng: random.Random):
    m = rng.randint(1, 5)
    a = [[rng.randint(-2, 2) for _ in range(m)] for _ in range(m)]
    # A^T A plus a positive diagonal is positive definite
    q = [[Fraction(sum(a[k][i] * a[k][j] for k in range(m))) for j in range(m)] for i in range(m)]
    for i in range(m):
        q[i][i] += Fraction(rng.randint(1, 3), rng.randint(1, 2))
    form = QuadForm(tuple(tuple(r) for r in q))
    d = distance_from_form(form)
    while True:
        b = [rng.randint(-3, 3) for _ in range(m)]
        b0 = 1 - sum(b)
        if abs(b0) <= 6:
            break
    return d, BInequality((b0, *b))


def _identity_sides(d: DistVec, q: BInequality):
    form = covariance_form(d)
    sph = circumsphere(form)
    v = q.b[1:]
    diff = [x - c for x, c in zip(v, sph.center)]
    return eval_H(q, d), form(diff), sph.r2


def test_criterion_09_central_identity(say):
    rng = random.Random(9)
    holds = 0
    sample = None
    for _ in range(1000):
        d, q = _random_pd_instance(rng)
        h, qv, r2 = _identity_sides(d, q)
        if h == qv - r2:
            holds += 1
        elif sample is None:
            sample = (q.b, h, qv - r2)
    ok = holds == 1000
    say(9, ok, f"H(b,d) = q[v-c] - r^2 held on {holds}/1000 samples; first counterexample b={sample[0] if sample else None}: H={sample[1] if sample else None}, q[v-c]-r^2={sample[2] if sample else None}")
    assert ok


def test_criterion_09_companion_sign_corrected(say):
    # same samples; the identity holds with the opposite orientation
    rng = random.Random(9)
    holds = sum(1 for _ in range(1000) if (lambda h, qv, r2: h == r2 - qv)(*_identity_sides(*_random_pd_instance(rng))))
    say(9, holds == 1000, f"companion: H(b,d) = r^2 - q[v-c] held on {holds}/1000 samples")
    assert holds == 1000


def test_criterion_10_repartition(say):
    total = degenerate = 0
    ok = True
    for n in range(1, 4):
        for cfg in generate_configs(n, 2):
            total += 1
            degenerate += cfg.degenerate
            plus, minus = two_triangulations(cfg)
            ok &= plus.total == minus.total
            ok &= flip(flip(plus, cfg), cfg) == plus and flip(plus, cfg) == minus
            ok &= sum(cfg.alpha) == 0 and all(sum(a * p[t] for a, p in zip(cfg.alpha, cfg.points)) == 0 for t in range(n))
    tight = 0
    for n in range(1, 4):
        simplex = hnf_simplices(n, 1)[0]
        box = cofactor_forms(simplex)
        for v in enum_candidates(box, 1):
            ok &= check_b_inequality(barycentric_b(box, v))
            tight += 1
    say(10, ok, f"{total} configs (n<=3, max_vol<=2, {degenerate} flagged degenerate), {tight} volume-1 b-inequalities valid and tight")
    assert ok and total > 0 and tight > 0


def test_criterion_11_graphs(say):
    g = Graph(5, ((0, 3), (3, 1), (1, 2), (2, 4), (4, 0)))
    f = cycle_ineq(cycle_edges([0, 1, 2]), [(1, 2)])
    sys_ = PathSystem((0, 1, 2), {(0, 1): (0, 3, 1), (0, 2): (0, 4, 2), (1, 2): (1, 2)})
    c5_ok = lift_ineq(f, sys_, g) == cycle_ineq(cycle_edges([0, 3, 1, 2, 4]), [(1, 2)])
    rng = random.Random(11)
    valid = 0
    for _ in range(500):
        f, sys_, h = random_lift_instance(rng, 14)
        valid += check_valid(lift_ineq(f, sys_, h), h).valid
    tree = Graph(6, ((0, 1), (1, 2), (1, 3), (3, 4), (3, 5)))
    k4, tr, k5 = cutp_equals_metp(Graph.complete(4)), cutp_equals_metp(tree), cutp_equals_metp(Graph.complete(5))
    ok = c5_ok and valid == 500 and k4 and tr and not k5
    say(11, ok, f"C5 lift matches cycle inequality {c5_ok}; {valid}/500 lifted instances valid; CUTP=METP for K4 {k4}, tree {tr}, K5 {k5}")
    assert ok
