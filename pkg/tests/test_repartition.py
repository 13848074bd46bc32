from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from hycone.hypfamilies import DistVec, cut_vector, eval_H
from hycone.repartition import (
    DegenerateConfig,
    NotSpanning,
    Unbounded,
    affine_relation,
    barycentric_b,
    check_b_inequality,
    cofactor_forms,
    enum_candidates,
    flip,
    generate_configs,
    hnf_simplices,
    make_config,
    simplex_volume,
    tight_cuts,
    two_triangulations,
)

SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]
TRI = [(0, 0), (1, 0), (0, 1)]


def test_simplex_volume_examples():
    assert simplex_volume(TRI) == 1
    assert simplex_volume([(0, 0), (1, 0), (1, 2)]) == 2
    assert simplex_volume([(0, 0), (1, 0), (2, 0)]) == 0


def test_affine_relation_examples():
    assert affine_relation(SQUARE) == (1, -1, -1, 1)
    assert affine_relation([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0)]) == (1, -1, -1, 0, 1)
    assert affine_relation([(0,), (1,), (2,)]) == (1, -2, 1)
    with pytest.raises(NotSpanning):
        affine_relation([(0, 0), (1, 0), (2, 0), (3, 0)])


def test_two_triangulations_examples():
    cfg = make_config(SQUARE)
    plus, minus = two_triangulations(cfg)
    assert set(plus.simplices) == {(1, 2, 3), (0, 1, 2)}
    assert set(minus.simplices) == {(0, 2, 3), (0, 1, 3)}
    assert flip(flip(plus, cfg), cfg) == plus
    cfg = make_config([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0)])
    # e3 has coefficient 0, so it is a vertex of every simplex on both sides
    assert cfg.degenerate
    plus, minus = two_triangulations(cfg)
    assert len(plus.simplices) == len(minus.simplices) == 2
    assert plus.total == minus.total == 2


def test_zero_volume_simplex_rejected():
    # a valid relation never produces a zero simplex (vol S_i = |alpha_i| g), so use a hand-built one
    cfg = make_config(SQUARE)
    bad = type(cfg)(((0, 0), (1, 0), (2, 0), (0, 1)), (1, 0, 0, -1))
    with pytest.raises(DegenerateConfig):
        two_triangulations(bad)


def test_cofactor_examples():
    box = cofactor_forms(TRI)
    # replacing e1 (index 1) by v leaves {0, e2, v}: volume |v1|; replacing e2 leaves |v2|
    assert box.forms[1] == ((1, 0), 0) or box.forms[1] == ((-1, 0), 0)
    for v in product(range(-3, 4), repeat=2):
        vals = box.evaluate(v)
        for i in range(3):
            pts = [p for k, p in enumerate(TRI) if k != i] + [v]
            assert abs(vals[i]) == simplex_volume(pts)
    assert sum(box.barycentric((2, 3))) == 1
    with pytest.raises(Unbounded):
        cofactor_forms([(0, 0), (1, 1), (2, 2)])


def test_enum_candidates_examples():
    box = cofactor_forms(TRI)
    assert enum_candidates(box, 1) == [(-1, 1), (1, -1), (1, 1)]
    assert enum_candidates(box, 0) == []
    want = sorted(
        v for v in product(range(-2, 3), repeat=2)
        if v not in TRI and all(abs(x) <= 1 for x in box.evaluate(v))
    )
    assert enum_candidates(box, 1) == want


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=n + 1, max_size=n + 1)), st.integers(1, 3))
def test_enum_candidates_matches_box(fixed, max_vol):
    fixed = [tuple(p) for p in fixed]
    if simplex_volume(fixed) == 0:
        with pytest.raises(Unbounded):
            cofactor_forms(fixed)
        return
    box = cofactor_forms(fixed)
    got = enum_candidates(box, max_vol)
    if abs(box.base) != max_vol:
        assert got == []
        return
    r = 2 + 2 * max_vol * len(fixed)
    want = sorted(
        v for v in product(range(-r, r + 1), repeat=len(fixed) - 1)
        if v not in fixed and all(abs(x) <= max_vol for x in box.evaluate(v))
    )
    assert got == want


def test_hnf_simplices_counts():
    # the number of Hermite normal forms of determinant k in dimension 2 is sigma(k)
    assert [len(hnf_simplices(2, k)) for k in (1, 2, 3, 4)] == [1, 3, 4, 7]
    assert all(simplex_volume(s) == 2 for s in hnf_simplices(3, 2))


@pytest.mark.parametrize("n,max_vol", [(1, 2), (2, 2), (3, 2)])
def test_generated_configs_balance(n, max_vol):
    configs = generate_configs(n, max_vol)
    assert configs
    for cfg in configs:
        a = cfg.alpha
        assert sum(a) == 0
        for t in range(n):
            assert sum(ai * p[t] for ai, p in zip(a, cfg.points)) == 0
        plus, minus = two_triangulations(cfg, allow_degenerate=True)
        assert plus.total == minus.total
        if not cfg.degenerate:
            assert 0 not in plus.volumes + minus.volumes


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_unimodular_configs_give_tight_b_inequalities(n):
    simplex = hnf_simplices(n, 1)[0]
    box = cofactor_forms(simplex)
    for v in enum_candidates(box, 1):
        q = barycentric_b(box, v)
        assert sum(q.b) == 1
        assert check_b_inequality(q)
        for S in tight_cuts(q):
            assert eval_H(q, DistVec(q.n, cut_vector(S, q.n))) == 0


def test_config_json():
    data = make_config(SQUARE).to_json()
    assert data["alpha"] == [1, -1, -1, 1]
    assert data["s_plus"] == [0, 3] and data["s_minus"] == [1, 2]
    assert data["triangulations"]["plus"]["volumes"] == [1, 1]
