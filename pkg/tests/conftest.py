from fractions import Fraction

import pytest
from hypothesis import strategies as st

from hycone.hypfamilies import DistVec, n_pairs


def rationals(max_num=6, max_den=4, min_num=None):
    lo = -max_num if min_num is None else min_num
    return st.builds(Fraction, st.integers(lo, max_num), st.integers(1, max_den))


def int_matrices(rows, cols, lo=-3, hi=3):
    return st.lists(st.lists(st.integers(lo, hi), min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@st.composite
def distvecs(draw, n_min=3, n_max=6, nonneg=True):
    n = draw(st.integers(n_min, n_max))
    vals = draw(st.lists(rationals(min_num=0 if nonneg else None), min_size=n_pairs(n), max_size=n_pairs(n)))
    return DistVec(n, tuple(vals))


@pytest.fixture
def k23():
    """Path metric of K_{2,3}: points 0,1 on one side, 2,3,4 on the other."""
    return DistVec.from_function(5, lambda i, j: 2 if (i < 2) == (j < 2) else 1)


def brute_max_violation(d: DistVec, max_abs: int = 3, target: str = "cone"):
    """Numpy oracle: max of H(b, d) - rhs(b) over the box |b_i| <= max_abs.

    Returns (value, b) with value a Fraction, or (None, None) if no b qualifies.
    """
    import numpy as np
    from math import lcm

    from hycone.hypfamilies import pairs

    n = d.n
    den = lcm(*(x.denominator for x in d.d))
    w = np.array([int(x * den) for x in d.d], dtype=np.int64)
    grid = np.array(np.meshgrid(*[np.arange(-max_abs, max_abs + 1)] * n, indexing="ij")).reshape(n, -1).T
    t = grid.sum(axis=1)
    keep = (t == 1) if target == "cone" else (t % 2 != 0)
    B = grid[keep]
    if len(B) == 0:
        return None, None
    P = np.array(list(pairs(n)))
    H = (B[:, P[:, 0]] * B[:, P[:, 1]]) @ w
    s = (B.sum(axis=1) - 1) // 2
    val = H - den * s * (s + 1)
    k = int(np.argmax(val))
    return Fraction(int(val[k]), den), tuple(int(x) for x in B[k])
