"""Exact rational and integer linear algebra.

Matrices are plain lists of rows; entries are :class:`fractions.Fraction`
(ints are accepted on input and promoted).  Nothing here touches floating
point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rat = Fraction
Vector = list[Fraction]
Matrix = list[list[Fraction]]


class NoSolution(ValueError):
    """``m x = y`` is inconsistent.

    ``certificate`` is a vector ``c`` with ``c m = 0`` and ``c . y != 0``.
    """

    def __init__(self, certificate: Vector):
        super().__init__("linear system has no solution")
        self.certificate = certificate


class NonUnique(ValueError):
    """``m x = y`` has an affine family of solutions ``particular + span(kernel)``."""

    def __init__(self, particular: Vector, kernel: list[Vector]):
        super().__init__(f"solution not unique (kernel dimension {len(kernel)})")
        self.particular = particular
        self.kernel = kernel


def parse_rat(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; rejects floats and anything else."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool) or not isinstance(text, (int, str)):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational: {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(p, q)


def fmt_rat(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    m = [[Fraction(v) for v in row] for row in rows]
    if m and any(len(r) != len(m[0]) for r in m):
        raise ValueError("ragged matrix")
    return m


def shape(m: Sequence[Sequence]) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> Matrix:
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], x: Sequence) -> Vector:
    return [sum((p * q for p, q in zip(row, x)), Fraction(0)) for row in a]


def dot(x: Sequence, y: Sequence):
    return sum(p * q for p, q in zip(x, y))


def quad(a: Sequence[Sequence], x: Sequence) -> Fraction:
    """Value of the quadratic form ``x^T a x``."""
    return Fraction(dot(x, matvec(a, x)))


def primitive(v: Iterable) -> list[int]:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    return [x // g for x in ints]


def sign_normalized(v: list[int]) -> list[int]:
    """Flip sign so the first nonzero entry is positive."""
    for x in v:
        if x:
            return v if x > 0 else [-y for y in v]
    return v


def _pivot_row(a: Matrix, col: int, start: int) -> int | None:
    # largest |numerator| first, ties broken by lowest index
    best = None
    for r in range(start, len(a)):
        x = a[r][col]
        if x and (best is None or abs(x.numerator) > abs(a[best][col].numerator)):
            best = r
    return best


def rref(m: Sequence[Sequence], transform: bool = True) -> tuple[Matrix, list[int], Matrix | None]:
    """Reduced row echelon form.

    Returns ``(R, pivots, T)`` with ``T m = R`` so that rows of ``T`` below
    ``len(pivots)`` span the left kernel of ``m``.  ``T`` is None when
    ``transform`` is false.
    """
    a = as_matrix(m)
    rows, cols = shape(a)
    t = identity(rows) if transform else None
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = _pivot_row(a, c, r)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        if t is not None:
            t[r], t[p] = t[p], t[r]
            t[r] = [x * inv for x in t[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                if t is not None:
                    t[i] = [x - f * y for x, y in zip(t[i], t[r])]
        pivots.append(c)
        r += 1
    return a, pivots, t


def _int_rows(m: Sequence[Sequence]) -> list[list[int]]:
    rows = [[Fraction(x) for x in row] for row in m]
    out = []
    for row in rows:
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def rank(m: Sequence[Sequence]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination on cleared rows."""
    if not m or not m[0]:
        return 0
    a = _int_rows(m)
    rows, cols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(cols):
        if r == rows:
            break
        p = None
        for i in range(r, rows):
            if a[i][c] and (p is None or abs(a[i][c]) > abs(a[p][c])):
                p = i
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, rows):
            f = a[i][c]
            a[i] = [(piv * x - f * y) // prev for x, y in zip(a[i], a[r])]
        prev = piv
        r += 1
    return r


def kernel(m: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Basis of the right kernel ``{x : m x = 0}``, one vector per free column."""
    if not m:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    r, pivots, _ = rref(m, transform=False)
    n = len(r[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -r[i][f]
        basis.append(x)
    return basis


def det(m: Sequence[Sequence]) -> Fraction:
    a = as_matrix(m)
    n, c = shape(a)
    if n != c:
        raise ValueError(f"det of non-square {n}x{c} matrix")
    result = Fraction(1)
    for k in range(n):
        p = _pivot_row(a, k, k)
        if p is None:
            return Fraction(0)
        if p != k:
            a[k], a[p] = a[p], a[k]
            result = -result
        piv = a[k][k]
        result *= piv
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return result


def solve(m: Sequence[Sequence], y: Sequence) -> Vector:
    """Exact solution of ``m x = y``.

    Raises :class:`NoSolution` or :class:`NonUnique` in the degenerate cases.
    """
    a = as_matrix(m)
    rows, cols = shape(a)
    if len(y) != rows:
        raise ValueError(f"dimension mismatch: {rows} rows, rhs of length {len(y)}")
    r, pivots, t = rref(a)
    yy = matvec(t, [Fraction(v) for v in y])
    for i in range(len(pivots), rows):
        if yy[i]:
            raise NoSolution(t[i])
    x = [Fraction(0)] * cols
    for i, p in enumerate(pivots):
        x[p] = yy[i]
    if len(pivots) < cols:
        raise NonUnique(x, kernel(a))
    return x


def inverse(m: Sequence[Sequence]) -> Matrix:
    a = as_matrix(m)
    n, c = shape(a)
    if n != c:
        raise ValueError("inverse of non-square matrix")
    r, pivots, t = rref(a)
    if len(pivots) < n:
        raise ValueError("singular matrix")
    return t


@dataclass
class LDLT:
    """Outcome of a symmetric LDL^T sweep.

    ``kind`` is ``"pd"``, ``"psd"`` (singular) or ``"indefinite"``.  For the
    first two ``L`` (unit lower triangular) and ``D`` satisfy ``m = L D L^T``;
    ``kernel`` is filled for ``"psd"`` and ``witness`` (with ``value`` =
    witness^T m witness < 0) for ``"indefinite"``.
    """

    kind: str
    L: Matrix | None = None
    D: Vector | None = None
    kernel: list[list[int]] = field(default_factory=list)
    witness: list[int] | None = None
    value: Fraction | None = None


def _small_negative_direction(a: Matrix) -> list[int] | None:
    n = len(a)
    best = None
    for i in range(n):
        if a[i][i] < 0:
            x = [0] * n
            x[i] = 1
            cand = (a[i][i], x)
            if best is None or cand[0] < best[0]:
                best = cand
    if best is None:
        for i in range(n):
            for j in range(i + 1, n):
                for s in (-1, 1):
                    v = a[i][i] + a[j][j] + 2 * s * a[i][j]
                    if v < 0 and (best is None or v < best[0]):
                        x = [0] * n
                        x[i], x[j] = 1, s
                        best = (v, x)
    return None if best is None else best[1]


def ldlt(m: Sequence[Sequence]) -> LDLT:
    """Classify and factor a symmetric rational matrix.

    Indefinite witnesses are first looked for among ``e_i`` and ``e_i +- e_j``;
    otherwise the first negative (or zero-with-nonzero-column) pivot of the
    sweep is mapped back to the original coordinates.
    """
    a = as_matrix(m)
    n, c = shape(a)
    if n != c:
        raise ValueError("ldlt needs a square matrix")
    for i in range(n):
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ValueError("ldlt needs a symmetric matrix")
    small = _small_negative_direction(a)
    if small is not None:
        return LDLT("indefinite", witness=small, value=quad(a, small))

    L = identity(n)
    D: Vector = [Fraction(0)] * n
    s = [row[:] for row in a]  # Schur complement lives in s[k:, k:]
    singular = False
    for k in range(n):
        piv = s[k][k]
        if piv < 0:
            return _witness_from_schur(a, L, k, [Fraction(0)] * (n - k - 1), Fraction(1))
        if piv == 0:
            off = next((j for j in range(k + 1, n) if s[j][k] != 0), None)
            if off is not None:
                # [[0, b], [b, s_jj]] is indefinite: y = t e_k + e_j
                b = s[off][k]
                t = -(s[off][off] + 1) / (2 * b)
                tail = [Fraction(0)] * (n - k - 1)
                tail[off - k - 1] = Fraction(1)
                return _witness_from_schur(a, L, k, tail, t)
            singular = True
            continue
        D[k] = piv
        for i in range(k + 1, n):
            L[i][k] = s[i][k] / piv
        for i in range(k + 1, n):
            if L[i][k]:
                for j in range(k + 1, n):
                    s[i][j] -= L[i][k] * s[k][j]
    if not singular:
        return LDLT("pd", L=L, D=D)
    ker = [sign_normalized(primitive(v)) for v in kernel(a)]
    return LDLT("psd", L=L, D=D, kernel=ker)


def _witness_from_schur(a: Matrix, L: Matrix, k: int, tail: Vector, head: Fraction) -> LDLT:
    # y = (0,...,0, head, tail) in the eliminated basis; x = L^{-T} y
    n = len(a)
    y = [Fraction(0)] * k + [Fraction(head)] + list(tail)
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        x[i] = y[i] - sum((L[j][i] * x[j] for j in range(i + 1, n)), Fraction(0))
    w = primitive(x)
    return LDLT("indefinite", witness=w, value=quad(a, w))


# --- integer lattice helpers -------------------------------------------------


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def column_hermite(a: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Column-style echelon form over Z.

    Returns ``(H, U)`` with ``a U = H``, ``U`` unimodular, and the nonzero
    columns of ``H`` first (lower echelon).  Trailing zero columns of ``H``
    mark columns of ``U`` spanning the integer kernel lattice of ``a``.
    """
    h = [list(map(int, row)) for row in a]
    rows = len(h)
    cols = len(h[0]) if h else 0
    u = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def colop(i: int, j: int, p: int, q: int, r: int, s: int) -> None:
        # (col_i, col_j) <- (p col_i + q col_j, r col_i + s col_j)
        for mat in (h, u):
            for row in mat:
                ci, cj = row[i], row[j]
                row[i], row[j] = p * ci + q * cj, r * ci + s * cj

    c = 0
    for r in range(rows):
        if c == cols:
            break
        for j in range(c + 1, cols):
            if h[r][j] == 0:
                continue
            if h[r][c] == 0:
                colop(c, j, 0, 1, 1, 0)
                continue
            g, x, y = _ext_gcd(h[r][c], h[r][j])
            p, q = h[r][c] // g, h[r][j] // g
            colop(c, j, x, y, -q, p)
        if h[r][c] != 0:
            if h[r][c] < 0:
                _negate_col(h, u, c)
            c += 1
    return h, u


def _negate_col(h: list[list[int]], u: list[list[int]], c: int) -> None:
    for mat in (h, u):
        for row in mat:
            row[c] = -row[c]
