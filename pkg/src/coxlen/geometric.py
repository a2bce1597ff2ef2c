"""Tits' geometric representation as an independent identity oracle.

For systems whose finite labels lie in {2, 3, 4, 6} the bilinear form lives
in Q(sqrt2, sqrt3) and the generator matrices have entries in the ring
Z[sqrt2, sqrt3], so products are compared exactly. Any other label switches
the representation to float64 with a tolerance band.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce as _fold
from math import cos, pi

import numpy as np

from .core import INF, CoxeterSystem, CoxlenError, Word

EXACT_LABELS = frozenset({2, 3, 4, 6})
FLOAT_EPS = 1e-9
FLOAT_AMBIGUOUS = 1e-6


class PrecisionInconclusive(CoxlenError):
    """A float comparison landed inside the ambiguity band."""


class QuadSurd:
    """a + b*sqrt2 + c*sqrt3 + d*sqrt6 with integer or Fraction coefficients."""

    __slots__ = ("c",)

    def __init__(self, a=0, b=0, c=0, d=0):
        self.c = (a, b, c, d)

    @classmethod
    def _wrap(cls, coeffs):
        obj = cls.__new__(cls)
        obj.c = coeffs
        return obj

    @staticmethod
    def _coerce(x):
        if isinstance(x, QuadSurd):
            return x.c
        if isinstance(x, (int, Fraction)):
            return (x, 0, 0, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._wrap(tuple(x + y for x, y in zip(self.c, o)))

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(tuple(-x for x in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._wrap(tuple(x - y for x, y in zip(self.c, o)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._wrap(surd_mul(self.c, o))

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.c == o

    def __hash__(self):
        return hash(self.c)

    def __float__(self):
        a, b, c, d = self.c
        return float(a) + float(b) * 2 ** 0.5 + float(c) * 3 ** 0.5 + float(d) * 6 ** 0.5

    def __repr__(self):
        names = ("", "√2", "√3", "√6")
        parts = [f"{x}{n}" for x, n in zip(self.c, names) if x]
        return " + ".join(parts) if parts else "0"


def surd_mul(x, y):
    a, b, c, d = x
    e, f, g, h = y
    return (
        a * e + 2 * b * f + 3 * c * g + 6 * d * h,
        a * f + b * e + 3 * (c * h + d * g),
        a * g + c * e + 2 * (b * h + d * f),
        a * h + d * e + b * g + c * f,
    )


# -cos(pi/m) for the labels the exact ring supports
_HALF = Fraction(1, 2)
_EXACT_FORM = {
    2: (0, 0, 0, 0),
    3: (-_HALF, 0, 0, 0),
    4: (0, -_HALF, 0, 0),
    6: (0, 0, -_HALF, 0),
    INF: (-1, 0, 0, 0),
}


def is_exact(sys: CoxeterSystem) -> bool:
    return all(m == INF or m in EXACT_LABELS for m in sys.labels)


def bilinear_form(sys: CoxeterSystem) -> list:
    """The n x n matrix B(e_i, e_j) = -cos(pi/m_ij), -1 for infinite labels."""
    n = sys.rank
    exact = is_exact(sys)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            m = sys.matrix[i][j]
            if i == j:
                row.append(QuadSurd(1) if exact else 1.0)
            elif exact:
                row.append(QuadSurd(*_EXACT_FORM[m]))
            else:
                row.append(-1.0 if m == INF else -cos(pi / m))
        rows.append(row)
    return rows


class Representation:
    """Generator matrices of the geometric representation.

    Exact matrices are stored as flat tuples of n*n coefficient 4-tuples;
    float matrices as numpy arrays. ``mul``, ``key`` and ``is_one`` hide
    the difference from the search kernels.
    """

    def __init__(self, sys: CoxeterSystem):
        self.sys = sys
        self.n = n = sys.rank
        self.exact = is_exact(sys)
        form = bilinear_form(sys)
        gens = []
        for i in range(n):
            # s_i(e_j) = e_j - 2 B(e_i, e_j) e_i: only row i differs from I
            if self.exact:
                mat = [[(1 if r == c else 0, 0, 0, 0) for c in range(n)] for r in range(n)]
                for j in range(n):
                    two_b = tuple(int(2 * x) for x in form[i][j].c)
                    mat[i][j] = _sub4(mat[i][j], two_b)
                gens.append(tuple(x for row in mat for x in row))
            else:
                mat = np.eye(n)
                for j in range(n):
                    mat[i, j] -= 2 * form[i][j]
                gens.append(mat)
        self.gens = gens
        if self.exact:
            self.one = tuple((1 if r == c else 0, 0, 0, 0) for r in range(n) for c in range(n))
        else:
            self.one = np.eye(n)

    # -- matrix algebra ---------------------------------------------------
    def mul(self, A, B):
        if not self.exact:
            return A @ B
        n = self.n
        out = []
        for r in range(n):
            row = A[r * n:(r + 1) * n]
            for c in range(n):
                a0 = a1 = a2 = a3 = 0
                for k in range(n):
                    x0, x1, x2, x3 = row[k]
                    if not (x0 or x1 or x2 or x3):
                        continue
                    y0, y1, y2, y3 = B[k * n + c]
                    a0 += x0 * y0 + 2 * x1 * y1 + 3 * x2 * y2 + 6 * x3 * y3
                    a1 += x0 * y1 + x1 * y0 + 3 * (x2 * y3 + x3 * y2)
                    a2 += x0 * y2 + x2 * y0 + 2 * (x1 * y3 + x3 * y1)
                    a3 += x0 * y3 + x3 * y0 + x1 * y2 + x2 * y1
                out.append((a0, a1, a2, a3))
        return tuple(out)

    def key(self, A):
        return A

    def product(self, w: Word):
        return _fold(self.mul, (self.gens[x - 1] for x in w), self.one)

    def deviation(self, A, B) -> float:
        """Max-abs entry difference (float mode)."""
        return float(np.max(np.abs(A - B)))

    def tolerance(self, length: int):
        return FLOAT_EPS * (1 + length), FLOAT_AMBIGUOUS * (1 + length)

    def equal(self, A, B, length: int) -> bool:
        """Matrix equality; in float mode may raise PrecisionInconclusive."""
        if self.exact:
            return A == B
        dev = self.deviation(A, B)
        lo, hi = self.tolerance(length)
        if dev < lo:
            return True
        if dev >= hi:
            return False
        raise PrecisionInconclusive(f"deviation {dev:.3e} inside band [{lo:.1e}, {hi:.1e})")

    def is_identity(self, w: Word) -> bool:
        return self.equal(self.product(w), self.one, len(w))

    def to_rows(self, A) -> list:
        """Nested lists of QuadSurd (exact) or floats for display and tests."""
        n = self.n
        if not self.exact:
            return A.tolist()
        return [[QuadSurd._wrap(A[r * n + c]) for c in range(n)] for r in range(n)]


def _sub4(x, y):
    return tuple(a - b for a, b in zip(x, y))


_reps: dict = {}


def representation(sys: CoxeterSystem) -> Representation:
    rep = _reps.get(sys)
    if rep is None:
        rep = _reps[sys] = Representation(sys)
    return rep


def build_representation(sys: CoxeterSystem) -> list:
    """Generator matrices as nested lists (QuadSurd entries in exact mode)."""
    rep = representation(sys)
    return [rep.to_rows(g) for g in rep.gens]


def matrix_is_identity(w: Word, sys: CoxeterSystem) -> bool:
    return representation(sys).is_identity(tuple(w))
