"""Scalars and matrices over two backends: exact Gaussian rationals and complex floats.

The exact backend keeps every entry in Q(i) (a pair of ``fractions.Fraction``),
so group relations, intertwiners and slashed polynomials can be checked with
zero residual.  The floating backend wraps numpy complex128 arrays.  Mixing the
two in one operation raises ``BackendMismatch``; conversion is always explicit
via ``to_float``.
"""

from __future__ import annotations

import math
import re as _re
from fractions import Fraction

import numpy as np

from .errors import BackendMismatch, DimensionMismatch, SingularMatrix

EXACT = "exact"
FLOAT = "float"


class QI:
    """A Gaussian rational (a + b*i)/d held as a reduced integer triple.

    Keeping a common denominator (usually 1) makes products of integer
    matrices pure int arithmetic -- the hot path for evaluating
    representations along generator words.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        if isinstance(re, QI):
            assert im == 0
            self._a, self._b, self._d = re._a, re._b, re._d
            return
        if isinstance(re, int) and isinstance(im, int):
            self._a, self._b, self._d = re, im, 1
            return
        fre, fim = Fraction(re), Fraction(im)
        d = fre.denominator * fim.denominator // math.gcd(fre.denominator,
                                                          fim.denominator)
        self._a = fre.numerator * (d // fre.denominator)
        self._b = fim.numerator * (d // fim.denominator)
        self._d = d

    @classmethod
    def _raw(cls, a, b, d):
        obj = object.__new__(cls)
        if d < 0:
            a, b, d = -a, -b, -d
        if d != 1:
            g = math.gcd(math.gcd(a, b), d)
            if g > 1:
                a //= g
                b //= g
                d //= g
        obj._a, obj._b, obj._d = a, b, d
        return obj

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    @staticmethod
    def _coerce(x):
        if isinstance(x, QI):
            return x
        if isinstance(x, int):
            return QI._raw(x, 0, 1)
        if isinstance(x, Fraction):
            return QI._raw(x.numerator, 0, x.denominator)
        return NotImplemented

    def __add__(self, other):
        o = QI._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self._d == 1 and o._d == 1:
            return QI._raw(self._a + o._a, self._b + o._b, 1)
        return QI._raw(self._a * o._d + o._a * self._d,
                       self._b * o._d + o._b * self._d, self._d * o._d)

    __radd__ = __add__

    def __neg__(self):
        return QI._raw(-self._a, -self._b, self._d)

    def __sub__(self, other):
        o = QI._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = QI._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = QI._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QI._raw(self._a * o._a - self._b * o._b,
                       self._a * o._b + self._b * o._a, self._d * o._d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QI._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o._a * o._a + o._b * o._b
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        # 1/o = d (a - b i) / (a^2 + b^2)
        return QI._raw(self._a * o._d * o._a + self._b * o._d * o._b,
                       self._b * o._d * o._a - self._a * o._d * o._b,
                       self._d * n)

    def __rtruediv__(self, other):
        o = QI._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __eq__(self, other):
        o = QI._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self):
        return hash((self._a, self._b, self._d))

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def conjugate(self):
        return QI._raw(self._a, -self._b, self._d)

    def __complex__(self):
        return complex(self._a / self._d, self._b / self._d)

    def __repr__(self):
        return f"QI({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_exact_scalar(self)


QI_ZERO = QI(0)
QI_ONE = QI(1)
QI_I = QI(0, 1)


def format_exact_scalar(z: QI) -> str:
    """Render a Gaussian rational as ``a/b+c/d i`` (imaginary part optional)."""
    if z.im == 0:
        return str(z.re)
    sign = "+" if z.im >= 0 else "-"
    return f"{z.re}{sign}{abs(z.im)} i"


_SCALAR_RE = _re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:/\d+)?)\s*"
    r"(?:(?P<sign>[+-])\s*(?P<im>\d+(?:/\d+)?)\s*i)?\s*$"
)


def parse_exact_scalar(s: str) -> QI:
    m = _SCALAR_RE.match(s)
    if not m:
        raise ValueError(f"cannot parse exact scalar {s!r}")
    re_part = Fraction(m.group("re"))
    if m.group("im") is None:
        return QI(re_part)
    im_part = Fraction(m.group("im"))
    if m.group("sign") == "-":
        im_part = -im_part
    return QI(re_part, im_part)


def as_complex(x) -> complex:
    """Convert any supported scalar (int, Fraction, QI, float, complex) to complex."""
    if isinstance(x, QI):
        return complex(x)
    return complex(x)


def is_exact_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, QI))


def to_qi(x) -> QI:
    """Exact conversion of any numeric scalar; binary floats are rationals."""
    if isinstance(x, QI):
        return x
    if isinstance(x, complex):
        return QI(Fraction(x.real), Fraction(x.imag))
    return QI(Fraction(x))


class Matrix:
    """A dense matrix tagged with its scalar backend."""

    __slots__ = ("backend", "rows", "arr")

    def __init__(self, backend, rows=None, arr=None):
        self.backend = backend
        if backend == EXACT:
            self.rows = tuple(tuple(QI(e) if not isinstance(e, QI) else e for e in r)
                              for r in rows)
            self.arr = None
            n = len(self.rows[0]) if self.rows else 0
            if any(len(r) != n for r in self.rows):
                raise DimensionMismatch("ragged rows")
        elif backend == FLOAT:
            self.arr = np.array(arr if arr is not None else rows, dtype=complex)
            if self.arr.ndim != 2:
                raise DimensionMismatch("matrix must be 2-dimensional")
            self.rows = None
        else:
            raise ValueError(f"unknown backend {backend!r}")

    # -- constructors -------------------------------------------------

    @staticmethod
    def exact(rows) -> "Matrix":
        return Matrix(EXACT, rows=rows)

    @staticmethod
    def from_float(arr) -> "Matrix":
        return Matrix(FLOAT, arr=arr)

    @staticmethod
    def identity(n, backend=EXACT) -> "Matrix":
        if backend == EXACT:
            return Matrix.exact([[QI(1) if i == j else QI(0) for j in range(n)]
                                 for i in range(n)])
        return Matrix.from_float(np.eye(n, dtype=complex))

    @staticmethod
    def zeros(n, m, backend=EXACT) -> "Matrix":
        if backend == EXACT:
            return Matrix.exact([[QI(0)] * m for _ in range(n)])
        return Matrix.from_float(np.zeros((n, m), dtype=complex))

    # -- basic structure ----------------------------------------------

    @property
    def shape(self):
        if self.backend == EXACT:
            return (len(self.rows), len(self.rows[0]) if self.rows else 0)
        return self.arr.shape

    def entry(self, i, j):
        if self.backend == EXACT:
            return self.rows[i][j]
        return self.arr[i, j]

    def row(self, i):
        if self.backend == EXACT:
            return self.rows[i]
        return tuple(self.arr[i])

    def tolist(self):
        if self.backend == EXACT:
            return [list(r) for r in self.rows]
        return [list(r) for r in self.arr]

    def _check_same(self, other):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if self.backend != other.backend:
            raise BackendMismatch(
                f"cannot mix {self.backend} and {other.backend} matrices; convert explicitly")

    # -- arithmetic ----------------------------------------------------

    def __matmul__(self, other):
        self._check_same(other)
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        if self.backend == FLOAT:
            return Matrix.from_float(self.arr @ other.arr)
        out = []
        for i in range(n):
            ri = self.rows[i]
            out.append([sum((ri[t] * other.rows[t][j] for t in range(k)), QI(0))
                        for j in range(m)])
        return Matrix.exact(out)

    def __add__(self, other):
        self._check_same(other)
        if self.shape != other.shape:
            raise DimensionMismatch("shape mismatch in addition")
        if self.backend == FLOAT:
            return Matrix.from_float(self.arr + other.arr)
        return Matrix.exact([[a + b for a, b in zip(r1, r2)]
                             for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        if self.backend == FLOAT:
            return Matrix.from_float(self.arr * as_complex(c))
        return Matrix.exact([[QI._coerce(c) * e for e in r] for r in self.rows])

    def __pow__(self, n: int):
        p, m = self.shape
        if p != m:
            raise DimensionMismatch("matrix power needs a square matrix")
        if n < 0:
            return self.inv() ** (-n)
        result = Matrix.identity(p, self.backend)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def transpose(self):
        if self.backend == FLOAT:
            return Matrix.from_float(self.arr.T)
        n, m = self.shape
        return Matrix.exact([[self.rows[i][j] for i in range(n)] for j in range(m)])

    def apply(self, vec):
        """Multiply by a plain sequence of scalars, returning a list.

        Stays exact for an exact matrix and exact entries; otherwise the
        computation drops to complex arithmetic.
        """
        n, m = self.shape
        if len(vec) != m:
            raise DimensionMismatch("vector length mismatch")
        if self.backend == FLOAT or not all(is_exact_scalar(v) for v in vec):
            arr = self.to_numpy()
            return list(arr @ np.array([as_complex(v) for v in vec]))
        return [sum((self.rows[i][j] * QI._coerce(vec[j]) for j in range(m)), QI(0))
                for i in range(n)]

    def __eq__(self, other):
        if not isinstance(other, Matrix) or self.backend != other.backend:
            return NotImplemented
        if self.shape != other.shape:
            return False
        if self.backend == FLOAT:
            return bool(np.array_equal(self.arr, other.arr))
        return self.rows == other.rows

    def __hash__(self):
        if self.backend == EXACT:
            return hash(self.rows)
        return hash(self.arr.tobytes())

    # -- conversions ----------------------------------------------------

    def to_float(self) -> "Matrix":
        if self.backend == FLOAT:
            return self
        return Matrix.from_float(
            np.array([[complex(e) for e in r] for r in self.rows], dtype=complex))

    def to_numpy(self) -> np.ndarray:
        return self.to_float().arr

    # -- solvers ---------------------------------------------------------

    def det(self):
        n, m = self.shape
        if n != m:
            raise DimensionMismatch("determinant of a non-square matrix")
        if self.backend == FLOAT:
            return complex(np.linalg.det(self.arr))
        rows = [list(r) for r in self.rows]
        det = QI(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if rows[r][col]), None)
            if piv is None:
                return QI(0)
            if piv != col:
                rows[col], rows[piv] = rows[piv], rows[col]
                det = -det
            det = det * rows[col][col]
            inv = QI(1) / rows[col][col]
            for r in range(col + 1, n):
                if rows[r][col]:
                    f = rows[r][col] * inv
                    rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
        return det

    def inv(self) -> "Matrix":
        n, m = self.shape
        if n != m:
            raise DimensionMismatch("inverse of a non-square matrix")
        if self.backend == FLOAT:
            if abs(np.linalg.det(self.arr)) < 1e-300:
                raise SingularMatrix("floating matrix is numerically singular")
            return Matrix.from_float(np.linalg.inv(self.arr))
        aug = [list(r) + [QI(1) if i == j else QI(0) for j in range(n)]
               for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col]), None)
            if piv is None:
                raise SingularMatrix("exact matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = QI(1) / aug[col][col]
            aug[col] = [e * inv for e in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        return Matrix.exact([r[n:] for r in aug])

    def rref(self):
        """Reduced row echelon form; returns (list of rows, pivot column list)."""
        if self.backend != EXACT:
            raise BackendMismatch("rref is only defined for the exact backend")
        rows = [list(r) for r in self.rows]
        n, m = self.shape
        pivots = []
        r = 0
        for col in range(m):
            piv = next((i for i in range(r, n) if rows[i][col]), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = QI(1) / rows[r][col]
            rows[r] = [e * inv for e in rows[r]]
            for i in range(n):
                if i != r and rows[i][col]:
                    f = rows[i][col]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
            pivots.append(col)
            r += 1
            if r == n:
                break
        return rows, pivots

    def rank(self, tol=1e-9) -> int:
        if self.backend == EXACT:
            return len(self.rref()[1])
        if min(self.shape) == 0:
            return 0
        s = np.linalg.svd(self.arr, compute_uv=False)
        if s.size == 0 or s[0] == 0:
            return 0
        return int(np.sum(s > tol * s[0]))

    def nullspace(self, tol=1e-9):
        """Basis of the right kernel, one list of scalars per basis vector."""
        n, m = self.shape
        if self.backend == FLOAT:
            u, s, vh = np.linalg.svd(self.arr)
            smax = s[0] if s.size else 0.0
            nil = [vh[i].conj() for i in range(m)
                   if i >= s.size or s[i] <= tol * max(smax, 1.0)]
            return [list(v) for v in nil]
        rows, pivots = self.rref()
        free = [c for c in range(m) if c not in pivots]
        basis = []
        for fc in free:
            v = [QI(0)] * m
            v[fc] = QI(1)
            for r, pc in enumerate(pivots):
                v[pc] = -rows[r][fc]
            basis.append(v)
        return basis

    def frobenius_distance(self, other) -> float:
        """Frobenius norm of self - other, computed in floating point."""
        a = self.to_numpy()
        b = other.to_numpy() if isinstance(other, Matrix) else np.asarray(other)
        return float(np.linalg.norm(a - b))

    def max_abs(self) -> float:
        a = self.to_numpy()
        return float(np.max(np.abs(a))) if a.size else 0.0

    def __repr__(self):
        if self.backend == EXACT:
            body = "; ".join(", ".join(str(e) for e in r) for r in self.rows)
            return f"Matrix(exact: [{body}])"
        return f"Matrix(float: {self.arr!r})"
