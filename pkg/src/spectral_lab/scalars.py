"""Scalar backends: exact Gaussian rationals and machine complex numbers.

A matrix is *exact* when it is a numpy object array (entries are
:class:`GaussianRational`) or an integer array; anything else is treated as
floating and converted to ``complex128``.  Exact arrays go through plain
Python arithmetic, so ``a @ b`` and friends work unchanged on them.
"""

from __future__ import annotations

import numbers
from fractions import Fraction
from math import gcd

import numpy as np

from .errors import DimensionMismatchError, SpectralLabError

__all__ = [
    "GaussianRational",
    "gr",
    "is_exact",
    "as_matrix",
    "to_exact",
    "to_complex",
    "identity",
    "zeros",
    "all_zero",
    "norm",
    "exact_inverse",
    "exact_det",
    "polyval",
    "polymul",
    "polysub",
    "interpolate_exact",
]

class GaussianRational:
    """Element of Q(i), stored as ``(a + b i) / d`` with integers ``a, b`` and ``d > 0``.

    A shared denominator keeps each operation to a handful of integer
    products and one gcd.  ``re`` and ``im`` are exposed as Fractions.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            im = Fraction(im)
            re, im = re.re, re.im + im
        elif isinstance(re, complex):
            raise TypeError("use GaussianRational.from_complex for complex input")
        re, im = Fraction(re), Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._a = re.numerator * (d // re.denominator)
        self._b = im.numerator * (d // im.denominator)
        self._d = d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "GaussianRational":
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(a, b, d)
        if g != 1:
            a, b, d = a // g, b // g, d // g
        out = object.__new__(cls)
        out._a, out._b, out._d = a, b, d
        return out

    @classmethod
    def from_complex(cls, z: complex) -> "GaussianRational":
        # Fraction(float) is the exact binary value of the float.
        z = complex(z)
        return cls(Fraction(z.real), Fraction(z.imag))

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, np.ndarray):
            return NotImplemented  # let numpy broadcast elementwise
        if isinstance(other, (int, np.integer)):
            return GaussianRational._raw(int(other), 0, 1)
        if isinstance(other, Fraction):
            return GaussianRational._raw(other.numerator, 0, other.denominator)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return complex(self) + other
        if self._d == o._d:
            return GaussianRational._raw(self._a + o._a, self._b + o._b, self._d)
        return GaussianRational._raw(
            self._a * o._d + o._a * self._d, self._b * o._d + o._b * self._d, self._d * o._d
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return complex(self) - other
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return other - complex(self)
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return complex(self) * other
        a, b, c, e = self._a, self._b, o._a, o._b
        return GaussianRational._raw(a * c - b * e, a * e + b * c, self._d * o._d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return complex(self) / other
        n = o._a * o._a + o._b * o._b
        if n == 0:
            raise ZeroDivisionError("division by exact zero")
        # (a + bi)/d * D/(c + ei) = (a + bi)(c - ei) D / (d (c^2 + e^2))
        a, b, c, e = self._a, self._b, o._a, o._b
        return GaussianRational._raw((a * c + b * e) * o._d, (b * c - a * e) * o._d, self._d * n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return other / complex(self)
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, numbers.Integral):
            return complex(self) ** n
        if n < 0:
            return GaussianRational._raw(1, 0, 1) / (self ** (-n))
        result, base = GaussianRational._raw(1, 0, 1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __neg__(self):
        return GaussianRational._raw(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self._a, -self._b, self._d)

    def __abs__(self) -> float:
        return abs(complex(self))

    # comparison / conversion ---------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            if isinstance(other, numbers.Number):
                return complex(self) == other
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self):
        if self._b == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def __complex__(self):
        return complex(self._a / self._d, self._b / self._d)

    def __repr__(self):
        if self._b == 0:
            return f"GR({self.re})"
        return f"GR({self.re}, {self.im})"

    def __str__(self):
        re, im = self.re, self.im
        if im == 0:
            return str(re)
        if re == 0:
            return f"{im}i"
        sign = "+" if im > 0 else "-"
        return f"{re}{sign}{abs(im)}i"


def gr(re=0, im=0) -> GaussianRational:
    """Shorthand constructor; accepts ints, Fractions or ``"p/q"`` strings."""
    return GaussianRational(Fraction(re), Fraction(im))


def _to_gr(x) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (numbers.Integral, Fraction)):
        return GaussianRational(x)
    if isinstance(x, numbers.Complex):
        return GaussianRational.from_complex(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


def is_exact(a) -> bool:
    arr = np.asarray(a)
    return arr.dtype == object or np.issubdtype(arr.dtype, np.integer)


def to_exact(a) -> np.ndarray:
    """Object array of GaussianRational (floats are converted bit-exactly)."""
    arr = np.asarray(a, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, x in np.ndenumerate(arr):
        out[idx] = _to_gr(x)
    return out


def to_complex(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.dtype == object:
        return np.array([complex(x) for x in arr.ravel()], dtype=complex).reshape(arr.shape)
    return arr.astype(complex)


def as_matrix(a, square: bool = True) -> tuple[np.ndarray, bool]:
    """Normalize ``a`` to a 2-d array of the right backend; return ``(array, exact)``."""
    exact = is_exact(a)
    arr = to_exact(a) if exact else to_complex(a)
    if arr.ndim != 2 or (square and arr.shape[0] != arr.shape[1]):
        raise DimensionMismatchError(f"expected a square matrix, got shape {arr.shape}")
    return arr, exact


def identity(n: int, exact: bool) -> np.ndarray:
    if not exact:
        return np.eye(n, dtype=complex)
    out = zeros((n, n), True)
    for i in range(n):
        out[i, i] = GaussianRational(1)
    return out


def zeros(shape, exact: bool) -> np.ndarray:
    if not exact:
        return np.zeros(shape, dtype=complex)
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(*out.shape):
        out[idx] = GaussianRational(0)
    return out


def all_zero(a) -> bool:
    return all(not x for x in np.asarray(a).ravel())


def norm(a) -> float:
    """Spectral norm (largest singular value); exactly 0.0 for an exact zero array."""
    arr = np.asarray(a)
    if arr.size == 0:
        return 0.0
    if arr.dtype == object:
        if all_zero(arr):
            return 0.0
        arr = to_complex(arr)
    if arr.ndim == 1:
        return float(np.linalg.norm(arr))
    return float(np.linalg.norm(arr, 2))


def _first_nonzero(col) -> int | None:
    for i, x in enumerate(col):
        if x:
            return i
    return None


def exact_inverse(a: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse over Q(i)."""
    n = a.shape[0]
    work = np.concatenate([to_exact(a), identity(n, True)], axis=1)
    for k in range(n):
        piv = _first_nonzero(work[k:, k])
        if piv is None:
            raise SpectralLabError("matrix is singular")
        piv += k
        if piv != k:
            work[[k, piv]] = work[[piv, k]]
        work[k] = work[k] / work[k, k]
        for i in range(n):
            if i != k and work[i, k]:
                work[i] = work[i] - work[i, k] * work[k]
    return work[:, n:]


def exact_det(a: np.ndarray):
    """Determinant over Q(i) by Gaussian elimination."""
    work = to_exact(a).copy()
    n = work.shape[0]
    det = GaussianRational(1)
    for k in range(n):
        piv = _first_nonzero(work[k:, k])
        if piv is None:
            return GaussianRational(0)
        piv += k
        if piv != k:
            work[[k, piv]] = work[[piv, k]]
            det = -det
        det = det * work[k, k]
        if k + 1 < n:
            factors = work[k + 1:, k] / work[k, k]
            work[k + 1:, k:] = work[k + 1:, k:] - np.outer(factors, work[k, k:])
    return det


# Polynomials are coefficient sequences, highest degree first.

def polyval(coeffs, x):
    """Horner evaluation; ``x`` may be a scalar or a square matrix."""
    if isinstance(x, np.ndarray) and x.ndim == 2:
        n = x.shape[0]
        exact = x.dtype == object
        acc = zeros((n, n), exact)
        eye = identity(n, exact)
        for c in coeffs:
            acc = acc @ x + c * eye
        return acc
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def polymul(p, q) -> list:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def polysub(p, q) -> list:
    n = max(len(p), len(q))
    p = [0] * (n - len(p)) + list(p)
    q = [0] * (n - len(q)) + list(q)
    return [a - b for a, b in zip(p, q)]


def interpolate_exact(xs, ys) -> list:
    """Coefficients (highest first) of the unique polynomial through ``(xs, ys)``.

    Newton divided differences over Q(i); ``len(xs)`` points give degree
    ``len(xs) - 1``.
    """
    xs = [_to_gr(x) for x in xs]
    dd = [_to_gr(y) for y in ys]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    # expand the Newton form from the innermost term outwards
    coeffs = [dd[n - 1]]
    for i in range(n - 2, -1, -1):
        coeffs = polysub(polymul(coeffs, [1, 0]), polymul(coeffs, [xs[i]]))
        coeffs[-1] = coeffs[-1] + dd[i]
    return [_to_gr(c) for c in coeffs]
