"""
Value types and the public su(2) / SU(2) operations.

The batched kernels in liealg.kernels do the arithmetic; this module wraps
single elements for callers that want matrices and invariant checks.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np
from django.conf import settings

from config.constants import ALGEBRA_TOL
from . import kernels, series


@dataclass(frozen=True)
class AlgebraElement:
    """su(2) element a^k t^k stored by its three real coefficients."""

    coefficients: tuple

    __array_ufunc__ = None

    @classmethod
    def from_coefficients(cls, a):
        return cls(tuple(float(c) for c in np.asarray(a, dtype=float).reshape(3)))

    @classmethod
    def from_matrix(cls, m):
        return cls.from_coefficients(kernels.algebra_from_matrix(m))

    @classmethod
    def zero(cls):
        return cls((0.0, 0.0, 0.0))

    @property
    def array(self):
        return np.array(self.coefficients)

    @property
    def matrix(self):
        return kernels.algebra_matrix(self.array)

    @property
    def norm(self):
        return float(np.linalg.norm(self.array))

    def check(self, tol=ALGEBRA_TOL):
        """True when the matrix is anti-hermitian and traceless to tol."""
        m = self.matrix
        return bool(np.abs(m.conj().T + m).max() <= tol and abs(np.trace(m)) <= tol)

    def __add__(self, other):
        return AlgebraElement.from_coefficients(self.array + other.array)

    def __sub__(self, other):
        return AlgebraElement.from_coefficients(self.array - other.array)

    def __neg__(self):
        return AlgebraElement.from_coefficients(-self.array)

    def __mul__(self, scalar):
        return AlgebraElement.from_coefficients(float(scalar) * self.array)

    __rmul__ = __mul__

    def __str__(self):
        return "AlgebraElement(%.6g, %.6g, %.6g)" % self.coefficients


@dataclass(frozen=True)
class GroupElement:
    """SU(2) element stored as a unit quaternion."""

    quaternion: tuple

    __array_ufunc__ = None

    @classmethod
    def from_quaternion(cls, q):
        return cls(tuple(float(c) for c in np.asarray(q, dtype=float).reshape(4)))

    @classmethod
    def from_matrix(cls, m):
        return cls.from_quaternion(kernels.qfrom_matrix(m))

    @classmethod
    def identity(cls):
        return cls((1.0, 0.0, 0.0, 0.0))

    @property
    def array(self):
        return np.array(self.quaternion)

    @property
    def matrix(self):
        return kernels.qmatrix(self.array)

    def inverse(self):
        return GroupElement.from_quaternion(kernels.qconj(self.array))

    def check(self, tol=ALGEBRA_TOL):
        """True when U is unitary with unit determinant to tol."""
        m = self.matrix
        unitary = np.linalg.norm(m.conj().T @ m - np.eye(2)) <= tol
        return bool(unitary and abs(np.linalg.det(m) - 1.0) <= tol)

    def __matmul__(self, other):
        return GroupElement.from_quaternion(kernels.qmul(self.array, other.array))

    def __str__(self):
        return "GroupElement(%.6g, %.6g, %.6g, %.6g)" % self.quaternion


def _coefficients(x):
    if isinstance(x, AlgebraElement):
        return x.array
    return np.asarray(x, dtype=float)


def _as_matrix(g):
    if isinstance(g, (AlgebraElement, GroupElement)):
        return g.matrix
    return np.asarray(g, dtype=complex)


def exp(x):
    return GroupElement.from_quaternion(kernels.qexp(_coefficients(x)))


def log(u):
    """
    Principal logarithm.

    Raises:
        BranchAmbiguity: tr U within 1e-9 of -2
    """
    q = u.array if isinstance(u, GroupElement) else kernels.qfrom_matrix(u)
    return AlgebraElement.from_coefficients(kernels.qlog(q))


def inner(g, h):
    """Re tr(g h^H) for group elements, algebra elements or raw 2x2 matrices."""
    return float(np.real(np.trace(_as_matrix(g) @ _as_matrix(h).conj().T)))


def ad(x, y):
    return AlgebraElement.from_coefficients(kernels.bracket(_coefficients(x), _coefficients(y)))


def adjoint_action(g, x):
    """g X g^{-1}"""
    return AlgebraElement.from_coefficients(kernels.qadjoint(g.array, _coefficients(x)))


def bch(x, y, order=None):
    order = settings.SGT['BCH_ORDER'] if order is None else order
    return AlgebraElement.from_coefficients(series.bch(_coefficients(x), _coefficients(y), order))


def bch_chain(xs, order=None):
    order = settings.SGT['BCH_ORDER'] if order is None else order
    return AlgebraElement.from_coefficients(series.bch_chain([_coefficients(x) for x in xs], order))


def dexp(x, y, order=None):
    order = settings.SGT['DEXP_ORDER'] if order is None else order
    return AlgebraElement.from_coefficients(series.dexp(_coefficients(x), _coefficients(y), order))


def series_exp(x, terms=20):
    """Truncated power series sum_{n<terms} X^n / n! of a 2x2 matrix."""
    m = _as_matrix(x)
    total = np.zeros((2, 2), dtype=complex)
    power = np.eye(2, dtype=complex)
    for n in range(terms):
        total += power / factorial(n)
        power = power @ m
    return total
