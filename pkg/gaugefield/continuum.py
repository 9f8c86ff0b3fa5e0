"""
Continuum gauge potentials on the unit 4-torus.

Every field here follows the same duck interface that whitney.interpolation
consumes:

    potential(points)    points (..., 4) as (t, x, y, z) -> A_mu^a, shape (..., 4, 3)
    derivatives(points)  -> d_mu A_nu^a, shape (..., 4, 4, 3)
    periodic             True if A is periodic on [0, 1)^4
    temporal_gauge       True if A_0 vanishes identically
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol

import numpy as np

from config.constants import CONTINUUM_ACTIONS
from config.exceptions import UnknownCase

T, X, Y, Z = range(4)
TWO_PI = 2.0 * np.pi


class ContinuumField(Protocol):
    periodic: bool
    temporal_gauge: bool

    def potential(self, points):
        ...

    def derivatives(self, points):
        ...


def _zeros(points, *shape):
    return np.zeros(np.shape(points)[:-1] + shape)


@dataclass(frozen=True)
class TestField:
    """
    One of the four catalogue fields with a closed-form action.

    1: A_x^3 = sin(2 pi t) / pi
    2: A_y^3 = sin(2 pi x) / pi
    3: A_x^1 = sin(2 pi y) / (2 pi), A_y^2 = sin(2 pi x) / (2 pi)
    4: A_x^1 = A_y^2 = 1
    """

    case: int
    periodic: bool = True
    temporal_gauge: bool = True

    @property
    def exact_action(self):
        return CONTINUUM_ACTIONS[self.case]

    def potential(self, points):
        p = np.asarray(points, dtype=float)
        out = _zeros(p, 4, 3)
        if self.case == 1:
            out[..., X, 2] = np.sin(TWO_PI * p[..., T]) / np.pi
        elif self.case == 2:
            out[..., Y, 2] = np.sin(TWO_PI * p[..., X]) / np.pi
        elif self.case == 3:
            out[..., X, 0] = np.sin(TWO_PI * p[..., Y]) / TWO_PI
            out[..., Y, 1] = np.sin(TWO_PI * p[..., X]) / TWO_PI
        else:
            out[..., X, 0] = 1.0
            out[..., Y, 1] = 1.0
        return out

    def derivatives(self, points):
        p = np.asarray(points, dtype=float)
        out = _zeros(p, 4, 4, 3)
        if self.case == 1:
            out[..., T, X, 2] = 2.0 * np.cos(TWO_PI * p[..., T])
        elif self.case == 2:
            out[..., X, Y, 2] = 2.0 * np.cos(TWO_PI * p[..., X])
        elif self.case == 3:
            out[..., Y, X, 0] = np.cos(TWO_PI * p[..., Y])
            out[..., X, Y, 1] = np.cos(TWO_PI * p[..., X])
        return out


def test_field(case):
    """
    Catalogue field for a case id.

    Raises:
        UnknownCase: case is not 1, 2, 3 or 4
    """
    if case not in CONTINUUM_ACTIONS:
        raise UnknownCase(f'unknown test field {case!r}; expected one of {sorted(CONTINUUM_ACTIONS)}')
    return TestField(case=int(case))


@dataclass(frozen=True)
class PolynomialField:
    """
    A_nu^a = sum_k c_k[nu, a] t^e0 x^e1 y^e2 z^e3 over the terms {(e0, e1, e2, e3): c_k}.

    Not periodic unless every term is constant.
    """

    terms: dict = field(default_factory=dict)
    temporal_gauge: bool = False

    @property
    def periodic(self):
        return all(sum(e) == 0 for e in self.terms)

    def potential(self, points):
        p = np.asarray(points, dtype=float)
        out = _zeros(p, 4, 3)
        for exponents, coeff in self.terms.items():
            mono = np.prod([p[..., m] ** e for m, e in enumerate(exponents)], axis=0)
            out += mono[..., None, None] * np.asarray(coeff, dtype=float)
        return out

    def derivatives(self, points):
        p = np.asarray(points, dtype=float)
        out = _zeros(p, 4, 4, 3)
        for exponents, coeff in self.terms.items():
            for mu, e in enumerate(exponents):
                if e == 0:
                    continue
                lowered = list(exponents)
                lowered[mu] -= 1
                mono = e * np.prod([p[..., m] ** k for m, k in enumerate(lowered)], axis=0)
                out[..., mu, :, :] += mono[..., None, None] * np.asarray(coeff, dtype=float)
        return out


@dataclass(frozen=True)
class CallableField:
    """User field from a potential callable; derivatives fall back to central differences."""

    potential_fn: Callable
    derivatives_fn: Optional[Callable] = None
    periodic: bool = True
    temporal_gauge: bool = False
    step: float = 1e-6

    def potential(self, points):
        return np.asarray(self.potential_fn(np.asarray(points, dtype=float)), dtype=float)

    def derivatives(self, points):
        p = np.asarray(points, dtype=float)
        if self.derivatives_fn is not None:
            return np.asarray(self.derivatives_fn(p), dtype=float)
        out = _zeros(p, 4, 4, 3)
        for mu in range(4):
            shift = np.zeros(4)
            shift[mu] = self.step
            out[..., mu, :, :] = (self.potential(p + shift) - self.potential(p - shift)) / (2.0 * self.step)
        return out
