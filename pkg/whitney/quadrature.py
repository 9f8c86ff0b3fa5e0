"""
Gauss-Legendre rules on the unit interval and collapsed rules on the
reference triangle and tetrahedron.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import special

from config.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """n-point Gauss-Legendre rule on [0, 1], exact for polynomials up to `order` = 2n - 1."""

    points: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    order: int

    @property
    def size(self):
        return len(self.points)

    def integrate(self, values, axis=-1):
        """Weighted sum of samples taken at self.points along `axis`."""
        return np.tensordot(np.moveaxis(values, axis, -1), self.weights, axes=([-1], [0]))


def gauss_legendre(n):
    """
    Build the n-point rule on [0, 1] and verify its exactness on monomials.

    Raises:
        ValueError: n < 1, or the rule fails its exactness check
    """
    if n < 1:
        raise ValueError(f'quadrature needs at least one point, got {n}')
    x, w = special.roots_legendre(n)
    points = 0.5 * (x + 1.0)
    weights = 0.5 * w
    order = 2 * n - 1
    k = np.arange(order + 1)
    errors = np.abs(points[None, :] ** k[:, None] @ weights - 1.0 / (k + 1))
    if errors.max() > 1e-13:
        logger.error(f"Gauss-Legendre rule with {n} points failed exactness check: {errors.max():.3e}")
        raise ValueError(f'{n}-point Gauss-Legendre rule is not exact to degree {order}')
    return QuadratureRule(points=points, weights=weights, order=order)


def triangle_rule(rule):
    """
    Collapsed tensor rule on the reference triangle {(u, v): u, v >= 0, u + v <= 1}.

    Returns:
        tuple: (points (n*n, 2), weights (n*n,)) with weights summing to 1/2
    """
    u, v = np.meshgrid(rule.points, rule.points, indexing='ij')
    wu, wv = np.meshgrid(rule.weights, rule.weights, indexing='ij')
    x = u
    y = v * (1.0 - u)
    weights = wu * wv * (1.0 - u)
    return np.stack([x.ravel(), y.ravel()], axis=-1), weights.ravel()


def tet_rule(rule):
    """Collapsed tensor rule on the reference tetrahedron; weights sum to 1/6."""
    a, b, c = np.meshgrid(rule.points, rule.points, rule.points, indexing='ij')
    wa, wb, wc = np.meshgrid(rule.weights, rule.weights, rule.weights, indexing='ij')
    x = a
    y = b * (1.0 - a)
    z = c * (1.0 - a) * (1.0 - b)
    weights = wa * wb * wc * (1.0 - a) ** 2 * (1.0 - b)
    return np.stack([x.ravel(), y.ravel(), z.ravel()], axis=-1), weights.ravel()
