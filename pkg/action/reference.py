"""
Continuum reference values of the Yang-Mills action on [0, 1]^4.
"""

import numpy as np

from config.constants import CONTINUUM_ACTIONS
from config.exceptions import UnknownCase
from config.logger import get_logger
from liealg import kernels
from whitney.quadrature import gauss_legendre

logger = get_logger(__name__)


def continuum_action(case):
    """
    Exact action of a catalogue field.

    Raises:
        UnknownCase: case is not 1, 2, 3 or 4
    """
    try:
        return CONTINUUM_ACTIONS[case]
    except KeyError:
        raise UnknownCase(f'no exact action for case {case!r}')


def field_strength(field, points):
    """F_mu_nu^a = d_mu A_nu - d_nu A_mu + [A_mu, A_nu], shape (..., 4, 4, 3)."""
    A = field.potential(points)
    dA = field.derivatives(points)
    commutator = kernels.bracket(A[..., :, None, :], A[..., None, :, :])
    return dA - np.swapaxes(dA, -3, -2) + commutator


def continuum_action_quadrature(field, points=16):
    """
    sum_{mu < nu} int Re tr(F_mu_nu F_mu_nu^H) over [0, 1]^4 by tensor Gauss-Legendre.

    Re tr(X X^H) = |x|^2 / 2 for an su(2) element with coefficients x.
    """
    rule = gauss_legendre(points)
    grid = np.stack(np.meshgrid(*([rule.points] * 4), indexing='ij'), axis=-1)
    weights = np.einsum('a,b,c,d->abcd', *([rule.weights] * 4))
    F = field_strength(field, grid)
    upper = np.triu_indices(4, k=1)
    density = 0.5 * np.sum(F[..., upper[0], upper[1], :] ** 2, axis=(-1, -2))
    value = float(np.sum(weights * density))
    logger.debug(f"Quadrature action of {field} with {points}^4 points: {value:.12g}")
    return value
