"""
Directional derivatives of the actions and of single Wilson loops.
"""

import numpy as np
from django.conf import settings

from config.exceptions import InvalidRef
from config.logger import get_logger
from liealg import kernels, series
from mesh.entities import EntityKind, validate
from .actions import evaluate

logger = get_logger(__name__)


def action_differential_fd(kind, field, direction, massdata, step=1e-4):
    """Central difference (S(A + eps A') - S(A - eps A')) / (2 eps) of action kind J, I or L."""
    if step <= 0:
        raise ValueError(f'step must be positive, got {step}')
    plus = evaluate(kind, field.axpy(direction, step), massdata).total
    minus = evaluate(kind, field.axpy(direction, -step), massdata).total
    return (plus - minus) / (2.0 * step)


def _loop_data(field, face):
    kind = validate(field.mesh, face)
    mesh = field.mesh
    s = mesh.spatial
    tau = face.time
    if kind is EntityKind.SPATIAL_FACE:
        e0, e1, e2 = s.face_edges[face.index]

        def dofs(f):
            return [f.spatial[tau, e0], f.spatial[tau, e1], -f.spatial[tau, e2]]
        return dofs
    if kind is EntityKind.TEMPORAL_FACE:
        nxt = int(mesh.next_time(tau))
        i, j = s.edge_vertices[face.index]

        def dofs(f):
            return [f.spatial[tau, face.index], f.temporal[tau, j], -f.spatial[nxt, face.index], -f.temporal[tau, i]]
        return dofs
    raise InvalidRef(f'{face} is not a face')


def loop_matrix(field, face):
    """Ordered product of the boundary links, as a quaternion."""
    links = [kernels.qexp(a) for a in _loop_data(field, face)(field)]
    value = links[0]
    for q in links[1:]:
        value = kernels.qmul(value, q)
    return value


def loop_differential(field, face, direction, bch_order=None, dexp_order=None):
    """
    d/d tau F_f(A + tau A') at tau = 0 as a 2x2 complex matrix.

    With W = log(e^{A_1} ... e^{A_n}) from the truncated BCH chain,
    dF = F dexp_W(dW), where dW is propagated through the same chain.

    Raises:
        BranchAmbiguity: the loop is too far from the identity
    """
    bch_order = settings.SGT['BCH_ORDER'] if bch_order is None else bch_order
    dexp_order = settings.SGT['DEXP_ORDER'] if dexp_order is None else dexp_order
    dofs = _loop_data(field, face)
    F = loop_matrix(field, face)
    kernels.qlog(F)  # raises BranchAmbiguity
    W, dW = series.bch_chain_tangent(dofs(field), dofs(direction), bch_order)
    tangent = series.dexp(W, dW, dexp_order)
    return kernels.qmatrix(F) @ kernels.algebra_matrix(tangent)


def loop_differential_fd(field, face, direction, step=1e-5):
    """Central finite difference of the loop product, the oracle for loop_differential."""
    plus = loop_matrix(field.axpy(direction, step), face)
    minus = loop_matrix(field.axpy(direction, -step), face)
    return (kernels.qmatrix(plus) - kernels.qmatrix(minus)) / (2.0 * step)
