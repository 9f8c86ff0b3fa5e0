"""
Loop curvatures and interpolated curvature dofs.

A spatial face a -> b -> c carries F^s = U_ab U_bc U_ca located at a. A
temporal face over edge i -> j in slab tau carries

    F^t = U_ij(tau) U_0,jj' U_ji(tau + 1) U_0,i'i

located at i_tau. Batched versions return quaternion arrays over every face.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from config.exceptions import InvalidRef
from liealg import kernels
from liealg.elements import AlgebraElement, GroupElement
from mesh.entities import EntityKind, EntityRef, validate


@dataclass(frozen=True)
class CurvatureDof:
    face: EntityRef
    value: Union[AlgebraElement, GroupElement]
    point: EntityRef


def _loop(face, vertices, links, start, reverse):
    if reverse:
        vertices = [vertices[0]] + vertices[:0:-1]
        links = [kernels.qconj(q) for q in links[::-1]]
    vertices = vertices[start:] + vertices[:start]
    links = links[start:] + links[:start]
    value = links[0]
    for q in links[1:]:
        value = kernels.qmul(value, q)
    return CurvatureDof(face=face, value=GroupElement.from_quaternion(value), point=vertices[0])


def spatial_curvature(field, face, start=0, reverse=False):
    """
    Wilson loop of a spatial face.

    `start` rotates the distinguished point along the chain a, b, c and
    `reverse` walks the boundary the other way round.
    """
    if validate(field.mesh, face) is not EntityKind.SPATIAL_FACE:
        raise InvalidRef(f'{face} is not a spatial face')
    s = field.mesh.spatial
    tau = face.time
    a, b, c = (EntityRef(EntityKind.VERTEX, int(v), tau) for v in s.face_vertices[face.index])
    e0, e1, e2 = s.face_edges[face.index]
    U = field.spatial_links[tau]
    return _loop(face, [a, b, c], [U[e0], U[e1], kernels.qconj(U[e2])], start, reverse)


def temporal_curvature(field, face, start=0, reverse=False):
    """Wilson loop of the temporal face over spatial edge face.index in slab face.time."""
    if validate(field.mesh, face) is not EntityKind.TEMPORAL_FACE:
        raise InvalidRef(f'{face} is not a temporal face')
    mesh = field.mesh
    tau, nxt = face.time, int(mesh.next_time(face.time))
    i, j = (int(v) for v in mesh.spatial.edge_vertices[face.index])
    vertices = [
        EntityRef(EntityKind.VERTEX, i, tau),
        EntityRef(EntityKind.VERTEX, j, tau),
        EntityRef(EntityKind.VERTEX, j, nxt),
        EntityRef(EntityKind.VERTEX, i, nxt),
    ]
    U, U0 = field.spatial_links, field.temporal_links
    links = [U[tau, face.index], U0[tau, j], kernels.qconj(U[nxt, face.index]), kernels.qconj(U0[tau, i])]
    return _loop(face, vertices, links, start, reverse)


def spatial_curvatures(field):
    """F^s at the distinguished point of every spatial face, shape (N_t, F, 4)."""
    fe = field.mesh.spatial.face_edges
    U = field.spatial_links
    return kernels.qmul(kernels.qmul(U[:, fe[:, 0]], U[:, fe[:, 1]]), kernels.qconj(U[:, fe[:, 2]]))


def temporal_curvatures(field):
    """F^t at i_tau of every temporal face, shape (N_t, E, 4)."""
    s = field.mesh.spatial
    i, j = s.edge_vertices[:, 0], s.edge_vertices[:, 1]
    U, U0 = field.spatial_links, field.temporal_links
    U_next = np.roll(U, -1, axis=0)
    return kernels.qmul(
        kernels.qmul(U, U0[:, j]),
        kernels.qmul(kernels.qconj(U_next), kernels.qconj(U0[:, i])),
    )


def spatial_loop_dofs(field):
    """Signed dofs of each spatial face boundary in loop order, shape (N_t, F, 3, 3)."""
    fe = field.mesh.spatial.face_edges
    A = field.spatial
    return np.stack([A[:, fe[:, 0]], A[:, fe[:, 1]], -A[:, fe[:, 2]]], axis=2)


def temporal_loop_dofs(field):
    """Signed dofs of each temporal face boundary in loop order, shape (N_t, E, 4, 3)."""
    s = field.mesh.spatial
    i, j = s.edge_vertices[:, 0], s.edge_vertices[:, 1]
    A, A0 = field.spatial, field.temporal
    return np.stack([A, A0[:, j], -np.roll(A, -1, axis=0), -A0[:, i]], axis=2)


def j_curvature_dofs(field, massdata):
    """
    J_f = sum_e A_e + 1/2 sum_{e, e'} C_ee' [A_e, A_e'] over signed boundary dofs.

    Only neighbouring sides of a loop have nonzero C, so the double sum
    reduces to the cyclic pairs stored in massdata.C_face / C_tface.

    Returns:
        tuple: (J^s (N_t, F, 3), J^t (N_t, E, 3))
    """
    out = []
    for loop, C in ((spatial_loop_dofs(field), massdata.C_face), (temporal_loop_dofs(field), massdata.C_tface)):
        sides = loop.shape[2]
        J = loop.sum(axis=2)
        for k in range(sides):
            J = J + C[None, :, k, None] * kernels.bracket(loop[:, :, k], loop[:, :, (k + 1) % sides])
        out.append(J)
    return tuple(out)
