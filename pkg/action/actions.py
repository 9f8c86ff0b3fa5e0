"""
Discrete Yang-Mills actions.

    S^J  interpolated FEM action on the curvature dofs J_f
    S^I  intermediate action on F - 1, no parallel transport
    S^L  S^I with every face pair transported to a common vertex

S^J and S^I are quadratic forms in the assembled sparse mass matrices.
S^L is a reduction over cells: each (slab, tetrahedron) contributes the
local face pairs of its prism, weighted by the local Gram tables and the
hat overlaps of the slab. Run without transport the same reduction
reproduces S^I.
"""

from dataclasses import asdict, dataclass

import numpy as np

from config.constants import ACTION_I, ACTION_J, ACTION_L
from config.logger import get_logger, log_duration
from liealg import kernels
from mesh import tables
from .curvature import j_curvature_dofs, spatial_curvatures, temporal_curvatures

logger = get_logger(__name__)

# hat overlaps of the two time nodes of a slab, in units of dt
SLAB_OVERLAP = np.array([[1.0 / 3.0, 1.0 / 6.0], [1.0 / 6.0, 1.0 / 3.0]])


@dataclass(frozen=True)
class ActionBreakdown:
    temporal: float = 0.0
    spatial: float = 0.0
    scalar_temporal: float = 0.0
    scalar_spatial: float = 0.0

    @property
    def total(self):
        return self.temporal + self.spatial + self.scalar_temporal + self.scalar_spatial

    def as_dict(self):
        return {**asdict(self), 'total': self.total}

    def __add__(self, other):
        return ActionBreakdown(*(a + b for a, b in zip(
            (self.temporal, self.spatial, self.scalar_temporal, self.scalar_spatial),
            (other.temporal, other.spatial, other.scalar_temporal, other.scalar_spatial),
        )))


def _quadratic(M, x):
    # sum over trailing components of x_c^T M x_c; x (rows, c)
    return float(np.sum(x * (M @ x)))


def action_J(field, massdata):
    """S^J = 1/2 sum J^T M J per su(2) component, i.e. sum M Re tr(J J'^H)."""
    with log_duration(logger, f"action_J on {field.mesh}"):
        Js, Jt = j_curvature_dofs(field, massdata)
        spatial = 0.5 * _quadratic(massdata.M_ss, Js.reshape(-1, 3))
        temporal = 0.5 * _quadratic(massdata.M_tt, Jt.reshape(-1, 3))
    return ActionBreakdown(temporal=temporal, spatial=spatial)


def action_I(field, massdata):
    """S^I = sum M Re tr[(F - 1)(F' - 1)^H] with curvatures at their own distinguished points."""
    with log_duration(logger, f"action_I on {field.mesh}"):
        Xs = spatial_curvatures(field) - kernels.IDENTITY
        Xt = temporal_curvatures(field) - kernels.IDENTITY
        spatial = 2.0 * _quadratic(massdata.M_ss, Xs.reshape(-1, 4))
        temporal = 2.0 * _quadratic(massdata.M_tt, Xt.reshape(-1, 4))
    return ActionBreakdown(temporal=temporal, spatial=spatial)


def vertex_pair_links(links, tet_edges):
    """
    Links between every ordered pair of local vertices of every tet.

    links (..., E, 4) at one time node; returns (..., T, 4, 4, 4) with the
    identity on the diagonal.
    """
    out = np.empty(links.shape[:-2] + (tet_edges.shape[0], 4, 4, 4))
    out[...] = kernels.IDENTITY
    for u in range(4):
        for v in range(4):
            if u == v:
                continue
            q = links[..., tet_edges[:, tables.LOCAL_EDGE_BETWEEN[u, v]], :]
            out[..., u, v, :] = q if tables.LOCAL_EDGE_SIGN[u, v] > 0 else kernels.qconj(q)
    return out


def _slab_nodes(mesh, sigma):
    return sigma, int(mesh.next_time(sigma))


def spatial_cell_terms(field, massdata, transport=True):
    """
    Spatial-face pair contributions of every (slab, tet), shape (N_t, T).

    Within slab sigma the time nodes a, b range over {sigma, sigma + 1}. The
    curvature of face k at time a is moved along the tet edge to the
    distinguished point of face l; the curvature of face l at time b is moved
    along the temporal edge at that point back to time a.
    """
    mesh = field.mesh
    s = mesh.spatial
    X = spatial_curvatures(field) - kernels.IDENTITY
    points = tables.LOCAL_FACE_POINTS
    lf = massdata.local_face[np.arange(s.n_tets) % tables.TETS_PER_CUBE]
    out = np.zeros((mesh.N_t, s.n_tets))
    for sigma in range(mesh.N_t):
        nodes = _slab_nodes(mesh, sigma)
        if transport:
            pair_links = {n: vertex_pair_links(field.spatial_links[n], s.tet_edges) for n in nodes}
            forward = field.temporal_links[sigma][s.tet_vertices[:, points]]  # (T, 4, 4)
        for ia, a in enumerate(nodes):
            Xa = X[a][s.tet_faces]  # (T, 4, 4)
            if transport:
                W = pair_links[a][:, points[:, None], points[None, :]]  # (T, k, l, 4)
                Xa = kernels.qconjugate_by(W, Xa[:, :, None, :])
            else:
                Xa = np.broadcast_to(Xa[:, :, None, :], Xa.shape[:2] + (4, 4))
            for ib, b in enumerate(nodes):
                Yb = X[b][s.tet_faces]
                if transport and ia != ib:
                    V = forward if ia == 0 else kernels.qconj(forward)
                    Yb = kernels.qmul(V, kernels.qmul(Yb, kernels.qconj(V)))
                weight = mesh.dt * SLAB_OVERLAP[ia, ib]
                out[sigma] += weight * 2.0 * np.einsum('tkl,tklq,tlq->t', lf, Xa, Yb)
    return out


def temporal_cell_terms(field, massdata, transport=True):
    """
    Temporal-face pair contributions of every (slab, tet), shape (N_t, T).

    Temporal faces couple within their own slab only; the curvature over
    local edge m is moved from its base vertex to the base of edge n at the
    start of the slab.
    """
    mesh = field.mesh
    s = mesh.spatial
    X = temporal_curvatures(field) - kernels.IDENTITY
    bases = tables.LOCAL_EDGE_BASES
    le = massdata.local_edge[np.arange(s.n_tets) % tables.TETS_PER_CUBE]
    out = np.zeros((mesh.N_t, s.n_tets))
    for sigma in range(mesh.N_t):
        Xs = X[sigma][s.tet_edges]  # (T, 6, 4)
        if transport:
            W = vertex_pair_links(field.spatial_links[sigma], s.tet_edges)[:, bases[:, None], bases[None, :]]
            Xm = kernels.qconjugate_by(W, Xs[:, :, None, :])
        else:
            Xm = np.broadcast_to(Xs[:, :, None, :], Xs.shape[:2] + (6, 4))
        out[sigma] = (2.0 / mesh.dt) * np.einsum('tmn,tmnq,tnq->t', le, Xm, Xs)
    return out


def action_L(field, massdata, transport=True):
    """
    Simplicial gauge theory action S^L as a cell reduction.

    With transport=False the insertions are dropped and the result equals
    action_I up to rounding.
    """
    with log_duration(logger, f"action_L on {field.mesh} transport={transport}"):
        spatial = float(np.sum(spatial_cell_terms(field, massdata, transport)))
        temporal = float(np.sum(temporal_cell_terms(field, massdata, transport)))
    return ActionBreakdown(temporal=temporal, spatial=spatial)


ACTIONS = {
    ACTION_J: action_J,
    ACTION_I: action_I,
    ACTION_L: action_L,
}


def evaluate(kind, field, massdata):
    """Dispatch on an action kind 'J', 'I' or 'L'."""
    try:
        fn = ACTIONS[kind]
    except KeyError:
        raise ValueError(f'unknown action kind {kind!r}; expected one of {sorted(ACTIONS)}')
    return fn(field, massdata)
