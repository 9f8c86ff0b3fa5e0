"""
Kinetic actions of a scalar doublet coupled to the gauge field.

Both actions pair covariant differences with the edge mass matrices:
temporal differences live on temporal edges (vertex Gram / dt), spatial
differences on spatial edges (hat overlaps x edge Gram). Each difference
sits at the target vertex of its edge. S^L transports the right factor to
the target of the left one, S^F pairs them directly.
"""

import numpy as np

from config.logger import get_logger, log_duration
from gaugefield.fields import spatial_differences, temporal_differences
from liealg import kernels
from mesh import tables
from .actions import SLAB_OVERLAP, ActionBreakdown, vertex_pair_links

logger = get_logger(__name__)


def _re_inner(x, y):
    # Re sum conj(x) y over the doublet axis
    return np.real(np.sum(np.conj(x) * y, axis=-1))


def scalar_temporal_terms(phi, field, massdata, transport=True):
    """Per (slab, tet) contributions of the temporal block, shape (N_t, T)."""
    mesh = phi.mesh
    s = mesh.spatial
    d = temporal_differences(phi, field)
    lv = massdata.local_vertex[np.arange(s.n_tets) % tables.TETS_PER_CUBE]
    out = np.zeros((mesh.N_t, s.n_tets))
    for sigma in range(mesh.N_t):
        D = d[sigma][s.tet_vertices]  # (T, 4, 2)
        right = np.broadcast_to(D[:, None, :, :], D.shape[:1] + (4, 4, 2))
        if transport:
            # differences sit at time sigma + 1
            W = vertex_pair_links(field.spatial_links[int(mesh.next_time(sigma))], s.tet_edges)
            right = kernels.qapply(W, right)
        out[sigma] = np.einsum('tkl,tkl->t', lv, _re_inner(D[:, :, None, :], right)) / mesh.dt
    return out


def scalar_spatial_terms(phi, field, massdata, transport=True):
    """Per (slab, tet) contributions of the spatial block, shape (N_t, T)."""
    mesh = phi.mesh
    s = mesh.spatial
    d = spatial_differences(phi, field)
    targets = tables.LOCAL_EDGE_TARGETS
    le = massdata.local_edge[np.arange(s.n_tets) % tables.TETS_PER_CUBE]
    out = np.zeros((mesh.N_t, s.n_tets))
    for sigma in range(mesh.N_t):
        nodes = (sigma, int(mesh.next_time(sigma)))
        if transport:
            forward = field.temporal_links[sigma][s.tet_vertices[:, targets]]  # (T, 6, 4)
        for ia, a in enumerate(nodes):
            left = d[a][s.tet_edges]  # (T, 6, 2)
            for ib, b in enumerate(nodes):
                right = np.broadcast_to(d[b][s.tet_edges][:, None, :, :], left.shape[:1] + (6, 6, 2))
                if transport:
                    W = vertex_pair_links(field.spatial_links[b], s.tet_edges)[:, targets[:, None], targets[None, :]]
                    right = kernels.qapply(W, right)
                    if ia != ib:
                        V = forward if ia == 0 else kernels.qconj(forward)
                        right = kernels.qapply(V[:, :, None, :], right)
                weight = mesh.dt * SLAB_OVERLAP[ia, ib]
                out[sigma] += weight * np.einsum('tmn,tmn->t', le, _re_inner(left[:, :, None, :], right))
    return out


def scalar_action_L(phi, field, massdata):
    """Gauge-invariant scalar kinetic action with parallel transport between difference locations."""
    with log_duration(logger, f"scalar_action_L on {phi.mesh}"):
        temporal = float(np.sum(scalar_temporal_terms(phi, field, massdata)))
        spatial = float(np.sum(scalar_spatial_terms(phi, field, massdata)))
    return ActionBreakdown(scalar_temporal=temporal, scalar_spatial=spatial)


def scalar_action_F(phi, field, massdata):
    """
    Scalar kinetic action Re sum M (delta phi)^H (delta phi') without transport.

    Evaluated with the assembled sparse mass matrices.
    """
    with log_duration(logger, f"scalar_action_F on {phi.mesh}"):
        dt_ = temporal_differences(phi, field).reshape(-1, 2)
        ds = spatial_differences(phi, field).reshape(-1, 2)
        temporal = float(np.real(np.sum(np.conj(dt_) * (massdata.M_e_tt @ dt_))))
        spatial = float(np.real(np.sum(np.conj(ds) * (massdata.M_e_ss @ ds))))
    return ActionBreakdown(scalar_temporal=temporal, scalar_spatial=spatial)
