"""
Edge interpolation of continuum potentials and the commuting Stokes check.

A continuum field is any object exposing

    potential(points)    points (..., 4) as (t, x, y, z) -> A_mu^a, shape (..., 4, 3)
    derivatives(points)  -> d_mu A_nu^a, shape (..., 4, 4, 3)
    periodic             True if A is periodic on the unit 4-torus
"""

from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from config.logger import get_logger, log_duration
from .quadrature import gauss_legendre, triangle_rule

logger = get_logger(__name__)

CHUNK = 1 << 15


@dataclass(frozen=True, eq=False)
class EdgeDofs:
    """Raw line integrals: spatial (N_t, E, 3) at each time node, temporal (N_t, V, 3) per slab."""

    spatial: np.ndarray = field(repr=False)
    temporal: np.ndarray = field(repr=False)


def default_rule():
    return gauss_legendre(settings.SGT['QUADRATURE_POINTS'])


def _chunks(n, size=CHUNK):
    for start in range(0, n, size):
        yield slice(start, min(start + size, n))


def _spacetime_points(t, x):
    t = np.broadcast_to(np.asarray(t, dtype=float), x.shape[:-1])
    return np.concatenate([t[..., None], x], axis=-1)


def interpolate_edge_dofs(field, mesh, rule=None):
    """
    A_e(tau) = int_e A at time node tau and A_0(i, tau) = int_tau^{tau+dt} A_0(t, x_i) dt.

    Points are taken on the unwrapped segment starting at the base vertex.
    """
    rule = rule or default_rule()
    s = mesh.spatial
    base = s.vertex_coords[s.edge_vertices[:, 0]] * s.h
    vec = s.edge_vectors * s.h
    positions = s.vertex_coords * s.h
    spatial = np.zeros((mesh.N_t, s.n_edges, 3))
    temporal = np.zeros((mesh.N_t, s.n_vertices, 3))
    with log_duration(logger, f"interpolate_edge_dofs {mesh}"):
        for tau in range(mesh.N_t):
            t0 = tau * mesh.dt
            for chunk in _chunks(s.n_edges):
                x = base[chunk, None, :] + rule.points[None, :, None] * vec[chunk, None, :]
                pot = field.potential(_spacetime_points(t0, x))
                integrand = np.einsum('cnma,cm->cna', pot[..., 1:, :], vec[chunk])
                spatial[tau, chunk] = rule.integrate(integrand, axis=1)
            for chunk in _chunks(s.n_vertices):
                x = np.broadcast_to(positions[chunk, None, :], (chunk.stop - chunk.start, rule.size, 3))
                t = t0 + rule.points[None, :] * mesh.dt
                pot = field.potential(_spacetime_points(t, x))
                temporal[tau, chunk] = mesh.dt * rule.integrate(pot[..., 0, :], axis=1)
    return EdgeDofs(spatial=spatial, temporal=temporal)


def _exterior_derivative(derivs, u, v):
    # dA(u, v) = sum d_mu A_nu (u^mu v^nu - v^mu u^nu)
    return (
        np.einsum('...mna,...m,...n->...a', derivs, u, v)
        - np.einsum('...mna,...m,...n->...a', derivs, v, u)
    )


def spatial_face_fluxes(field, mesh, tau, rule):
    """int_f dA for every spatial face at time node tau, shape (F, 3)."""
    s = mesh.spatial
    tri_pts, tri_w = triangle_rule(rule)
    a = s.vertex_coords[s.face_vertices[:, 0]] * s.h
    u = s.face_steps[:, 0] * s.h
    uw = (s.face_steps[:, 0] + s.face_steps[:, 1]) * s.h
    zeros = np.zeros((s.n_faces, 1))
    u4 = np.concatenate([zeros, u], axis=1)
    v4 = np.concatenate([zeros, uw], axis=1)
    out = np.zeros((s.n_faces, 3))
    for chunk in _chunks(s.n_faces, CHUNK // 4):
        x = a[chunk, None, :] + tri_pts[None, :, :1] * u[chunk, None, :] + tri_pts[None, :, 1:] * uw[chunk, None, :]
        derivs = field.derivatives(_spacetime_points(tau * mesh.dt, x))
        d = _exterior_derivative(derivs, u4[chunk, None, :], v4[chunk, None, :])
        out[chunk] = np.einsum('cqa,q->ca', d, tri_w)
    return out


def temporal_face_fluxes(field, mesh, tau, rule):
    """int dA over e x [tau, tau + dt] for every spatial edge e, shape (E, 3)."""
    s = mesh.spatial
    a = s.vertex_coords[s.edge_vertices[:, 0]] * s.h
    vec = s.edge_vectors * s.h
    sp, rp = np.meshgrid(rule.points, rule.points, indexing='ij')
    w = np.outer(rule.weights, rule.weights).ravel()
    sp, rp = sp.ravel(), rp.ravel()
    u4 = np.concatenate([np.zeros((s.n_edges, 1)), vec], axis=1)
    v4 = np.zeros(4)
    v4[0] = mesh.dt
    out = np.zeros((s.n_edges, 3))
    for chunk in _chunks(s.n_edges, CHUNK // 4):
        x = a[chunk, None, :] + sp[None, :, None] * vec[chunk, None, :]
        t = tau * mesh.dt + rp[None, :] * mesh.dt
        derivs = field.derivatives(_spacetime_points(t, x))
        d = _exterior_derivative(derivs, u4[chunk, None, :], v4)
        out[chunk] = np.einsum('cqa,q->ca', d, w)
    return out


def check_stokes(mesh, field, rule=None):
    """
    Largest |sum_{e in df} sign A_e - int_f dA| over all faces and time nodes.

    For non-periodic fields faces that cross the periodic seam are skipped,
    since their edges are integrated on different sheets of the unwrapped
    field.
    """
    rule = rule or default_rule()
    s = mesh.spatial
    dofs = interpolate_edge_dofs(field, mesh, rule)
    periodic = getattr(field, 'periodic', True)
    face_ok = np.ones(s.n_faces, dtype=bool)
    edge_ok = np.ones(s.n_edges, dtype=bool)
    if not periodic:
        top = s.vertex_coords[s.face_vertices[:, 0]] + s.face_steps[:, 0] + s.face_steps[:, 1]
        face_ok = np.all(top <= s.N - 1, axis=1)
        edge_ok = np.all(s.vertex_coords[s.edge_vertices[:, 0]] + s.edge_vectors <= s.N - 1, axis=1)

    signs = np.array([1.0, 1.0, -1.0])
    i, j = s.edge_vertices[:, 0], s.edge_vertices[:, 1]
    worst = 0.0
    for tau in range(mesh.N_t):
        a = dofs.spatial[tau]
        circulation = np.einsum('fka,k->fa', a[s.face_edges], signs)
        residual = np.abs(circulation - spatial_face_fluxes(field, mesh, tau, rule))[face_ok]
        worst = max(worst, float(residual.max(initial=0.0)))

        if not periodic and tau == mesh.N_t - 1:
            continue
        nxt = (tau + 1) % mesh.N_t
        a0 = dofs.temporal[tau]
        circulation = a + a0[j] - dofs.spatial[nxt] - a0[i]
        residual = np.abs(circulation - temporal_face_fluxes(field, mesh, tau, rule))[edge_ok]
        worst = max(worst, float(residual.max(initial=0.0)))
    logger.info(f"Stokes residual on {mesh}: {worst:.3e}")
    return worst
