"""
Discrete gauge and scalar fields on a SpacetimeMesh.

Storage layout (the deterministic entity ordering of mesh.builders):
    DiscreteGaugeField.spatial   (N_t, E, 3)  A_e(tau), su(2) coefficients
    DiscreteGaugeField.temporal  (N_t, V, 3)  A_0 on the temporal edge i_tau -> i_{tau+1}
    GaugeTransform.values        (N_t, V, 4)  unit quaternions G_i(tau)
    ScalarField.values           (N_t, V, 2)  complex doublets phi_i(tau)

Edges are stored in their canonical orientation; the reversed edge carries
the negated dof, so its link is the exact inverse.
"""

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from django.conf import settings

from config.exceptions import InvalidRef, InvalidSize, IOFailure, SGTError
from config.logger import get_logger, log_duration
from liealg import kernels
from liealg.elements import AlgebraElement, GroupElement
from mesh.builders import build_spacetime
from mesh.entities import EntityKind, EntityRef, validate
from whitney.interpolation import interpolate_edge_dofs
from .continuum import test_field

logger = get_logger(__name__)


def _check_shape(name, array, shape):
    if array.shape != shape:
        raise InvalidSize(f'{name} has shape {array.shape}, expected {shape}')


@dataclass(frozen=True, eq=False)
class DiscreteGaugeField:
    mesh: object
    spatial: np.ndarray = field(repr=False)
    temporal: np.ndarray = field(repr=False)
    temporal_gauge: bool = False

    def __post_init__(self):
        s = self.mesh.spatial
        _check_shape('spatial dofs', self.spatial, (self.mesh.N_t, s.n_edges, 3))
        _check_shape('temporal dofs', self.temporal, (self.mesh.N_t, s.n_vertices, 3))
        if self.temporal_gauge and np.any(self.temporal != 0.0):
            raise SGTError('temporal_gauge is set but some temporal dofs are nonzero')

    @classmethod
    def zeros(cls, mesh, temporal_gauge=True):
        s = mesh.spatial
        return cls(
            mesh=mesh,
            spatial=np.zeros((mesh.N_t, s.n_edges, 3)),
            temporal=np.zeros((mesh.N_t, s.n_vertices, 3)),
            temporal_gauge=temporal_gauge,
        )

    @cached_property
    def spatial_links(self):
        return kernels.qexp(self.spatial)

    @cached_property
    def temporal_links(self):
        return kernels.qexp(self.temporal)

    def dof(self, ref, sign=1):
        """Signed algebra dof of a spatial or temporal edge."""
        kind = validate(self.mesh, ref)
        if kind is EntityKind.SPATIAL_EDGE:
            return AlgebraElement.from_coefficients(sign * self.spatial[ref.time, ref.index])
        if kind is EntityKind.TEMPORAL_EDGE:
            return AlgebraElement.from_coefficients(sign * self.temporal[ref.time, ref.index])
        raise InvalidRef(f'{ref} does not carry a gauge dof')

    def axpy(self, other, alpha):
        """self + alpha * other."""
        return DiscreteGaugeField(
            mesh=self.mesh,
            spatial=self.spatial + alpha * other.spatial,
            temporal=self.temporal + alpha * other.temporal,
            temporal_gauge=self.temporal_gauge and other.temporal_gauge,
        )

    def conjugated(self, g):
        """Global constant transform: every dof X -> g X g^{-1}."""
        q = np.asarray(g.array if isinstance(g, GroupElement) else g, dtype=float)
        return DiscreteGaugeField(
            mesh=self.mesh,
            spatial=kernels.qadjoint(q, self.spatial),
            temporal=np.zeros_like(self.temporal) if self.temporal_gauge else kernels.qadjoint(q, self.temporal),
            temporal_gauge=self.temporal_gauge,
        )

    def __str__(self):
        return f"DiscreteGaugeField({self.mesh}, temporal_gauge={self.temporal_gauge})"


@dataclass(frozen=True, eq=False)
class GaugeTransform:
    mesh: object
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_shape('gauge transform', self.values, (self.mesh.N_t, self.mesh.spatial.n_vertices, 4))

    @classmethod
    def identity(cls, mesh):
        values = np.zeros((mesh.N_t, mesh.spatial.n_vertices, 4))
        values[..., 0] = 1.0
        return cls(mesh=mesh, values=values)

    def inverse(self):
        return GaugeTransform(mesh=self.mesh, values=kernels.qconj(self.values))

    def __matmul__(self, other):
        """Pointwise product (self @ other)_i = self_i other_i."""
        return GaugeTransform(mesh=self.mesh, values=kernels.qmul(self.values, other.values))

    def at(self, vertex, time=0):
        return GroupElement.from_quaternion(self.values[time, vertex])

    @property
    def is_time_independent(self):
        return bool(np.all(self.values == self.values[:1]))

    def check(self, tol=1e-12):
        return bool(np.all(kernels.unitarity_defect(self.values) <= tol))


@dataclass(frozen=True, eq=False)
class ScalarField:
    mesh: object
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_shape('scalar field', self.values, (self.mesh.N_t, self.mesh.spatial.n_vertices, 2))
        if not np.all(np.isfinite(self.values)):
            raise SGTError('scalar field has non-finite entries')

    @classmethod
    def constant(cls, mesh, value):
        values = np.broadcast_to(np.asarray(value, dtype=complex), (mesh.N_t, mesh.spatial.n_vertices, 2))
        return cls(mesh=mesh, values=values.copy())


def sample(source, mesh, rule=None):
    """
    Edge dofs of a continuum potential, or of catalogue case `source` if it is an int.

    Temporal dofs are exactly zero for temporal-gauge sources.
    """
    source = test_field(int(source)) if isinstance(source, (int, np.integer)) else source
    with log_duration(logger, f"sample {source} on {mesh}"):
        dofs = interpolate_edge_dofs(source, mesh, rule)
    temporal_gauge = bool(getattr(source, 'temporal_gauge', False))
    temporal = np.zeros_like(dofs.temporal) if temporal_gauge else dofs.temporal
    return DiscreteGaugeField(mesh=mesh, spatial=dofs.spatial, temporal=temporal, temporal_gauge=temporal_gauge)


def sample_scalar(fn, mesh):
    """Nodal values phi_i(tau) = fn(points) with points (..., 4) as (t, x, y, z)."""
    s = mesh.spatial
    t = np.arange(mesh.N_t) * mesh.dt
    x = s.vertex_positions()
    points = np.concatenate([
        np.broadcast_to(t[:, None, None], (mesh.N_t, s.n_vertices, 1)),
        np.broadcast_to(x[None], (mesh.N_t, s.n_vertices, 3)),
    ], axis=-1)
    return ScalarField(mesh=mesh, values=np.asarray(fn(points), dtype=complex))


def link(gauge_field, ref, sign=1):
    """U = exp(sign * A) for a spatial or temporal edge; sign -1 gives the exact inverse."""
    return GroupElement.from_quaternion(kernels.qexp(gauge_field.dof(ref, sign).array))


def transport(gauge_field, connection):
    """Link along a mesh.entities.Connection; identity connections give 1."""
    if connection.is_identity:
        return GroupElement.identity()
    return link(gauge_field, connection.edge, connection.sign)


def apply_gauge(gauge_field, g):
    """
    U_ij -> G_i U_ij G_j^{-1} on every link, pulled back to dofs through log.

    Temporal links i_tau -> i_{tau+1} use G_i(tau) and G_i(tau+1). A temporal
    gauge field stays in temporal gauge when g is time-independent.

    Raises:
        BranchAmbiguity: a transformed link has no principal logarithm
    """
    mesh = gauge_field.mesh
    s = mesh.spatial
    G = g.values
    i, j = s.edge_vertices[:, 0], s.edge_vertices[:, 1]
    nxt = np.roll(np.arange(mesh.N_t), -1)

    with log_duration(logger, f"apply_gauge on {mesh}"):
        spatial = kernels.qmul(kernels.qmul(G[:, i], gauge_field.spatial_links), kernels.qconj(G[:, j]))
        spatial_dofs = kernels.qlog(spatial)
        keep_gauge = gauge_field.temporal_gauge and g.is_time_independent
        if keep_gauge:
            temporal_dofs = np.zeros_like(gauge_field.temporal)
        else:
            temporal = kernels.qmul(kernels.qmul(G, gauge_field.temporal_links), kernels.qconj(G[nxt]))
            temporal_dofs = kernels.qlog(temporal)
    return DiscreteGaugeField(mesh=mesh, spatial=spatial_dofs, temporal=temporal_dofs, temporal_gauge=keep_gauge)


def apply_gauge_scalar(phi, g):
    """phi_i -> G_i phi_i."""
    return ScalarField(mesh=phi.mesh, values=kernels.qapply(g.values, phi.values))


def _unit_directions(rng, shape):
    v = rng.normal(size=shape + (3,))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def random_gauge(mesh, seed=None, amplitude=None):
    """G_i(tau) = exp(amplitude * unit random direction); deterministic per seed."""
    amplitude = settings.SGT['GAUGE_AMPLITUDE'] if amplitude is None else float(amplitude)
    if amplitude < 0:
        raise ValueError(f'amplitude must be >= 0, got {amplitude}')
    rng = np.random.default_rng(seed)
    directions = _unit_directions(rng, (mesh.N_t, mesh.spatial.n_vertices))
    return GaugeTransform(mesh=mesh, values=kernels.qexp(amplitude * directions))


def random_field(mesh, seed=None, amplitude=None, temporal_gauge=False):
    """Every dof amplitude * unit random direction; temporal dofs zero in temporal gauge."""
    amplitude = settings.SGT['FIELD_AMPLITUDE'] if amplitude is None else float(amplitude)
    if amplitude < 0:
        raise ValueError(f'amplitude must be >= 0, got {amplitude}')
    rng = np.random.default_rng(seed)
    s = mesh.spatial
    spatial = amplitude * _unit_directions(rng, (mesh.N_t, s.n_edges))
    temporal = amplitude * _unit_directions(rng, (mesh.N_t, s.n_vertices))
    if temporal_gauge:
        temporal = np.zeros_like(temporal)
    return DiscreteGaugeField(mesh=mesh, spatial=spatial, temporal=temporal, temporal_gauge=temporal_gauge)


def random_scalar(mesh, seed=None, amplitude=1.0):
    rng = np.random.default_rng(seed)
    shape = (mesh.N_t, mesh.spatial.n_vertices, 2)
    return ScalarField(mesh=mesh, values=amplitude * (rng.normal(size=shape) + 1j * rng.normal(size=shape)))


### covariant differences ###
def spatial_differences(phi, gauge_field):
    """(delta_A phi)_e(tau) = phi_j - U_ji phi_i for every spatial edge, shape (N_t, E, 2)."""
    s = phi.mesh.spatial
    i, j = s.edge_vertices[:, 0], s.edge_vertices[:, 1]
    back = kernels.qconj(gauge_field.spatial_links)
    return phi.values[:, j] - kernels.qapply(back, phi.values[:, i])


def temporal_differences(phi, gauge_field):
    """phi_i(tau + 1) - U_0^{-1} phi_i(tau) for every temporal edge, shape (N_t, V, 2)."""
    back = kernels.qconj(gauge_field.temporal_links)
    return np.roll(phi.values, -1, axis=0) - kernels.qapply(back, phi.values)


def covariant_difference(phi, gauge_field, ref, sign=1):
    """
    phi_target - U_{target, origin} phi_origin along one oriented edge.

    sign -1 runs the stored edge backwards.
    """
    mesh = phi.mesh
    kind = validate(mesh, ref)
    if kind is EntityKind.SPATIAL_EDGE:
        ends = [(int(v), ref.time) for v in mesh.spatial.edge_vertices[ref.index]]
    elif kind is EntityKind.TEMPORAL_EDGE:
        ends = [(ref.index, ref.time), (ref.index, int(mesh.next_time(ref.time)))]
    else:
        raise InvalidRef(f'{ref} is not an edge')
    (ov, ot), (tv, tt) = ends if sign > 0 else ends[::-1]
    back = kernels.qexp(-gauge_field.dof(ref, sign).array)
    return phi.values[tt, tv] - kernels.qapply(back, phi.values[ot, ov])


### snapshots ###
def save_snapshot(gauge_field, path):
    """
    Write the dof arrays to a numpy .npz archive.

    Raises:
        IOFailure: the archive cannot be written
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'wb') as fh:
            np.savez(
                fh,
                N=gauge_field.mesh.N,
                N_t=gauge_field.mesh.N_t,
                spatial=gauge_field.spatial,
                temporal=gauge_field.temporal,
                temporal_gauge=gauge_field.temporal_gauge,
            )
    except OSError as exc:
        logger.error(f"Could not write snapshot {path}", exc_info=True)
        raise IOFailure(f'cannot write snapshot {path}: {exc}') from exc
    logger.info(f"Saved {gauge_field} to {path}")
    return path


def load_snapshot(path):
    """
    Raises:
        IOFailure: the archive is missing or unreadable
    """
    try:
        with np.load(Path(path)) as data:
            mesh = build_spacetime(int(data['N']), int(data['N_t']))
            return DiscreteGaugeField(
                mesh=mesh,
                spatial=data['spatial'].copy(),
                temporal=data['temporal'].copy(),
                temporal_gauge=bool(data['temporal_gauge']),
            )
    except (OSError, KeyError, ValueError) as exc:
        logger.error(f"Could not read snapshot {path}", exc_info=True)
        raise IOFailure(f'cannot read snapshot {path}: {exc}') from exc


def edge_ref(edge, time=0):
    return EntityRef(EntityKind.SPATIAL_EDGE, int(edge), int(time))


def temporal_edge_ref(vertex, time=0):
    return EntityRef(EntityKind.TEMPORAL_EDGE, int(vertex), int(time))
