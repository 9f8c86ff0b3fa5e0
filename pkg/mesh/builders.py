"""
Periodic Kuhn meshes of the unit 3-torus and their spacetime extension.

Entity numbering:
    vertex          v = (x * N + y) * N + z
    spatial edge    v * 7 + d        (d indexes EDGE_OFFSETS, base vertex v)
    spatial face    v * 12 + k       (k indexes FACE_STEPS)
    tetrahedron     v * 6 + p        (p indexes TET_PERMUTATIONS)
    temporal edge   tau * V + v      (i_tau -> i_{tau+1})
    temporal face   tau * E + e      (i_tau -> j_tau -> j_{tau+1} -> i_{tau+1})
    prism           tau * T + t
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from config.exceptions import InvalidSize
from config.logger import get_logger, log_duration
from . import tables

logger = get_logger(__name__)


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class SpatialMesh:
    """
    Periodic Freudenthal/Kuhn triangulation of [0,1)^3 with N cubes per side.

    Index tables (all read-only numpy arrays):
        vertex_coords   (V, 3)  lattice coordinates
        edge_vertices   (E, 2)  base, target
        edge_vectors    (E, 3)  unwrapped displacement target - base, in units of h
        face_vertices   (F, 3)  chain order; column 0 is the distinguished point
        face_edges      (F, 3)  edges (a,b), (b,c), (a,c) with signs +1, +1, -1
        tet_vertices    (T, 4)  chain order p0..p3
        tet_edges       (T, 6)  local edges in LOCAL_EDGES order, all oriented p_i -> p_j
        tet_faces       (T, 4)  face k omits local vertex k
        tet_signs       (T,)    orientation of the chain order
        tet_vectors     (T, 4, 3) unwrapped vertex offsets from the base corner, in units of h
    """

    N: int
    vertex_coords: np.ndarray = field(repr=False)
    edge_vertices: np.ndarray = field(repr=False)
    edge_vectors: np.ndarray = field(repr=False)
    face_vertices: np.ndarray = field(repr=False)
    face_edges: np.ndarray = field(repr=False)
    face_steps: np.ndarray = field(repr=False)
    tet_vertices: np.ndarray = field(repr=False)
    tet_edges: np.ndarray = field(repr=False)
    tet_faces: np.ndarray = field(repr=False)
    tet_signs: np.ndarray = field(repr=False)
    tet_vectors: np.ndarray = field(repr=False)

    @property
    def h(self):
        return 1.0 / self.N

    @property
    def n_vertices(self):
        return self.N ** 3

    @property
    def n_edges(self):
        return tables.EDGES_PER_CUBE * self.N ** 3

    @property
    def n_faces(self):
        return tables.FACES_PER_CUBE * self.N ** 3

    @property
    def n_tets(self):
        return tables.TETS_PER_CUBE * self.N ** 3

    @property
    def tet_volume(self):
        return self.h ** 3 / 6.0

    def vertex_index(self, coords):
        c = np.mod(np.asarray(coords, dtype=int), self.N)
        return (c[..., 0] * self.N + c[..., 1]) * self.N + c[..., 2]

    def vertex_positions(self):
        return self.vertex_coords * self.h

    def edge_index(self, base, direction):
        return np.asarray(base) * tables.EDGES_PER_CUBE + np.asarray(direction)

    def face_index(self, base, kind):
        return np.asarray(base) * tables.FACES_PER_CUBE + np.asarray(kind)

    def face_signs(self):
        return np.broadcast_to(tables.FACE_EDGE_SIGNS, (self.n_faces, 3))

    def tet_face_signs(self):
        """Signs of the four faces in the boundary of each positively oriented tet."""
        return self.tet_signs[:, None] * tables.LOCAL_FACE_SIGNS[None, :]

    def signed_volumes(self):
        """Determinant volumes of each tet in chain order, in physical units."""
        v = self.tet_vectors * self.h
        return np.linalg.det(v[:, 1:] - v[:, :1]) / 6.0

    def __str__(self):
        return f"SpatialMesh(N={self.N}, V={self.n_vertices}, E={self.n_edges}, F={self.n_faces}, T={self.n_tets})"


@dataclass(frozen=True, eq=False)
class SpacetimeMesh:
    """Spatial mesh replicated at N_t periodic time nodes, dt = 1 / N_t."""

    spatial: SpatialMesh
    N_t: int

    @property
    def N(self):
        return self.spatial.N

    @property
    def h(self):
        return self.spatial.h

    @property
    def dt(self):
        return 1.0 / self.N_t

    @property
    def n_temporal_edges(self):
        return self.N_t * self.spatial.n_vertices

    @property
    def n_temporal_faces(self):
        return self.N_t * self.spatial.n_edges

    @property
    def n_prisms(self):
        return self.N_t * self.spatial.n_tets

    def next_time(self, tau):
        return (np.asarray(tau) + 1) % self.N_t

    def temporal_edge_index(self, tau, vertex):
        return np.asarray(tau) * self.spatial.n_vertices + np.asarray(vertex)

    def temporal_face_index(self, tau, edge):
        return np.asarray(tau) * self.spatial.n_edges + np.asarray(edge)

    def prism_index(self, tau, tet):
        return np.asarray(tau) * self.spatial.n_tets + np.asarray(tet)

    def __str__(self):
        return f"SpacetimeMesh(N={self.N}, N_t={self.N_t})"


def _check_size(name, value):
    if int(value) != value or value < 2:
        raise InvalidSize(f'{name} must be an integer >= 2, got {value!r}')


@lru_cache(maxsize=8)
def build_spatial(N):
    """
    Build the periodic Kuhn mesh with N cubes per side.

    Raises:
        InvalidSize: N < 2
    """
    _check_size('N', N)
    N = int(N)
    with log_duration(logger, f"build_spatial N={N}"):
        base = np.stack(np.meshgrid(np.arange(N), np.arange(N), np.arange(N), indexing='ij'), axis=-1).reshape(-1, 3)
        n_cubes = len(base)

        def vid(coords):
            c = np.mod(coords, N)
            return (c[..., 0] * N + c[..., 1]) * N + c[..., 2]

        cube = np.arange(n_cubes)

        # edges: base vertex, target base + offset
        edge_vertices = np.stack([
            np.repeat(cube, tables.EDGES_PER_CUBE),
            vid(base[:, None, :] + tables.EDGE_OFFSETS[None, :, :]).reshape(-1),
        ], axis=1)
        edge_vectors = np.tile(tables.EDGE_OFFSETS, (n_cubes, 1))

        def edge_at(corner, offset):
            # corner (..., 3) lattice coordinates, offset (..., 3) 0/1 direction
            return vid(corner) * tables.EDGES_PER_CUBE + tables.offset_index(offset)

        # faces: chain 0, u, u + w
        face_corners = base[:, None, None, :] + tables.FACE_VERTEX_OFFSETS[None, :, :, :]
        face_vertices = vid(face_corners).reshape(-1, 3)
        u, w = tables.FACE_STEPS[:, 0], tables.FACE_STEPS[:, 1]
        face_edge_local = np.stack([
            np.stack([np.zeros_like(u), u], axis=1),
            np.stack([u, w], axis=1),
            np.stack([np.zeros_like(u), u + w], axis=1),
        ], axis=1)  # (12, 3, [start, offset], 3)
        face_edges = edge_at(
            base[:, None, None, :] + face_edge_local[None, :, :, 0, :],
            np.broadcast_to(face_edge_local[None, :, :, 1, :], (n_cubes,) + face_edge_local.shape[:2] + (3,)),
        ).reshape(-1, 3)

        # tetrahedra
        tet_corners = base[:, None, None, :] + tables.TET_VERTEX_OFFSETS[None, :, :, :]
        tet_vertices = vid(tet_corners).reshape(-1, 4)
        local_start = tables.TET_VERTEX_OFFSETS[:, tables.LOCAL_EDGE_BASES, :]
        local_step = tables.TET_VERTEX_OFFSETS[:, tables.LOCAL_EDGE_TARGETS, :] - local_start
        tet_edges = edge_at(
            base[:, None, None, :] + local_start[None],
            np.broadcast_to(local_step[None], (n_cubes,) + local_step.shape),
        ).reshape(-1, 6)

        tet_face_rows = []
        for perm_offsets in tables.TET_VERTEX_OFFSETS:
            row = []
            for face in tables.LOCAL_FACES:
                p = perm_offsets[face]
                row.append((p[0], tables.face_type(p[1] - p[0], p[2] - p[1])))
            tet_face_rows.append(row)
        face_start = np.array([[r[0] for r in row] for row in tet_face_rows])
        face_kind = np.array([[r[1] for r in row] for row in tet_face_rows])
        tet_faces = (
            vid(base[:, None, None, :] + face_start[None]) * tables.FACES_PER_CUBE + face_kind[None]
        ).reshape(-1, 4)

        mesh = SpatialMesh(
            N=N,
            vertex_coords=_frozen(base),
            edge_vertices=_frozen(edge_vertices),
            edge_vectors=_frozen(edge_vectors),
            face_vertices=_frozen(face_vertices),
            face_edges=_frozen(face_edges),
            face_steps=_frozen(np.tile(tables.FACE_STEPS, (n_cubes, 1, 1))),
            tet_vertices=_frozen(tet_vertices),
            tet_edges=_frozen(tet_edges),
            tet_faces=_frozen(tet_faces),
            tet_signs=_frozen(np.tile(tables.TET_SIGNS, n_cubes)),
            tet_vectors=_frozen(np.tile(tables.TET_VERTEX_OFFSETS, (n_cubes, 1, 1))),
        )
    logger.info(f"Built {mesh}")
    return mesh


@lru_cache(maxsize=8)
def build_spacetime(N, N_t):
    """
    Replicate build_spatial(N) at N_t periodic time nodes.

    Raises:
        InvalidSize: N < 2 or N_t < 2
    """
    _check_size('N', N)
    _check_size('N_t', N_t)
    mesh = SpacetimeMesh(spatial=build_spatial(int(N)), N_t=int(N_t))
    logger.info(f"Built {mesh}: {mesh.n_temporal_faces} temporal faces, {mesh.n_prisms} prisms")
    return mesh
