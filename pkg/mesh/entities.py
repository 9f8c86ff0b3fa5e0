"""
Entity references, boundary incidence and vertex-to-vertex connections.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from config.exceptions import InvalidRef, NotAdjacent
from . import tables


class EntityKind(str, Enum):
    VERTEX = 'vertex'
    SPATIAL_EDGE = 'spatial-edge'
    TEMPORAL_EDGE = 'temporal-edge'
    SPATIAL_FACE = 'spatial-face'
    TEMPORAL_FACE = 'temporal-face'
    TETRAHEDRON = 'tetrahedron'
    TEMPORAL_CELL = 'temporal-cell'
    PRISM = 'prism'


@dataclass(frozen=True)
class EntityRef:
    """
    A mesh entity at a time node.

    `index` is the spatial index (vertex, edge, face or tet number). For
    temporal edges, temporal faces, temporal cells and prisms `time` is the
    slab, i.e. the entity spans time nodes time and time + 1. A temporal cell
    is a spatial triangle times a slab, the side wall of a prism.
    """

    kind: EntityKind
    index: int
    time: int = 0

    def __str__(self):
        return f"{self.kind.value}[{self.index}]@{self.time}"


@dataclass(frozen=True)
class Connection:
    """Edge joining two vertices; `edge is None` marks the identity transport."""

    edge: EntityRef = None
    sign: int = 1

    @property
    def is_identity(self):
        return self.edge is None


def _count(mesh, kind):
    s = mesh.spatial
    return {
        EntityKind.VERTEX: s.n_vertices,
        EntityKind.SPATIAL_EDGE: s.n_edges,
        EntityKind.TEMPORAL_EDGE: s.n_vertices,
        EntityKind.SPATIAL_FACE: s.n_faces,
        EntityKind.TEMPORAL_FACE: s.n_edges,
        EntityKind.TETRAHEDRON: s.n_tets,
        EntityKind.TEMPORAL_CELL: s.n_faces,
        EntityKind.PRISM: s.n_tets,
    }[kind]


def validate(mesh, ref):
    """
    Raises:
        InvalidRef: index or time node out of range
    """
    try:
        kind = EntityKind(ref.kind)
    except ValueError:
        raise InvalidRef(f'unknown entity kind {ref.kind!r}')
    if not 0 <= ref.index < _count(mesh, kind) or not 0 <= ref.time < mesh.N_t:
        raise InvalidRef(f'{ref} is outside {mesh}')
    return kind


def incidence(mesh, ref):
    """
    Boundary of an entity as (EntityRef, sign) pairs.

    Edges map to their endpoints (-1 start, +1 end), faces to their edge
    cycle, tetrahedra to their faces with the ambient orientation. Products
    with a slab follow d(A x I) = dA x I + (-1)^dim(A) (A at tau+1 - A at tau),
    so a prism maps to its four temporal cells and its two end tetrahedra.
    """
    kind = validate(mesh, ref)
    s = mesh.spatial
    tau, nxt = ref.time, int(mesh.next_time(ref.time))
    if kind is EntityKind.SPATIAL_EDGE:
        i, j = s.edge_vertices[ref.index]
        return [(EntityRef(EntityKind.VERTEX, int(i), tau), -1), (EntityRef(EntityKind.VERTEX, int(j), tau), 1)]
    if kind is EntityKind.TEMPORAL_EDGE:
        return [(EntityRef(EntityKind.VERTEX, ref.index, tau), -1), (EntityRef(EntityKind.VERTEX, ref.index, nxt), 1)]
    if kind is EntityKind.SPATIAL_FACE:
        return [
            (EntityRef(EntityKind.SPATIAL_EDGE, int(e), tau), int(sign))
            for e, sign in zip(s.face_edges[ref.index], tables.FACE_EDGE_SIGNS)
        ]
    if kind is EntityKind.TEMPORAL_FACE:
        i, j = (int(v) for v in s.edge_vertices[ref.index])
        return [
            (EntityRef(EntityKind.SPATIAL_EDGE, ref.index, tau), 1),
            (EntityRef(EntityKind.TEMPORAL_EDGE, j, tau), 1),
            (EntityRef(EntityKind.SPATIAL_EDGE, ref.index, nxt), -1),
            (EntityRef(EntityKind.TEMPORAL_EDGE, i, tau), -1),
        ]
    if kind is EntityKind.TETRAHEDRON:
        signs = s.tet_face_signs()[ref.index]
        return [
            (EntityRef(EntityKind.SPATIAL_FACE, int(f), tau), int(sign))
            for f, sign in zip(s.tet_faces[ref.index], signs)
        ]
    if kind is EntityKind.TEMPORAL_CELL:
        sides = [
            (EntityRef(EntityKind.TEMPORAL_FACE, int(e), tau), int(sign))
            for e, sign in zip(s.face_edges[ref.index], tables.FACE_EDGE_SIGNS)
        ]
        return sides + [
            (EntityRef(EntityKind.SPATIAL_FACE, ref.index, nxt), 1),
            (EntityRef(EntityKind.SPATIAL_FACE, ref.index, tau), -1),
        ]
    if kind is EntityKind.PRISM:
        signs = s.tet_face_signs()[ref.index]
        sides = [
            (EntityRef(EntityKind.TEMPORAL_CELL, int(f), tau), int(sign))
            for f, sign in zip(s.tet_faces[ref.index], signs)
        ]
        return sides + [
            (EntityRef(EntityKind.TETRAHEDRON, ref.index, nxt), -1),
            (EntityRef(EntityKind.TETRAHEDRON, ref.index, tau), 1),
        ]
    raise InvalidRef(f'{ref} has no boundary')


def connecting_edge(mesh, v, w, tet=None, slab=None):
    """
    Oriented edge joining vertex refs v and w.

    Spatial connections need v and w at the same time node. With `tet` the
    edge is taken from that tetrahedron's local table, which is the only
    unambiguous choice when N = 2 (there several edges can join the same pair
    of vertices). Time-adjacent copies of one spatial vertex are joined by a
    temporal edge; `slab` picks the slab when N_t = 2.

    Returns:
        Connection: edge ref and sign (+1 if the stored edge runs v -> w)

    Raises:
        NotAdjacent: no edge joins v and w, or the choice is ambiguous
    """
    validate(mesh, v)
    validate(mesh, w)
    if v == w:
        return Connection()
    s = mesh.spatial
    if v.index == w.index:
        forward = int(mesh.next_time(v.time)) == w.time
        backward = int(mesh.next_time(w.time)) == v.time
        if slab is not None:
            forward, backward = forward and slab == v.time, backward and slab == w.time
        if forward:
            return Connection(EntityRef(EntityKind.TEMPORAL_EDGE, v.index, v.time), 1)
        if backward:
            return Connection(EntityRef(EntityKind.TEMPORAL_EDGE, v.index, w.time), -1)
        raise NotAdjacent(f'{v} and {w} are not time-adjacent')
    if v.time != w.time:
        raise NotAdjacent(f'{v} and {w} are at different time nodes')
    tau = v.time

    if tet is not None:
        local = list(s.tet_vertices[tet])
        if v.index not in local or w.index not in local:
            raise NotAdjacent(f'{v} and {w} are not both vertices of tetrahedron {tet}')
        a, b = local.index(v.index), local.index(w.index)
        k = tables.LOCAL_EDGE_BETWEEN[a, b]
        return Connection(EntityRef(EntityKind.SPATIAL_EDGE, int(s.tet_edges[tet, k]), tau),
                          int(tables.LOCAL_EDGE_SIGN[a, b]))

    diff = np.mod(s.vertex_coords[w.index] - s.vertex_coords[v.index], s.N)
    candidates = []
    if np.all(diff <= 1):
        candidates.append(Connection(
            EntityRef(EntityKind.SPATIAL_EDGE, int(s.edge_index(v.index, tables.offset_index(diff))), tau), 1))
    back = np.mod(-diff, s.N)
    if np.all(back <= 1):
        candidates.append(Connection(
            EntityRef(EntityKind.SPATIAL_EDGE, int(s.edge_index(w.index, tables.offset_index(back))), tau), -1))
    if not candidates:
        raise NotAdjacent(f'no edge joins {v} and {w}')
    if len(candidates) > 1:
        raise NotAdjacent(f'{v} and {w} are joined by several edges; pass the tetrahedron')
    return candidates[0]
