"""
Canonical within-cube and within-tetrahedron tables.

Each cube of the lattice owns one vertex (its base corner), seven edges,
twelve triangles and six Kuhn tetrahedra. Every entity is stored as
base + offsets with offsets taken from the tables below, so orientation and
distinguished points are the same in every cube.
"""

from itertools import permutations

import numpy as np

AXES = np.eye(3, dtype=int)

# Edge directions owned by a cube, in storage order
EDGE_OFFSETS = np.array([
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [1, 0, 1],
    [0, 1, 1],
    [1, 1, 1],
], dtype=int)
EDGES_PER_CUBE = len(EDGE_OFFSETS)


_OFFSET_CODES = EDGE_OFFSETS @ np.array([4, 2, 1])
OFFSET_LOOKUP = -np.ones(8, dtype=int)
OFFSET_LOOKUP[_OFFSET_CODES] = np.arange(EDGES_PER_CUBE)


def offset_index(offset):
    """Storage index of 0/1 edge directions (..., 3); -1 where the offset is zero."""
    return OFFSET_LOOKUP[np.asarray(offset, dtype=int) @ np.array([4, 2, 1])]


def _face_types():
    # {0, u, u + w} with u, w nonzero 0/1 vectors of disjoint support:
    # six (axis, axis), three (axis, rest) and three (pair, rest)
    types = []
    for a, b in permutations(range(3), 2):
        types.append((AXES[a], AXES[b]))
    for a in range(3):
        types.append((AXES[a], 1 - AXES[a]))
    for c in (2, 1, 0):
        types.append((1 - AXES[c], AXES[c]))
    return types


# (u, w) steps of the twelve triangle types; vertices are 0, u, u + w
FACE_STEPS = np.array(_face_types(), dtype=int)
FACES_PER_CUBE = len(FACE_STEPS)

# Vertex offsets of each triangle type in chain order
FACE_VERTEX_OFFSETS = np.stack([
    np.zeros((FACES_PER_CUBE, 3), dtype=int),
    FACE_STEPS[:, 0],
    FACE_STEPS[:, 0] + FACE_STEPS[:, 1],
], axis=1)

# Boundary of a triangle [a, b, c] as the cycle (a,b), (b,c), (c,a);
# the third side is stored as the edge a -> c and enters with sign -1
FACE_EDGE_PAIRS = ((0, 1), (1, 2), (0, 2))
FACE_EDGE_SIGNS = np.array([1, 1, -1], dtype=int)


def face_type(u, w):
    """Storage index of the triangle type with steps (u, w), or -1."""
    hits = np.flatnonzero(
        (FACE_STEPS[:, 0] == np.asarray(u)).all(axis=1) & (FACE_STEPS[:, 1] == np.asarray(w)).all(axis=1)
    )
    return int(hits[0]) if len(hits) else -1


# Kuhn tetrahedra: one per axis permutation, chain 0, e_a, e_a + e_b, (1,1,1)
TET_PERMUTATIONS = np.array(list(permutations(range(3))), dtype=int)
TETS_PER_CUBE = len(TET_PERMUTATIONS)
TET_VERTEX_OFFSETS = np.stack([
    np.cumsum(np.vstack([np.zeros(3, dtype=int), AXES[list(p)]]), axis=0)
    for p in TET_PERMUTATIONS
])
# Orientation of the chain order relative to the ambient one; sign(perm)
TET_SIGNS = np.array([int(round(np.linalg.det(AXES[list(p)]))) for p in TET_PERMUTATIONS], dtype=int)

# Local numbering inside a tetrahedron [p0, p1, p2, p3]
LOCAL_EDGES = np.array([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], dtype=int)
# face k omits local vertex k, remaining vertices in chain order
LOCAL_FACES = np.array([(1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)], dtype=int)
# sign of face k in the boundary of the chain-ordered simplex
LOCAL_FACE_SIGNS = np.array([1, -1, 1, -1], dtype=int)
# distinguished point of each local face and the base of each local edge
LOCAL_FACE_POINTS = LOCAL_FACES[:, 0]
LOCAL_EDGE_BASES = LOCAL_EDGES[:, 0]
LOCAL_EDGE_TARGETS = LOCAL_EDGES[:, 1]


def _local_edge_table():
    table = -np.ones((4, 4), dtype=int)
    signs = np.zeros((4, 4), dtype=int)
    for k, (i, j) in enumerate(LOCAL_EDGES):
        table[i, j] = table[j, i] = k
        signs[i, j], signs[j, i] = 1, -1
    return table, signs


# LOCAL_EDGE_BETWEEN[i, j]: local edge joining local vertices i and j,
# LOCAL_EDGE_SIGN[i, j] = +1 if it runs i -> j
LOCAL_EDGE_BETWEEN, LOCAL_EDGE_SIGN = _local_edge_table()

# Local edges of each local face in FACE_EDGE_PAIRS order
LOCAL_FACE_EDGES = np.array([
    [LOCAL_EDGE_BETWEEN[f[a], f[b]] for a, b in FACE_EDGE_PAIRS] for f in LOCAL_FACES
], dtype=int)
