"""
Exact mass matrices and structure constants on the spacetime mesh.

Spatial Gram matrices are assembled from per-tetrahedron tables computed
with the barycentric monomial formula

    int_T prod lambda_i^{a_i} dV = 3! vol(T) prod a_i! / (sum a_i + 3)!

Every tet of the Kuhn mesh is a translate of one of six canonical tets, so
the tables are computed six times and tiled. Time enters through the hat
function overlaps of each slab, so every spacetime block is a Kronecker
product of a time factor and a spatial Gram matrix.
"""

from dataclasses import dataclass, field
from functools import cached_property
from math import factorial

import numpy as np
from scipy import sparse

from config.logger import get_logger, log_duration
from mesh import tables
from .forms import barycentric_gradients

logger = get_logger(__name__)


def monomial_integral(exponents, volume, dim=3):
    """int prod lambda_i^{a_i} over a dim-simplex of the given measure."""
    exponents = list(exponents)
    num = factorial(dim) * np.prod([factorial(a) for a in exponents])
    return volume * num / factorial(sum(exponents) + dim)


def local_vertex_mass(volume):
    """int lambda_a lambda_b = vol (1 + delta_ab) / 20."""
    return volume * (np.ones((4, 4)) + np.eye(4)) / 20.0


def local_edge_mass(vertices):
    """6x6 Gram matrix of the Whitney 1-forms of one tet, LOCAL_EDGES order."""
    grad = barycentric_gradients(vertices)
    g = grad @ grad.T
    volume = abs(np.linalg.det(vertices[1:] - vertices[0])) / 6.0
    p = local_vertex_mass(volume)
    a, b = tables.LOCAL_EDGES[:, 0], tables.LOCAL_EDGES[:, 1]
    # (l_a dl_b - l_b dl_a) . (l_c dl_d - l_d dl_c)
    return (
        g[b][:, b] * p[a][:, a]
        - g[b][:, a] * p[a][:, b]
        - g[a][:, b] * p[b][:, a]
        + g[a][:, a] * p[b][:, b]
    )


def _face_proxy_terms(grad):
    # proxy of the face form of face k: 2 sum_cyc lambda_i (grad_j x grad_k)
    terms = np.zeros((4, 3, 3))
    vertex = np.zeros((4, 3), dtype=int)
    for k, (i, j, l) in enumerate(tables.LOCAL_FACES):
        for n, (a, b, c) in enumerate(((i, j, l), (j, l, i), (l, i, j))):
            vertex[k, n] = a
            terms[k, n] = 2.0 * np.cross(grad[b], grad[c])
    return vertex, terms


def local_face_mass(vertices):
    """4x4 Gram matrix of the Whitney 2-forms of one tet, face k omits vertex k."""
    grad = barycentric_gradients(vertices)
    volume = abs(np.linalg.det(vertices[1:] - vertices[0])) / 6.0
    p = local_vertex_mass(volume)
    vertex, terms = _face_proxy_terms(grad)
    dots = np.einsum('kni,lmi->knlm', terms, terms)
    weights = p[vertex[:, :, None, None], vertex[None, None, :, :]]
    return np.einsum('knlm,knlm->kl', dots, weights)


def time_mass(n_t, dt):
    """Hat-function overlaps int P_tau P_tau' dt summed over the periodic slabs."""
    k = np.zeros((n_t, n_t))
    for tau in range(n_t):
        nodes = [tau, (tau + 1) % n_t]
        k[np.ix_(nodes, nodes)] += dt * np.array([[1.0 / 3.0, 1.0 / 6.0], [1.0 / 6.0, 1.0 / 3.0]])
    return k


def triangle_wedge_constants():
    """
    C_ee' = int_f lambda_e ^ lambda_e' on a positively oriented triangle with
    edges in cycle order (0,1), (1,2), (2,0).
    """
    def eps(i, j):
        if i == j:
            return 0
        return 1 if (j - i) % 3 == 1 else -1

    def pair(i, j):
        # int lambda_i lambda_j against the unit-total-two form measure
        return (1.0 + (i == j)) / 24.0

    edges = [(0, 1), (1, 2), (2, 0)]
    c = np.zeros((3, 3))
    for m, (p, q) in enumerate(edges):
        for n, (r, s) in enumerate(edges):
            c[m, n] = (
                pair(p, r) * eps(q, s) - pair(p, s) * eps(q, r)
                - pair(q, r) * eps(p, s) + pair(q, s) * eps(p, r)
            )
    return c


def square_wedge_constants():
    """
    C for the four sides of a temporal face e x I in cycle order
    i -> j, j -> j', j' -> i', i' -> i, with s along e and r along time.
    Each side form is (coefficient polynomial in s, r) times ds or dr.
    """
    # (ds coefficient, dr coefficient) as bilinear coefficient tables c[p, q] of s^p r^q
    sides = [
        (np.array([[1.0, -1.0], [0.0, 0.0]]), np.zeros((2, 2))),   # (1 - r) ds
        (np.zeros((2, 2)), np.array([[0.0, 0.0], [1.0, 0.0]])),    # s dr
        (np.array([[0.0, -1.0], [0.0, 0.0]]), np.zeros((2, 2))),   # -r ds
        (np.zeros((2, 2)), np.array([[-1.0, 0.0], [1.0, 0.0]])),   # -(1 - s) dr
    ]

    def integrate(a, b):
        # int_0^1 int_0^1 a(s, r) b(s, r) ds dr for bilinear tables
        total = 0.0
        for p1 in range(2):
            for q1 in range(2):
                for p2 in range(2):
                    for q2 in range(2):
                        total += a[p1, q1] * b[p2, q2] / ((p1 + p2 + 1) * (q1 + q2 + 1))
        return total

    c = np.zeros((4, 4))
    for m, (ds1, dr1) in enumerate(sides):
        for n, (ds2, dr2) in enumerate(sides):
            # ds ^ dr = +1
            c[m, n] = integrate(ds1, dr2) - integrate(dr1, ds2)
    return c


@dataclass(frozen=True, eq=False)
class MassData:
    """
    Kronecker factors and local tables of the spacetime mass matrices.

    Spatial Gram matrices (sparse, symmetric):
        vertex_gram (V, V), edge_gram (E, E), face_gram (F, F)
    Time factors:
        time_mass (N_t, N_t) hat overlaps; temporal blocks use I / dt
    Local tables per canonical tet type (tet index % 6):
        local_vertex (6, 4, 4), local_edge (6, 6, 6), local_face (6, 4, 4)
    Structure constants:
        C_face (F, 3) for the pairs (e1, e2), (e2, e3), (e3, e1) of each spatial face
        C_tface (E, 4) for (e1, e2), (e2, e3), (e3, e4), (e4, e1) of each temporal face
        C_face_local (3, 3), C_tface_local (4, 4) full antisymmetric tables
    Full blocks over (time node, entity) ordering are built on first access.
    """

    mesh: object = field(repr=False)
    vertex_gram: sparse.csr_matrix = field(repr=False)
    edge_gram: sparse.csr_matrix = field(repr=False)
    face_gram: sparse.csr_matrix = field(repr=False)
    time_mass: np.ndarray = field(repr=False)
    local_vertex: np.ndarray = field(repr=False)
    local_edge: np.ndarray = field(repr=False)
    local_face: np.ndarray = field(repr=False)
    C_face: np.ndarray = field(repr=False)
    C_tface: np.ndarray = field(repr=False)
    C_face_local: np.ndarray = field(repr=False)
    C_tface_local: np.ndarray = field(repr=False)

    @property
    def dt(self):
        return self.mesh.dt

    @cached_property
    def M_ss(self):
        return sparse.kron(sparse.csr_matrix(self.time_mass), self.face_gram, format='csr')

    @cached_property
    def M_e_ss(self):
        return sparse.kron(sparse.csr_matrix(self.time_mass), self.edge_gram, format='csr')

    @cached_property
    def M_tt(self):
        return sparse.kron(sparse.identity(self.mesh.N_t) / self.dt, self.edge_gram, format='csr')

    @cached_property
    def M_e_tt(self):
        return sparse.kron(sparse.identity(self.mesh.N_t) / self.dt, self.vertex_gram, format='csr')


def _scatter(local, index, size):
    # local (T, k, k) tables, index (T, k) global entity numbers
    rows = np.repeat(index, index.shape[1], axis=1).ravel()
    cols = np.tile(index, (1, index.shape[1])).ravel()
    return sparse.coo_matrix((local.ravel(), (rows, cols)), shape=(size, size)).tocsr()


def structure_constants(mesh):
    """
    Per-face C tables.

    Returns:
        tuple: (C_face (F, 3), C_tface (E, 4), local 3x3 table, local 4x4 table)
    """
    tri = triangle_wedge_constants()
    sq = square_wedge_constants()
    cyc3 = np.array([tri[0, 1], tri[1, 2], tri[2, 0]])
    cyc4 = np.array([sq[0, 1], sq[1, 2], sq[2, 3], sq[3, 0]])
    s = mesh.spatial
    return np.tile(cyc3, (s.n_faces, 1)), np.tile(cyc4, (s.n_edges, 1)), tri, sq


def assemble_mass(mesh):
    """Assemble MassData for a SpacetimeMesh."""
    s = mesh.spatial
    with log_duration(logger, f"assemble_mass {mesh}"):
        canonical = tables.TET_VERTEX_OFFSETS * s.h
        volume = s.tet_volume
        local_vertex = np.stack([local_vertex_mass(volume) for _ in canonical])
        local_edge = np.stack([local_edge_mass(v) for v in canonical])
        local_face = np.stack([local_face_mass(v) for v in canonical])

        kinds = np.arange(s.n_tets) % tables.TETS_PER_CUBE
        vertex_gram = _scatter(local_vertex[kinds], s.tet_vertices, s.n_vertices)
        edge_gram = _scatter(local_edge[kinds], s.tet_edges, s.n_edges)
        face_gram = _scatter(local_face[kinds], s.tet_faces, s.n_faces)
        c_face, c_tface, tri, sq = structure_constants(mesh)

        data = MassData(
            mesh=mesh,
            vertex_gram=vertex_gram,
            edge_gram=edge_gram,
            face_gram=face_gram,
            time_mass=time_mass(mesh.N_t, mesh.dt),
            local_vertex=local_vertex,
            local_edge=local_edge,
            local_face=local_face,
            C_face=c_face,
            C_tface=c_tface,
            C_face_local=tri,
            C_tface_local=sq,
        )
    logger.info(
        f"Mass data for {mesh}: nnz vertex={vertex_gram.nnz} edge={edge_gram.nnz} face={face_gram.nnz}"
    )
    return data
