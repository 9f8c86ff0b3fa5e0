import numpy as np
from django.test import SimpleTestCase

from config.exceptions import DegenerateTet
from mesh import tables
from mesh.builders import build_spacetime
from .assembly import (
    assemble_mass, local_edge_mass, local_face_mass, local_vertex_mass, monomial_integral,
    structure_constants, time_mass,
)
from .forms import (
    barycentric, barycentric_gradients, edge_integral, face_integral, whitney_edge,
    whitney_edge_derivative, whitney_face,
)
from .interpolation import check_stokes, interpolate_edge_dofs
from .quadrature import gauss_legendre, tet_rule, triangle_rule

REFERENCE_TET = np.array([[0.0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])


def random_tet(rng):
    while True:
        v = rng.normal(size=(4, 3))
        if abs(np.linalg.det(v[1:] - v[0])) > 0.1:
            return v


class FunctionField:
    """Continuum field built from two callables on (..., 4) points."""

    def __init__(self, potential, derivatives, periodic=True):
        self._potential = potential
        self._derivatives = derivatives
        self.periodic = periodic

    def potential(self, points):
        return self._potential(points)

    def derivatives(self, points):
        return self._derivatives(points)


def x_dy_field():
    def potential(p):
        out = np.zeros(p.shape[:-1] + (4, 3))
        out[..., 2, 0] = p[..., 1]
        return out

    def derivatives(p):
        out = np.zeros(p.shape[:-1] + (4, 4, 3))
        out[..., 1, 2, 0] = 1.0
        return out

    return FunctionField(potential, derivatives, periodic=False)


def gradient_field():
    # A = dg, g = sin(2 pi t) sin(2 pi x) cos(2 pi y) / (2 pi) on the third component
    k = 2 * np.pi

    def potential(p):
        t, x, y = p[..., 0], p[..., 1], p[..., 2]
        out = np.zeros(p.shape[:-1] + (4, 3))
        out[..., 0, 2] = np.cos(k * t) * np.sin(k * x) * np.cos(k * y)
        out[..., 1, 2] = np.sin(k * t) * np.cos(k * x) * np.cos(k * y)
        out[..., 2, 2] = -np.sin(k * t) * np.sin(k * x) * np.sin(k * y)
        return out

    def derivatives(p):
        t, x, y = p[..., 0], p[..., 1], p[..., 2]
        st, ct = np.sin(k * t), np.cos(k * t)
        sx, cx = np.sin(k * x), np.cos(k * x)
        sy, cy = np.sin(k * y), np.cos(k * y)
        hess = np.zeros(p.shape[:-1] + (4, 4))
        hess[..., 0, 0] = -k * st * sx * cy
        hess[..., 1, 1] = -k * st * sx * cy
        hess[..., 2, 2] = -k * st * sx * cy
        hess[..., 0, 1] = hess[..., 1, 0] = k * ct * cx * cy
        hess[..., 0, 2] = hess[..., 2, 0] = -k * ct * sx * sy
        hess[..., 1, 2] = hess[..., 2, 1] = -k * st * cx * sy
        out = np.zeros(p.shape[:-1] + (4, 4, 3))
        out[..., 2] = hess
        return out

    return FunctionField(potential, derivatives)


def constant_field(c):
    def potential(p):
        out = np.zeros(p.shape[:-1] + (4, 3))
        out[..., 1, :] = c
        return out

    return FunctionField(potential, lambda p: np.zeros(p.shape[:-1] + (4, 4, 3)))


class QuadratureTests(SimpleTestCase):

    def test_gauss_legendre(self):
        rule = gauss_legendre(8)
        self.assertEqual(rule.order, 15)
        self.assertAlmostEqual(rule.weights.sum(), 1.0, places=14)
        self.assertAlmostEqual(rule.integrate(rule.points ** 15), 1.0 / 16, places=14)

    def test_invalid(self):
        with self.assertRaises(ValueError):
            gauss_legendre(0)

    def test_triangle_rule(self):
        pts, w = triangle_rule(gauss_legendre(3))
        self.assertAlmostEqual(w.sum(), 0.5, places=14)
        # int x^2 y = 2! 1! 2 * (1/2) / 5! on the reference triangle
        self.assertAlmostEqual(np.sum(w * pts[:, 0] ** 2 * pts[:, 1]), 2.0 / 120, places=14)

    def test_tet_rule(self):
        pts, w = tet_rule(gauss_legendre(3))
        self.assertAlmostEqual(w.sum(), 1.0 / 6, places=14)
        lam = np.concatenate([1 - pts.sum(axis=1, keepdims=True), pts], axis=1)
        self.assertAlmostEqual(np.sum(w * lam[:, 0] * lam[:, 2]), monomial_integral([1, 1], 1.0 / 6), places=14)


class BarycentricTests(SimpleTestCase):

    def test_reference_gradient(self):
        np.testing.assert_allclose(barycentric_gradients(REFERENCE_TET)[0], [-1, -1, -1], atol=1e-15)

    def test_partition_of_unity(self):
        mesh = build_spacetime(2, 2)
        verts = mesh.spatial.tet_vectors * mesh.h
        np.testing.assert_allclose(barycentric_gradients(verts).sum(axis=-2), 0.0, atol=1e-12)

    def test_kronecker_at_vertices(self):
        rng = np.random.default_rng(20)
        for _ in range(5):
            v = random_tet(rng)
            np.testing.assert_allclose(barycentric(v, v), np.eye(4), atol=1e-12)

    def test_degenerate(self):
        flat = np.array([[0.0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]])
        with self.assertRaises(DegenerateTet):
            barycentric_gradients(flat)


class WhitneyFormTests(SimpleTestCase):

    def setUp(self):
        self.rule = gauss_legendre(4)
        self.tri = triangle_rule(self.rule)
        self.tet = random_tet(np.random.default_rng(21))

    def test_edge_duality(self):
        v = self.tet
        for m, edge in enumerate(tables.LOCAL_EDGES):
            for n, (a, b) in enumerate(tables.LOCAL_EDGES):
                value = edge_integral(lambda x: whitney_edge(v, edge, x), v[a], v[b], self.rule)
                self.assertAlmostEqual(value, float(m == n), places=12)

    def test_edge_at_barycenter(self):
        v = self.tet
        grad = barycentric_gradients(v)
        value = whitney_edge(v, (1, 3), v.mean(axis=0))
        np.testing.assert_allclose(value, (grad[3] - grad[1]) / 4, atol=1e-12)

    def test_face_duality(self):
        v = self.tet
        for k, face in enumerate(tables.LOCAL_FACES):
            for m, other in enumerate(tables.LOCAL_FACES):
                value = face_integral(lambda x: whitney_face(v, face, x), v[list(other)], self.tri)
                self.assertAlmostEqual(value, float(k == m), places=12)

    def test_edge_derivative_is_curl(self):
        v = self.tet
        x0 = v.mean(axis=0)
        step = 1e-6
        for edge in tables.LOCAL_EDGES:
            jac = np.zeros((3, 3))
            for c in range(3):
                dx = np.zeros(3)
                dx[c] = step
                jac[:, c] = (whitney_edge(v, edge, x0 + dx) - whitney_edge(v, edge, x0 - dx)) / (2 * step)
            curl = np.array([jac[2, 1] - jac[1, 2], jac[0, 2] - jac[2, 0], jac[1, 0] - jac[0, 1]])
            np.testing.assert_allclose(curl, whitney_edge_derivative(v, edge), atol=1e-7)


class LocalMassTests(SimpleTestCase):

    def test_vertex_mass(self):
        m = local_vertex_mass(0.3)
        self.assertAlmostEqual(m[0, 1], 0.3 / 20)
        self.assertAlmostEqual(m[2, 2], 0.3 / 10)
        self.assertAlmostEqual(m.sum(), 0.3)
        self.assertAlmostEqual(monomial_integral([1, 1, 0, 0], 0.3), 0.3 / 20)

    def quadrature_gram(self, v, evaluate, count):
        pts, w = tet_rule(gauss_legendre(4))
        x = v[0] + pts @ (v[1:] - v[0])
        jac = abs(np.linalg.det(v[1:] - v[0]))
        values = np.stack([evaluate(k, x) for k in range(count)])
        return jac * np.einsum('kqi,lqi,q->kl', values, values, w)

    def test_edge_mass_matches_quadrature(self):
        v = random_tet(np.random.default_rng(22))
        oracle = self.quadrature_gram(v, lambda k, x: whitney_edge(v, tables.LOCAL_EDGES[k], x), 6)
        np.testing.assert_allclose(local_edge_mass(v), oracle, atol=1e-12)

    def test_face_mass_matches_quadrature(self):
        v = random_tet(np.random.default_rng(23))
        oracle = self.quadrature_gram(v, lambda k, x: whitney_face(v, tables.LOCAL_FACES[k], x), 4)
        np.testing.assert_allclose(local_face_mass(v), oracle, atol=1e-12)


class AssemblyTests(SimpleTestCase):

    def test_total_measure(self):
        data = assemble_mass(build_spacetime(2, 2))
        self.assertAlmostEqual(data.vertex_gram.sum(), 1.0, places=13)
        self.assertAlmostEqual(time_mass(4, 0.25).sum(), 1.0, places=14)

    def test_symmetric_and_positive(self):
        data = assemble_mass(build_spacetime(2, 3))
        rng = np.random.default_rng(24)
        for block in (data.M_ss, data.M_tt, data.M_e_ss, data.M_e_tt):
            self.assertLess(abs(block - block.T).max(), 1e-15)
            for _ in range(3):
                v = rng.normal(size=block.shape[0])
                self.assertGreaterEqual(v @ (block @ v), -1e-12)

    def test_time_sparsity(self):
        mesh = build_spacetime(2, 4)
        data = assemble_mass(mesh)
        F, E = mesh.spatial.n_faces, mesh.spatial.n_edges
        m = data.M_ss.tolil()
        self.assertEqual(m[0:F, 2 * F:3 * F].nnz, 0)
        self.assertGreater(m[0:F, 3 * F:4 * F].nnz, 0)
        tt = data.M_tt.tolil()
        self.assertEqual(tt[0:E, E:].nnz, 0)

    def test_temporal_block_diagonal_at_two_slabs(self):
        mesh = build_spacetime(2, 2)
        data = assemble_mass(mesh)
        E = mesh.spatial.n_edges
        self.assertEqual(data.M_tt.tolil()[0:E, E:].nnz, 0)
        np.testing.assert_allclose(data.time_mass, mesh.dt * np.array([[2 / 3, 1 / 3], [1 / 3, 2 / 3]]))

    def test_structure_constants(self):
        mesh = build_spacetime(2, 2)
        c_face, c_tface, tri, sq = structure_constants(mesh)
        np.testing.assert_allclose(c_face, 1.0 / 6, atol=1e-15)
        np.testing.assert_allclose(c_tface, 1.0 / 4, atol=1e-15)
        np.testing.assert_allclose(tri, -tri.T, atol=1e-15)
        np.testing.assert_allclose(sq, -sq.T, atol=1e-15)
        self.assertAlmostEqual(tri[1, 0], -1.0 / 6)


class InterpolationTests(SimpleTestCase):

    def test_constant_field(self):
        mesh = build_spacetime(3, 3)
        dofs = interpolate_edge_dofs(constant_field(np.array([0.5, -1.0, 2.0])), mesh)
        dx = mesh.spatial.edge_vectors[:, 0] * mesh.h
        np.testing.assert_allclose(dofs.spatial[1], np.outer(dx, [0.5, -1.0, 2.0]), atol=1e-15)
        np.testing.assert_allclose(dofs.temporal, 0.0)

    def test_sinusoidal_axis_edge(self):
        mesh = build_spacetime(4, 4)
        k = 2 * np.pi

        def potential(p):
            out = np.zeros(p.shape[:-1] + (4, 3))
            out[..., 2, 2] = np.sin(k * p[..., 1]) / k
            return out

        dofs = interpolate_edge_dofs(FunctionField(potential, None), mesh, gauss_legendre(8))
        s = mesh.spatial
        y_edges = np.arange(s.n_vertices) * tables.EDGES_PER_CUBE + 1
        x0 = s.vertex_coords[:, 0] * s.h
        np.testing.assert_allclose(dofs.spatial[0, y_edges, 2], s.h * np.sin(k * x0) / k, atol=1e-12)

    def test_zero_field(self):
        mesh = build_spacetime(2, 2)
        dofs = interpolate_edge_dofs(constant_field(np.zeros(3)), mesh)
        self.assertFalse(np.any(dofs.spatial) or np.any(dofs.temporal))


class StokesTests(SimpleTestCase):

    def test_x_dy(self):
        self.assertLessEqual(check_stokes(build_spacetime(4, 4), x_dy_field(), gauss_legendre(8)), 1e-10)

    def test_gradient_field(self):
        self.assertLessEqual(check_stokes(build_spacetime(3, 3), gradient_field()), 1e-12)

    def test_zero_field(self):
        self.assertEqual(check_stokes(build_spacetime(2, 2), constant_field(np.zeros(3))), 0.0)
