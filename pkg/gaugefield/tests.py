import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from config.constants import CONTINUUM_ACTIONS
from config.exceptions import IOFailure, InvalidSize, SGTError, UnknownCase
from liealg import kernels
from mesh import tables
from mesh.builders import build_spacetime
from whitney.quadrature import gauss_legendre
from .continuum import CallableField, PolynomialField, test_field
from .fields import (
    DiscreteGaugeField, GaugeTransform, ScalarField, apply_gauge, apply_gauge_scalar, covariant_difference,
    edge_ref, link, load_snapshot, random_field, random_gauge, random_scalar, sample, save_snapshot,
    spatial_differences, temporal_differences, temporal_edge_ref,
)


def axis_edges(mesh, direction):
    return np.arange(mesh.spatial.n_vertices) * tables.EDGES_PER_CUBE + direction


class TestFieldCatalogueTests(SimpleTestCase):

    def test_exact_values(self):
        self.assertEqual(test_field(1).exact_action, 1.0)
        self.assertEqual(test_field(2).exact_action, 1.0)
        self.assertAlmostEqual(test_field(3).exact_action, 0.50008019, places=8)
        self.assertEqual(test_field(4).exact_action, 0.5)

    def test_unknown_case(self):
        with self.assertRaises(UnknownCase):
            test_field(5)

    def test_all_cases_in_temporal_gauge(self):
        rng = np.random.default_rng(3)
        p = rng.uniform(size=(10, 4))
        for case in CONTINUUM_ACTIONS:
            np.testing.assert_array_equal(test_field(case).potential(p)[:, 0], 0.0)

    def test_derivatives_match_finite_differences(self):
        rng = np.random.default_rng(5)
        p = rng.uniform(size=(6, 4))
        for case in CONTINUUM_ACTIONS:
            field = test_field(case)
            fd = CallableField(field.potential, step=1e-6).derivatives(p)
            np.testing.assert_allclose(field.derivatives(p), fd, atol=1e-7)

    def test_polynomial_field(self):
        # A_x^1 = x^2 t
        coeff = np.zeros((4, 3))
        coeff[1, 0] = 1.0
        field = PolynomialField({(1, 2, 0, 0): coeff})
        p = np.array([[0.5, 0.3, 0.2, 0.1]])
        self.assertAlmostEqual(field.potential(p)[0, 1, 0], 0.5 * 0.09)
        self.assertAlmostEqual(field.derivatives(p)[0, 1, 1, 0], 2 * 0.3 * 0.5)
        self.assertAlmostEqual(field.derivatives(p)[0, 0, 1, 0], 0.09)
        self.assertFalse(field.periodic)


class SampleTests(SimpleTestCase):

    def test_case_4_constant(self):
        mesh = build_spacetime(4, 4)
        field = sample(4, mesh)
        self.assertTrue(field.temporal_gauge)
        np.testing.assert_allclose(field.spatial[:, axis_edges(mesh, 0)], np.broadcast_to([mesh.h, 0, 0], (4, 64, 3)), atol=1e-14)
        np.testing.assert_allclose(field.spatial[:, axis_edges(mesh, 1)], np.broadcast_to([0, mesh.h, 0], (4, 64, 3)), atol=1e-14)
        np.testing.assert_allclose(field.spatial[:, axis_edges(mesh, 3)], np.broadcast_to([mesh.h, mesh.h, 0], (4, 64, 3)), atol=1e-14)
        np.testing.assert_allclose(field.spatial[:, axis_edges(mesh, 2)], 0.0, atol=1e-14)

    def test_case_1_time_dependence(self):
        mesh = build_spacetime(4, 8)
        field = sample(1, mesh)
        x_edges = axis_edges(mesh, 0)
        for tau in range(mesh.N_t):
            expected = mesh.h * np.sin(2 * np.pi * tau * mesh.dt) / np.pi
            np.testing.assert_allclose(field.spatial[tau, x_edges, 2], expected, atol=1e-14)
            np.testing.assert_allclose(field.spatial[tau, axis_edges(mesh, 1)], 0.0, atol=1e-15)
        np.testing.assert_array_equal(field.temporal, 0.0)

    def test_polynomial_exactness(self):
        # A_x^1 = x^7: 8-point Gauss-Legendre integrates degree 15 exactly
        mesh = build_spacetime(4, 2)
        coeff = np.zeros((4, 3))
        coeff[1, 0] = 1.0
        field = sample(PolynomialField({(0, 7, 0, 0): coeff}), mesh, gauss_legendre(8))
        # segments are unwrapped from the base vertex, so seam edges end at x = 1
        x0 = mesh.spatial.vertex_coords[:, 0] * mesh.h
        exact = ((x0 + mesh.h) ** 8 - x0 ** 8) / 8
        np.testing.assert_allclose(field.spatial[0, axis_edges(mesh, 0), 0], exact, atol=1e-13)

    def test_zero_field(self):
        mesh = build_spacetime(2, 2)
        field = sample(PolynomialField({}), mesh)
        self.assertFalse(np.any(field.spatial) or np.any(field.temporal))


class DiscreteGaugeFieldTests(SimpleTestCase):

    def test_shape_validation(self):
        mesh = build_spacetime(2, 2)
        with self.assertRaises(InvalidSize):
            DiscreteGaugeField(mesh=mesh, spatial=np.zeros((2, 3, 3)), temporal=np.zeros((2, 8, 3)))

    def test_temporal_gauge_flag_checked(self):
        mesh = build_spacetime(2, 2)
        with self.assertRaises(SGTError):
            DiscreteGaugeField(
                mesh=mesh, spatial=np.zeros((2, 56, 3)), temporal=np.ones((2, 8, 3)), temporal_gauge=True,
            )

    def test_link_reversal(self):
        mesh = build_spacetime(2, 2)
        field = random_field(mesh, seed=1, amplitude=0.7)
        for ref in (edge_ref(11, 1), temporal_edge_ref(3, 0)):
            product = link(field, ref) @ link(field, ref, -1)
            np.testing.assert_allclose(product.matrix, np.eye(2), atol=1e-14)

    def test_zero_and_temporal_gauge_links(self):
        mesh = build_spacetime(2, 2)
        field = DiscreteGaugeField.zeros(mesh)
        np.testing.assert_array_equal(link(field, edge_ref(0)).array, kernels.IDENTITY)
        np.testing.assert_array_equal(link(sample(1, mesh), temporal_edge_ref(5, 1)).array, kernels.IDENTITY)


class GaugeTransformTests(SimpleTestCase):

    def setUp(self):
        self.mesh = build_spacetime(3, 3)
        self.field = random_field(self.mesh, seed=7, amplitude=0.3)

    def test_identity(self):
        out = apply_gauge(self.field, GaugeTransform.identity(self.mesh))
        np.testing.assert_allclose(out.spatial, self.field.spatial, atol=1e-14)
        np.testing.assert_allclose(out.temporal, self.field.temporal, atol=1e-14)

    def test_inverse_round_trip(self):
        g = random_gauge(self.mesh, seed=2, amplitude=0.2)
        back = apply_gauge(apply_gauge(self.field, g), g.inverse())
        np.testing.assert_allclose(back.spatial, self.field.spatial, atol=1e-12)
        np.testing.assert_allclose(back.temporal, self.field.temporal, atol=1e-12)

    def test_left_action(self):
        g = random_gauge(self.mesh, seed=3)
        h = random_gauge(self.mesh, seed=4)
        twice = apply_gauge(apply_gauge(self.field, g), h)
        once = apply_gauge(self.field, h @ g)
        np.testing.assert_allclose(twice.spatial_links, once.spatial_links, atol=1e-12)
        np.testing.assert_allclose(twice.temporal_links, once.temporal_links, atol=1e-12)

    def test_link_relation(self):
        g = random_gauge(self.mesh, seed=9)
        out = apply_gauge(self.field, g)
        e = 17
        i, j = self.mesh.spatial.edge_vertices[e]
        expected = g.at(i, 1) @ link(self.field, edge_ref(e, 1)) @ g.at(j, 1).inverse()
        np.testing.assert_allclose(link(out, edge_ref(e, 1)).array, expected.array, atol=1e-13)

    def test_temporal_gauge_closure(self):
        field = sample(3, self.mesh)
        one = random_gauge(self.mesh, seed=5).values[:1]
        static = GaugeTransform(mesh=self.mesh, values=np.repeat(one, self.mesh.N_t, axis=0))
        self.assertTrue(static.is_time_independent)
        out = apply_gauge(field, static)
        self.assertTrue(out.temporal_gauge)
        np.testing.assert_array_equal(out.temporal, 0.0)
        self.assertFalse(apply_gauge(field, random_gauge(self.mesh, seed=5)).temporal_gauge)

    def test_random_determinism(self):
        a = random_gauge(self.mesh, seed=11, amplitude=0.1)
        b = random_gauge(self.mesh, seed=11, amplitude=0.1)
        c = random_gauge(self.mesh, seed=12, amplitude=0.1)
        np.testing.assert_array_equal(a.values, b.values)
        self.assertFalse(np.array_equal(a.values, c.values))
        self.assertTrue(a.check())

    def test_zero_amplitude(self):
        g = random_gauge(self.mesh, seed=1, amplitude=0.0)
        np.testing.assert_array_equal(g.values, GaugeTransform.identity(self.mesh).values)
        f = random_field(self.mesh, seed=1, amplitude=0.0)
        self.assertFalse(np.any(f.spatial) or np.any(f.temporal))

    def test_random_dof_norms(self):
        f = random_field(self.mesh, seed=6, amplitude=0.2)
        np.testing.assert_allclose(np.linalg.norm(f.spatial, axis=-1), 0.2, atol=1e-15)


class CovariantDifferenceTests(SimpleTestCase):

    def setUp(self):
        self.mesh = build_spacetime(3, 3)

    def test_constant_scalar_zero_field(self):
        phi = ScalarField.constant(self.mesh, [1.0 + 2j, -0.5j])
        field = DiscreteGaugeField.zeros(self.mesh)
        np.testing.assert_array_equal(spatial_differences(phi, field), 0.0)
        np.testing.assert_array_equal(temporal_differences(phi, field), 0.0)

    def test_plain_difference_at_zero_field(self):
        phi = random_scalar(self.mesh, seed=1)
        field = DiscreteGaugeField.zeros(self.mesh)
        i, j = self.mesh.spatial.edge_vertices[20]
        np.testing.assert_allclose(
            covariant_difference(phi, field, edge_ref(20, 2)), phi.values[2, j] - phi.values[2, i], atol=1e-15,
        )

    def test_single_matches_batched(self):
        phi = random_scalar(self.mesh, seed=2)
        field = random_field(self.mesh, seed=3)
        np.testing.assert_allclose(
            covariant_difference(phi, field, edge_ref(31, 1)), spatial_differences(phi, field)[1, 31], atol=1e-15,
        )
        np.testing.assert_allclose(
            covariant_difference(phi, field, temporal_edge_ref(4, 2)), temporal_differences(phi, field)[2, 4],
            atol=1e-15,
        )

    def test_reversed_edge(self):
        phi = random_scalar(self.mesh, seed=2)
        field = random_field(self.mesh, seed=3)
        i, j = self.mesh.spatial.edge_vertices[8]
        back = kernels.qexp(field.spatial[0, 8])
        expected = phi.values[0, i] - kernels.qapply(back, phi.values[0, j])
        np.testing.assert_allclose(covariant_difference(phi, field, edge_ref(8), -1), expected, atol=1e-15)

    def test_gauge_equivariance(self):
        phi = random_scalar(self.mesh, seed=4)
        field = random_field(self.mesh, seed=5)
        g = random_gauge(self.mesh, seed=6)
        moved_phi, moved = apply_gauge_scalar(phi, g), apply_gauge(field, g)
        j = self.mesh.spatial.edge_vertices[:, 1]
        np.testing.assert_allclose(
            spatial_differences(moved_phi, moved),
            kernels.qapply(g.values[:, j], spatial_differences(phi, field)),
            atol=1e-12,
        )
        np.testing.assert_allclose(
            temporal_differences(moved_phi, moved),
            kernels.qapply(np.roll(g.values, -1, axis=0), temporal_differences(phi, field)),
            atol=1e-12,
        )


class SnapshotTests(SimpleTestCase):

    def test_save_and_load(self):
        mesh = build_spacetime(2, 3)
        field = random_field(mesh, seed=8)
        with tempfile.TemporaryDirectory() as tmp:
            path = save_snapshot(field, Path(tmp) / 'field.npz')
            loaded = load_snapshot(path)
        self.assertIs(loaded.mesh, mesh)
        np.testing.assert_array_equal(loaded.spatial, field.spatial)
        np.testing.assert_array_equal(loaded.temporal, field.temporal)

    def test_missing_file(self):
        with self.assertRaises(IOFailure):
            load_snapshot('/nonexistent/dir/field.npz')
