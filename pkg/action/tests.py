import numpy as np
from django.test import SimpleTestCase
from scipy import sparse

from config.constants import ACTION_I, ACTION_J, ACTION_L
from config.exceptions import UnknownCase
from gaugefield.continuum import test_field
from gaugefield.fields import (
    DiscreteGaugeField, ScalarField, apply_gauge, apply_gauge_scalar, random_field, random_gauge, random_scalar,
    sample,
)
from liealg import kernels
from mesh import tables
from mesh.builders import build_spacetime
from mesh.entities import EntityKind, EntityRef
from whitney.assembly import assemble_mass
from .actions import (
    ActionBreakdown, action_I, action_J, action_L, evaluate, spatial_cell_terms, temporal_cell_terms,
)
from .curvature import (
    j_curvature_dofs, spatial_curvature, spatial_curvatures, temporal_curvature, temporal_curvatures,
)
from .differentials import action_differential_fd, loop_differential, loop_differential_fd
from .reference import continuum_action, continuum_action_quadrature
from .scalar import scalar_action_F, scalar_action_L


def face_ref(index, time=0):
    return EntityRef(EntityKind.SPATIAL_FACE, index, time)


def tface_ref(index, time=0):
    return EntityRef(EntityKind.TEMPORAL_FACE, index, time)


def abelian(field):
    """Project every dof onto the t^3 direction."""
    spatial, temporal = field.spatial.copy(), field.temporal.copy()
    spatial[..., :2] = 0.0
    temporal[..., :2] = 0.0
    return DiscreteGaugeField(mesh=field.mesh, spatial=spatial, temporal=temporal, temporal_gauge=field.temporal_gauge)


def relative_change(a, b):
    return abs(a - b) / (1.0 + abs(a))


class CurvatureTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.mesh = build_spacetime(2, 2)
        cls.field = random_field(cls.mesh, seed=21, amplitude=0.1)

    def test_zero_field(self):
        field = DiscreteGaugeField.zeros(self.mesh)
        np.testing.assert_array_equal(spatial_curvatures(field), np.broadcast_to(kernels.IDENTITY, (2, 96, 4)))
        np.testing.assert_array_equal(temporal_curvatures(field), np.broadcast_to(kernels.IDENTITY, (2, 56, 4)))

    def test_single_generator(self):
        field = abelian(self.field)
        fe = self.mesh.spatial.face_edges
        total = field.spatial[:, fe[:, 0]] + field.spatial[:, fe[:, 1]] - field.spatial[:, fe[:, 2]]
        np.testing.assert_allclose(spatial_curvatures(field), kernels.qexp(total), atol=1e-15)

    def test_single_matches_batched(self):
        batched = spatial_curvatures(self.field)
        for f in (0, 13, 95):
            np.testing.assert_allclose(spatial_curvature(self.field, face_ref(f, 1)).value.array, batched[1, f], atol=1e-15)
        batched = temporal_curvatures(self.field)
        for e in (0, 30, 55):
            np.testing.assert_allclose(temporal_curvature(self.field, tface_ref(e, 1)).value.array, batched[1, e], atol=1e-15)

    def test_reversal_inverts_every_face(self):
        for f in range(self.mesh.spatial.n_faces):
            forward = spatial_curvature(self.field, face_ref(f))
            backward = spatial_curvature(self.field, face_ref(f), reverse=True)
            self.assertEqual(forward.point, backward.point)
            np.testing.assert_allclose(backward.value.array, forward.value.inverse().array, atol=1e-13)
        for e in range(self.mesh.spatial.n_edges):
            forward = temporal_curvature(self.field, tface_ref(e))
            backward = temporal_curvature(self.field, tface_ref(e), reverse=True)
            np.testing.assert_allclose(backward.value.array, forward.value.inverse().array, atol=1e-13)

    def test_relocation_conjugates_every_face(self):
        s = self.mesh.spatial
        U = self.field.spatial_links[0]
        for f in range(s.n_faces):
            at_a = spatial_curvature(self.field, face_ref(f)).value.array
            at_b = spatial_curvature(self.field, face_ref(f), start=1)
            self.assertEqual(at_b.point.index, s.face_vertices[f, 1])
            np.testing.assert_allclose(at_b.value.array, kernels.qconjugate_by(U[s.face_edges[f, 0]], at_a), atol=1e-13)

    def test_temporal_relocation(self):
        U0 = self.field.temporal_links[0]
        for e in range(self.mesh.spatial.n_edges):
            i = self.mesh.spatial.edge_vertices[e, 0]
            at_i = temporal_curvature(self.field, tface_ref(e)).value.array
            at_next = temporal_curvature(self.field, tface_ref(e), start=3)
            self.assertEqual(at_next.point, EntityRef(EntityKind.VERTEX, int(i), 1))
            # F at i_{tau+1} = U_0^{-1} F U_0 with U_0 running i_tau -> i_{tau+1}
            np.testing.assert_allclose(at_next.value.array, kernels.qconjugate_by(U0[i], at_i), atol=1e-13)

    def test_temporal_gauge_commuting(self):
        mesh = build_spacetime(3, 3)
        spatial = np.zeros((3, mesh.spatial.n_edges, 3))
        spatial[0, 5, 2], spatial[1, 5, 2] = 0.3, -0.1
        field = DiscreteGaugeField(mesh=mesh, spatial=spatial, temporal=np.zeros((3, 27, 3)), temporal_gauge=True)
        np.testing.assert_allclose(
            temporal_curvature(field, tface_ref(5, 0)).value.array, kernels.qexp([0, 0, 0.4]), atol=1e-15,
        )

    def test_time_constant_field(self):
        mesh = build_spacetime(3, 3)
        field = sample(4, mesh)
        np.testing.assert_allclose(temporal_curvatures(field), np.broadcast_to(kernels.IDENTITY, (3, 189, 4)), atol=1e-15)


class JCurvatureTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.mesh = build_spacetime(4, 4)
        cls.mass = assemble_mass(cls.mesh)

    def test_zero_field(self):
        Js, Jt = j_curvature_dofs(DiscreteGaugeField.zeros(self.mesh), self.mass)
        self.assertFalse(np.any(Js) or np.any(Jt))

    def test_abelian_field_is_discrete_exterior_derivative(self):
        field = abelian(random_field(self.mesh, seed=3))
        Js, Jt = j_curvature_dofs(field, self.mass)
        fe = self.mesh.spatial.face_edges
        A = field.spatial
        np.testing.assert_allclose(Js, A[:, fe[:, 0]] + A[:, fe[:, 1]] - A[:, fe[:, 2]], atol=1e-15)
        i, j = self.mesh.spatial.edge_vertices.T
        A0 = field.temporal
        np.testing.assert_allclose(Jt, A + A0[:, j] - np.roll(A, -1, axis=0) - A0[:, i], atol=1e-15)

    def test_constant_field_commutator(self):
        # xy triangle 0 -> x -> x + y: the commutator term integrates F_xy = -t^3 over area h^2 / 2
        Js, _ = j_curvature_dofs(sample(4, self.mesh), self.mass)
        h = self.mesh.h
        xy_faces = np.arange(self.mesh.spatial.n_vertices) * tables.FACES_PER_CUBE
        np.testing.assert_allclose(Js[:, xy_faces], np.broadcast_to([0, 0, -h * h / 2], (4, 64, 3)), atol=1e-14)


class ActionTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.mesh = build_spacetime(4, 4)
        cls.mass = assemble_mass(cls.mesh)
        cls.field = random_field(cls.mesh, seed=31)

    def test_zero_field(self):
        zero = DiscreteGaugeField.zeros(self.mesh)
        for kind in (ACTION_J, ACTION_I, ACTION_L):
            self.assertEqual(evaluate(kind, zero, self.mass).total, 0.0)

    def test_breakdown_total(self):
        parts = ActionBreakdown(temporal=1.0, spatial=2.0, scalar_temporal=3.0, scalar_spatial=4.0)
        self.assertEqual(parts.total, 10.0)
        self.assertEqual(parts.as_dict()['total'], 10.0)
        self.assertEqual((parts + parts).total, 20.0)

    def test_parts_nonnegative(self):
        for kind in (ACTION_J, ACTION_I, ACTION_L):
            parts = evaluate(kind, self.field, self.mass)
            self.assertGreaterEqual(parts.temporal, -1e-10)
            self.assertGreaterEqual(parts.spatial, -1e-10)

    def test_untransported_reduction_matches_sparse_form(self):
        cells = action_L(self.field, self.mass, transport=False)
        sparse_form = action_I(self.field, self.mass)
        self.assertAlmostEqual(cells.spatial, sparse_form.spatial, delta=1e-12 * sparse_form.spatial)
        self.assertAlmostEqual(cells.temporal, sparse_form.temporal, delta=1e-12 * sparse_form.temporal)

    def test_gauge_invariance(self):
        for seed in range(3):
            g = random_gauge(self.mesh, seed=100 + seed, amplitude=0.2)
            moved = apply_gauge(self.field, g)
            before = action_L(self.field, self.mass).total
            self.assertLessEqual(relative_change(before, action_L(moved, self.mass).total), 1e-10)
            self.assertGreater(relative_change(action_I(self.field, self.mass).total, action_I(moved, self.mass).total), 1e-6)
            self.assertGreater(relative_change(action_J(self.field, self.mass).total, action_J(moved, self.mass).total), 1e-6)

    def test_global_conjugation_leaves_J_unchanged(self):
        g = kernels.qexp([0.4, -1.1, 0.7])
        before = action_J(self.field, self.mass).total
        self.assertLessEqual(relative_change(before, action_J(self.field.conjugated(g), self.mass).total), 1e-12)

    def test_case_1_interpolated_action_closed_form(self):
        # a spatially constant A_x^3 makes S^J = sinc^2(pi / N_t) exactly
        mesh = build_spacetime(4, 6)
        value = action_J(sample(1, mesh), assemble_mass(mesh))
        x = np.pi / mesh.N_t
        self.assertAlmostEqual(value.total, (np.sin(x) / x) ** 2, places=12)
        self.assertAlmostEqual(value.spatial, 0.0, places=14)

    def test_case_1_at_N_16(self):
        mesh = build_spacetime(16, 16)
        self.assertLess(abs(action_J(sample(1, mesh), assemble_mass(mesh)).total - 1.0), 0.02)

    def test_case_3_pairwise_differences_shrink(self):
        gaps = []
        for N in (4, 8):
            mesh = build_spacetime(N, N)
            field, mass = sample(3, mesh), assemble_mass(mesh)
            J, I, L = (evaluate(kind, field, mass).total for kind in (ACTION_J, ACTION_I, ACTION_L))
            gaps.append((abs(J - I), abs(I - L)))
        self.assertLess(gaps[1][0], gaps[0][0])
        self.assertLess(gaps[1][1], gaps[0][1])

    def test_locality(self):
        mesh = build_spacetime(3, 3)
        mass = assemble_mass(mesh)
        field = random_field(mesh, seed=41)
        e, node = 40, 1
        spatial = field.spatial.copy()
        spatial[node, e] += [0.05, -0.02, 0.03]
        bumped = DiscreteGaugeField(mesh=mesh, spatial=spatial, temporal=field.temporal)
        touching = np.any(mesh.spatial.tet_edges == e, axis=1)
        slabs = np.zeros(mesh.N_t, dtype=bool)
        slabs[[node - 1, node]] = True
        allowed = slabs[:, None] & touching[None, :]
        for terms in (spatial_cell_terms, temporal_cell_terms):
            changed = terms(bumped, mass) != terms(field, mass)
            self.assertTrue(np.any(changed))
            self.assertFalse(np.any(changed & ~allowed))


class ReferenceTests(SimpleTestCase):

    def test_exact_values(self):
        self.assertEqual(continuum_action(1), 1.0)
        self.assertAlmostEqual(continuum_action(3), 0.5 + 1.0 / (8.0 * (2.0 * np.pi) ** 4), places=15)
        self.assertEqual(continuum_action(4), 0.5)

    def test_unknown_case(self):
        with self.assertRaises(UnknownCase):
            continuum_action(0)

    def test_quadrature_agrees(self):
        for case in (1, 2, 3, 4):
            self.assertAlmostEqual(continuum_action_quadrature(test_field(case)), continuum_action(case), places=9)


class ScalarActionTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.mesh = build_spacetime(3, 3)
        cls.mass = assemble_mass(cls.mesh)
        cls.field = random_field(cls.mesh, seed=51)
        cls.phi = random_scalar(cls.mesh, seed=52)

    def test_constant_scalar_zero_field(self):
        phi = ScalarField.constant(self.mesh, [0.3 - 1j, 2.0])
        zero = DiscreteGaugeField.zeros(self.mesh)
        self.assertEqual(scalar_action_L(phi, zero, self.mass).total, 0.0)
        self.assertEqual(scalar_action_F(phi, zero, self.mass).total, 0.0)

    def test_gauge_invariance(self):
        g = random_gauge(self.mesh, seed=53)
        moved_phi, moved = apply_gauge_scalar(self.phi, g), apply_gauge(self.field, g)
        before = scalar_action_L(self.phi, self.field, self.mass)
        after = scalar_action_L(moved_phi, moved, self.mass)
        self.assertLessEqual(relative_change(before.total, after.total), 1e-10)
        self.assertEqual(before.temporal, 0.0)
        untransported = scalar_action_F(self.phi, self.field, self.mass).total
        self.assertGreater(relative_change(untransported, scalar_action_F(moved_phi, moved, self.mass).total), 1e-6)

    def test_zero_field_reduces_to_untransported(self):
        zero = DiscreteGaugeField.zeros(self.mesh)
        L = scalar_action_L(self.phi, zero, self.mass)
        F = scalar_action_F(self.phi, zero, self.mass)
        self.assertAlmostEqual(L.scalar_spatial, F.scalar_spatial, delta=1e-12 * F.scalar_spatial)
        self.assertAlmostEqual(L.scalar_temporal, F.scalar_temporal, delta=1e-12 * F.scalar_temporal)

    def test_hat_pattern_against_direct_assembly(self):
        mesh = build_spacetime(2, 2)
        mass = assemble_mass(mesh)
        s = mesh.spatial
        values = np.zeros((2, s.n_vertices, 2), dtype=complex)
        values[0, 3] = [1.0, 0.5j]
        phi = ScalarField(mesh=mesh, values=values)
        # plain difference operators on the (time node, vertex) ordering
        V, E = s.n_vertices, s.n_edges
        rows = np.arange(2 * E)
        base = np.repeat(np.arange(2), E) * V
        i, j = np.tile(s.edge_vertices[:, 0], 2), np.tile(s.edge_vertices[:, 1], 2)
        Ds = sparse.csr_matrix(
            (np.r_[np.ones(2 * E), -np.ones(2 * E)], (np.r_[rows, rows], np.r_[base + j, base + i])),
            shape=(2 * E, 2 * V),
        )
        rows = np.arange(2 * V)
        Dt = sparse.csr_matrix(
            (np.r_[np.ones(2 * V), -np.ones(2 * V)], (np.r_[rows, rows], np.r_[(rows + V) % (2 * V), rows])),
            shape=(2 * V, 2 * V),
        )
        flat = values.reshape(-1, 2)
        spatial = np.real(np.sum(np.conj(Ds @ flat) * (mass.M_e_ss @ (Ds @ flat))))
        temporal = np.real(np.sum(np.conj(Dt @ flat) * (mass.M_e_tt @ (Dt @ flat))))
        out = scalar_action_L(phi, DiscreteGaugeField.zeros(mesh), mass)
        self.assertAlmostEqual(out.scalar_spatial, spatial, places=12)
        self.assertAlmostEqual(out.scalar_temporal, temporal, places=12)


class DifferentialTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.mesh = build_spacetime(3, 3)
        cls.mass = assemble_mass(cls.mesh)

    def test_zero_direction(self):
        field = random_field(self.mesh, seed=61)
        zero = DiscreteGaugeField.zeros(self.mesh, temporal_gauge=False)
        for kind in (ACTION_J, ACTION_I, ACTION_L):
            self.assertEqual(action_differential_fd(kind, field, zero, self.mass), 0.0)

    def test_abelian_quadratic_form(self):
        base = abelian(random_field(self.mesh, seed=62))
        direction = abelian(random_field(self.mesh, seed=63))
        Js, Jt = j_curvature_dofs(base, self.mass)
        dJs, dJt = j_curvature_dofs(direction, self.mass)
        expected = (
            np.sum(Js.reshape(-1, 3) * (self.mass.M_ss @ dJs.reshape(-1, 3)))
            + np.sum(Jt.reshape(-1, 3) * (self.mass.M_tt @ dJt.reshape(-1, 3)))
        )
        self.assertAlmostEqual(action_differential_fd(ACTION_J, base, direction, self.mass), expected, delta=1e-8)

    def test_central_difference_order(self):
        field = random_field(self.mesh, seed=64)
        direction = random_field(self.mesh, seed=65)
        d = [action_differential_fd(ACTION_L, field, direction, self.mass, step=eps) for eps in (4e-2, 2e-2, 1e-2)]
        ratio = abs(d[0] - d[1]) / abs(d[1] - d[2])
        self.assertGreater(ratio, 3.0)
        self.assertLess(ratio, 5.0)

    def test_loop_differential_at_zero_field(self):
        zero = DiscreteGaugeField.zeros(self.mesh, temporal_gauge=False)
        direction = random_field(self.mesh, seed=66)
        fe = self.mesh.spatial.face_edges[7]
        total = direction.spatial[1, fe[0]] + direction.spatial[1, fe[1]] - direction.spatial[1, fe[2]]
        np.testing.assert_allclose(
            loop_differential(zero, face_ref(7, 1), direction), kernels.algebra_matrix(total), atol=1e-12,
        )

    def test_loop_differential_commuting(self):
        field = abelian(random_field(self.mesh, seed=67))
        direction = abelian(random_field(self.mesh, seed=68))
        fe = self.mesh.spatial.face_edges[11]
        F = spatial_curvature(field, face_ref(11)).value.matrix
        total = direction.spatial[0, fe[0]] + direction.spatial[0, fe[1]] - direction.spatial[0, fe[2]]
        np.testing.assert_allclose(
            loop_differential(field, face_ref(11), direction), F @ kernels.algebra_matrix(total), atol=1e-12,
        )

    def test_loop_differential_matches_finite_difference(self):
        field = random_field(self.mesh, seed=69, amplitude=0.03)
        direction = random_field(self.mesh, seed=70, amplitude=1.0)
        for face in (face_ref(3, 0), face_ref(40, 2), tface_ref(12, 1), tface_ref(60, 2)):
            np.testing.assert_allclose(
                loop_differential(field, face, direction), loop_differential_fd(field, face, direction), atol=1e-7,
            )
