from collections import Counter
from io import StringIO

import numpy as np
from django.core.management import call_command
from django.test import SimpleTestCase

from config.exceptions import InvalidRef, InvalidSize, NotAdjacent
from . import tables
from .builders import build_spacetime, build_spatial
from .entities import EntityKind, EntityRef, connecting_edge, incidence


def vertex_ref(v, tau=0):
    return EntityRef(EntityKind.VERTEX, int(v), tau)


class SpatialMeshTests(SimpleTestCase):

    def test_counts_and_euler_characteristic(self):
        s = build_spatial(2)
        self.assertEqual((s.n_vertices, s.n_edges, s.n_faces, s.n_tets), (8, 56, 96, 48))
        self.assertEqual(s.n_vertices - s.n_edges + s.n_faces - s.n_tets, 0)
        self.assertEqual(build_spatial(4).n_tets, 384)

    def test_euler_characteristic_by_enumeration(self):
        s = build_spatial(3)
        verts = set(s.tet_vertices.ravel())
        edges = {frozenset(s.tet_vertices[t, list(e)]) for t in range(s.n_tets) for e in tables.LOCAL_EDGES}
        faces = {frozenset(s.tet_vertices[t, list(f)]) for t in range(s.n_tets) for f in tables.LOCAL_FACES}
        self.assertEqual((len(verts), len(edges), len(faces)), (27, 189, 324))
        self.assertEqual(len(verts) - len(edges) + len(faces) - s.n_tets, 0)
        # at N=2 parallel edges share vertex pairs, so count stored indices instead
        s2 = build_spatial(2)
        self.assertEqual(len(np.unique(s2.tet_edges)), s2.n_edges)
        self.assertEqual(len(np.unique(s2.tet_faces)), s2.n_faces)

    def test_every_face_in_two_tets_with_opposite_orientation(self):
        for n in (2, 3):
            s = build_spatial(n)
            self.assertTrue(np.all(np.bincount(s.tet_faces.ravel(), minlength=s.n_faces) == 2))
            induced = np.zeros(s.n_faces, dtype=int)
            np.add.at(induced, s.tet_faces.ravel(), s.tet_face_signs().ravel())
            self.assertTrue(np.all(induced == 0))

    def test_tet_volumes(self):
        s = build_spatial(4)
        np.testing.assert_allclose(s.signed_volumes() * s.tet_signs, s.h ** 3 / 6, rtol=1e-12)

    def test_edge_tables_consistent(self):
        s = build_spatial(3)
        base = s.vertex_coords[s.edge_vertices[:, 0]]
        np.testing.assert_array_equal(s.vertex_index(base + s.edge_vectors), s.edge_vertices[:, 1])
        # face edges run between the face vertices in cycle order
        fe = s.edge_vertices[s.face_edges]
        np.testing.assert_array_equal(fe[:, 0], s.face_vertices[:, [0, 1]])
        np.testing.assert_array_equal(fe[:, 1], s.face_vertices[:, [1, 2]])
        np.testing.assert_array_equal(fe[:, 2], s.face_vertices[:, [0, 2]])
        te = s.edge_vertices[s.tet_edges]
        np.testing.assert_array_equal(te[..., 0], s.tet_vertices[:, tables.LOCAL_EDGE_BASES])
        np.testing.assert_array_equal(te[..., 1], s.tet_vertices[:, tables.LOCAL_EDGE_TARGETS])
        np.testing.assert_array_equal(s.face_vertices[s.tet_faces], s.tet_vertices[:, tables.LOCAL_FACES])

    def test_distinguished_point_is_face_vertex(self):
        s = build_spatial(2)
        np.testing.assert_array_equal(
            s.face_vertices[s.tet_faces][..., 0], s.tet_vertices[:, tables.LOCAL_FACE_POINTS]
        )

    def test_deterministic(self):
        a = build_spatial(3)
        build_spatial.cache_clear()
        b = build_spatial(3)
        self.assertIsNot(a, b)
        for name in ('edge_vertices', 'face_vertices', 'face_edges', 'tet_vertices', 'tet_edges', 'tet_faces'):
            np.testing.assert_array_equal(getattr(a, name), getattr(b, name))

    def test_invalid_size(self):
        with self.assertRaises(InvalidSize):
            build_spatial(1)
        with self.assertRaises(InvalidSize):
            build_spacetime(4, 1)


class SpacetimeMeshTests(SimpleTestCase):

    def test_counts(self):
        m = build_spacetime(4, 4)
        self.assertEqual(m.n_temporal_faces // m.N_t, 448)
        self.assertEqual(m.n_temporal_edges // m.N_t, 64)
        self.assertEqual(build_spacetime(2, 2).n_prisms, 96)
        self.assertEqual(m.dt / m.h, 1.0)

    def test_time_wrap(self):
        m = build_spacetime(2, 3)
        self.assertEqual(int(m.next_time(2)), 0)
        bnd = incidence(m, EntityRef(EntityKind.TEMPORAL_EDGE, 5, 2))
        self.assertEqual(bnd, [(vertex_ref(5, 2), -1), (vertex_ref(5, 0), 1)])


class IncidenceTests(SimpleTestCase):

    def setUp(self):
        self.mesh = build_spacetime(2, 2)

    def test_spatial_face_cycle(self):
        s = self.mesh.spatial
        f = 17
        a, b, c = s.face_vertices[f]
        walk = []
        for edge, sign in incidence(self.mesh, EntityRef(EntityKind.SPATIAL_FACE, f, 1)):
            self.assertEqual(edge.time, 1)
            i, j = s.edge_vertices[edge.index]
            walk.append((i, j) if sign > 0 else (j, i))
        self.assertEqual(walk, [(a, b), (b, c), (c, a)])

    def test_temporal_face(self):
        e = 9
        i, j = self.mesh.spatial.edge_vertices[e]
        bnd = incidence(self.mesh, EntityRef(EntityKind.TEMPORAL_FACE, e, 0))
        self.assertEqual(bnd, [
            (EntityRef(EntityKind.SPATIAL_EDGE, e, 0), 1),
            (EntityRef(EntityKind.TEMPORAL_EDGE, int(j), 0), 1),
            (EntityRef(EntityKind.SPATIAL_EDGE, e, 1), -1),
            (EntityRef(EntityKind.TEMPORAL_EDGE, int(i), 0), -1),
        ])

    def boundary_of_boundary(self, ref):
        total = Counter()
        for face, s1 in incidence(self.mesh, ref):
            for edge, s2 in incidence(self.mesh, face):
                total[edge] += s1 * s2
        return total

    def test_boundary_of_tet_boundary_vanishes(self):
        for t in range(self.mesh.spatial.n_tets):
            total = self.boundary_of_boundary(EntityRef(EntityKind.TETRAHEDRON, t, 0))
            self.assertTrue(all(v == 0 for v in total.values()))
            self.assertEqual(len(total), 6)

    def test_boundary_of_prism_boundary_vanishes(self):
        for tau in range(self.mesh.N_t):
            for t in range(self.mesh.spatial.n_tets):
                total = self.boundary_of_boundary(EntityRef(EntityKind.PRISM, t, tau))
                self.assertTrue(all(v == 0 for v in total.values()), (t, tau))
                # 4 faces at each end plus 6 temporal faces
                self.assertEqual(len(total), 14)

    def test_prism_boundary(self):
        bnd = incidence(self.mesh, EntityRef(EntityKind.PRISM, 11, 1))
        kinds = Counter(ref.kind for ref, _ in bnd)
        self.assertEqual(kinds, {EntityKind.TEMPORAL_CELL: 4, EntityKind.TETRAHEDRON: 2})
        self.assertEqual(sorted(sign for _, sign in bnd[4:]), [-1, 1])
        self.assertEqual({ref.time for ref, _ in bnd[4:]}, {0, 1})
        self.assertEqual([ref.index for ref, _ in bnd[:4]], list(self.mesh.spatial.tet_faces[11]))

    def test_boundary_of_temporal_cell_boundary_vanishes(self):
        for f in range(self.mesh.spatial.n_faces):
            total = self.boundary_of_boundary(EntityRef(EntityKind.TEMPORAL_CELL, f, 0))
            self.assertTrue(all(v == 0 for v in total.values()))

    def test_side_wall_shared_with_opposite_signs(self):
        # each temporal cell bounds exactly two prisms of its slab, once with each sign
        total = Counter()
        for t in range(self.mesh.spatial.n_tets):
            for ref, sign in incidence(self.mesh, EntityRef(EntityKind.PRISM, t, 0)):
                if ref.kind is EntityKind.TEMPORAL_CELL:
                    total[ref] += sign
        self.assertEqual(len(total), self.mesh.spatial.n_faces)
        self.assertTrue(all(v == 0 for v in total.values()))

    def test_invalid_ref(self):
        with self.assertRaises(InvalidRef):
            incidence(self.mesh, EntityRef(EntityKind.SPATIAL_FACE, 96, 0))
        with self.assertRaises(InvalidRef):
            incidence(self.mesh, EntityRef(EntityKind.SPATIAL_EDGE, 0, 2))
        with self.assertRaises(InvalidRef):
            incidence(self.mesh, EntityRef(EntityKind.VERTEX, 0, 0))


class ConnectingEdgeTests(SimpleTestCase):

    def check_connection(self, mesh, v, w, conn):
        i, j = mesh.spatial.edge_vertices[conn.edge.index]
        self.assertEqual((i, j) if conn.sign > 0 else (j, i), (v.index, w.index))

    def test_identity(self):
        m = build_spacetime(2, 2)
        self.assertTrue(connecting_edge(m, vertex_ref(3), vertex_ref(3)).is_identity)

    def test_all_tet_pairs_with_context(self):
        m = build_spacetime(2, 2)
        s = m.spatial
        for t in range(s.n_tets):
            for a in range(4):
                for b in range(4):
                    if a == b:
                        continue
                    v, w = vertex_ref(s.tet_vertices[t, a]), vertex_ref(s.tet_vertices[t, b])
                    conn = connecting_edge(m, v, w, tet=t)
                    self.check_connection(m, v, w, conn)
                    k = tables.LOCAL_EDGE_BETWEEN[a, b]
                    self.assertEqual(conn.edge.index, s.tet_edges[t, k])

    def test_pairs_without_context(self):
        m = build_spacetime(4, 4)
        s = m.spatial
        for t in range(0, s.n_tets, 7):
            for a, b in tables.LOCAL_EDGES:
                v, w = vertex_ref(s.tet_vertices[t, a]), vertex_ref(s.tet_vertices[t, b])
                conn = connecting_edge(m, w, v)
                self.assertEqual(conn.sign, -1)
                self.check_connection(m, w, v, conn)

    def test_temporal(self):
        m = build_spacetime(3, 3)
        conn = connecting_edge(m, vertex_ref(4, 2), vertex_ref(4, 0))
        self.assertEqual((conn.edge, conn.sign), (EntityRef(EntityKind.TEMPORAL_EDGE, 4, 2), 1))
        conn = connecting_edge(m, vertex_ref(4, 1), vertex_ref(4, 0))
        self.assertEqual((conn.edge, conn.sign), (EntityRef(EntityKind.TEMPORAL_EDGE, 4, 0), -1))

    def test_not_adjacent(self):
        m = build_spacetime(4, 4)
        with self.assertRaises(NotAdjacent):
            connecting_edge(m, vertex_ref(0), vertex_ref(m.spatial.vertex_index((2, 0, 0))))
        with self.assertRaises(NotAdjacent):
            connecting_edge(m, vertex_ref(0, 0), vertex_ref(1, 1))
        with self.assertRaises(NotAdjacent):
            connecting_edge(m, vertex_ref(0), vertex_ref(m.spatial.vertex_index((1, -1, 0))))

    def test_ambiguous_without_context(self):
        m = build_spacetime(2, 2)
        with self.assertRaises(NotAdjacent):
            connecting_edge(m, vertex_ref(0), vertex_ref(m.spatial.vertex_index((1, 0, 0))))


class DumpMeshCommandTests(SimpleTestCase):

    def test_dump(self):
        out = StringIO()
        call_command('dump_mesh', '--N', '2', '--Nt', '2', stdout=out)
        lines = out.getvalue().strip().splitlines()
        m = build_spacetime(2, 2)
        s = m.spatial
        per_slab = 2 * s.n_vertices + 2 * s.n_edges + s.n_faces + 2 * s.n_tets
        self.assertEqual(len(lines), 2 * per_slab)
        self.assertEqual(lines[0], 'vertex 0 0 0 1')
        kinds = Counter(line.split()[0] for line in lines)
        self.assertEqual(kinds['temporal-face'], m.n_temporal_faces)
