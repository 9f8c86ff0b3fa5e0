"""
Management command to write the entity table of a spacetime mesh

One line per entity, whitespace separated:

    kind index time v0 v1 ... sign

`v0 v1 ...` are the vertex indices in stored orientation order (temporal
entities list the spatial vertices of the lower time node) and `sign` is the
orientation of the stored order relative to the ambient orientation (always
+1 except for tetrahedra and prisms).
"""
from django.core.management.base import BaseCommand, CommandError

from config.exceptions import SGTError
from mesh.builders import build_spacetime
from mesh.entities import EntityKind


class Command(BaseCommand):
    help = 'Write the plain-text entity table of the spacetime mesh'

    def add_arguments(self, parser):
        parser.add_argument('--N', type=int, default=2, help='Cubes per side')
        parser.add_argument('--Nt', type=int, default=None, help='Time nodes (defaults to N)')
        parser.add_argument('--out', type=str, default=None, help='Output file (stdout if omitted)')

    def handle(self, *args, **options):
        n = options['N']
        n_t = options['Nt'] or n
        try:
            mesh = build_spacetime(n, n_t)
        except SGTError as e:
            raise CommandError(str(e))

        lines = list(self.entity_lines(mesh))
        if options['out']:
            try:
                with open(options['out'], 'w') as fh:
                    fh.write('\n'.join(lines) + '\n')
            except OSError as e:
                raise CommandError(f'Could not write {options["out"]}: {e}')
            self.stdout.write(self.style.SUCCESS(f'✓ Wrote {len(lines)} entities of {mesh} to {options["out"]}'))
        else:
            for line in lines:
                self.stdout.write(line)

    def entity_lines(self, mesh):
        s = mesh.spatial
        for tau in range(mesh.N_t):
            for v in range(s.n_vertices):
                yield f'{EntityKind.VERTEX.value} {v} {tau} {v} 1'
            for e, verts in enumerate(s.edge_vertices):
                yield f'{EntityKind.SPATIAL_EDGE.value} {e} {tau} {verts[0]} {verts[1]} 1'
            for f, verts in enumerate(s.face_vertices):
                yield f'{EntityKind.SPATIAL_FACE.value} {f} {tau} {" ".join(map(str, verts))} 1'
            for t, verts in enumerate(s.tet_vertices):
                yield f'{EntityKind.TETRAHEDRON.value} {t} {tau} {" ".join(map(str, verts))} {s.tet_signs[t]}'
            for v in range(s.n_vertices):
                yield f'{EntityKind.TEMPORAL_EDGE.value} {v} {tau} {v} {v} 1'
            for e, verts in enumerate(s.edge_vertices):
                yield f'{EntityKind.TEMPORAL_FACE.value} {e} {tau} {verts[0]} {verts[1]} 1'
            for t, verts in enumerate(s.tet_vertices):
                yield f'{EntityKind.PRISM.value} {t} {tau} {" ".join(map(str, verts))} {s.tet_signs[t]}'
