"""
Desk-checkable oracle suite run by `manage.py oracle`.

Every check measures one number against a bound: an error that must stay
at or below it, or (for at_least checks) a margin that must reach it.
"""

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from config.constants import ACTION_I, ACTION_J, ACTION_L
from config.exceptions import SGTError
from config.logger import get_logger, log_duration
from action.actions import action_I, action_L, evaluate, spatial_cell_terms, temporal_cell_terms
from action.curvature import spatial_curvature, temporal_curvature
from action.differentials import loop_differential, loop_differential_fd
from gaugefield.continuum import PolynomialField
from gaugefield.fields import DiscreteGaugeField, random_field, sample
from liealg import kernels
from liealg.elements import AlgebraElement, bch, bch_chain, dexp, exp, log, series_exp
from mesh import tables
from mesh.builders import build_spacetime
from mesh.entities import EntityKind, EntityRef, incidence
from whitney.assembly import assemble_mass
from whitney.forms import barycentric_gradients, edge_integral, face_integral, whitney_edge, whitney_face
from whitney.interpolation import check_stokes
from whitney.quadrature import gauss_legendre, tet_rule, triangle_rule
from .services import run_gauge_invariance

logger = get_logger(__name__)

ORACLES = []


@dataclass(frozen=True)
class OracleResult:
    name: str
    value: float
    bound: float
    at_least: bool
    passed: bool
    message: str = ''

    def __str__(self):
        relation = '>=' if self.at_least else '<='
        status = 'PASS' if self.passed else 'FAIL'
        line = f'{status} {self.name}: {self.value:.3e} {relation} {self.bound:.1e}'
        return f'{line} ({self.message})' if self.message else line


def oracle(name, bound, at_least=False):
    def register(fn):
        ORACLES.append((name, fn, bound, at_least))
        return fn
    return register


def _random_algebra(rng, norm):
    a = rng.normal(size=3)
    return AlgebraElement.from_coefficients(norm * a / np.linalg.norm(a))


def _small_field_mesh():
    mesh = build_spacetime(2, 2)
    return mesh, random_field(mesh, seed=21, amplitude=0.1)


### liealg ###
@oracle('exp closed form vs 20-term series', 1e-14)
def exp_series():
    rng = np.random.default_rng(1)
    xs = [_random_algebra(rng, rng.uniform(0.0, 1.0)) for _ in range(20)]
    return max(np.linalg.norm(exp(x).matrix - series_exp(x, 20)) for x in xs)


@oracle('exp(log(U)) round trip', 1e-10)
def exp_log_round_trip():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(20):
        u = exp(_random_algebra(rng, rng.uniform(0.0, 3.0)))
        worst = max(worst, np.linalg.norm(exp(log(u)).matrix - u.matrix))
    return worst


@oracle('bch_chain vs matrix product at norm 0.1', 1e-7)
def bch_chain_product():
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(10):
        x, y, z = (_random_algebra(rng, 0.1) for _ in range(3))
        w = bch_chain([x, y, z], 6)
        worst = max(worst, np.linalg.norm(exp(w).matrix - (exp(x) @ exp(y) @ exp(z)).matrix))
    return worst


@oracle('dexp vs central differences at norm 0.3', 1e-8)
def dexp_finite_difference():
    rng = np.random.default_rng(12)
    tau = 1e-5
    worst = 0.0
    for _ in range(10):
        x, y = _random_algebra(rng, 0.3), _random_algebra(rng, 0.3)
        fd = (exp(x + y * tau).matrix - exp(x - y * tau).matrix) / (2 * tau)
        worst = max(worst, np.linalg.norm(exp(x).matrix @ dexp(x, y, 8).matrix - fd))
    return worst


@oracle('bch error ratio / 2^(k+1/2) under norm halving', 1.0, at_least=True)
def bch_order():
    rng = np.random.default_rng(8)
    a, b = _random_algebra(rng, 1.0), _random_algebra(rng, 1.0)

    def error(order, norm):
        x, y = a * norm, b * norm
        return np.linalg.norm(exp(bch(x, y, order)).matrix - (exp(x) @ exp(y)).matrix)

    return min(error(k, 0.1) / error(k, 0.05) / 2.0 ** (k + 0.5) for k in range(1, 5))


### mesh ###
@oracle('prisms and tets with nonzero boundary of boundary', 0.0)
def boundary_of_boundary():
    mesh = build_spacetime(2, 2)
    bad = 0
    for kind in (EntityKind.TETRAHEDRON, EntityKind.PRISM):
        for tau in range(mesh.N_t):
            for t in range(mesh.spatial.n_tets):
                total = Counter()
                for face, s1 in incidence(mesh, EntityRef(kind, t, tau)):
                    for edge, s2 in incidence(mesh, face):
                        total[edge] += s1 * s2
                bad += any(total.values())
    return bad


### whitney ###
@oracle('partition of unity of barycentric gradients', 1e-12)
def partition_of_unity():
    mesh = build_spacetime(2, 2)
    return float(np.abs(barycentric_gradients(mesh.spatial.tet_vectors * mesh.h).sum(axis=-2)).max())


@oracle('Whitney edge dof duality', 1e-10)
def edge_duality():
    v = tables.TET_VERTEX_OFFSETS[1].astype(float)
    rule = gauss_legendre(4)
    worst = 0.0
    for m, edge in enumerate(tables.LOCAL_EDGES):
        for n, (a, b) in enumerate(tables.LOCAL_EDGES):
            value = edge_integral(lambda x: whitney_edge(v, edge, x), v[a], v[b], rule)
            worst = max(worst, abs(value - float(m == n)))
    return worst


@oracle('Whitney face dof duality', 1e-10)
def face_duality():
    v = tables.TET_VERTEX_OFFSETS[1].astype(float)
    tri = triangle_rule(gauss_legendre(4))
    worst = 0.0
    for k, face in enumerate(tables.LOCAL_FACES):
        for m, other in enumerate(tables.LOCAL_FACES):
            value = face_integral(lambda x: whitney_face(v, face, x), v[list(other)], tri)
            worst = max(worst, abs(value - float(k == m)))
    return worst


def _off_slab(block, size):
    # largest entry coupling two different slabs of a (slab, entity) ordered block
    coo = block.tocoo()
    mask = coo.row // size != coo.col // size
    return float(np.abs(coo.data[mask]).max()) if mask.any() else 0.0


@oracle('temporal mass blocks are slab-diagonal', 0.0)
def temporal_slab_diagonal():
    mesh = build_spacetime(2, 4)
    data = assemble_mass(mesh)
    return max(_off_slab(data.M_tt, mesh.spatial.n_edges), _off_slab(data.M_e_tt, mesh.spatial.n_vertices))


@oracle('mass entries outside a shared tet or adjacent time nodes', 0.0)
def mass_locality():
    mesh = build_spacetime(3, 4)
    s = mesh.spatial
    data = assemble_mass(mesh)
    shared = set()
    for edges in s.tet_edges:
        shared.update((int(a), int(b)) for a in edges for b in edges)
    gram = data.edge_gram.tocoo()
    stray = sum((int(i), int(j)) not in shared for i, j in zip(gram.row, gram.col))
    coo = data.M_e_ss.tocoo()
    lag = np.abs(coo.row // s.n_edges - coo.col // s.n_edges)
    stray += int(np.count_nonzero(np.minimum(lag, mesh.N_t - lag) > 1))
    return stray


@oracle('temporal 1/dt normalization vs quadrature on one slab', 1e-12)
def temporal_normalization():
    mesh = build_spacetime(3, 3)
    s = mesh.spatial
    data = assemble_mass(mesh)
    pts, w = tet_rule(gauss_legendre(4))
    time_rule = gauss_legendre(2)
    # slab integral of the product of two temporal factors 1/dt
    time_factor = mesh.dt * float(np.sum(time_rule.weights * np.full(time_rule.size, 1.0 / mesh.dt) ** 2))
    tau, E = 1, s.n_edges
    block = data.M_tt.tocsr()[tau * E:(tau + 1) * E, tau * E:(tau + 1) * E].toarray()
    worst = 0.0
    for a in s.tet_edges[0]:
        for b in s.tet_edges[0]:
            spatial = 0.0
            for t in range(s.n_tets):
                local = list(s.tet_edges[t])
                if a not in local or b not in local:
                    continue
                v = tables.TET_VERTEX_OFFSETS[t % tables.TETS_PER_CUBE] * s.h
                x = v[0] + pts @ (v[1:] - v[0])
                jac = abs(np.linalg.det(v[1:] - v[0]))
                fa = whitney_edge(v, tables.LOCAL_EDGES[local.index(a)], x)
                fb = whitney_edge(v, tables.LOCAL_EDGES[local.index(b)], x)
                spatial += jac * float(np.einsum('qi,qi,q->', fa, fb, w))
            expected = time_factor * spatial
            worst = max(worst, abs(block[a, b] - expected))
    return worst / np.abs(block).max()


@oracle('mass blocks symmetric positive semidefinite', -1e-12, at_least=True)
def mass_psd():
    data = assemble_mass(build_spacetime(2, 3))
    rng = np.random.default_rng(24)
    lowest = np.inf
    for block in (data.M_ss, data.M_tt, data.M_e_ss, data.M_e_tt):
        if abs(block - block.T).max() > 1e-14:
            return -np.inf
        for _ in range(3):
            v = rng.normal(size=block.shape[0])
            lowest = min(lowest, float(v @ (block @ v)))
    return lowest


@oracle('total vertex mass - vol(S)', 1e-12)
def vertex_mass_total():
    return abs(assemble_mass(build_spacetime(2, 2)).vertex_gram.sum() - 1.0)


@oracle('structure constants 1/6 and 1/4', 1e-14)
def structure_constant_values():
    data = assemble_mass(build_spacetime(2, 2))
    return max(np.abs(data.C_face - 1.0 / 6).max(), np.abs(data.C_tface - 1.0 / 4).max())


@oracle('Stokes commutation for x dy at N=4', 1e-10)
def stokes_x_dy():
    coeff = np.zeros((4, 3))
    coeff[2, 0] = 1.0
    return check_stokes(build_spacetime(4, 4), PolynomialField(terms={(0, 1, 0, 0): coeff}), gauss_legendre(8))


### action ###
@oracle('loop reversal gives the inverse', 1e-13)
def loop_reversal():
    mesh, field = _small_field_mesh()
    worst = 0.0
    for f in range(mesh.spatial.n_faces):
        ref = EntityRef(EntityKind.SPATIAL_FACE, f, 0)
        forward = spatial_curvature(field, ref).value
        backward = spatial_curvature(field, ref, reverse=True).value
        worst = max(worst, np.abs(backward.array - forward.inverse().array).max())
    for e in range(mesh.spatial.n_edges):
        ref = EntityRef(EntityKind.TEMPORAL_FACE, e, 0)
        forward = temporal_curvature(field, ref).value
        backward = temporal_curvature(field, ref, reverse=True).value
        worst = max(worst, np.abs(backward.array - forward.inverse().array).max())
    return worst


@oracle('loop relocation conjugates by the first link', 1e-13)
def loop_relocation():
    mesh, field = _small_field_mesh()
    s = mesh.spatial
    U = field.spatial_links[0]
    worst = 0.0
    for f in range(s.n_faces):
        ref = EntityRef(EntityKind.SPATIAL_FACE, f, 0)
        at_a = spatial_curvature(field, ref).value.array
        at_b = spatial_curvature(field, ref, start=1).value.array
        worst = max(worst, np.abs(at_b - kernels.qconjugate_by(U[s.face_edges[f, 0]], at_a)).max())
    return worst


@oracle('loop differential vs finite differences', 1e-7)
def loop_differential_oracle():
    mesh = build_spacetime(3, 3)
    field = random_field(mesh, seed=69, amplitude=0.03)
    direction = random_field(mesh, seed=70, amplitude=1.0)
    faces = [EntityRef(EntityKind.SPATIAL_FACE, 40, 2), EntityRef(EntityKind.TEMPORAL_FACE, 60, 2)]
    return max(
        np.abs(loop_differential(field, face, direction) - loop_differential_fd(field, face, direction)).max()
        for face in faces
    )


@oracle('untransported cell reduction vs sparse S^I', 1e-12)
def cell_reduction_vs_sparse():
    mesh = build_spacetime(3, 3)
    data = assemble_mass(mesh)
    field = random_field(mesh, seed=5)
    reference = action_I(field, data).total
    return abs(action_L(field, data, transport=False).total - reference) / reference


@oracle('S^L terms changed outside cells touching a perturbed edge', 0.0)
def action_locality():
    mesh = build_spacetime(3, 3)
    data = assemble_mass(mesh)
    field = random_field(mesh, seed=41)
    e, node = 40, 1
    spatial = field.spatial.copy()
    spatial[node, e] += [0.05, -0.02, 0.03]
    bumped = DiscreteGaugeField(mesh=mesh, spatial=spatial, temporal=field.temporal)
    touching = np.any(mesh.spatial.tet_edges == e, axis=1)
    slabs = np.zeros(mesh.N_t, dtype=bool)
    slabs[[node - 1, node]] = True
    allowed = slabs[:, None] & touching[None, :]
    stray = 0
    for terms in (spatial_cell_terms, temporal_cell_terms):
        changed = terms(bumped, data) != terms(field, data)
        # a perturbation that changes nothing counts as a violation too
        stray += int(np.count_nonzero(changed & ~allowed)) + int(not changed.any())
    return stray


@lru_cache(maxsize=1)
def _gauge_run():
    return run_gauge_invariance(3, seeds=3)


@oracle('S^L gauge invariance at N=3', 1e-10)
def gauge_invariance():
    return _gauge_run().max_deviation_L


@oracle('S^I gauge dependence (positive control)', 1e-6, at_least=True)
def gauge_control():
    return _gauge_run().max_deviation_I


@oracle('case 3 pairwise gaps shrink from N=4 to N=8 (ratio)', 1.0)
def pairwise_gaps():
    gaps = {}
    for n in (4, 8):
        mesh = build_spacetime(n, n)
        data = assemble_mass(mesh)
        field = sample(3, mesh)
        values = {kind: evaluate(kind, field, data).total for kind in (ACTION_J, ACTION_I, ACTION_L)}
        gaps[n] = (abs(values[ACTION_J] - values[ACTION_I]), abs(values[ACTION_I] - values[ACTION_L]))
    return max(fine / coarse for coarse, fine in zip(gaps[4], gaps[8]))


def run_oracles(names=None):
    """
    Run every registered check, or those whose name contains one of `names`.

    A check that raises fails with value nan; the rest still run.
    """
    results = []
    with log_duration(logger, 'oracle suite'):
        for name, fn, bound, at_least in ORACLES:
            if names and not any(n.lower() in name.lower() for n in names):
                continue
            try:
                value = float(fn())
            except (SGTError, ValueError, FloatingPointError) as e:
                logger.error(f"Oracle '{name}' raised", exc_info=True)
                results.append(OracleResult(name, float('nan'), bound, at_least, False, str(e)))
                continue
            passed = value >= bound if at_least else value <= bound
            if not passed:
                logger.warning(f"Oracle '{name}' failed: {value:.3e}")
            results.append(OracleResult(name, value, bound, at_least, passed))
    return results
