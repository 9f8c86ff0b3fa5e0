import numpy as np
from django.test import SimpleTestCase

from config.exceptions import BranchAmbiguity, InvalidOrder
from .elements import (
    AlgebraElement, GroupElement, ad, adjoint_action, bch, bch_chain, dexp, exp, inner, log,
    series_exp,
)
from . import kernels, series

T1 = AlgebraElement((1.0, 0.0, 0.0))
T2 = AlgebraElement((0.0, 1.0, 0.0))
T3 = AlgebraElement((0.0, 0.0, 1.0))


def random_algebra(rng, norm):
    a = rng.normal(size=3)
    return AlgebraElement.from_coefficients(norm * a / np.linalg.norm(a))


class ExpLogTests(SimpleTestCase):

    def test_exp_zero_is_identity(self):
        np.testing.assert_allclose(exp(AlgebraElement.zero()).matrix, np.eye(2), atol=1e-15)

    def test_exp_pi_t3(self):
        u = exp(np.pi * T3)
        np.testing.assert_allclose(u.matrix, np.diag([1j, -1j]), atol=1e-15)
        np.testing.assert_allclose(u.matrix, series_exp(np.pi * T3), atol=1e-14)

    def test_closed_form_matches_power_series(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            x = random_algebra(rng, rng.uniform(0.0, 3.0))
            np.testing.assert_allclose(exp(x).matrix, series_exp(x, 40), atol=1e-13)

    def test_one_parameter_subgroup(self):
        product = exp(0.3 * T1) @ exp(0.5 * T1)
        np.testing.assert_allclose(product.matrix, exp(0.8 * T1).matrix, atol=1e-15)

    def test_exp_is_special_unitary(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            u = exp(random_algebra(rng, 5.0)) @ exp(random_algebra(rng, 2.0))
            self.assertTrue(u.check())

    def test_log_identity(self):
        np.testing.assert_allclose(log(GroupElement.identity()).array, 0.0, atol=1e-15)

    def test_log_round_trip(self):
        np.testing.assert_allclose(log(exp(0.7 * T2)).array, [0.0, 0.7, 0.0], atol=1e-12)
        rng = np.random.default_rng(3)
        for _ in range(50):
            x = random_algebra(rng, rng.uniform(0.0, 1.0))
            self.assertLess(np.linalg.norm(log(exp(x)).array - x.array), 1e-10)

    def test_log_large_angle_round_trip(self):
        x = AlgebraElement((1.0, 2.0, 2.5))
        self.assertLess(np.linalg.norm(log(exp(x)).array - x.array), 1e-10)

    def test_log_antipode_raises(self):
        with self.assertRaises(BranchAmbiguity):
            log(GroupElement.from_matrix(-np.eye(2)))

    def test_log_batched_kernel(self):
        a = np.random.default_rng(4).normal(scale=0.5, size=(5, 7, 3))
        np.testing.assert_allclose(kernels.qlog(kernels.qexp(a)), a, atol=1e-12)


class InnerProductTests(SimpleTestCase):

    def test_identity(self):
        self.assertAlmostEqual(inner(GroupElement.identity(), GroupElement.identity()), 2.0)

    def test_generators(self):
        self.assertAlmostEqual(inner(T3, T3), 0.5)
        self.assertAlmostEqual(inner(T1, T2), 0.0)

    def test_quaternion_inner_matches_trace(self):
        rng = np.random.default_rng(5)
        p, q = rng.normal(size=4), rng.normal(size=4)
        expected = np.real(np.trace(kernels.qmatrix(p) @ kernels.qmatrix(q).conj().T))
        self.assertAlmostEqual(kernels.qinner(p, q), expected, places=12)

    def test_symmetric_and_norm(self):
        g = exp(AlgebraElement((0.3, -0.2, 0.9)))
        h = exp(AlgebraElement((-1.0, 0.4, 0.1)))
        self.assertAlmostEqual(inner(g, h), inner(h, g), places=14)
        self.assertAlmostEqual(inner(g, g), np.linalg.norm(g.matrix) ** 2, places=14)


class BracketTests(SimpleTestCase):

    def test_antisymmetry_and_zero(self):
        x = AlgebraElement((0.2, -0.5, 1.1))
        np.testing.assert_allclose(ad(x, x).array, 0.0)
        np.testing.assert_allclose(ad(AlgebraElement.zero(), x).array, 0.0)

    def test_matches_matrix_commutator(self):
        m1, m2 = T1.matrix, T2.matrix
        np.testing.assert_allclose(ad(T1, T2).matrix, m1 @ m2 - m2 @ m1, atol=1e-15)
        self.assertTrue(ad(T1, T2).check())

    def test_jacobi(self):
        total = ad(T1, ad(T2, T3)) + ad(T2, ad(T3, T1)) + ad(T3, ad(T1, T2))
        np.testing.assert_allclose(total.array, 0.0, atol=1e-15)

    def test_adjoint_action(self):
        g = exp(AlgebraElement((0.4, 1.2, -0.7)))
        x = AlgebraElement((0.3, 0.1, 0.5))
        expected = g.matrix @ x.matrix @ g.inverse().matrix
        np.testing.assert_allclose(adjoint_action(g, x).matrix, expected, atol=1e-14)


class BCHTests(SimpleTestCase):

    def test_commuting_arguments(self):
        for order in (1, 3, 6, 10):
            np.testing.assert_allclose(bch(0.3 * T1, 0.9 * T1, order).array, [1.2, 0, 0], atol=1e-15)

    def test_second_order_terms(self):
        eps = 0.01
        expected = eps * T1 + eps * T2 + (eps ** 2 / 2) * ad(T1, T2)
        np.testing.assert_allclose(bch(eps * T1, eps * T2, 2).array, expected.array, atol=1e-16)

    def test_known_third_and_fourth_terms(self):
        rng = np.random.default_rng(6)
        x, y = rng.normal(size=3), rng.normal(size=3)
        c = series.bch_terms(x, y, 4)
        br = kernels.bracket
        np.testing.assert_allclose(c[2], (br(x, br(x, y)) + br(y, br(y, x))) / 12.0, atol=1e-14)
        np.testing.assert_allclose(c[3], -br(y, br(x, br(x, y))) / 24.0, atol=1e-14)

    def test_matches_matrix_product(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            x, y = random_algebra(rng, 0.1), random_algebra(rng, 0.1)
            z = bch(x, y, 6)
            self.assertLess(np.linalg.norm(exp(z).matrix - (exp(x) @ exp(y)).matrix), 1e-8)

    def test_error_order(self):
        rng = np.random.default_rng(8)
        a, b = random_algebra(rng, 1.0), random_algebra(rng, 1.0)

        def error(order, norm):
            x, y = norm * a, norm * b
            return np.linalg.norm(exp(bch(x, y, order)).matrix - (exp(x) @ exp(y)).matrix)

        for order in range(1, 5):
            ratio = error(order, 0.1) / error(order, 0.05)
            self.assertGreaterEqual(ratio, 2.0 ** (order + 0.5))

    def test_invalid_order(self):
        with self.assertRaises(InvalidOrder):
            bch(T1, T2, 0)
        with self.assertRaises(InvalidOrder):
            bch(T1, T2, series.MAX_BCH_ORDER + 1)

    def test_batched(self):
        rng = np.random.default_rng(9)
        x, y = rng.normal(scale=0.1, size=(2, 10, 3))
        out = series.bch(x, y, 6)
        for k in range(10):
            np.testing.assert_allclose(out[k], series.bch(x[k], y[k], 6), atol=1e-15)


class BCHChainTests(SimpleTestCase):

    def test_single(self):
        x = AlgebraElement((0.1, 0.2, 0.3))
        self.assertEqual(bch_chain([x], 4), x)

    def test_inverse_pair(self):
        x = AlgebraElement((0.1, -0.1, 0.1))
        np.testing.assert_allclose(bch_chain([x, -x], 6).array, 0.0, atol=1e-12)

    def test_matches_matrix_product(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            x, y, z = (random_algebra(rng, 0.1) for _ in range(3))
            w = bch_chain([x, y, z], 6)
            self.assertLess(np.linalg.norm(exp(w).matrix - (exp(x) @ exp(y) @ exp(z)).matrix), 1e-7)

    def test_empty_chain(self):
        with self.assertRaises(ValueError):
            bch_chain([], 6)

    def test_tangent_matches_finite_difference(self):
        rng = np.random.default_rng(11)
        xs = rng.normal(scale=0.1, size=(4, 3))
        dxs = rng.normal(size=(4, 3))
        w, dw = series.bch_chain_tangent(xs, dxs, 6)
        np.testing.assert_allclose(w, series.bch_chain(list(xs), 6), atol=1e-15)
        tau = 1e-6
        plus = series.bch_chain(list(xs + tau * dxs), 6)
        minus = series.bch_chain(list(xs - tau * dxs), 6)
        np.testing.assert_allclose(dw, (plus - minus) / (2 * tau), atol=1e-8)


class DexpTests(SimpleTestCase):

    def test_zero_base(self):
        y = AlgebraElement((0.3, -0.4, 0.2))
        np.testing.assert_allclose(dexp(AlgebraElement.zero(), y, 5).array, y.array)

    def test_commuting(self):
        np.testing.assert_allclose(dexp(0.4 * T3, 0.9 * T3, 8).array, [0, 0, 0.9], atol=1e-16)

    def test_finite_difference(self):
        rng = np.random.default_rng(12)
        tau = 1e-5
        for _ in range(10):
            x, y = random_algebra(rng, 0.3), random_algebra(rng, 0.3)
            fd = (exp(x + tau * y).matrix - exp(x - tau * y).matrix) / (2 * tau)
            analytic = exp(x).matrix @ dexp(x, y, 8).matrix
            self.assertLess(np.linalg.norm(analytic - fd), 1e-8)

    def test_trace_derivative(self):
        x, y = AlgebraElement((0.5, -0.2, 0.8)), AlgebraElement((0.1, 0.7, -0.3))
        tau = 1e-5
        fd = (np.trace(exp(x + tau * y).matrix) - np.trace(exp(x - tau * y).matrix)) / (2 * tau)
        self.assertLess(abs(fd - np.trace(exp(x).matrix @ y.matrix)), 1e-7)

    def test_invalid_order(self):
        with self.assertRaises(InvalidOrder):
            dexp(T1, T2, 0)
