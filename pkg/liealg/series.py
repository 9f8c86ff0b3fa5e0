"""
Truncated Lie series: Baker-Campbell-Hausdorff and the differential of exp.

All functions work on coefficient arrays of shape (..., 3) and broadcast
over leading axes. The bracket is pluggable so that the same recursion runs
on (value, tangent) jets for forward-mode derivatives.
"""

from math import factorial

import numpy as np

from config.constants import BERNOULLI_EVEN
from config.exceptions import InvalidOrder
from .kernels import bracket

MAX_BCH_ORDER = max(BERNOULLI_EVEN) + 2


def _check_order(order):
    if int(order) != order or order < 1:
        raise InvalidOrder(f'truncation order must be a positive integer, got {order!r}')


def bch_terms(x, y, order, br=bracket):
    """
    Homogeneous BCH terms c_1 .. c_order of log(e^X e^Y).

    Recursion: c_1 = X + Y and

        (n+1) c_{n+1} = 1/2 [X - Y, c_n]
                        + sum_{p=1}^{floor(n/2)} B_2p/(2p)!
                          sum_{k_1+..+k_2p = n, k_i > 0} [c_k1, [... [c_k2p, X + Y] ...]]

    The inner sum over compositions is built by dynamic programming:
    nested[m][n] holds the sum over compositions of n into m parts.
    """
    _check_order(order)
    if order > MAX_BCH_ORDER:
        raise InvalidOrder(f'BCH order {order} exceeds the supported maximum {MAX_BCH_ORDER}')
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    total = x + y
    diff = x - y
    terms = [None, total]
    zero = np.zeros(np.broadcast(x, y).shape)
    nested = {0: {0: total}}
    for n in range(1, order):
        # extend nested[m][n] for every m <= n using the newly known c_n
        for m in range(1, n + 1):
            acc = zero
            for k in range(1, n - m + 2):
                inner = nested[m - 1].get(n - k)
                if inner is not None:
                    acc = acc + br(terms[k], inner)
            nested.setdefault(m, {})[n] = acc
        nxt = 0.5 * br(diff, terms[n])
        for p in range(1, n // 2 + 1):
            coef = float(BERNOULLI_EVEN[2 * p]) / factorial(2 * p)
            nxt = nxt + coef * nested[2 * p][n]
        terms.append(nxt / (n + 1))
    return terms[1:]


def bch(x, y, order, br=bracket):
    """Z_order = c_1 + ... + c_order, the truncated log(e^X e^Y)."""
    return sum(bch_terms(x, y, order, br=br))


def bch_chain(xs, order, br=bracket):
    """Left fold of bch over a nonempty sequence; a single element is returned unchanged."""
    _check_order(order)
    xs = list(xs)
    if not xs:
        raise ValueError('bch_chain needs at least one element')
    acc = np.asarray(xs[0], dtype=float)
    for nxt in xs[1:]:
        acc = bch(acc, nxt, order, br=br)
    return acc


def jet_bracket(a, b):
    """Bracket of (value, tangent) pairs stacked on axis -2."""
    value = bracket(a[..., 0, :], b[..., 0, :])
    tangent = bracket(a[..., 1, :], b[..., 0, :]) + bracket(a[..., 0, :], b[..., 1, :])
    return np.stack([value, tangent], axis=-2)


def bch_chain_tangent(xs, dxs, order):
    """
    Truncated BCH chain W and its directional derivative dW along dxs.

    Returns:
        tuple: (W, dW) coefficient arrays
    """
    jets = [np.stack([np.asarray(x, dtype=float), np.asarray(dx, dtype=float)], axis=-2)
            for x, dx in zip(xs, dxs)]
    out = bch_chain(jets, order, br=jet_bracket)
    return out[..., 0, :], out[..., 1, :]


def dexp(x, y, order):
    """
    Truncation of (1 - e^{-ad_X}) / ad_X applied to Y:

        sum_{k=0}^{order} (-1)^k / (k+1)! ad_X^k (Y)
    """
    _check_order(order)
    x = np.asarray(x, dtype=float)
    term = np.asarray(y, dtype=float) + np.zeros_like(x)
    total = term.copy()
    for k in range(1, order + 1):
        term = bracket(x, term)
        total = total + ((-1) ** k / factorial(k + 1)) * term
    return total
