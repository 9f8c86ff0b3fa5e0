"""
Batched su(2) / SU(2) kernels.

Algebra elements are coefficient arrays of shape (..., 3) in the basis
t^k = i sigma^k / 2. Group elements (and every real combination of the
identity and the i sigma^k, such as F - 1) are quaternion arrays of shape
(..., 4) with

    U = [[q0 + i q3,  q2 + i q1],
         [-q2 + i q1, q0 - i q3]]
so that products, conjugation and traces never leave real arithmetic.
"""

import numpy as np

from config.constants import BRANCH_TOL
from config.exceptions import BranchAmbiguity

IDENTITY = np.array([1.0, 0.0, 0.0, 0.0])

# Pauli matrices and the t^k basis
PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)
GENERATORS = 0.5j * PAULI


### algebra ###
def bracket(a, b):
    """Commutator [X, Y] in coefficients: [t^a, t^b] = -eps_abc t^c."""
    return -np.cross(a, b)


def algebra_matrix(a):
    """Coefficients (..., 3) -> anti-hermitian traceless (..., 2, 2)."""
    a = np.asarray(a, dtype=float)
    return np.einsum('...k,kij->...ij', a, GENERATORS)


def algebra_from_matrix(m):
    """Inverse of algebra_matrix; ignores any hermitian or trace part."""
    m = np.asarray(m)
    a1 = 2.0 * m[..., 0, 1].imag
    a2 = 2.0 * m[..., 0, 1].real
    a3 = 2.0 * m[..., 0, 0].imag
    return np.stack([a1, a2, a3], axis=-1)


### quaternions ###
def qmul(p, q):
    """Matrix product of quaternion-represented 2x2 matrices."""
    p0, pv = p[..., :1], p[..., 1:]
    q0, qv = q[..., :1], q[..., 1:]
    scalar = p0 * q0 - np.sum(pv * qv, axis=-1, keepdims=True)
    vector = p0 * qv + q0 * pv - np.cross(pv, qv)
    return np.concatenate([scalar, vector], axis=-1)


def qconj(q):
    """Hermitian conjugate; the inverse for unit quaternions."""
    out = -np.asarray(q, dtype=float).copy()
    out[..., 0] = -out[..., 0]
    return out


def qinner(p, q):
    """Re tr(P Q^H) for quaternion-represented matrices."""
    return 2.0 * np.sum(p * q, axis=-1)


def qmatrix(q):
    """Quaternion (..., 4) -> complex (..., 2, 2)."""
    q = np.asarray(q, dtype=float)
    m = np.empty(q.shape[:-1] + (2, 2), dtype=complex)
    m[..., 0, 0] = q[..., 0] + 1j * q[..., 3]
    m[..., 0, 1] = q[..., 2] + 1j * q[..., 1]
    m[..., 1, 0] = -q[..., 2] + 1j * q[..., 1]
    m[..., 1, 1] = q[..., 0] - 1j * q[..., 3]
    return m


def qfrom_matrix(m):
    """Complex (..., 2, 2) in the real span of 1, i sigma^k -> quaternion."""
    m = np.asarray(m)
    return np.stack([
        0.5 * (m[..., 0, 0].real + m[..., 1, 1].real),
        0.5 * (m[..., 0, 1].imag + m[..., 1, 0].imag),
        0.5 * (m[..., 0, 1].real - m[..., 1, 0].real),
        0.5 * (m[..., 0, 0].imag - m[..., 1, 1].imag),
    ], axis=-1)


def qfrom_algebra(a):
    """The algebra element itself as a quaternion, (0, a/2)."""
    a = np.asarray(a, dtype=float)
    return np.concatenate([np.zeros(a.shape[:-1] + (1,)), 0.5 * a], axis=-1)


def qexp(a):
    """exp(a . t) in closed form: cos(theta/2) + sin(theta/2) i(n . sigma)."""
    a = np.asarray(a, dtype=float)
    theta = np.linalg.norm(a, axis=-1, keepdims=True)
    half = 0.5 * theta
    # sin(theta/2)/theta, continuous at theta = 0
    scale = 0.5 * np.sinc(half / np.pi)
    return np.concatenate([np.cos(half), scale * a], axis=-1)


def qlog(q):
    """Principal logarithm of unit quaternions as algebra coefficients."""
    q = np.asarray(q, dtype=float)
    c = q[..., 0]
    if np.any(np.abs(2.0 * c + 2.0) <= BRANCH_TOL):
        raise BranchAmbiguity(
            'tr U = -2: link is a rotation by 2*pi in su(2) and has no principal logarithm'
        )
    v = q[..., 1:]
    s = np.linalg.norm(v, axis=-1)
    half = np.arctan2(s, c)
    safe = np.where(s > 1e-300, s, 1.0)
    # theta / sin(theta/2), with the small-angle limit 2/c
    factor = np.where(s > 1e-12, 2.0 * half / safe, 2.0 / np.where(c > 0, c, 1.0))
    return factor[..., None] * v


def qadjoint(q, a):
    """Coefficients of G X G^{-1} for unit quaternions G."""
    x = qfrom_algebra(a)
    return 2.0 * qmul(qmul(q, x), qconj(q))[..., 1:]


def qapply(q, v):
    """U v for quaternion arrays q (..., 4) and complex doublets v (..., 2)."""
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=complex)
    top = (q[..., 0] + 1j * q[..., 3]) * v[..., 0] + (q[..., 2] + 1j * q[..., 1]) * v[..., 1]
    bottom = (-q[..., 2] + 1j * q[..., 1]) * v[..., 0] + (q[..., 0] - 1j * q[..., 3]) * v[..., 1]
    return np.stack([top, bottom], axis=-1)


def qconjugate_by(w, x):
    """W^{-1} X W: moves X located at the start of link W to its end."""
    return qmul(qconj(w), qmul(x, w))


def unitarity_defect(q):
    """|det U - 1| for quaternion arrays; zero for exact SU(2) elements."""
    return np.abs(np.sum(np.asarray(q) ** 2, axis=-1) - 1.0)
