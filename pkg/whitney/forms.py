"""
Lowest-order Whitney forms on tetrahedra.

Tetrahedra are given by their vertex coordinates, arrays of shape (..., 4, 3).
2-forms in three dimensions are represented by their proxy vectors, so that
a wedge a ^ b of 1-forms is a x b and the form inner product is the dot
product of proxies.
"""

import numpy as np

from config.exceptions import DegenerateTet


def _affine_matrix(vertices):
    # columns (1, x_i): lambda = V^{-1} (1, x)
    vertices = np.asarray(vertices, dtype=float)
    ones = np.ones(vertices.shape[:-1] + (1,))
    return np.swapaxes(np.concatenate([ones, vertices], axis=-1), -1, -2)


def _inverse(vertices):
    v = _affine_matrix(vertices)
    det = np.linalg.det(v)
    scale = np.max(np.abs(np.asarray(vertices)[..., 1:, :] - np.asarray(vertices)[..., :1, :]), axis=(-1, -2))
    if np.any(np.abs(det) <= 1e-14 * np.maximum(scale, 1e-300) ** 3):
        raise DegenerateTet('tetrahedron vertices are affinely dependent')
    return np.linalg.inv(v)


def barycentric(vertices, point):
    """Barycentric coordinates (..., 4) of point (..., 3) in the tetrahedron."""
    inv = _inverse(vertices)
    point = np.asarray(point, dtype=float)
    homog = np.concatenate([np.ones(point.shape[:-1] + (1,)), point], axis=-1)
    return np.einsum('...ij,...j->...i', inv, homog)


def barycentric_gradients(vertices):
    """
    Constant gradients of the four barycentric coordinates, shape (..., 4, 3).

    Raises:
        DegenerateTet: the vertices are affinely dependent
    """
    return _inverse(vertices)[..., :, 1:]


def whitney_edge(vertices, edge, point):
    """lambda_i grad lambda_j - lambda_j grad lambda_i for edge = (i, j) in local numbering."""
    i, j = edge
    lam = barycentric(vertices, point)
    grad = barycentric_gradients(vertices)
    return lam[..., i, None] * grad[..., j, :] - lam[..., j, None] * grad[..., i, :]


def whitney_face(vertices, face, point):
    """Proxy vector of 2 (lambda_i dl_j ^ dl_k + lambda_j dl_k ^ dl_i + lambda_k dl_i ^ dl_j)."""
    i, j, k = face
    lam = barycentric(vertices, point)
    grad = barycentric_gradients(vertices)
    total = 0.0
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        total = total + lam[..., a, None] * np.cross(grad[..., b, :], grad[..., c, :])
    return 2.0 * total


def whitney_edge_derivative(vertices, edge):
    """Proxy of d(lambda_e) = 2 dl_i ^ dl_j; constant on the tet."""
    i, j = edge
    grad = barycentric_gradients(vertices)
    return 2.0 * np.cross(grad[..., i, :], grad[..., j, :])


def edge_integral(form, start, end, rule):
    """Line integral of a covector field `form(x)` along the straight segment start -> end."""
    start, end = np.asarray(start, dtype=float), np.asarray(end, dtype=float)
    pts = start + rule.points[:, None] * (end - start)
    return float(np.sum(rule.weights * (form(pts) @ (end - start))))


def face_integral(form, corners, tri):
    """
    Flux of a proxy field `form(x)` through the triangle corners[0] -> corners[1] -> corners[2].

    `tri` is a (points, weights) triangle rule.
    """
    a, b, c = (np.asarray(p, dtype=float) for p in corners)
    pts, w = tri
    x = a + pts[:, :1] * (b - a) + pts[:, 1:] * (c - a)
    normal = np.cross(b - a, c - a)
    return float(np.sum(w * (form(x) @ normal)))
