"""Gauss-Legendre quadrature helpers.

All oracles and volume integrals in this package route through these
routines.  1D integrals use adaptive bisection with an absolute tolerance
(default 1e-10); iterated 2D integrals target 1e-8.  Integrands must accept
numpy arrays.
"""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def gauss_legendre(n):
    """Nodes and weights for n-point Gauss-Legendre on [-1, 1], cached."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def fixed_quad(f, a, b, n=16):
    """Non-adaptive n-point Gauss-Legendre integral of ``f`` over [a, b]."""
    x, w = gauss_legendre(n)
    h = 0.5 * (b - a)
    return h * np.dot(w, f(a + h * (x + 1.0)))


def adaptive_quad(f, a, b, tol=1e-10, max_depth=48):
    """Adaptive Gauss-Legendre integral of ``f`` over [a, b].

    Each interval is estimated with 8- and 16-point rules; intervals whose
    disagreement exceeds their share of ``tol`` are bisected.
    """
    if a == b:
        return 0.0
    stack = [(float(a), float(b), float(tol), 0)]
    total = 0.0
    while stack:
        lo, hi, budget, depth = stack.pop()
        coarse = fixed_quad(f, lo, hi, 8)
        fine = fixed_quad(f, lo, hi, 16)
        if abs(fine - coarse) <= budget or depth >= max_depth:
            total += fine
        else:
            mid = 0.5 * (lo + hi)
            stack.append((lo, mid, 0.5 * budget, depth + 1))
            stack.append((mid, hi, 0.5 * budget, depth + 1))
    return total


def adaptive_quad_2d(f, a, b, inner_bounds, tol=1e-8):
    """Iterated 2D integral ``\\int_a^b \\int_{lo(t)}^{hi(t)} f(t, s) ds dt``.

    ``inner_bounds(t)`` returns ``(lo, hi)`` for the inner variable.  The
    inner integral is evaluated adaptively at each outer node, so the outer
    integrand is smooth wherever the region boundary is.
    """

    def outer(ts):
        ts = np.atleast_1d(ts)
        vals = np.empty_like(ts)
        for i, t in enumerate(ts):
            lo, hi = inner_bounds(t)
            if hi <= lo:
                vals[i] = 0.0
            else:
                vals[i] = adaptive_quad(lambda s: f(t, s), lo, hi, tol=0.1 * tol)
        return vals

    return adaptive_quad(outer, a, b, tol=tol)


# ------------------------------------------------------------------ simplex

# Degree-enough tensor rule on the reference tetrahedron via the Duffy-style
# collapsed map (u, v, w) in [0,1]^3  ->  barycentric simplex coordinates.

@lru_cache(maxsize=None)
def _tetra_rule(n):
    x, w = gauss_legendre(n)
    u = 0.5 * (x + 1.0)
    hw = 0.5 * w
    U, V, W = np.meshgrid(u, u, u, indexing="ij")
    WU, WV, WW = np.meshgrid(hw, hw, hw, indexing="ij")
    l1 = U
    l2 = V * (1.0 - U)
    l3 = W * (1.0 - U) * (1.0 - V)
    jac = (1.0 - U) ** 2 * (1.0 - V)
    weights = (WU * WV * WW * jac).ravel()
    l0 = 1.0 - l1 - l2 - l3
    bary = np.stack([l0.ravel(), l1.ravel(), l2.ravel(), l3.ravel()], axis=1)
    return bary, weights


def _tetra_estimate(density, verts, n):
    bary, w = _tetra_rule(n)
    pts = bary @ verts
    vol = abs(np.linalg.det(verts[1:] - verts[0])) / 6.0
    # tensor rule weights sum to the unit-cube measure 1; scale by 6*vol
    return 6.0 * vol * np.dot(w, density(pts))


def _split_tetra(verts):
    """Octasection of a tetrahedron into 8 sub-tetrahedra via edge midpoints."""
    m = {
        (i, j): 0.5 * (verts[i] + verts[j])
        for i in range(4)
        for j in range(i + 1, 4)
    }
    v = verts
    m01, m02, m03 = m[(0, 1)], m[(0, 2)], m[(0, 3)]
    m12, m13, m23 = m[(1, 2)], m[(1, 3)], m[(2, 3)]
    corners = [
        (v[0], m01, m02, m03),
        (v[1], m01, m12, m13),
        (v[2], m02, m12, m23),
        (v[3], m03, m13, m23),
        # interior octahedron split along the m01-m23 diagonal
        (m01, m23, m02, m03),
        (m01, m23, m03, m13),
        (m01, m23, m13, m12),
        (m01, m23, m12, m02),
    ]
    return [np.stack(c) for c in corners]


def adaptive_tetra_quad(density, verts, tol=1e-8, max_depth=24, max_cells=300_000):
    """Adaptive integral of ``density`` over the Euclidean tetrahedron ``verts``.

    ``verts`` is a (4, d) array; ``density`` maps an (N, d) array of points to
    N values.  Used with the Klein-model density for hyperbolic volumes, where
    the integrand blows up near ideal vertices; octasection concentrates work
    there.  ``max_cells`` bounds the total work on pathological inputs.
    """
    verts = np.asarray(verts, dtype=float)
    stack = [(verts, float(tol), 0)]
    total = 0.0
    cells = 0
    while stack:
        v, budget, depth = stack.pop()
        cells += 1
        coarse = _tetra_estimate(density, v, 4)
        fine = _tetra_estimate(density, v, 6)
        if abs(fine - coarse) <= budget or depth >= max_depth or cells > max_cells:
            total += fine
        else:
            parts = _split_tetra(v)
            share = budget / len(parts)
            for p in parts:
                stack.append((p, share, depth + 1))
    return total
