"""Reference realizations used by tests, the CLI demos and the acceptance suite.

* ``torus_axis_realization``: the standard torus triangulation carried by two
  commuting translations along a common geodesic; every corner lift is on
  that axis, so all triangles are degenerate and the total area is zero.

* ``genus2_octagon_realization``: the regular hyperbolic octagon with corner
  angle pi/4 and commutator side pairing a b a' b' c d c' d', realized inside
  the plane x3 = 0 of hyperbolic 3-space.  The triangulation is
  ``standard_genus_g(2)`` (diagonals from one corner); the vertex lifts are
  the octagon corners, the vertex angle sum is exactly 2*pi and the total
  area is the octagon area 4*pi.

* ``perturbed_octagon_realization``: random relation-preserving perturbations
  of the octagon's holonomies, built from moves that preserve the surface
  relation exactly (centralizer twists of the generator pairs, global
  conjugation, basepoint motion), so the triangle relations stay at the
  roundoff level without any nonlinear solve.
"""

import math
from functools import lru_cache

import numpy as np

from . import hypgeom as hg
from .coned_surface import realize
from .triangulation import standard_genus_g


def torus_axis_realization(alpha=0.7, beta=1.1):
    """Two boosts along the x3 axis; the third edge carries their product."""
    tri = standard_genus_g(1)
    a = hg.boost_z(alpha)
    b = hg.boost_z(beta)
    # edge labels of the standard torus: 0 = {darts 0,4}, 1 = {1,5}, 2 = {2,3};
    # darts 0, 1 run the two polygon side classes, dart 2 is the reversed
    # diagonal, so its smaller-dart matrix is (a b)^-1
    hol = {0: a, 1: b, 2: hg.invert_isometry(a @ b)}
    return realize(tri, hg.ORIGIN, hol)


def octagon_vertices():
    """Corners of the regular octagon with vertex angle pi/4, in the plane x3=0."""
    cosh_dv = 1.0 / math.tan(math.pi / 8.0) ** 2
    dv = math.acosh(cosh_dv)
    angles = 2.0 * math.pi * np.arange(8) / 8.0
    return hg.exp_map(
        np.broadcast_to(hg.ORIGIN, (8, 4)),
        dv * np.stack([np.zeros(8), np.cos(angles), np.sin(angles), np.zeros(8)], axis=1),
    )


@lru_cache(maxsize=1)
def _octagon_edge_path_cached():
    p, gammas = _build_octagon_edge_path()
    p.setflags(write=False)
    return p, tuple(g.copy() for g in gammas)


def octagon_edge_path():
    p, gammas = _octagon_edge_path_cached()
    return p, [g.copy() for g in gammas]


def _build_octagon_edge_path():
    """Prefix isometries gamma_1..gamma_7 developing the octagon corners.

    gamma_k carries the base corner P0 to corner Pk; consecutive quotients
    gamma_k^-1 gamma_{k+1} realize the letters of the boundary word
    a b a^-1 b^-1 c d c^-1 d^-1, and the four letter constraints determine
    every rotational degree of freedom from the corner positions alone.
    """
    p = octagon_vertices()
    inv = hg.invert_isometry
    ap = hg.apply_isometry

    proj = hg.project_isometry
    # letter a: gamma_1 = gamma_3^-1 gamma_2 forces gamma_3(P1) = P2
    g3 = hg.plane_isometry_two_points(p[0], p[1], p[3], p[2])
    # letter b: gamma_4 = gamma_3 gamma_2^-1 gamma_1 and gamma_4(P0) = P4
    # force gamma_2^-1(P1) = gamma_3^-1(P4)
    y = ap(inv(g3), p[4])
    g2 = hg.plane_isometry_two_points(p[0], y, p[2], p[1])
    g1 = proj(inv(g3) @ g2)
    g4 = proj(g3 @ inv(g2) @ g1)
    # letter d: gamma_7 = gamma_5^-1 gamma_6 forces gamma_5(P7) = P6
    g5 = hg.plane_isometry_two_points(p[0], p[7], p[5], p[6])
    # letter c: gamma_6 conjugates gamma_5 to gamma_4^-1 gamma_5, pinned at P0
    z = ap(inv(g4), p[5])
    g6 = hg.plane_isometry_two_points(p[0], z, p[6], ap(g5, p[6]))
    g7 = proj(inv(g5) @ g6)
    gammas = [np.eye(4), g1, g2, g3, g4, g5, g6, g7, np.eye(4)]
    for k in range(8):
        err = np.max(np.abs(ap(gammas[k], p[0]) - p[k % 8]))
        if err > 1e-8:
            raise AssertionError(f"octagon development failed at corner {k}: {err}")
    return p, gammas


def _octagon_generators(gammas):
    inv = hg.invert_isometry
    proj = hg.project_isometry
    x_a = gammas[1]
    x_b = proj(inv(gammas[1]) @ gammas[2])
    x_c = proj(inv(gammas[4]) @ gammas[5])
    x_d = proj(inv(gammas[5]) @ gammas[6])
    return x_a, x_b, x_c, x_d


def _gammas_from_generators(x_a, x_b, x_c, x_d):
    # project each prefix: commutators amplify roundoff by the fourth power
    # of the matrix scale, which would otherwise breach the 1e-6 tolerance
    inv = hg.invert_isometry
    proj = hg.project_isometry
    g1 = proj(x_a)
    g2 = proj(x_a @ x_b)
    g3 = proj(g2 @ inv(x_a))
    g4 = proj(g3 @ inv(x_b))
    g5 = proj(g4 @ x_c)
    g6 = proj(g5 @ x_d)
    g7 = proj(g6 @ inv(x_c))
    return [np.eye(4), g1, g2, g3, g4, g5, g6, g7]


def _holonomy_from_gammas(tri, gammas, letters):
    """Edge holonomies of the standard 4g-gon triangulation from prefix maps.

    Triangle T_k (slots 3(k-1)..) has dart matrices
    (gamma_k, gamma_k^-1 gamma_{k+1}, gamma_{k+1}^-1); the edge dictionary
    keeps the matrix of each edge's smaller dart.
    """
    inv = hg.invert_isometry
    proj = hg.project_isometry
    n_tri = tri.n_triangles
    dart_mats = []
    for t in range(n_tri):
        k = t + 1
        g_k = gammas[k]
        g_next = gammas[k + 1] if k + 1 < len(gammas) else np.eye(4)
        dart_mats.extend([g_k, proj(inv(g_k) @ g_next), inv(g_next)])
    hol = {}
    for label in tri.edge_ids():
        d, _ = tri.edge_darts(label)
        hol[label] = dart_mats[d]
    return hol


def genus2_octagon_realization():
    tri = standard_genus_g(2)
    p, gammas = octagon_edge_path()
    hol = _holonomy_from_gammas(tri, gammas, None)
    return realize(tri, p[0], hol)


# ----------------------------------------------------- relation-preserving noise

_SO13_BASIS = None


def so13_basis():
    """The six generators of SO(1,3): three rotations and three boosts."""
    global _SO13_BASIS
    if _SO13_BASIS is None:
        basis = []
        for i, j in ((1, 2), (1, 3), (2, 3)):
            m = np.zeros((4, 4))
            m[i, j], m[j, i] = -1.0, 1.0
            basis.append(m)
        for i in (1, 2, 3):
            m = np.zeros((4, 4))
            m[0, i] = m[i, 0] = 1.0
            basis.append(m)
        _SO13_BASIS = basis
    return _SO13_BASIS


def expm(a, order=18):
    """Matrix exponential by scaling and squaring (adequate for 4x4 inputs)."""
    a = np.asarray(a, dtype=float)
    norm = np.max(np.abs(a))
    k = max(0, int(math.ceil(math.log2(max(norm, 1e-16) / 0.25))))
    b = a / (2 ** k)
    term = np.eye(4)
    out = np.eye(4)
    for i in range(1, order + 1):
        term = term @ b / i
        out = out + term
    for _ in range(k):
        out = out @ out
    return out


def _small_isometry(rng, amplitude):
    xi = rng.normal(scale=amplitude, size=6)
    basis = so13_basis()
    return expm(sum(x * e for x, e in zip(xi, basis)))


def perturbed_octagon_realization(rng, amplitude=0.35, base_noise=0.15):
    """Random holonomies near the octagon's that satisfy the surface relation.

    The relation [X_a, X_b][X_c, X_d] = I is preserved exactly by

    * conjugating the pair (X_a, X_b) by any Z1 in the centralizer of the
      commutator K = [X_a, X_b] (translations/rotations along K's axis),
    * conjugating (X_c, X_d) by any Z2 from the same centralizer
      (Z2 fixes K, hence also K^-1 = [X_c, X_d]),
    * conjugating all four generators by an arbitrary isometry G, and
    * moving the basepoint lift, which re-cones every triangle.

    Composing random choices of all four gives genuinely different realized
    geometry (areas vary by O(1)) while keeping the triangle relations at
    roundoff level, with no nonlinear solve.  A commutator equation solved
    numerically in float64 would leave ~1e-8 relation defects that the
    surrounding matrix scales amplify past the 1e-6 tolerance.
    """
    tri = standard_genus_g(2)
    p, gammas = octagon_edge_path()
    x_a, x_b, x_c, x_d = _octagon_generators(gammas)
    inv = hg.invert_isometry
    proj = hg.project_isometry
    k_comm = proj(gammas[4])          # = [X_a, X_b]
    frame = hg.loxodromic_axis_frame(k_comm)
    frame_inv = inv(frame)

    def centralizer_element(s, t):
        return proj(frame @ hg.boost_z(s) @ hg.rotation_xy(t) @ frame_inv)

    z1 = centralizer_element(amplitude * rng.normal(), amplitude * rng.normal())
    z2 = centralizer_element(amplitude * rng.normal(), amplitude * rng.normal())
    g_all = _small_isometry(rng, 0.5 * amplitude)

    def conj(z, m):
        return proj(z @ m @ inv(z))

    x_a, x_b = conj(z1, x_a), conj(z1, x_b)
    x_c, x_d = conj(z2, x_c), conj(z2, x_d)
    x_a, x_b, x_c, x_d = (conj(g_all, m) for m in (x_a, x_b, x_c, x_d))
    gammas2 = _gammas_from_generators(x_a, x_b, x_c, x_d)
    hol = _holonomy_from_gammas(tri, gammas2, None)
    base0 = hg.apply_isometry(g_all, p[0])
    v = rng.normal(scale=base_noise, size=4)
    v_tan = v + hg.minkowski(base0, v) * base0   # project onto the tangent space
    base = hg.exp_map(base0, v_tan)
    return realize(tri, base, hol)
