"""Hyperboloid-model kernel for hyperbolic 3-space.

Conventions
-----------
Points live on the upper sheet of the unit hyperboloid in Minkowski space
R^{1,3}: arrays of shape ``(..., 4)`` with ``<x, x> = -1`` and ``x0 > 0``,
where the only bilinear form used anywhere is

    <x, y> = -x0*y0 + x1*y1 + x2*y2 + x3*y3.

Isometries are 4x4 matrices ``m`` with ``m^T J m = J`` (J = diag(-1,1,1,1))
and ``m[0,0] > 0`` so the upper sheet is preserved.  All functions broadcast
over leading axes, and every operation that constructs points renormalizes
so the sheet invariant holds to 1e-9 after arbitrary compositions.

Fermi coordinates ``(rho, z, phi)`` around an oriented axis use the metric

    ds^2 = d rho^2 + cosh^2(rho) dz^2 + sinh^2(rho) d phi^2,

with the default axis through the origin ``(1,0,0,0)`` tangent to ``x3``.
With this convention the equatorial plane of a ball centered at the origin
is the set ``z = 0``.
"""

import numpy as np

from .errors import DegenerateCorner, NegativeRadius, OutOfRange
from .quadrature import adaptive_quad, adaptive_quad_2d

J_DIAG = np.array([-1.0, 1.0, 1.0, 1.0])
ORIGIN = np.array([1.0, 0.0, 0.0, 0.0])

# side length below which a corner is treated as degenerate (area zero)
DEGENERACY_EPS = 1e-12


def _degenerate_side(p, q):
    """Side-degeneracy predicate for the corner/area rules.

    The nominal rule is dist < 1e-12, but the distance of two coincident
    lifts far from the origin only evaluates to ~sqrt(eps)*x0 (arccosh near
    1 meets the roundoff of the Minkowski form), so the threshold must grow
    with the coordinate scale or coincident corners would get phantom
    separations and garbage angles.
    """
    floor = np.maximum(DEGENERACY_EPS,
                       1e-7 * np.sqrt(np.abs(p[..., 0] * q[..., 0])))
    return dist(p, q) < floor


def minkowski(x, y):
    """Minkowski pairing <x, y>, broadcasting over leading axes."""
    return np.sum(J_DIAG * x * y, axis=-1)


def normalize_point(v):
    """Rescale ``v`` onto the upper hyperboloid sheet."""
    v = np.asarray(v, dtype=float)
    scale = np.sqrt(np.maximum(-minkowski(v, v), DEGENERACY_EPS))
    out = v / scale[..., None]
    return np.where(out[..., :1] < 0, -out, out)


def point(x1, x2, x3):
    """Point with spatial part (x1, x2, x3), lifted onto the sheet."""
    sp = np.stack(np.broadcast_arrays(
        np.asarray(x1, dtype=float), np.asarray(x2, dtype=float),
        np.asarray(x3, dtype=float)), axis=-1)
    x0 = np.sqrt(1.0 + np.sum(sp * sp, axis=-1))
    return np.concatenate([x0[..., None], sp], axis=-1)


def is_point(p, tol=1e-9):
    p = np.asarray(p)
    return bool(np.all(np.abs(minkowski(p, p) + 1.0) <= tol) and np.all(p[..., 0] > 0))


def dist(p, q):
    """Hyperbolic distance; the arccosh argument is clamped to absorb roundoff."""
    return np.arccosh(np.maximum(1.0, -minkowski(p, q)))


def tangent_norm(v):
    """Length of a tangent vector (the pairing is positive definite on tangents)."""
    return np.sqrt(np.maximum(0.0, minkowski(v, v)))


def exp_map(base, v):
    """Geodesic exponential: follow tangent ``v`` at ``base`` for length |v|."""
    base = np.asarray(base, dtype=float)
    v = np.asarray(v, dtype=float)
    n = tangent_norm(v)[..., None]
    small = n < 1e-14
    unit = np.where(small, 0.0, v / np.where(small, 1.0, n))
    out = np.cosh(n) * base + np.sinh(n) * unit
    return normalize_point(out)


def log_map(p, q):
    """Tangent at ``p`` pointing to ``q`` with length dist(p, q); zero when q = p."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    d = dist(p, q)[..., None]
    u = q + minkowski(p, q)[..., None] * p
    nu = tangent_norm(u)[..., None]
    small = nu < 1e-14
    return np.where(small, 0.0, d * u / np.where(small, 1.0, nu))


def geodesic_point(p, q, t):
    """Constant-speed geodesic from p (t=0) to q (t=1), broadcasting over t."""
    t = np.asarray(t, dtype=float)
    return exp_map(p, t[..., None] * log_map(p, q))


def midpoint(p, q):
    return geodesic_point(p, q, 0.5)


def angle_at(apex, p, q):
    """Angle in [0, pi] at ``apex`` between the geodesics to ``p`` and ``q``.

    Raises :class:`DegenerateCorner` if either side is degenerate (shorter
    than 1e-12, scale-adjusted for far lifts).
    """
    if np.any(_degenerate_side(np.asarray(apex, float), np.asarray(p, float))) or \
       np.any(_degenerate_side(np.asarray(apex, float), np.asarray(q, float))):
        raise DegenerateCorner("corner side is degenerate")
    u = log_map(apex, p)
    w = log_map(apex, q)
    nu = tangent_norm(u)
    nw = tangent_norm(w)
    c = minkowski(u, w) / (nu * nw)
    return np.arccos(np.clip(c, -1.0, 1.0))


def corner_angles(a, b, c):
    """Angles of triangles (a, b, c) at each corner, 0 for degenerate corners.

    Broadcasts over leading axes; returns an array of shape ``(..., 3)``.
    """
    a, b, c = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float),
                                  np.asarray(c, float))
    deg_ab = _degenerate_side(a, b)
    deg_bc = _degenerate_side(b, c)
    deg_ca = _degenerate_side(c, a)
    angles = np.empty(a.shape[:-1] + (3,))
    for i, (apex, u, v, bad) in enumerate((
            (a, b, c, deg_ab | deg_ca),
            (b, c, a, deg_bc | deg_ab),
            (c, a, b, deg_ca | deg_bc))):
        lu = log_map(apex, u)
        lv = log_map(apex, v)
        nu = tangent_norm(lu)
        nv = tangent_norm(lv)
        ok = ~bad & (nu > 0) & (nv > 0)
        denom = np.where(ok, nu * nv, 1.0)
        cosang = np.clip(minkowski(lu, lv) / denom, -1.0, 1.0)
        angles[..., i] = np.where(ok, np.arccos(cosang), 0.0)
    return angles


def triangle_area(a, b, c):
    """Area of the geodesic triangle on (a, b, c) via the angle defect.

    Degenerate triangles (a side below the degeneracy threshold, or
    collinear corners) get area zero; the result is always in [0, pi).
    """
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    c = np.asarray(c, float)
    degenerate = _degenerate_side(a, b) | _degenerate_side(b, c) | _degenerate_side(c, a)
    defect = np.pi - np.sum(corner_angles(a, b, c), axis=-1)
    return np.where(degenerate, 0.0, np.maximum(0.0, defect))


# ------------------------------------------------------------------ measures

def equatorial_disc_area(r):
    """Area 2*pi*(cosh r - 1) of a totally geodesic disc spanning a radius-r ball."""
    r = _check_radius(r)
    return 2.0 * np.pi * (np.cosh(r) - 1.0)


def sphere_area(r):
    """Area 4*pi*sinh^2(r) of the distance sphere of radius r."""
    r = _check_radius(r)
    return 4.0 * np.pi * np.sinh(r) ** 2


def ball_volume(r):
    """Volume pi*(sinh 2r - 2r) of the ball of radius r."""
    r = _check_radius(r)
    return np.pi * (np.sinh(2.0 * r) - 2.0 * r)


def _check_radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise NegativeRadius("radius must be >= 0")
    return r


# ------------------------------------------------------------------ isometries

def is_isometry(m, tol=1e-9):
    m = np.asarray(m)
    J = np.diag(J_DIAG)
    return bool(np.max(np.abs(m.T @ J @ m - J)) <= tol and m[0, 0] > 0)


def apply_isometry(m, pts):
    """Apply a 4x4 isometry to points of shape (..., 4), renormalizing."""
    return normalize_point(np.einsum("ij,...j->...i", m, pts))


def invert_isometry(m):
    """Exact inverse J m^T J of a Minkowski-orthogonal matrix."""
    J = np.diag(J_DIAG)
    return J @ np.asarray(m).T @ J


def project_isometry(m):
    """Newton projection of a near-isometry back onto SO(1,3).

    Fixed points satisfy m^T J m = J; convergence is quadratic, so a few
    steps remove the roundoff drift that accumulates in long products.
    """
    m = np.asarray(m, dtype=float)
    J = np.diag(J_DIAG)
    for _ in range(4):
        m = 0.5 * (m + J @ np.linalg.inv(m).T @ J)
    if m[0, 0] < 0:
        m = -m
    return m


def point_reflection(m):
    """Central symmetry through the point ``m`` (orientation-reversing)."""
    m = np.asarray(m, dtype=float)
    return -np.eye(4) - 2.0 * np.outer(m, m * J_DIAG)


def translation(p, q):
    """The hyperbolic translation along [p, q] taking p to q."""
    return point_reflection(midpoint(p, q)) @ point_reflection(p)


def recenter_triangles(corners, anchor=None):
    """Translate each triangle so its first corner sits at the origin.

    ``corners`` has shape (..., 3, 4); ``anchor`` overrides the translated
    point (shape (..., 4), default the first corner).  Areas and angles are
    invariant, but evaluating them near the origin avoids the ~x0^2 * eps
    precision loss at far-away lifts, so all bulk area/angle computations
    route through this.  The translation itself runs in extended precision:
    moving a far lift back to O(1) coordinates is a catastrophic
    cancellation in float64.
    """
    corners = np.asarray(corners).astype(np.longdouble)
    a = corners[..., 0, :] if anchor is None else np.asarray(anchor).astype(np.longdouble)
    norm2 = np.maximum(-np.sum(J_DIAG * a * a, axis=-1), 1e-300)
    a = a / np.sqrt(norm2)[..., None]
    o = np.zeros_like(a)
    o[..., 0] = 1.0
    mid = a + o
    mid = mid / np.sqrt(-np.sum(J_DIAG * mid * mid, axis=-1))[..., None]
    eye = np.eye(4, dtype=np.longdouble)

    def reflection(m):
        return -eye - 2.0 * np.einsum("...i,...j->...ij", m, m * J_DIAG)

    trans = np.einsum("...ij,...jk->...ik", reflection(mid), reflection(a))
    out = np.einsum("...ij,...kj->...ki", trans, corners)
    return normalize_point(np.asarray(out, dtype=float))


def recenter_points(points, anchor):
    """Extended-precision translation of ``points`` taking ``anchor`` to the origin."""
    pts = np.asarray(points).astype(np.longdouble)
    a = np.asarray(anchor).astype(np.longdouble)
    a = a / np.sqrt(max(-np.sum(J_DIAG * a * a), 1e-300))
    mid = a + np.array([1, 0, 0, 0], dtype=np.longdouble)
    mid = mid / np.sqrt(-np.sum(J_DIAG * mid * mid))
    eye = np.eye(4, dtype=np.longdouble)

    def reflection(m):
        return -eye - 2.0 * np.outer(m, m * J_DIAG)

    trans = reflection(mid) @ reflection(a)
    out = np.einsum("ij,...j->...i", trans, pts)
    return normalize_point(np.asarray(out, dtype=float))


def rotation_xy(phi):
    """Rotation by phi in the (x1, x2) plane, fixing the origin and the x3 axis."""
    m = np.eye(4)
    c, s = np.cos(phi), np.sin(phi)
    m[1, 1], m[1, 2], m[2, 1], m[2, 2] = c, -s, s, c
    return m


def boost_z(t):
    """Translation by length t along the x3 axis through the origin."""
    m = np.eye(4)
    c, s = np.cosh(t), np.sinh(t)
    m[0, 0], m[0, 3], m[3, 0], m[3, 3] = c, s, s, c
    return m


def rotation_about_plane_point(p, phi):
    """Rotation by phi about the axis through ``p`` normal to the plane x3 = 0."""
    t = translation(ORIGIN, p)
    return t @ rotation_xy(phi) @ invert_isometry(t)


def frame_isometry(p, u):
    """Isometry taking the origin to ``p`` and the x3 tangent direction to ``u``.

    ``u`` must be a unit tangent at ``p``.  Carries the standard axis (the
    geodesic through the origin tangent to x3) onto the geodesic through
    ``p`` tangent to ``u``.
    """
    t = translation(ORIGIN, p)
    u0 = invert_isometry(t) @ np.asarray(u, dtype=float)
    s = u0[1:] / np.linalg.norm(u0[1:])
    e3 = np.array([0.0, 0.0, 1.0])
    v = np.cross(e3, s)
    c = float(np.dot(e3, s))
    rot3 = np.eye(3)
    if np.linalg.norm(v) > 1e-14:
        vx = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
        rot3 = np.eye(3) + vx + vx @ vx / (1.0 + c)
    elif c < 0:
        rot3 = np.diag([1.0, -1.0, -1.0])
    r = np.eye(4)
    r[1:, 1:] = rot3
    return project_isometry(t @ r)


def loxodromic_axis_frame(m):
    """Frame isometry aligning the standard axis with a loxodromic's axis.

    ``m`` must have two real eigenvalues off the unit circle; their null
    eigenvectors span the axis.  Conjugating ``boost_z``/``rotation_xy`` by
    the returned frame yields the centralizer of ``m``.
    """
    vals, vecs = np.linalg.eig(np.asarray(m, dtype=float))
    real = [i for i in range(4)
            if abs(vals[i].imag) < 1e-9 and abs(abs(vals[i]) - 1.0) > 1e-9]
    if len(real) != 2:
        raise OutOfRange("matrix is not loxodromic: no real eigenvalue pair off 1")
    vs = []
    for i in real:
        v = np.real(vecs[:, i])
        if v[0] < 0:
            v = -v
        vs.append(v)
    # order by eigenvalue so the frame orientation is deterministic
    if vals[real[0]].real < vals[real[1]].real:
        vs = vs[::-1]
    cross = minkowski(vs[0], vs[1])
    scale = np.sqrt(max(1e-300, -2.0 * cross))
    p = normalize_point((vs[0] + vs[1]) / scale)
    u = (vs[0] - vs[1]) / scale
    u = u + minkowski(p, u) * p
    u = u / tangent_norm(u)
    return frame_isometry(p, u)


def plane_isometry_two_points(u, w, u2, w2):
    """Orientation-preserving isometry of the plane x3 = 0 with u -> u2, w -> w2.

    Requires dist(u, w) = dist(u2, w2) (compared through cosh, which is well
    conditioned).  The rotation part is resolved with the plane's
    orientation (normal x3); the result is projected exactly onto SO(1,3).
    """
    gap = abs(minkowski(u, w) - minkowski(u2, w2))
    if gap > 1e-7 * max(1.0, abs(minkowski(u, w))):
        raise OutOfRange("point pairs are not isometric: distance mismatch")
    t1 = translation(u, u2)
    w1 = apply_isometry(t1, w)
    a = log_map(u2, w1)
    b = log_map(u2, w2)
    na, nb = tangent_norm(a), tangent_norm(b)
    if na < DEGENERACY_EPS or nb < DEGENERACY_EPS:
        return project_isometry(t1)
    a = a / na
    b = b / nb
    normal = np.array([0.0, 0.0, 0.0, 1.0])
    cosang = np.clip(minkowski(a, b), -1.0, 1.0)
    sinang = np.linalg.det(np.stack([u2, a, b, normal]))
    return project_isometry(rotation_about_plane_point(u2, np.arctan2(sinang, cosang)) @ t1)


def random_isometry(rng, scale=1.0):
    """Random isometry: rotation, boost of length ~scale, rotation."""
    def random_rotation():
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        w, x, y, z = q
        r = np.array([
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ])
        m = np.eye(4)
        m[1:, 1:] = r
        return m

    t = scale * rng.uniform(0.0, 1.0)
    boost = np.eye(4)
    boost[0, 0], boost[0, 1], boost[1, 0], boost[1, 1] = np.cosh(t), np.sinh(t), np.sinh(t), np.cosh(t)
    return random_rotation() @ boost @ random_rotation()


def random_point(rng, scale=1.0):
    """Random point: exp from the origin of a random tangent of length ~scale."""
    v = rng.normal(size=3)
    v *= scale * rng.uniform(0.0, 1.0) / np.linalg.norm(v)
    return exp_map(ORIGIN, np.array([0.0, *v]))


# ------------------------------------------------------------- Fermi charts

def fermi_to_hyperboloid(rho, z, phi, axis=None):
    """Map Fermi coordinates to the hyperboloid.

    The default axis passes through the origin tangent to x3; ``axis`` may be
    a 4x4 isometry carrying the default axis to the desired one.  Broadcasts
    over array inputs.
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise OutOfRange("rho must be >= 0")
    z = np.asarray(z, dtype=float)
    phi = np.asarray(phi, dtype=float)
    p = np.stack(np.broadcast_arrays(
        np.cosh(rho) * np.cosh(z),
        np.sinh(rho) * np.cos(phi),
        np.sinh(rho) * np.sin(phi),
        np.cosh(rho) * np.sinh(z)), axis=-1)
    p = normalize_point(p)
    if axis is not None:
        p = apply_isometry(axis, p)
    return p


def hyperboloid_to_fermi(p):
    """Inverse Fermi chart for the default axis; returns (rho, z, phi)."""
    p = np.asarray(p, dtype=float)
    cosh_rho = np.sqrt(np.maximum(1.0, p[..., 0] ** 2 - p[..., 3] ** 2))
    rho = np.arccosh(cosh_rho)
    z = np.arcsinh(p[..., 3] / cosh_rho)
    phi = np.mod(np.arctan2(p[..., 2], p[..., 1]), 2.0 * np.pi)
    return rho, z, phi


def boundary_rho(r, z):
    """Fermi rho of the sphere of radius r about the origin at height z, |z| <= r."""
    arg = np.cosh(r) / np.cosh(z)
    return np.arccosh(np.maximum(1.0, arg))


def plane_cap_volume(r, d, tol=1e-9):
    """Volume of the ball slab beyond the geodesic plane z = d, 0 <= d <= r.

    Computed by iterated 2D quadrature of the Fermi volume element
    2*pi*sinh(rho)*cosh(rho) over the cap region; ``plane_cap_volume(r, 0)``
    is half the ball volume.
    """
    if r < 0:
        raise NegativeRadius("radius must be >= 0")
    if not 0.0 <= d <= r:
        raise OutOfRange("need 0 <= d <= r")
    if d == r or r == 0.0:
        return 0.0

    def element(z, rho):
        return 2.0 * np.pi * np.sinh(rho) * np.cosh(rho)

    def bounds(z):
        return 0.0, boundary_rho(r, z)

    return adaptive_quad_2d(element, d, r, bounds, tol=tol)


# ----------------------------------------------------------- test-side oracles

def ball_volume_quadrature(r, tol=1e-12):
    """Independent route to the ball volume: integral of the sphere areas."""
    return adaptive_quad(lambda t: 4.0 * np.pi * np.sinh(t) ** 2, 0.0, float(r), tol=tol)


def to_upper_half_space(p):
    """Convert hyperboloid points to upper-half-space coordinates (..., 3).

    Chain: hyperboloid -> Poincare ball -> half space, sending the origin to
    (0, 0, 1).  Used as a cross-model distance oracle in tests.
    """
    p = np.asarray(p, dtype=float)
    b = p[..., 1:] / (1.0 + p[..., :1])
    denom = b[..., 0] ** 2 + b[..., 1] ** 2 + (1.0 - b[..., 2]) ** 2
    u = 2.0 * b[..., 0] / denom
    v = 2.0 * b[..., 1] / denom
    w = (1.0 - np.sum(b * b, axis=-1)) / denom
    return np.stack([u, v, w], axis=-1)


def upper_half_space_dist(x, y):
    """Distance formula in the upper-half-space model."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    diff = np.sum((x - y) ** 2, axis=-1)
    return np.arccosh(1.0 + diff / (2.0 * x[..., 2] * y[..., 2]))
