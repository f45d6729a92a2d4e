"""Coned simplicial surfaces in hyperbolic 3-space from edge holonomies.

A one-vertex triangulation is realized geometrically by a basepoint lift
``q`` and one isometry per edge (the holonomy of the edge loop, read along
the edge's smaller dart).  Triangle ``t`` with darts ``(d0, d1, d2)`` closes
up iff ``H(d0) H(d1) H(d2) = I``; its corner lifts are

    q,  H(d0) q,  H(d0) H(d1) q,

and in curvature -1 the coned triangle over those corners is the totally
geodesic triangle they span, so its area is the angle defect and is
independent of the coning corner.  Everything downstream (areas, vertex
angle sums, the interpolation families of the flip construction, glued
tetrahedron volumes) reduces to corner positions.

The two interpolation families both introduce one extra vertex ``v_t`` and
two extra triangles, keeping the triangle count at F + 2 = 4g and the angle
sum at ``v_t`` at least 2*pi (its star contains two opposite geodesic rays):

* vertex slide: ``v_t`` runs along an edge at constant speed, subdividing
  the two incident triangles;
* flip interpolation: ``v_t`` runs along a boundary edge of the flip square
  from an end of the old diagonal to an end of the new one, coning the
  square's boundary (which never moves) from ``v_t``.

Working envelope: flips scramble hyperbolic structures, so edge lengths
(and corner-lift coordinates, which grow like cosh of them) increase
exponentially along flip paths.  Profiles over a handful of flips from a
moderate realization are resolved to ~1e-9; double precision gives out for
much longer paths, where angle computations at lifts beyond distance ~15
lose meaning.
"""

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from . import hypgeom as hg
from .errors import (
    DegenerateEdge,
    NotAdjacent,
    NotFlippable,
    NotInterpolable,
    OutOfRange,
    RelationViolated,
)
from .quadrature import adaptive_tetra_quad
from .triangulation import (
    OneVertexTriangulation,
    next_dart,
    prev_dart,
    triangulation_from_json,
    triangulation_to_json,
)

RELATION_TOL = 1e-6


# --------------------------------------------------------------- realization

@dataclass(frozen=True)
class RealizedSurface:
    """A triangulation with per-edge holonomies, basepoint and corner lifts."""

    tri: OneVertexTriangulation
    base: np.ndarray
    hol: dict                      # edge label -> 4x4 isometry (smaller dart)
    dart_hol: tuple = field(repr=False, default=None)
    corners: np.ndarray = field(repr=False, default=None)   # (F, 3, 4)
    prefixes: np.ndarray = field(repr=False, default=None)  # (F, 3, 4, 4)
    residuals: np.ndarray = field(repr=False, default=None)

    def triangle_areas(self):
        c = hg.recenter_triangles(self.corners)
        return hg.triangle_area(c[:, 0], c[:, 1], c[:, 2])

    def corner_angle_table(self):
        c = hg.recenter_triangles(self.corners)
        return hg.corner_angles(c[:, 0], c[:, 1], c[:, 2])

    def total_area(self):
        return float(np.sum(self.triangle_areas()))

    def vertex_angle_sum(self):
        return float(np.sum(self.corner_angle_table()))

    def gauss_bonnet_residual(self):
        """|area - ((4g-2)*pi - theta(v))|; identically ~0 in curvature -1."""
        g = self.tri.genus
        return abs(self.total_area() - ((4 * g - 2) * np.pi - self.vertex_angle_sum()))


def dart_holonomies(tri, hol):
    """Per-dart holonomy: the edge matrix along its smaller dart, else inverse."""
    out = [None] * tri.dart_count
    for label, m in hol.items():
        d, d2 = tri.edge_darts(label)
        m = np.asarray(m, dtype=float)
        out[d] = m
        out[d2] = hg.invert_isometry(m)
    missing = [d for d, m in enumerate(out) if m is None]
    if missing:
        raise NotAdjacent(f"holonomy missing for edges of darts {missing}")
    return tuple(out)


def realize(tri, base, hol, tol=RELATION_TOL):
    """Build a realized surface, checking the triangle holonomy relations.

    Raises :class:`RelationViolated` with the first offending triangle if a
    boundary word strays from the identity by more than ``tol``; degenerate
    triangles (repeated corner lifts) are allowed.
    """
    base = hg.normalize_point(np.asarray(base, dtype=float))
    for label, m in hol.items():
        if not hg.is_isometry(np.asarray(m, dtype=float), tol=tol):
            raise OutOfRange(f"holonomy for edge {label} is not an isometry")
    dh = dart_holonomies(tri, hol)
    f = tri.n_triangles
    # corner lifts in extended precision: the holonomy entries grow like
    # cosh(translation length) and float64 products would smear the corners
    # by more than the 1e-9 the family endpoint checks need
    prefixes = np.empty((f, 3, 4, 4), dtype=np.longdouble)
    residuals = np.empty(f)
    eye = np.eye(4, dtype=np.longdouble)
    for t in range(f):
        h0 = dh[3 * t].astype(np.longdouble)
        h1 = dh[3 * t + 1].astype(np.longdouble)
        h2 = dh[3 * t + 2].astype(np.longdouble)
        prefixes[t, 0] = eye
        prefixes[t, 1] = h0
        prefixes[t, 2] = h0 @ h1
        residuals[t] = float(np.max(np.abs(prefixes[t, 2] @ h2 - eye)))
    worst = int(np.argmax(residuals))
    if residuals[worst] > tol:
        raise RelationViolated(worst, float(residuals[worst]))
    corners = np.einsum("tjab,b->tja", prefixes, base.astype(np.longdouble))
    corners = hg.normalize_point(np.asarray(corners, dtype=float))
    return RealizedSurface(tri=tri, base=base, hol=dict(hol), dart_hol=dh,
                           corners=corners, prefixes=prefixes, residuals=residuals)


def develop_across(s, dart):
    """Deck transformation gluing the twin triangle's lift across ``dart``.

    If ``dart`` runs between corners ``i -> i+1`` of its triangle's lift, the
    returned isometry carries the twin triangle's own anchored lift onto the
    copy adjacent along that geodesic segment.
    """
    t, i = divmod(dart, 3)
    d2 = s.tri.twin[dart]
    t2, k = divmod(d2, 3)
    gamma = s.prefixes[t, i] @ s.dart_hol[dart].astype(np.longdouble) \
        @ _inv_extended(s.prefixes[t2, k])
    return gamma


def _inv_extended(a):
    """Extended-precision inverse: float64 seed refined by two Newton steps."""
    a_ld = np.asarray(a, dtype=np.longdouble)
    y = np.linalg.inv(np.asarray(a, dtype=float)).astype(np.longdouble)
    eye2 = 2.0 * np.eye(a_ld.shape[0], dtype=np.longdouble)
    y = y @ (eye2 - a_ld @ y)
    y = y @ (eye2 - a_ld @ y)
    return y


def total_area(s):
    return s.total_area()


def vertex_angle_sum(s):
    return s.vertex_angle_sum()


# ------------------------------------------------------------- area profiles

@dataclass
class AreaProfile:
    """Sampled areas along an interpolation family (or a single surface).

    ``min_theta`` records the angle sum at the inserted vertex (NaN where no
    vertex is inserted); ``extras`` holds family internals used by tests and
    plots (inserted-vertex positions, main-vertex angle sums, ...).
    """

    t: np.ndarray
    area: np.ndarray
    min_theta: np.ndarray
    triangles: np.ndarray
    extras: dict = field(default_factory=dict)

    @property
    def sup_area(self):
        return float(np.max(self.area))

    def interior_min_theta(self):
        """Smallest inserted-vertex angle sum over samples with 0 < t < 1 locally."""
        mask = self.extras.get("interior_mask")
        if mask is None:
            mask = ~np.isnan(self.min_theta)
        vals = self.min_theta[mask & ~np.isnan(self.min_theta)]
        return float(np.min(vals)) if vals.size else float("nan")

    def to_rows(self):
        return [
            (float(self.t[i]), float(self.area[i]), float(self.min_theta[i]),
             int(self.triangles[i]))
            for i in range(len(self.t))
        ]

    def to_csv(self, path_or_file):
        if hasattr(path_or_file, "write"):
            self._write_csv(path_or_file)
        else:
            with open(path_or_file, "w", newline="") as fh:
                self._write_csv(fh)

    def _write_csv(self, fh):
        w = csv.writer(fh)
        w.writerow(["t", "area", "min_theta", "triangles"])
        for row in self.to_rows():
            w.writerow([repr(row[0]), repr(row[1]), repr(row[2]), row[3]])

    def csv_text(self):
        buf = io.StringIO()
        self._write_csv(buf)
        return buf.getvalue()

    def to_json(self):
        return {
            "t": [float(x) for x in self.t],
            "area": [float(x) for x in self.area],
            "min_theta": [None if np.isnan(x) else float(x) for x in self.min_theta],
            "triangles": [int(x) for x in self.triangles],
            "sup_area": self.sup_area,
        }


def surface_profile(s):
    """Degenerate profile of a single realized surface (no interpolation)."""
    return AreaProfile(
        t=np.array([0.0]),
        area=np.array([s.total_area()]),
        min_theta=np.array([np.nan]),
        triangles=np.array([s.tri.n_triangles]),
        extras={"interior_mask": np.array([False])},
    )


def _concat_profiles(profiles):
    ts, areas, thetas, counts, masks = [], [], [], [], []
    n = len(profiles)
    for i, p in enumerate(profiles):
        t = (i + p.t) / n
        if i > 0:
            # the first sample duplicates the previous family's endpoint
            sl = slice(1, None)
        else:
            sl = slice(None)
        ts.append(t[sl])
        areas.append(p.area[sl])
        thetas.append(p.min_theta[sl])
        counts.append(p.triangles[sl])
        masks.append(p.extras.get("interior_mask", ~np.isnan(p.min_theta))[sl])
    return AreaProfile(
        t=np.concatenate(ts),
        area=np.concatenate(areas),
        min_theta=np.concatenate(thetas),
        triangles=np.concatenate(counts),
        extras={"interior_mask": np.concatenate(masks)},
    )


# ---------------------------------------------------------------- families

def _family_profile(s, skip_triangles, fans, t_vals, boundary_points,
                    extra_inserted=()):
    """Assemble an interpolation family's profile.

    ``fans`` is a list of (n, 3, 4) corner stacks whose corner 0 is the
    inserted vertex; ``skip_triangles`` are the surface triangles replaced by
    the fans.  ``extra_inserted`` lists (fan_index, corner_index) pairs whose
    angles also belong to the inserted vertex (lifts of it on identified
    edges).  The static remainder is shared by every sample.
    """
    keep = [t for t in range(s.tri.n_triangles) if t not in skip_triangles]
    if keep:
        kept = hg.recenter_triangles(s.corners[keep])
        static_angles = hg.corner_angles(kept[:, 0], kept[:, 1], kept[:, 2])
        static_area = float(np.sum(hg.triangle_area(kept[:, 0], kept[:, 1], kept[:, 2])))
        static_theta = float(np.sum(static_angles))
    else:
        static_area = static_theta = 0.0

    n = len(t_vals)
    area = np.full(n, static_area)
    theta_new = np.zeros(n)
    theta_main = np.full(n, static_theta)
    extra = {}
    for idx, corner in extra_inserted:
        extra.setdefault(idx, set()).add(corner)
    for fi, fan in enumerate(fans):
        fan = hg.recenter_triangles(fan)
        a, b, c = fan[:, 0], fan[:, 1], fan[:, 2]
        angles = hg.corner_angles(a, b, c)
        area += hg.triangle_area(a, b, c)
        for corner in range(3):
            if corner == 0 or corner in extra.get(fi, ()):
                theta_new += angles[:, corner]
            else:
                theta_main += angles[:, corner]
    interior = (t_vals > 0.0) & (t_vals < 1.0)
    count = s.tri.n_triangles + 2
    return AreaProfile(
        t=np.asarray(t_vals, dtype=float),
        area=area,
        min_theta=theta_new,
        triangles=np.full(n, count, dtype=int),
        extras={
            "interior_mask": interior,
            "theta_main": theta_main,
            "boundary_points": boundary_points,
        },
    )


def _edge_dart_in_triangle(s, tri_id, edge_id):
    d, d2 = s.tri.edge_darts(edge_id)
    if d // 3 == d2 // 3:
        raise NotAdjacent(
            f"edge {edge_id} has both sides on triangle {d // 3}; "
            "the subdivision needs two distinct triangles"
        )
    if d // 3 == tri_id:
        return d
    if d2 // 3 == tri_id:
        return d2
    raise NotAdjacent(f"edge {edge_id} does not bound triangle {tri_id}")


def slide_vertex_family(s, tri_id, edge_id, n_samples):
    """Slide an inserted vertex along an edge of a triangle, re-coning around it.

    At parameter t the vertex ``v_t`` sits at the constant-speed point of the
    edge geodesic; the two incident triangles are subdivided into four coned
    from ``v_t`` (triangle count F + 2).  The endpoint samples reproduce the
    two un-subdivided surfaces.
    """
    if n_samples < 2:
        raise OutOfRange("n_samples must be >= 2")
    d = _edge_dart_in_triangle(s, tri_id, edge_id)
    t1, i = divmod(d, 3)
    p = s.corners[t1, i]
    q = s.corners[t1, (i + 1) % 3]
    r = s.corners[t1, (i + 2) % 3]
    if hg.dist(p, q) < 1e-12:
        raise DegenerateEdge(f"edge {edge_id} has zero length in this realization")
    d2 = s.tri.twin[d]
    t2, k = divmod(d2, 3)
    gamma = develop_across(s, d)
    w = hg.apply_isometry(gamma, s.corners[t2, (k + 2) % 3])
    # re-anchor at p: far-from-origin lifts lose ~x0^2 * eps per angle
    p, q, r, w = (hg.recenter_points(y, p) for y in (p, q, r, w))

    ts = np.linspace(0.0, 1.0, n_samples)
    vt = hg.geodesic_point(p, q, ts)
    # exact endpoints: a 1e-12 drift in the t=1 lift would turn the two
    # collapsed fan triangles into slivers with O(1e-3) spurious area
    vt[0] = p
    vt[-1] = q

    def stack(u, v):
        return np.stack([vt, np.broadcast_to(u, vt.shape), np.broadcast_to(v, vt.shape)], axis=1)

    fans = [stack(q, r), stack(r, p), stack(p, w), stack(w, q)]
    return _family_profile(s, {t1, t2}, fans, ts,
                           boundary_points=np.stack([p, q, r, w]))


def _flip_candidates(s, edge_id):
    d, d2 = s.tri.edge_darts(edge_id)
    if d // 3 == d2 // 3:
        raise NotFlippable(f"edge {edge_id} is not flippable")
    return [
        (d, "prev"), (d2, "prev"), (d, "next"), (d2, "next"),
    ]


def flip_family(s, edge_id, n_samples, _candidate=None):
    """Interpolate through a flip: cone the flip square from a moving vertex.

    The square Q around the flipped diagonal keeps its boundary fixed; the
    inserted vertex travels a boundary edge of Q from an end of the old
    diagonal to an end of the new one, so the t=0 and t=1 samples realize the
    pre- and post-flip conings.  The side triangle T sharing that boundary
    edge is subdivided along.  When every boundary edge of Q has its other
    side on Q itself (possible only on the torus, where the square is the
    whole surface), the inserted vertex appears on the identified boundary
    side too and splits the fan triangle carrying it.
    """
    if n_samples < 2:
        raise OutOfRange("n_samples must be >= 2")
    candidates = _flip_candidates(s, edge_id) if _candidate is None else [_candidate]
    for diag, mode in candidates:
        t1 = diag // 3
        t2 = s.tri.twin[diag] // 3
        g = prev_dart(diag) if mode == "prev" else next_dart(diag)
        t_side = s.tri.twin[g] // 3
        if t_side in (t1, t2):
            continue
        return _flip_family_at(s, edge_id, diag, mode, n_samples)
    return _flip_family_at(s, edge_id, *candidates[0][:2], n_samples,
                           identified=True)


def _flip_family_at(s, edge_id, diag, mode, n_samples, identified=False):
    t1, i = divmod(diag, 3)
    a = s.corners[t1, i]          # start of the old diagonal
    b = s.corners[t1, (i + 1) % 3]
    c = s.corners[t1, (i + 2) % 3]
    d2 = s.tri.twin[diag]
    t2, k = divmod(d2, 3)
    gamma_q = develop_across(s, diag)
    dd = hg.apply_isometry(gamma_q, s.corners[t2, (k + 2) % 3])
    g = prev_dart(diag) if mode == "prev" else next_dart(diag)
    if not identified:
        t_side, m = divmod(s.tri.twin[g], 3)
        gamma_t = develop_across(s, g)
        x = hg.apply_isometry(gamma_t, s.corners[t_side, (m + 2) % 3])
        points = (a, b, c, dd, x)
    else:
        t_side = None
        points = (a, b, c, dd, dd)
    # re-anchor at a: far-from-origin lifts lose ~x0^2 * eps per angle
    a, b, c, dd, x = (hg.recenter_points(y, points[0]) for y in points)

    if mode == "prev":
        v0, v1 = a, c            # slide from the old-diagonal end A to C
        fan_static = [(a, dd), (dd, b), (b, c)]
    else:
        v0, v1 = b, c
        fan_static = [(c, a), (a, dd), (dd, b)]
    if hg.dist(v0, v1) < 1e-12:
        raise DegenerateEdge(f"boundary edge of the flip square at edge {edge_id} is degenerate")

    ts = np.linspace(0.0, 1.0, n_samples)
    vt = hg.geodesic_point(v0, v1, ts)
    vt[0] = v0          # exact endpoints, as in the slide family
    vt[-1] = v1

    def stack(u, v):
        return np.stack([vt, np.broadcast_to(u, np.shape(vt)),
                         np.broadcast_to(v, np.shape(vt))], axis=1)

    def stack_var(u, v):
        return np.stack([vt, u, v], axis=1)

    fans = [stack(u, v) for u, v in fan_static]
    extra_inserted = []
    if not identified:
        fans.append(stack(v1, x))
        fans.append(stack(x, v0))
        skip = {t1, t2, t_side}
    else:
        # the slide edge's twin is itself a boundary side of Q: locate its
        # developed run and split the fan triangle carrying it at the second
        # lift w_t of the moving vertex
        g2 = s.tri.twin[g]
        dev = {
            next_dart(diag): (b, c),
            prev_dart(diag): (c, a),
            next_dart(d2): (a, dd),
            prev_dart(d2): (dd, b),
        }
        q_start, q_end = dev[g2]
        # fraction along the twin dart matching fraction ts along the slide
        frac = ts if mode == "prev" else 1.0 - ts
        wt = hg.geodesic_point(q_start, q_end, frac)
        side_of = {("prev", 0): (a, dd), ("prev", 1): (dd, b), ("prev", 2): (b, c),
                   ("next", 0): (c, a), ("next", 1): (a, dd), ("next", 2): (dd, b)}
        target = None
        for j in range(3):
            u, v = side_of[(mode, j)]
            if np.array_equal(u, q_start) and np.array_equal(v, q_end):
                target = j
                break
        if target is None:
            raise NotInterpolable("identified boundary side not found on the square")
        u, v = fan_static[target]
        fans[target] = stack_var(np.broadcast_to(u, np.shape(vt)), wt)
        fans.append(stack_var(wt, np.broadcast_to(v, np.shape(vt))))
        # w_t corners (index 2 of the first piece, index 1 of the second)
        # are lifts of the inserted vertex
        extra_inserted = [(target, 2), (len(fans) - 1, 1)]
        skip = {t1, t2}
    profile = _family_profile(s, skip, fans, ts,
                              boundary_points=np.stack([a, b, c, dd, x]),
                              extra_inserted=extra_inserted)
    profile.extras["quad"] = np.stack([a, b, c, dd])
    profile.extras["edge_id"] = edge_id
    return profile


def flip_holonomy(s, edge_id, tol=RELATION_TOL):
    """Realize the flipped triangulation, deriving the new diagonal's holonomy.

    The flipped edge keeps its label; its matrix is forced by the relation of
    the new triangle (the other edges' matrices just follow their darts).
    Holonomies that close their relations only approximately stay
    approximate: the defect is a property of the representation and rides
    along amplified by the growing matrix scale, so long or revisiting flip
    paths may need a looser ``tol`` than fresh realizations.
    """
    d, d2 = s.tri.edge_darts(edge_id)
    if d // 3 == d2 // 3:
        raise NotFlippable(f"edge {edge_id} is not flippable")
    a = next_dart(d)
    b = next_dart(a)
    c = next_dart(d2)
    f = next_dart(c)
    move = {b: a, c: b, f: c, a: f}
    tri2 = s.tri.flip(edge_id)
    new_dart_hol = [None] * tri2.dart_count
    for x in range(s.tri.dart_count):
        new_dart_hol[move.get(x, x)] = s.dart_hol[x]
    # new triangle (d, a, b) must close: H'(d) = (H'(a) H'(b))^-1;
    # project the product back onto the isometry group so repeated flips do
    # not accumulate off-group drift on top of the relation defect
    prod = new_dart_hol[a].astype(np.longdouble) @ new_dart_hol[b].astype(np.longdouble)
    hd = hg.project_isometry(np.asarray(_inv_extended(prod), dtype=float))
    new_dart_hol[d] = hd
    new_dart_hol[d2] = hg.invert_isometry(hd)
    hol2 = {}
    for label in tri2.edge_ids():
        lo, _ = tri2.edge_darts(label)
        hol2[label] = new_dart_hol[lo]
    return realize(tri2, s.base, hol2, tol=tol)


def sweepout_profile(s, moves, n_samples=64, hol_end=None, tol=RELATION_TOL):
    """Concatenated area profile of the flip interpolations along a flip path.

    Each flip contributes one interpolation family; the running surface's
    holonomies are propagated across each flip.  With ``hol_end`` given, the
    propagated final holonomies are checked against it (tolerance 1e-6).
    Returns the profile; the final surface is stored in ``extras['final']``.
    """
    if not moves:
        prof = surface_profile(s)
        prof.extras["final"] = s
        return prof
    profiles = []
    cur = s
    for e in moves:
        profiles.append(flip_family(cur, e, n_samples))
        cur = flip_holonomy(cur, e, tol=tol)
    if hol_end is not None:
        for label, m in hol_end.items():
            if np.max(np.abs(np.asarray(m, float) - cur.hol[label])) > RELATION_TOL:
                raise RelationViolated(label, float(np.max(np.abs(np.asarray(m, float) - cur.hol[label]))))
    prof = _concat_profiles(profiles)
    prof.extras["final"] = cur
    return prof


# ------------------------------------------------------------- tetrahedra

def tetra_volume(p0, p1, p2, p3, tol=1e-8):
    """Hyperbolic volume of the geodesic tetrahedron on four points.

    In the Klein model geodesic tetrahedra are Euclidean ones, so this is an
    adaptive quadrature of the Klein volume density (1 - |x|^2)^(-2) over the
    Euclidean hull.  The corners are first translated so their centroid sits
    at the origin: volumes are isometry-invariant, and a tetrahedron far
    from the origin would hug the Klein boundary where the density explodes.
    Degenerate (coplanar) corner sets give 0.
    """
    verts = np.stack([np.asarray(p, float) for p in (p0, p1, p2, p3)])
    center = hg.normalize_point(np.sum(verts, axis=0))
    verts = hg.recenter_points(verts, center)
    klein = verts[:, 1:] / verts[:, :1]
    if abs(np.linalg.det(klein[1:] - klein[0])) < 1e-14:
        return 0.0

    def density(pts):
        r2 = np.sum(pts * pts, axis=-1)
        return (1.0 - np.minimum(r2, 1.0 - 1e-14)) ** -2.0

    return adaptive_tetra_quad(density, klein, tol=tol)


def flip_tetrahedron_volumes(s, moves, tol=1e-8, relation_tol=RELATION_TOL):
    """Volumes of the tetrahedra glued along a flip path, one per flip.

    Each flip spans the straight tetrahedron on the four developed corners
    of its square.
    """
    out = []
    cur = s
    for e in moves:
        d, d2 = cur.tri.edge_darts(e)
        if d // 3 == d2 // 3:
            raise NotFlippable(f"edge {e} is not flippable")
        t1, i = divmod(d, 3)
        a = cur.corners[t1, i]
        b = cur.corners[t1, (i + 1) % 3]
        c = cur.corners[t1, (i + 2) % 3]
        t2, k = divmod(d2, 3)
        gamma = develop_across(cur, d)
        dd = np.asarray(hg.apply_isometry(gamma, cur.corners[t2, (k + 2) % 3]), dtype=float)
        out.append(tetra_volume(a, b, c, dd, tol=tol))
        cur = flip_holonomy(cur, e, tol=relation_tol)
    return np.asarray(out)


# ---------------------------------------------------------------------- JSON

def realization_to_json(s):
    return {
        "triangulation": triangulation_to_json(s.tri),
        "basepoint": [float(x) for x in s.base],
        "holonomy": {str(k): [[float(x) for x in row] for row in np.asarray(m)]
                     for k, m in sorted(s.hol.items())},
    }


def realization_from_json(obj):
    if not isinstance(obj, dict) or set(obj) - {"triangulation", "basepoint", "holonomy"}:
        raise OutOfRange("realization JSON needs triangulation, basepoint, holonomy")
    tri = triangulation_from_json(obj["triangulation"])
    base = np.asarray(obj["basepoint"], dtype=float)
    if base.shape != (4,):
        raise OutOfRange("basepoint must be a 4-vector")
    hol = {int(k): np.asarray(v, dtype=float) for k, v in obj["holonomy"].items()}
    for k, m in hol.items():
        if m.shape != (4, 4):
            raise OutOfRange(f"holonomy {k} must be a 4x4 matrix")
    return realize(tri, base, hol)


def load_realization(path):
    with open(path) as fh:
        return realization_from_json(json.load(fh))
