"""Realized surface tests: Gauss-Bonnet accounting, interpolation families,
glued tetrahedron volumes."""

import math

import numpy as np
import pytest

from hypsweep import bounds as bd
from hypsweep import coned_surface as cs
from hypsweep import fixtures as fx
from hypsweep import hypgeom as hg
from hypsweep import triangulation as tr
from hypsweep.errors import (
    DegenerateEdge,
    NotAdjacent,
    OutOfRange,
    RelationViolated,
)

# the octagon holonomies close their relations to ~2e-10; comparisons that
# chain several of them are good to roughly matrix-scale times that
FIXTURE_TOL = 5e-8


@pytest.fixture(scope="module")
def octagon():
    return fx.genus2_octagon_realization()


@pytest.fixture(scope="module")
def torus_axis():
    return fx.torus_axis_realization()


class TestRealize:
    def test_identity_holonomies_fully_degenerate(self):
        tri = tr.standard_genus_g(1)
        hol = {e: np.eye(4) for e in tri.edge_ids()}
        s = cs.realize(tri, hg.ORIGIN, hol)
        assert s.total_area() == 0.0
        assert np.max(np.abs(s.corners - hg.ORIGIN)) < 1e-12

    def test_torus_axis_relations_and_area(self, torus_axis):
        assert np.max(torus_axis.residuals) < 1e-12
        assert torus_axis.total_area() == 0.0

    def test_torus_axis_angle_sum_multiple_of_pi(self, torus_axis):
        # collinear-ray angles carry sqrt(eps) conditioning, so 1e-8 in the
        # angle itself is the realistic resolution here
        theta = torus_axis.vertex_angle_sum()
        assert abs(theta / math.pi - round(theta / math.pi)) < 5e-8

    def test_octagon_relations(self, octagon):
        assert np.max(octagon.residuals) < 1e-6

    def test_octagon_area_and_angle_sum(self, octagon):
        # the developed octagon has area 6*pi - 8*(pi/4) = 4*pi and the
        # corners tile the full angle 2*pi at the vertex
        assert octagon.total_area() == pytest.approx(4 * math.pi, abs=1e-8)
        assert octagon.vertex_angle_sum() == pytest.approx(2 * math.pi, abs=1e-8)

    def test_gauss_bonnet_identity(self, octagon):
        assert octagon.gauss_bonnet_residual() < 1e-8

    def test_area_at_most_f_pi(self, octagon):
        assert octagon.total_area() <= octagon.tri.n_triangles * math.pi

    def test_relation_violation_raises(self):
        tri = tr.standard_genus_g(1)
        hol = {0: hg.boost_z(0.5), 1: hg.boost_z(0.7),
               2: hg.invert_isometry(hg.boost_z(1.3))}
        with pytest.raises(RelationViolated):
            cs.realize(tri, hg.ORIGIN, hol)

    def test_non_isometry_rejected(self):
        tri = tr.standard_genus_g(1)
        hol = {0: np.eye(4) * 1.5, 1: np.eye(4), 2: np.eye(4)}
        with pytest.raises(OutOfRange):
            cs.realize(tri, hg.ORIGIN, hol)


class TestPerturbations:
    def test_relations_and_gauss_bonnet(self):
        rng = np.random.default_rng(77)
        for _ in range(20):
            s = fx.perturbed_octagon_realization(rng)
            assert np.max(s.residuals) < 1e-6
            assert s.gauss_bonnet_residual() < 1e-8
            assert s.total_area() <= 6 * math.pi

    def test_areas_genuinely_vary(self):
        rng = np.random.default_rng(5)
        areas = [fx.perturbed_octagon_realization(rng).total_area() for _ in range(8)]
        assert max(areas) - min(areas) > 0.05


class TestEquivariance:
    def test_conjugated_holonomies_same_areas(self, octagon):
        rng = np.random.default_rng(3)
        g = hg.random_isometry(rng)
        hol2 = {k: hg.project_isometry(g @ m @ hg.invert_isometry(g))
                for k, m in octagon.hol.items()}
        moved = cs.realize(octagon.tri, hg.apply_isometry(g, octagon.base), hol2)
        assert moved.total_area() == pytest.approx(octagon.total_area(), abs=1e-9)
        assert moved.vertex_angle_sum() == pytest.approx(
            octagon.vertex_angle_sum(), abs=1e-9)
        assert np.max(np.abs(np.sort(moved.triangle_areas())
                             - np.sort(octagon.triangle_areas()))) < 1e-9

    def test_family_profiles_equivariant(self, octagon):
        rng = np.random.default_rng(8)
        g = hg.random_isometry(rng)
        hol2 = {k: hg.project_isometry(g @ m @ hg.invert_isometry(g))
                for k, m in octagon.hol.items()}
        moved = cs.realize(octagon.tri, hg.apply_isometry(g, octagon.base), hol2)
        for original, conjugated in (
                (cs.slide_vertex_family(octagon, 0, 0, 41),
                 cs.slide_vertex_family(moved, 0, 0, 41)),
                (cs.flip_family(octagon, 4, 41),
                 cs.flip_family(moved, 4, 41))):
            assert np.max(np.abs(original.area - conjugated.area)) < 1e-8
            assert np.max(np.abs(original.min_theta - conjugated.min_theta)) < 1e-8


class TestSlideFamily:
    def test_endpoints_reproduce_surface(self, octagon):
        prof = cs.slide_vertex_family(octagon, 0, 0, 101)
        assert prof.area[0] == pytest.approx(octagon.total_area(), abs=1e-9)
        assert prof.area[-1] == pytest.approx(octagon.total_area(), abs=1e-9)

    def test_triangle_count(self, octagon):
        prof = cs.slide_vertex_family(octagon, 0, 0, 11)
        assert set(prof.triangles.tolist()) == {octagon.tri.n_triangles + 2}

    def test_inserted_angle_at_least_two_pi(self, octagon):
        prof = cs.slide_vertex_family(octagon, 0, 0, 501)
        assert prof.interior_min_theta() >= 2 * math.pi - 1e-9

    def test_area_bounds(self, octagon):
        g = octagon.tri.genus
        prof = cs.slide_vertex_family(octagon, 0, 0, 501)
        assert prof.sup_area <= 4 * g * math.pi
        assert prof.sup_area <= (4 * g - 2) * math.pi + 1e-8

    def test_family_gauss_bonnet_with_inserted_vertex(self, octagon):
        # area = (F+2)*pi - theta(v) - theta(v_t) at interior samples
        prof = cs.slide_vertex_family(octagon, 0, 0, 201)
        inner = prof.extras["interior_mask"]
        total = (octagon.tri.n_triangles + 2) * math.pi
        resid = prof.area - (total - prof.extras["theta_main"] - prof.min_theta)
        assert np.max(np.abs(resid[inner])) < 1e-8

    def test_every_family_triangle_below_pi(self, octagon):
        # recompute a mid-family sample's triangles directly
        d = octagon.tri.edge_darts(0)[0]
        t1, i = divmod(d, 3)
        p = octagon.corners[t1, i]
        q = octagon.corners[t1, (i + 1) % 3]
        r = octagon.corners[t1, (i + 2) % 3]
        d2 = octagon.tri.twin[d]
        t2, k = divmod(d2, 3)
        gamma = cs.develop_across(octagon, d)
        w = np.asarray(hg.apply_isometry(gamma, octagon.corners[t2, (k + 2) % 3]),
                       dtype=float)
        for t in (0.21, 0.5, 0.83):
            v = hg.geodesic_point(p, q, t)
            for tri_pts in ((v, q, r), (v, r, p), (v, p, w), (v, w, q)):
                assert float(hg.triangle_area(*tri_pts)) < math.pi

    def test_not_adjacent(self, octagon):
        # edge 8 does not bound triangle 0 in the standard layout
        non_adjacent = [e for e in octagon.tri.edge_ids()
                        if all(d // 3 != 0 for d in octagon.tri.edge_darts(e))]
        with pytest.raises(NotAdjacent):
            cs.slide_vertex_family(octagon, 0, non_adjacent[0], 11)

    def test_degenerate_edge(self, torus_axis):
        # the axis realization has positive edge lengths, so build an
        # identity-holonomy torus where every edge degenerates
        tri = tr.standard_genus_g(1)
        hol = {e: np.eye(4) for e in tri.edge_ids()}
        s = cs.realize(tri, hg.ORIGIN, hol)
        with pytest.raises(DegenerateEdge):
            cs.slide_vertex_family(s, 0, 0, 11)

    def test_bad_sample_count(self, octagon):
        with pytest.raises(OutOfRange):
            cs.slide_vertex_family(octagon, 0, 0, 1)


class TestFlipFamily:
    def test_endpoints_match_pre_and_post(self, octagon):
        for e in octagon.tri.edge_ids():
            prof = cs.flip_family(octagon, e, 51)
            post = cs.flip_holonomy(octagon, e)
            assert prof.area[0] == pytest.approx(octagon.total_area(), abs=FIXTURE_TOL)
            assert prof.area[-1] == pytest.approx(post.total_area(), abs=FIXTURE_TOL)

    def test_boundary_fixed_along_family(self, octagon):
        # the boundary corner positions are computed once per family; the
        # recorded quad must agree with the pre-flip developed square
        prof = cs.flip_family(octagon, 0, 11)
        quad = prof.extras["quad"]
        assert quad.shape == (4, 4)
        assert np.max(np.abs(hg.minkowski(quad, quad) + 1)) < 1e-9

    def test_inserted_angle_and_area_bound(self, octagon):
        g = octagon.tri.genus
        for e in (0, 4, 7):
            prof = cs.flip_family(octagon, e, 501)
            assert prof.interior_min_theta() >= 2 * math.pi - 1e-9
            assert prof.sup_area <= (4 * g - 2) * math.pi + 1e-8
            assert np.all(prof.triangles <= 4 * g)

    def test_flip_holonomy_surface_valid(self, octagon):
        post = cs.flip_holonomy(octagon, 4)
        assert np.max(post.residuals) < 1e-6
        assert post.tri.genus == 2
        assert post.gauss_bonnet_residual() < 1e-8


class TestSweepout:
    def test_empty_path(self, octagon):
        prof = cs.sweepout_profile(octagon, [])
        assert len(prof.t) == 1
        assert prof.area[0] == pytest.approx(octagon.total_area())

    def test_torus_axis_two_flip_path_degenerate(self, torus_axis):
        # everything lies on one geodesic; the residual ~1e-8 is the
        # angle-defect noise floor of exactly collinear corner lifts
        prof = cs.sweepout_profile(torus_axis, [2, 2], n_samples=101)
        assert prof.sup_area < 1e-7

    def test_genus2_three_flip_path(self, octagon):
        prof = cs.sweepout_profile(octagon, [0, 4, 7], n_samples=500)
        assert prof.sup_area <= 6 * math.pi + 1e-8
        assert prof.interior_min_theta() >= 2 * math.pi - 1e-9
        assert np.all(prof.triangles <= 8)
        assert np.all(np.diff(prof.t) > 0)

    def test_random_paths_within_tolerance_keep_bounds(self, octagon):
        # relation defects of an approximate representation grow with the
        # matrix scale along flip paths; whenever the running surface stays
        # within the relation tolerance, the sweepout bounds must hold
        rng = np.random.default_rng(31)
        accepted = 0
        for _ in range(10):
            moves = list(rng.choice(octagon.tri.edge_ids(), size=3))
            try:
                prof = cs.sweepout_profile(octagon, [int(m) for m in moves],
                                           n_samples=120)
            except (RelationViolated, OutOfRange):
                continue
            accepted += 1
            assert prof.interior_min_theta() >= 2 * math.pi - 1e-9
            assert prof.sup_area <= 6 * math.pi + 1e-8
            assert np.all(prof.triangles <= 8)
        assert accepted >= 5

    def test_hol_end_checked(self, octagon):
        final = cs.sweepout_profile(octagon, [0, 4], n_samples=8).extras["final"]
        # consistent end holonomies pass
        cs.sweepout_profile(octagon, [0, 4], n_samples=8, hol_end=final.hol)
        bad = dict(final.hol)
        bad[0] = hg.boost_z(0.123) @ bad[0]
        with pytest.raises(RelationViolated):
            cs.sweepout_profile(octagon, [0, 4], n_samples=8, hol_end=bad)


class TestTetrahedra:
    def test_degenerate_zero(self, octagon):
        # planar surface: every glued tetrahedron collapses
        vols = cs.flip_tetrahedron_volumes(octagon, [0, 4, 7])
        assert np.max(np.abs(vols)) < 1e-12

    def test_regular_tetra_quadrature(self):
        # volume of the regular tetrahedron with vertices at distance t from
        # the center approaches v3 from below as t grows
        def regular(t, tol):
            dirs = np.array([
                [1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]],
                dtype=float) / math.sqrt(3.0)
            pts = [hg.exp_map(hg.ORIGIN, np.array([0.0, *(t * d)])) for d in dirs]
            return cs.tetra_volume(*pts, tol=tol)

        v3 = bd.ideal_tetrahedron_volume()
        v_small = regular(1.0, 1e-7)
        v_big = regular(4.0, 1e-6)
        assert 0 < v_small < v_big < v3
        assert v_big > 0.9 * v3

    def test_stretched_below_v3(self):
        # near-ideal stretched shapes stay below the regular ideal volume
        rng = np.random.default_rng(12)
        for _ in range(3):
            dirs = rng.normal(size=(4, 3))
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
            t = rng.uniform(2.5, 3.5, size=4)
            pts = [hg.exp_map(hg.ORIGIN, np.array([0.0, *(ti * d)]))
                   for ti, d in zip(t, dirs)]
            vol = cs.tetra_volume(*pts, tol=1e-6)
            assert 0.0 <= vol < 1.014942

    def test_perturbed_path_bounded_by_v3(self):
        rng = np.random.default_rng(3)
        s = fx.perturbed_octagon_realization(rng)
        vols = cs.flip_tetrahedron_volumes(s, [0, 4, 7])
        v3 = bd.ideal_tetrahedron_volume()
        assert np.all(vols >= 0.0)
        assert np.all(vols <= v3 + 1e-6)
        assert np.sum(vols) <= 3 * v3


class TestJson:
    def test_round_trip(self, octagon):
        j = cs.realization_to_json(octagon)
        s2 = cs.realization_from_json(j)
        assert s2.total_area() == pytest.approx(octagon.total_area(), abs=1e-12)
        assert np.max(np.abs(s2.base - octagon.base)) < 1e-15

    def test_bad_payload(self):
        with pytest.raises(OutOfRange):
            cs.realization_from_json({"nope": 1})
