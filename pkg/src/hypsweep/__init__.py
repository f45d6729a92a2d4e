"""Computational toolkit for hyperbolic 3-space sweepout geometry.

Subpackages cover the hyperboloid-model kernel (:mod:`hypsweep.hypgeom`),
one-vertex surface triangulations and flip graphs
(:mod:`hypsweep.triangulation`), coned simplicial surfaces and interpolation
families (:mod:`hypsweep.coned_surface`), the half-volume isoperimetric
problem in a hyperbolic ball (:mod:`hypsweep.isoperimetric`), and the
closed-form genus/radius/volume bound evaluators (:mod:`hypsweep.bounds`).
The most common entry points are re-exported here.
"""

from .bounds import (
    ideal_tetrahedron_volume,
    lobachevsky,
    max_radius_from_genus,
    min_genus_from_radius,
    radius_from_sweepout_area,
    volume_upper_bound,
)
from .coned_surface import (
    RealizedSurface,
    flip_family,
    flip_holonomy,
    flip_tetrahedron_volumes,
    realize,
    slide_vertex_family,
    sweepout_profile,
    tetra_volume,
)
from .isoperimetric import (
    BallSpec,
    IsoperimetricProblem,
    OptimizerConfig,
    ProfileCurve,
    area_of_revolution,
    enclosed_volume,
    equatorial_profile,
    minimize,
    plane_family_scan,
    sphere_cap_family_scan,
)
from .triangulation import (
    OneVertexTriangulation,
    flip_ball,
    flip_distance,
    standard_genus_g,
)

__version__ = "0.1.0"

__all__ = [
    "BallSpec",
    "IsoperimetricProblem",
    "OneVertexTriangulation",
    "OptimizerConfig",
    "ProfileCurve",
    "RealizedSurface",
    "area_of_revolution",
    "enclosed_volume",
    "equatorial_profile",
    "flip_ball",
    "flip_distance",
    "flip_family",
    "flip_holonomy",
    "flip_tetrahedron_volumes",
    "ideal_tetrahedron_volume",
    "lobachevsky",
    "max_radius_from_genus",
    "min_genus_from_radius",
    "minimize",
    "plane_family_scan",
    "radius_from_sweepout_area",
    "realize",
    "slide_vertex_family",
    "sphere_cap_family_scan",
    "standard_genus_g",
    "sweepout_profile",
    "tetra_volume",
    "volume_upper_bound",
]
