"""Closed-form evaluators tying genus, ball radius, sweepout area and volume.

The inequalities implemented here:

* ``min_genus_from_radius``: an isometrically embedded ball of radius r in a
  closed orientable 3-manifold of curvature <= -1 forces Heegaard genus
  g >= cosh(r)/2, and g >= (cosh(r)+1)/2 under the minimax minimal-surface
  hypothesis (``assume_prh``).
* ``radius_from_sweepout_area``: a sweepout by surfaces of area <= A pins
  the injectivity radius via 2*pi*(cosh r - 1) <= A.
* ``volume_upper_bound``: n flips bound the volume by n*v3, with v3 the
  volume of the regular ideal 3-simplex, 3*Lambda(pi/3).

Composing the first two with the sweepout area bound pi*(4g-2) (or the
minimal-surface bound 4*pi*(g-1)) reproduces both genus inequalities
mechanically; the acceptance suite checks those identities to 1e-12.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidGenus, NegativeArea, NegativeRadius
from .quadrature import adaptive_quad


@dataclass(frozen=True)
class GenusBound:
    r: float
    assume_prh: bool
    raw_bound: float          # cosh(r)/2 or (cosh(r)+1)/2
    min_genus: int

    def to_json(self):
        return {
            "input": {"r": self.r, "assume_prh": self.assume_prh},
            "bound": self.min_genus,
            "raw_bound": self.raw_bound,
            "formula": "g >= (cosh(r)+1)/2" if self.assume_prh else "g >= cosh(r)/2",
        }


@dataclass(frozen=True)
class AreaBound:
    g: int
    sweepout_area: float       # pi*(4g-2)
    minimal_surface_area: float  # 2*pi*(2g-2)

    def to_json(self):
        return {
            "input": {"g": self.g},
            "sweepout_area": self.sweepout_area,
            "minimal_surface_area": self.minimal_surface_area,
            "formula": "pi*(4g-2); 2*pi*(2g-2)",
        }


@dataclass(frozen=True)
class VolumeBound:
    n_flips: int
    v3: float
    bound: float

    def to_json(self):
        return {
            "input": {"n_flips": self.n_flips},
            "v3": self.v3,
            "bound": self.bound,
            "formula": "volume <= n_flips * v3, v3 = 3*Lobachevsky(pi/3)",
        }


def min_genus_from_radius(r, assume_prh=False):
    if r < 0:
        raise NegativeRadius("radius must be >= 0")
    raw = (math.cosh(r) + 1.0) / 2.0 if assume_prh else math.cosh(r) / 2.0
    return GenusBound(r=float(r), assume_prh=bool(assume_prh),
                      raw_bound=raw, min_genus=max(1, math.ceil(raw - 1e-12)))


def max_radius_from_genus(g, assume_prh=False):
    """Largest ball radius compatible with genus g: arccosh(2g), or arccosh(2g-1)."""
    if not isinstance(g, int) or g < 1:
        raise InvalidGenus(f"genus must be an integer >= 1, got {g!r}")
    return math.acosh(2 * g - 1) if assume_prh else math.acosh(2 * g)


def area_bound(g):
    if not isinstance(g, int) or g < 1:
        raise InvalidGenus(f"genus must be an integer >= 1, got {g!r}")
    return AreaBound(g=g, sweepout_area=math.pi * (4 * g - 2),
                     minimal_surface_area=2.0 * math.pi * (2 * g - 2))


def radius_from_sweepout_area(area):
    """Invert 2*pi*(cosh r - 1) <= A: the largest radius admitting such a sweepout."""
    area = np.asarray(area, dtype=float)
    if np.any(area < 0):
        raise NegativeArea("area must be >= 0")
    return np.arccosh(1.0 + area / (2.0 * np.pi))


# ------------------------------------------------------------- Lobachevsky

@lru_cache(maxsize=None)
def _zeta_even(n):
    # zeta(2n): direct head sum plus Euler-Maclaurin tail (error < 1e-18)
    s = 2.0 * n
    K = 100
    k = np.arange(1, K + 1, dtype=float)
    head = float(np.sum(k ** (-s)))
    a = K + 1.0
    tail = (a ** (1.0 - s) / (s - 1.0) + 0.5 * a ** (-s)
            + s * a ** (-s - 1.0) / 12.0
            - s * (s + 1.0) * (s + 2.0) * a ** (-s - 3.0) / 720.0)
    return head + tail


def lobachevsky(theta):
    """The Lobachevsky function L(theta) = (1/2) sum_{n>=1} sin(2 n theta)/n^2.

    Evaluated through the equivalent log-sine expansion

        L(theta) = theta - theta*log|2 theta|
                   + sum_{n>=1} zeta(2n) theta^(2n+1) / (n (2n+1) pi^(2n)),

    which converges geometrically for |theta| < pi (ratio (theta/pi)^2) and
    agrees with the defining series to about 1e-14; summing the sine series
    directly to a 1e-12 tail is infeasible (its tail only decays like 1/N).
    Reduced by oddness and pi-periodicity before evaluation.
    """
    theta = float(theta)
    t = math.fmod(theta, math.pi)
    if t > math.pi / 2:
        t -= math.pi
    elif t < -math.pi / 2:
        t += math.pi
    if t == 0.0:
        return 0.0
    sign = 1.0 if t > 0 else -1.0
    t = abs(t)
    total = t - t * math.log(2.0 * t)
    term_scale = t
    ratio = (t / math.pi) ** 2
    for n in range(1, 200):
        term_scale *= ratio
        term = _zeta_even(n) * term_scale / (n * (2 * n + 1))
        total += term
        if term < 1e-17 * max(1.0, abs(total)):
            break
    return sign * total


def lobachevsky_series_partial(theta, n_terms):
    """Partial sum of the defining sine series (test oracle; tail ~ 3/(N^2 |sin theta|))."""
    n = np.arange(1, n_terms + 1, dtype=float)
    return 0.5 * float(np.sum(np.sin(2.0 * n * theta) / n ** 2))


def lobachevsky_quadrature(theta, tol=1e-12):
    """Independent oracle: L(theta) = -int_0^theta log|2 sin u| du.

    The endpoint log singularity is integrated analytically via
    log(2 sin u) = log(2u) + log(sin(u)/u), leaving a smooth integrand.
    """
    theta = float(theta)
    if theta == 0.0:
        return 0.0
    sign = 1.0
    if theta < 0:
        theta, sign = -theta, -1.0

    def smooth(u):
        u = np.asarray(u)
        out = np.where(u == 0.0, 0.0, np.log(np.where(u == 0.0, 1.0, np.sin(u) / np.where(u == 0.0, 1.0, u))))
        return out

    analytic = theta * math.log(2.0 * theta) - theta
    return sign * (-(analytic + adaptive_quad(smooth, 0.0, theta, tol=tol)))


def ideal_tetrahedron_volume():
    """v3 = 3*L(pi/3): the volume of the regular ideal hyperbolic 3-simplex."""
    return 3.0 * lobachevsky(math.pi / 3.0)


def volume_upper_bound(n_flips):
    if n_flips < 0 or int(n_flips) != n_flips:
        raise InvalidGenus(f"flip count must be a nonnegative integer, got {n_flips!r}")
    v3 = ideal_tetrahedron_volume()
    return VolumeBound(n_flips=int(n_flips), v3=v3, bound=n_flips * v3)
