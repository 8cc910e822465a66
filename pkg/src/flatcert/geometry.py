"""Hawaiian-earring and small-sphere geometry.

The earring is the union of the circles C_n of radius 1/n centered at
(1/n, 0) for n >= 1, all mutually tangent at the origin.  Its analogue in
dimension >= 3 is the family of spheres of radius 1/k centered at (1/k)e1.
This module provides exact parametrizations, the exact distance to the
earring, ray intersections, deterministic secant-direction sampling, and an
angular covering-radius measure for direction sets.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import betainc, betaincinv, ndtri
from scipy.stats import qmc

UNIT_TOL = 1e-12

_MAX_FAMILY_INDEX = 65536
_RETRIES = 64


class EmptySampleError(ValueError):
    """No representable family point fits the requested sampling radius."""


def as_point(x) -> np.ndarray:
    p = np.asarray(x, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise ValueError("a point must be a 1-D real vector of length >= 1")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    return p


def _check_unit(u: np.ndarray, what: str = "vector") -> np.ndarray:
    u = as_point(u)
    if abs(float(np.linalg.norm(u)) - 1.0) > UNIT_TOL:
        raise ValueError(f"{what} must be a unit vector (tolerance {UNIT_TOL})")
    return u


@dataclass(frozen=True)
class CircleSpec:
    """Circle C_n of the earring: center (1/n, 0), radius 1/n."""

    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("circle index must be a positive integer")

    @property
    def center(self) -> np.ndarray:
        return np.array([1.0 / self.index, 0.0])

    @property
    def radius(self) -> float:
        return 1.0 / self.index


@dataclass(frozen=True)
class EarringFamily:
    """The union of all circles C_n.

    max_index bounds the circle indices used when sampling; None selects an
    adaptive cutoff that grows as the sampling radius shrinks, so circles
    entirely inside the radius are always represented.
    """

    max_index: int | None = None

    def indices_for_radius(self, r: float) -> int:
        if self.max_index is not None:
            if self.max_index < 1:
                raise ValueError("max_index must be >= 1")
            return self.max_index
        return min(max(32, math.ceil(4.0 / r)), _MAX_FAMILY_INDEX)


@dataclass(frozen=True)
class SphereFamilySpec:
    """Spheres of radius 1/k centered at (1/k)e1 in R^dim, dim >= 3."""

    dim: int
    max_index: int | None = None

    def __post_init__(self):
        if self.dim < 3:
            raise ValueError("sphere families require ambient dimension >= 3")

    def center(self, k: int) -> np.ndarray:
        c = np.zeros(self.dim)
        c[0] = 1.0 / k
        return c

    def radius(self, k: int) -> float:
        return 1.0 / k

    def indices_for_radius(self, r: float) -> int:
        if self.max_index is not None:
            if self.max_index < 1:
                raise ValueError("max_index must be >= 1")
            return self.max_index
        return min(max(32, math.ceil(4.0 / r)), _MAX_FAMILY_INDEX)


@dataclass(frozen=True)
class XAxisFamily:
    """The x1-axis arc family in the plane, gamma(s) = (s, 0).

    Negative control for flatness certification: the linear form on the
    second coordinate vanishes on it.
    """

    dim: int = 2

    def __post_init__(self):
        if self.dim != 2:
            raise ValueError("the axis control family is planar")


@dataclass
class DirectionSet:
    """A set of unit vectors on the sphere S^(n-1), stored as rows."""

    dirs: np.ndarray

    def __post_init__(self):
        self.dirs = np.atleast_2d(np.asarray(self.dirs, dtype=float))
        norms = np.linalg.norm(self.dirs, axis=1)
        if np.any(np.abs(norms - 1.0) > UNIT_TOL):
            raise ValueError(f"direction norms must be 1 within {UNIT_TOL}")

    def __len__(self) -> int:
        return self.dirs.shape[0]

    @property
    def n(self) -> int:
        return self.dirs.shape[1]

    @classmethod
    def from_points(cls, points) -> "DirectionSet":
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        norms = np.linalg.norm(pts, axis=1)
        if np.any(norms == 0.0):
            raise ValueError("cannot normalize zero points into directions")
        return cls(pts / norms[:, None])


def circle_point(n: int, theta: float) -> np.ndarray:
    """Point of C_n at angle theta: (1/n)(1 + cos theta, sin theta)."""
    if n < 1:
        raise ValueError("circle index must be a positive integer")
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    inv = 1.0 / n
    return np.array([inv + inv * math.cos(theta), inv * math.sin(theta)])


def sphere_point(spec: SphereFamilySpec, k: int, theta) -> np.ndarray:
    """Point c_k + r_k * theta of the k-th sphere, theta a unit vector."""
    if k < 1:
        raise ValueError("sphere index must be a positive integer")
    theta = _check_unit(theta, "theta")
    if theta.size != spec.dim:
        raise ValueError("theta dimension does not match the family")
    return spec.center(k) + spec.radius(k) * theta


# ---------------------------------------------------------------------------
# Distance to the earring
#
# dist(x, C_n) = | ||x - c_n|| - 1/n | is unimodal in n: with s = 1/n and
# q(s) = ||x||^2 - 2 x1 s + s^2 one has (s - x1)^2 - q(s) = x1^2 - ||x||^2,
# so sqrt(q(s)) - s is monotone decreasing in s, hence |sqrt(q) - s| decreases
# until the zero crossing s* = ||x||^2 / (2 x1) and increases afterwards.  The
# discrete minimum therefore sits at an integer adjacent to n* = 2 x1/||x||^2
# (for x1 > 0) or at n = 1 (for x1 <= 0).
# ---------------------------------------------------------------------------


def _circle_dist(x1, x2, n):
    inv = 1.0 / n
    return np.abs(np.hypot(x1 - inv, x2) - inv)


def earring_distances(points) -> np.ndarray:
    """Exact distance to the earring for a batch of planar points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != 2:
        raise ValueError("earring distance is defined for planar points")
    x1 = pts[:, 0]
    x2 = pts[:, 1]
    r2 = x1 * x1 + x2 * x2

    with np.errstate(divide="ignore", invalid="ignore"):
        nstar = np.where((x1 > 0.0) & (r2 > 0.0), 2.0 * x1 / r2, 1.0)
    base = np.floor(nstar)
    # +-1 margin absorbs floating error in nstar; n = 1 is always a candidate.
    cand = np.stack(
        [np.ones_like(base), base - 1.0, base, base + 1.0, base + 2.0], axis=1
    )
    cand = np.maximum(cand, 1.0)
    d = _circle_dist(x1[:, None], x2[:, None], cand)
    out = d.min(axis=1)
    out[r2 == 0.0] = 0.0
    return out


def dist_to_earring(x) -> float:
    """Exact distance from a planar point to the earring."""
    return float(earring_distances(as_point(x)[None, :])[0])


def ray_intersections(u, n_max: int) -> list[tuple[int, float]]:
    """Parameters t_n > 0 where the ray {t u : t >= 0} meets C_n.

    Substituting t u into the circle equation gives t^2 - 2 t u1/n = 0, so the
    only positive solution is t_n = 2 u1 / n, and it exists iff u1 > 0.
    """
    u = _check_unit(u, "ray direction")
    if u.size != 2:
        raise ValueError("rays are planar")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    u1 = float(u[0])
    if u1 <= 0.0:
        return []
    return [(n, 2.0 * u1 / n) for n in range(1, n_max + 1)]


# ---------------------------------------------------------------------------
# Secant-direction sampling
#
# Every family direction u with u1 > 0 is realized on every member: the ray
# {t u} meets the k-th circle or sphere at t = 2 u1 / k (the point (2u1/k) u
# satisfies ||(2u1/k)u - c_k|| = 1/k identically).  A sample therefore draws
# the direction first, equidistributed over the reachable part of the
# half-sphere u1 >= 0, then a member index weighted proportionally to 1/k
# among those whose intersection lies inside the radius, so small members
# are never starved.  Sample i is row i of one seeded scrambled Sobol
# sequence: deterministic per (seed, index), prefix-consistent across counts,
# and independent of any parallel evaluation order.
# ---------------------------------------------------------------------------


def _sobol_block(count: int, dim: int, seed: int) -> np.ndarray:
    sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
    m = max(1, math.ceil(math.log2(max(count, 2))))
    block = sampler.random_base2(m)
    return block[:count]


def _index_cdf(n_max: int) -> np.ndarray:
    w = 1.0 / np.arange(1, n_max + 1)
    c = np.cumsum(w)
    return c / c[-1]


def _pick_index(cdf: np.ndarray, k_min: int, a01: float) -> int:
    """1/k-weighted index in [k_min, len(cdf)] via the conditional CDF."""
    n_max = len(cdf)
    lo = cdf[k_min - 2] if k_min >= 2 else 0.0
    t = lo + a01 * (1.0 - lo)
    k = int(np.searchsorted(cdf, t, side="right")) + 1
    return min(max(k, k_min), n_max)


def _min_index_for_radius(u1: float, r: float, n_max: int) -> int | None:
    """Smallest member index whose ray intersection 2 u1 / k fits in radius r."""
    k = max(1, math.ceil(2.0 * u1 / r))
    while k <= n_max and 2.0 * u1 / k > r:
        k += 1
    return k if k <= n_max else None


def _earring_sample(r: float, n_max: int, cdf: np.ndarray, a01: float, b01: float):
    """One point z of some C_n with 0 < ||z|| <= r, and its direction.

    The direction is (sin psi, +-cos psi) with psi measured from the vertical
    tangent, uniform over the reachable band psi <= arcsin(min(1, r n_max/2));
    parametrizing by sin psi keeps points representable down to subnormal
    radii.
    """
    cap = min(1.0, 0.5 * r * n_max)
    if cap <= 0.0:
        raise EmptySampleError(f"no representable earring point with norm in (0, {r}]")
    delta = math.asin(cap) * (2.0 * b01 - 1.0)
    s = math.sin(delta)
    u1 = abs(s)
    if u1 == 0.0:
        return None
    k_min = _min_index_for_radius(u1, r, n_max)
    if k_min is None:
        return None
    n = _pick_index(cdf, k_min, a01)
    direction = np.array([u1, math.copysign(math.cos(delta), delta)])
    z = (2.0 * u1 / n) * direction
    return z, direction


def _sphere_sample(
    spec: SphereFamilySpec, r: float, n_max: int, cdf: np.ndarray, a01: float, b01: float, gauss: np.ndarray
):
    """One point of some family sphere with 0 < ||x|| <= r, and its direction.

    Directions (sqrt(v), sqrt(1-v) omega) are uniform on the half-sphere when
    v ~ Beta(1/2, (dim-1)/2); the radius cap truncates v <= (r n_max / 2)^2
    and is sampled by inverse CDF, omega uniform on the equatorial sphere.
    """
    a, b = 0.5, 0.5 * (spec.dim - 1)
    vcap = min(1.0, (0.5 * r * n_max) ** 2)
    if vcap <= 0.0:
        raise EmptySampleError(f"no representable sphere point with norm in (0, {r}]")
    qmax = float(betainc(a, b, vcap))
    if qmax <= 0.0:
        raise EmptySampleError(f"no representable sphere point with norm in (0, {r}]")
    q = qmax * min(max(b01, 2.0 ** -64), 1.0 - 2.0 ** -64)
    v = float(betaincinv(a, b, q))
    if v <= 0.0 or v > vcap:
        return None
    u1 = math.sqrt(v)
    if spec.dim == 3:
        # cylindrical equal-area construction: one azimuth coordinate
        phi = 2.0 * math.pi * gauss[0]
        omega = np.array([math.cos(phi), math.sin(phi)])
    else:
        omega = ndtri(np.clip(gauss, 2.0 ** -64, 1.0 - 2.0 ** -64))
        nrm = np.linalg.norm(omega)
        if nrm == 0.0:
            return None
        omega = omega / nrm
    direction = np.concatenate(([u1], math.sqrt(max(0.0, 1.0 - v)) * omega))
    direction /= np.linalg.norm(direction)
    k_min = _min_index_for_radius(u1, r, n_max)
    if k_min is None:
        return None
    k = _pick_index(cdf, k_min, a01)
    z = (2.0 * u1 / k) * direction
    return z, direction


def secant_directions(family, r: float, count: int, seed: int) -> DirectionSet:
    """Normalized zero-set points z/||z|| with 0 < ||z|| <= r.

    Deterministic in (seed, sample index); raises EmptySampleError when no
    representable family point fits inside the radius.
    """
    if r <= 0.0:
        raise ValueError("sampling radius must be positive")
    if count < 1:
        raise ValueError("count must be >= 1")

    if isinstance(family, XAxisFamily):
        block = _sobol_block(count, 1, seed)
        dirs = np.zeros((count, 2))
        dirs[:, 0] = np.where(block[:, 0] < 0.5, -1.0, 1.0)
        return DirectionSet(dirs)

    if isinstance(family, EarringFamily):
        n_max = family.indices_for_radius(r)
        cdf = _index_cdf(n_max)
        block = _sobol_block(count, 2, seed)
        dirs = np.empty((count, 2))
        for i in range(count):
            got = _earring_sample(r, n_max, cdf, block[i, 0], block[i, 1])
            if got is None or not 0.0 < np.linalg.norm(got[0]) <= r:
                got = _retry(
                    lambda rng: _earring_sample(r, n_max, cdf, rng.uniform(), rng.uniform()),
                    r,
                    seed,
                    i,
                )
            dirs[i] = got[1]
        return DirectionSet(dirs)

    if isinstance(family, SphereFamilySpec):
        n_max = family.indices_for_radius(r)
        cdf = _index_cdf(n_max)
        width = 3 if family.dim == 3 else 2 + (family.dim - 1)
        block = _sobol_block(count, width, seed)
        dirs = np.empty((count, family.dim))
        for i in range(count):
            got = _sphere_sample(family, r, n_max, cdf, block[i, 0], block[i, 1], block[i, 2:])
            if got is None or not 0.0 < np.linalg.norm(got[0]) <= r:
                got = _retry(
                    lambda rng: _sphere_sample(
                        family, r, n_max, cdf, rng.uniform(), rng.uniform(), rng.uniform(size=family.dim - 1)
                    ),
                    r,
                    seed,
                    i,
                )
            dirs[i] = got[1]
        return DirectionSet(dirs)

    raise TypeError(f"unsupported family {type(family).__name__}")


def _retry(draw, r: float, seed: int, i: int):
    rng = np.random.default_rng((seed, 0xA5, i))
    for _ in range(_RETRIES):
        got = draw(rng)
        if got is not None and 0.0 < np.linalg.norm(got[0]) <= r:
            return got
    raise EmptySampleError(f"no representable family point with norm in (0, {r}]")


def covering_radius(
    dirs: DirectionSet,
    probe_count: int = 4096,
    seed: int = 0,
    halfspace_axis: int | None = None,
) -> float:
    """Largest angular distance from a probe grid to the direction set.

    Probes are uniform angles on the circle and a seeded scrambled-Sobol
    normalization of Gaussian samples on higher spheres.  With halfspace_axis
    set, probes are folded onto the half-sphere where that coordinate is
    nonnegative; useful for families whose secant directions are confined to
    a half-space.  Antitone under enlarging the direction set.
    """
    if len(dirs) == 0:
        raise ValueError("direction set must be nonempty")
    if probe_count < 1:
        raise ValueError("probe_count must be >= 1")
    n = dirs.n
    if n == 2:
        ang = 2.0 * np.pi * np.arange(probe_count) / probe_count
        probes = np.column_stack([np.cos(ang), np.sin(ang)])
    else:
        block = _sobol_block(probe_count, n, seed)
        g = ndtri(np.clip(block, 2.0 ** -64, 1.0 - 2.0 ** -64))
        nrm = np.linalg.norm(g, axis=1)
        nrm[nrm == 0.0] = 1.0
        probes = g / nrm[:, None]
    if halfspace_axis is not None:
        probes[:, halfspace_axis] = np.abs(probes[:, halfspace_axis])

    worst = -1.0
    dt = dirs.dirs.T
    for lo in range(0, probe_count, 2048):
        chunk = probes[lo : lo + 2048]
        best = np.clip((chunk @ dt).max(axis=1), -1.0, 1.0)
        worst = max(worst, float(np.arccos(best).max()))
    return worst


# ---------------------------------------------------------------------------
# CSV point files: one point per row, columns x1..xn, comma separated.
# ---------------------------------------------------------------------------


def read_points_csv(path, header: bool = False) -> np.ndarray:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for idx, row in enumerate(reader):
            if idx == 0 and header:
                continue
            if not row:
                continue
            rows.append([float(v) for v in row])
    if not rows:
        raise ValueError(f"no points found in {path}")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError("inconsistent column counts in point file")
    return np.array(rows, dtype=float)


def write_points_csv(path, points, header: bool = False) -> None:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header:
            writer.writerow([f"x{i + 1}" for i in range(pts.shape[1])])
        for row in pts:
            writer.writerow([repr(float(v)) for v in row])
