"""Explicit smooth fields with prescribed zero sets, plus derivative probes.

The centerpiece is a closed-form smooth function vanishing exactly on the
Hawaiian earring.  The Moebius-type substitution u = 2 x1 / (x1^2 + x2^2)
maps the circle C_n to the level u = n (on C_n one has x1^2 + x2^2 = 2 x1/n),
so it suffices to combine a factor vanishing exactly on the integers >= 1
with the flat factor exp(-1/r^2), which dominates all chain-rule growth and
forces every derivative at the origin to vanish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable

import numpy as np

from .geometry import earring_distances
from .stencils import MAX_ORDER, stencil

_TINY_R2 = 1e-300
_SMALLEST_NORMAL = float(np.finfo(float).tiny)


@dataclass(frozen=True)
class SmoothStep:
    """C-infinity step: 0 for u <= a, 1 for u >= b, strictly increasing between."""

    a: float = 0.5
    b: float = 1.0

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("need a < b")

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        t = (u - self.a) / (self.b - self.a)
        return _bump(t) / (_bump(t) + _bump(1.0 - t))


def _bump(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0.0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


@dataclass
class ScalarField:
    """An evaluable smooth function of n real variables.

    fn evaluates batches of points (rows); log_abs_fn, when present, returns
    log|f| exactly even where |f| underflows double precision, which the
    exponent-estimation pipeline uses for honestly flat fields.
    """

    name: str
    n: int
    zero_set: str
    fn: Callable[[np.ndarray], np.ndarray]
    log_abs_fn: Callable[[np.ndarray], np.ndarray] | None = None

    def _batch(self, x) -> tuple[np.ndarray, bool]:
        pts = np.asarray(x, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if pts.shape[1] != self.n:
            raise ValueError(f"{self.name} is a field of {self.n} variables")
        return pts, single

    def __call__(self, x):
        pts, single = self._batch(x)
        vals = self.fn(pts)
        return float(vals[0]) if single else vals

    @property
    def has_log_abs(self) -> bool:
        return self.log_abs_fn is not None

    def log_abs(self, x):
        """log|f(x)|, -inf on the zero set; falls back to log of the value."""
        pts, single = self._batch(x)
        if self.log_abs_fn is not None:
            out = self.log_abs_fn(pts)
        else:
            with np.errstate(divide="ignore"):
                out = np.log(np.abs(self.fn(pts)))
        return float(out[0]) if single else out


# ---------------------------------------------------------------------------
# The earring witness
# ---------------------------------------------------------------------------

_STEP = SmoothStep(0.5, 1.0)


def _psi(u: np.ndarray) -> np.ndarray:
    """Smooth factor vanishing exactly on the integers >= 1.

    psi = h(u) sin(pi u) + (1 - h(u)) with h the smooth step on [1/2, 1]:
    identically 1 for u <= 1/2, equal to sin(pi u) for u >= 1, and strictly
    positive in between since sin(pi u) > 0 on (1/2, 1).
    """
    h = _STEP(u)
    return h * np.sin(np.pi * u) + (1.0 - h)


def _witness_uv(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    r2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
    live = r2 > _TINY_R2
    u = np.zeros_like(r2)
    u[live] = 2.0 * pts[live, 0] / r2[live]
    return r2, u, live


def _witness_eval(pts: np.ndarray) -> np.ndarray:
    r2, u, live = _witness_uv(pts)
    out = np.zeros(len(pts))
    flat = np.exp(-1.0 / r2[live])
    out[live] = flat * _psi(u[live])
    return out


def _witness_log_abs(pts: np.ndarray) -> np.ndarray:
    r2, u, live = _witness_uv(pts)
    out = np.full(len(pts), -np.inf)
    with np.errstate(divide="ignore"):
        out[live] = -1.0 / r2[live] + np.log(np.abs(_psi(u[live])))
    return out


def earring_witness() -> ScalarField:
    """Closed-form smooth function whose zero set is exactly the earring.

    f(x) = exp(-1/r^2) psi(2 x1 / r^2) with f(0) = 0.  Points within 1e-150
    of the origin short-circuit to 0; the analytic value there is far below
    representable precision anyway.
    """
    return ScalarField(
        name="earring",
        n=2,
        zero_set="earring",
        fn=_witness_eval,
        log_abs_fn=_witness_log_abs,
    )


def _sq_field(n: int) -> ScalarField:
    def f(pts):
        return (pts ** 2).sum(axis=1)

    def la(pts):
        with np.errstate(divide="ignore"):
            return np.log((pts ** 2).sum(axis=1))

    return ScalarField("sq", n, "point", f, la)


def _axis_field() -> ScalarField:
    def f(pts):
        return pts[:, 1].copy()

    def la(pts):
        with np.errstate(divide="ignore"):
            return np.log(np.abs(pts[:, 1]))

    return ScalarField("axis", 2, "hyperplane", f, la)


def _flat_radial_field(n: int) -> ScalarField:
    def f(pts):
        r2 = (pts ** 2).sum(axis=1)
        out = np.zeros(len(pts))
        live = r2 > _TINY_R2
        out[live] = np.exp(-1.0 / r2[live])
        return out

    def la(pts):
        r2 = (pts ** 2).sum(axis=1)
        out = np.full(len(pts), -np.inf)
        live = r2 > _TINY_R2
        out[live] = -1.0 / r2[live]
        return out

    return ScalarField("flat-radial", n, "point", f, la)


def control_fields(n: int = 2) -> list[ScalarField]:
    """Analytic and flat control fields for the certification pipelines.

    sq = x1^2 + ... + xn^2 (zero set the origin, exponent 2), axis = x2 in
    the plane (zero set the x1-axis, exponent 1), and the radially flat
    exp(-1/r^2) (zero set the origin, no valid exponent).
    """
    return [_sq_field(n), _axis_field(), _flat_radial_field(n)]


def field_by_name(name: str, n: int = 2) -> ScalarField:
    if name == "earring":
        return earring_witness()
    if name == "sq":
        return _sq_field(n)
    if name == "axis":
        return _axis_field()
    if name == "flat-radial":
        return _flat_radial_field(n)
    raise ValueError(f"unknown field {name!r} (expected earring|sq|axis|flat-radial)")


def zero_set_distance(descriptor: str, n: int = 2) -> Callable[[np.ndarray], np.ndarray]:
    """Batch distance map to a named zero set."""
    if descriptor == "earring":
        return earring_distances
    if descriptor in ("point", "origin"):
        return lambda pts: np.linalg.norm(np.atleast_2d(pts), axis=1)
    if descriptor in ("hyperplane", "x-axis"):
        return lambda pts: np.abs(np.atleast_2d(pts)[:, 1])
    raise ValueError(f"no distance map for zero set {descriptor!r}")


# ---------------------------------------------------------------------------
# Derivative probes
# ---------------------------------------------------------------------------


def fd_derivative(field: ScalarField, alpha, h: float) -> float:
    """Central-difference estimate of D^alpha field(0), tensor-product stencils.

    Second-order accurate, step h on every axis; the stencil table covers
    |alpha| <= 6.
    """
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != field.n:
        raise ValueError("multi-index length must match the field dimension")
    if any(a < 0 for a in alpha):
        raise ValueError("multi-index entries must be nonnegative")
    total = sum(alpha)
    if total > MAX_ORDER:
        raise ValueError(f"stencil table covers |alpha| <= {MAX_ORDER}")
    if h <= 0:
        raise ValueError("step must be positive")

    axis_stencils = [stencil(a) for a in alpha]
    points = []
    weights = []
    for combo in product(*[zip(off, w) for off, w in axis_stencils]):
        points.append([h * o for o, _ in combo])
        weights.append(math.prod(w for _, w in combo))
    vals = field(np.array(points, dtype=float))
    return float(np.dot(weights, vals) / h ** total)


def min_abs_on_annulus(
    field: ScalarField,
    r1: float,
    r2: float,
    samples: int = 2000,
    seed: int = 0,
    dist_floor: float = 0.0,
    dist_fn: Callable[[np.ndarray], np.ndarray] | None = None,
) -> tuple[float, np.ndarray]:
    """Minimum of |field| over seeded annulus samples, away from the zero set.

    Samples are uniform in the shell r1 < ||x|| <= r2; with a positive
    dist_floor, points closer than the floor to the field's zero set are
    excluded so the minimum is not trivially zero.  Returns (min, argmin).
    """
    if not 0.0 < r1 < r2:
        raise ValueError("need 0 < r1 < r2")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if dist_floor > 0.0 and dist_fn is None:
        dist_fn = zero_set_distance(field.zero_set, field.n)

    rng = np.random.default_rng((seed, 0x51E))
    g = rng.standard_normal((samples, field.n))
    nrm = np.linalg.norm(g, axis=1)
    nrm[nrm == 0.0] = 1.0
    dirs = g / nrm[:, None]
    radii = (r1 ** field.n + rng.uniform(size=samples) * (r2 ** field.n - r1 ** field.n)) ** (
        1.0 / field.n
    )
    pts = radii[:, None] * dirs
    if dist_floor > 0.0:
        keep = dist_fn(pts) >= dist_floor
        pts = pts[keep]
        if len(pts) == 0:
            raise ValueError("distance floor excluded every sample")
    vals = np.abs(field(pts))
    idx = int(np.argmin(vals))
    return float(vals[idx]), pts[idx]
