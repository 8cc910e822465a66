"""Flatness certification and Lojasiewicz exponent estimation.

certify_flatness_via_directions replays the secant-direction argument: any
smooth function vanishing on the family has every Taylor form of degree
p <= p_max forced to vanish on the sampled directions, so trivial vanishing
spaces at all degrees certify flatness at the origin.  fit_exponent measures
the smallest exponent nu such that |f| >= d^nu holds (with the constant
normalized to 1) on each dyadic shell; for flat fields on the earring the
per-shell exponents diverge, which is the quantitative failure of the
Lojasiewicz inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import (
    DirectionSet,
    EarringFamily,
    SphereFamilySpec,
    XAxisFamily,
    secant_directions,
)
from .polynomials import DEFAULT_NULLSPACE_TOL, FormBasis, vanishing_space
from .witness import _SMALLEST_NORMAL, ScalarField

DEFAULT_DIST_FLOOR = 1e-4


# ---------------------------------------------------------------------------
# Flatness certificates
# ---------------------------------------------------------------------------


@dataclass
class DegreeCertificateRow:
    p: int
    dimension: int
    sigma_max: float
    sigma_min: float
    basis: FormBasis

    def to_dict(self) -> dict:
        out = {
            "p": self.p,
            "dimension": self.dimension,
            "sigma_max": self.sigma_max,
            "sigma_min": self.sigma_min,
        }
        if self.dimension > 0:
            out["basis"] = [[float(c) for c in f.coeffs] for f in self.basis.forms]
        return out


@dataclass
class FlatnessCertificate:
    valid: bool
    p_max: int
    first_failure_degree: int | None
    degrees: list[DegreeCertificateRow]
    directions_meta: dict

    def to_dict(self) -> dict:
        return {
            "kind": "flatness_certificate",
            "valid": self.valid,
            "p_max": self.p_max,
            "first_failure_degree": self.first_failure_degree,
            "degrees": [row.to_dict() for row in self.degrees],
            "directions": self.directions_meta,
        }

    def csv_table(self) -> tuple[list[str], list[list]]:
        header = ["p", "dimension", "sigma_max", "sigma_min"]
        rows = [[r.p, r.dimension, r.sigma_max, r.sigma_min] for r in self.degrees]
        return header, rows


def _resolve_directions(source, r, count, seed) -> tuple[DirectionSet, dict]:
    if isinstance(source, DirectionSet):
        return source, {"family": "custom", "count": len(source), "r": None, "seed": None}
    if isinstance(source, (EarringFamily, SphereFamilySpec, XAxisFamily)):
        name = {
            EarringFamily: "earring",
            SphereFamilySpec: "spheres",
            XAxisFamily: "x-axis",
        }[type(source)]
        dirs = secant_directions(source, r=r, count=count, seed=seed)
        return dirs, {"family": name, "r": r, "count": count, "seed": seed}
    pts = np.atleast_2d(np.asarray(source, dtype=float))
    dirs = DirectionSet.from_points(pts)
    return dirs, {"family": "points", "count": len(dirs), "r": None, "seed": None}


def certify_flatness_via_directions(
    source,
    p_max: int,
    r: float = 0.1,
    count: int = 200,
    seed: int = 0,
    tol: float = DEFAULT_NULLSPACE_TOL,
) -> FlatnessCertificate:
    """Compute vanishing spaces of secant directions for degrees 1..p_max.

    The certificate is valid when every space is trivial: no nonzero form of
    degree <= p_max can vanish on the sampled directions, hence no smooth
    function vanishing on the family has a nonzero Taylor form of such degree
    at the origin.  source may be a family, a DirectionSet, or raw points
    (normalized in place of sampling).
    """
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    dirs, meta = _resolve_directions(source, r, count, seed)
    rows = []
    first_failure = None
    for p in range(1, p_max + 1):
        basis = vanishing_space(dirs.dirs, p, tol=tol)
        sv = basis.singular_values
        smax = float(sv[0]) if sv is not None and sv.size else 0.0
        smin = float(sv[-1]) if sv is not None and sv.size else 0.0
        rows.append(
            DegreeCertificateRow(
                p=p,
                dimension=basis.dimension,
                sigma_max=smax,
                sigma_min=smin,
                basis=basis,
            )
        )
        if basis.dimension > 0 and first_failure is None:
            first_failure = p
    return FlatnessCertificate(
        valid=first_failure is None,
        p_max=p_max,
        first_failure_degree=first_failure,
        degrees=rows,
        directions_meta=meta,
    )


# ---------------------------------------------------------------------------
# Exponent estimation on dyadic annuli
# ---------------------------------------------------------------------------


@dataclass
class AnnulusRow:
    k: int
    r_lo: float
    r_hi: float
    nu: float | None
    n_drawn: int
    n_used: int
    n_floor_excluded: int
    n_out_of_window: int
    n_inf: int
    c: float
    residual_mean: float | None
    dist_norm_ratio: dict

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "r_lo": self.r_lo,
            "r_hi": self.r_hi,
            "nu": self.nu,
            "n_drawn": self.n_drawn,
            "n_used": self.n_used,
            "n_floor_excluded": self.n_floor_excluded,
            "n_out_of_window": self.n_out_of_window,
            "n_inf": self.n_inf,
            "c": self.c,
            "residual_mean": self.residual_mean,
            "dist_norm_ratio": self.dist_norm_ratio,
        }


@dataclass
class ExponentFitReport:
    annuli: list[AnnulusRow]
    verdict: str
    dist_floor: float
    seed: int
    samples_per_annulus: int

    def to_dict(self) -> dict:
        return {
            "kind": "exponent_fit",
            "verdict": self.verdict,
            "dist_floor": self.dist_floor,
            "seed": self.seed,
            "samples_per_annulus": self.samples_per_annulus,
            "annuli": [row.to_dict() for row in self.annuli],
        }

    def csv_table(self) -> tuple[list[str], list[list]]:
        header = ["k", "r_lo", "r_hi", "nu", "n_used", "n_inf", "c", "residual_mean"]
        rows = [
            [a.k, a.r_lo, a.r_hi, a.nu, a.n_used, a.n_inf, a.c, a.residual_mean]
            for a in self.annuli
        ]
        return header, rows


def _annulus_points(n: int, r_lo: float, r_hi: float, samples: int, seed, k: int) -> np.ndarray:
    rng = np.random.default_rng((seed, k))
    g = rng.standard_normal((samples, n))
    nrm = np.linalg.norm(g, axis=1)
    nrm[nrm == 0.0] = 1.0
    dirs = g / nrm[:, None]
    radii = (r_lo ** n + rng.uniform(size=samples) * (r_hi ** n - r_lo ** n)) ** (1.0 / n)
    return radii[:, None] * dirs


def fit_exponent(
    field: ScalarField,
    dist_fn: Callable[[np.ndarray], np.ndarray],
    k_range=range(2, 7),
    samples_per_annulus: int = 2000,
    seed: int = 0,
    dist_floor: float = DEFAULT_DIST_FLOOR,
) -> ExponentFitReport:
    """Per-annulus worst-case Lojasiewicz exponents nu_k.

    On the dyadic shell ||x|| in [2^-(k+1), 2^-k], over samples with
    dist(x) in (dist_floor, 1), the per-sample exponent is
    nu(x) = log|f(x)| / log dist(x), i.e. the smallest nu making
    |f(x)| >= dist(x)^nu hold with constant 1 at that sample; nu_k is the
    annulus maximum.  Samples whose |f| is exactly zero, or underflows below
    the smallest positive normal double when no exact log channel exists,
    are counted as "exponent infinity" evidence.  The verdict is "diverging"
    when the finite nu_k increase strictly and the last exceeds twice the
    first (or when whole annuli consist of infinity evidence beyond such a
    prefix), else "bounded".
    """
    if dist_floor < 0.0:
        raise ValueError("dist_floor must be nonnegative")
    ks = sorted(set(int(k) for k in k_range))
    if not ks:
        raise ValueError("k_range must be nonempty")

    rows = []
    for k in ks:
        r_lo, r_hi = 2.0 ** (-(k + 1)), 2.0 ** (-k)
        pts = _annulus_points(field.n, r_lo, r_hi, samples_per_annulus, seed, k)
        d = dist_fn(pts)
        window = (d > dist_floor) & (d < 1.0)
        n_floor = int(np.sum(d <= dist_floor))
        n_outwin = int(np.sum(d >= 1.0))
        pts_u = pts[window]
        d_u = d[window]
        if field.has_log_abs:
            la = field.log_abs(pts_u)
            inf_mask = ~np.isfinite(la)
        else:
            vals = np.abs(field(pts_u))
            inf_mask = vals < _SMALLEST_NORMAL
            with np.errstate(divide="ignore"):
                la = np.log(vals)
        fin = ~inf_mask
        nus = la[fin] / np.log(d_u[fin])
        if nus.size:
            nu_k = float(np.max(nus))
            resid = la[fin] - nu_k * np.log(d_u[fin])
            residual_mean = float(np.mean(resid))
        else:
            nu_k = None
            residual_mean = None
        norms = np.linalg.norm(pts_u, axis=1)
        ratio = d_u / norms if norms.size else np.array([])
        rows.append(
            AnnulusRow(
                k=k,
                r_lo=r_lo,
                r_hi=r_hi,
                nu=nu_k,
                n_drawn=samples_per_annulus,
                n_used=int(np.sum(window)),
                n_floor_excluded=n_floor,
                n_out_of_window=n_outwin,
                n_inf=int(np.sum(inf_mask)),
                c=1.0,
                residual_mean=residual_mean,
                dist_norm_ratio={
                    "min": float(ratio.min()) if ratio.size else None,
                    "mean": float(ratio.mean()) if ratio.size else None,
                    "max": float(ratio.max()) if ratio.size else None,
                },
            )
        )

    verdict = _divergence_verdict(rows)
    return ExponentFitReport(
        annuli=rows,
        verdict=verdict,
        dist_floor=dist_floor,
        seed=seed,
        samples_per_annulus=samples_per_annulus,
    )


def _divergence_verdict(rows: list[AnnulusRow]) -> str:
    finite = [r.nu for r in rows if r.nu is not None]
    all_inf_tail = [r.nu is None and r.n_inf > 0 for r in rows]
    if len(finite) >= 2:
        increasing = all(b > a for a, b in zip(finite, finite[1:]))
        if increasing and (finite[-1] > 2.0 * finite[0] or any(all_inf_tail)):
            return "diverging"
        return "bounded"
    # fewer than two finite exponents: whole shells of infinity evidence
    if any(all_inf_tail):
        return "diverging"
    return "bounded"


# ---------------------------------------------------------------------------
# Flatness-bound checks
# ---------------------------------------------------------------------------


@dataclass
class BoundRow:
    N: int
    log_sup: float | None
    sup: float | None
    argmax: list[float] | None
    d_at_argmax: float | None
    worst: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "log_sup": self.log_sup,
            "sup": self.sup,
            "argmax": self.argmax,
            "d_at_argmax": self.d_at_argmax,
            "worst": self.worst,
        }


@dataclass
class FlatnessBoundReport:
    mode: str
    radius: float
    rows: list[BoundRow]
    n_excluded: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "kind": "flatness_bound",
            "mode": self.mode,
            "radius": self.radius,
            "n_excluded": self.n_excluded,
            "seed": self.seed,
            "per_degree": [row.to_dict() for row in self.rows],
        }

    def sup(self, N: int) -> float | None:
        for row in self.rows:
            if row.N == N:
                return row.sup
        raise KeyError(N)


def check_flatness_bound(
    field: ScalarField,
    mode: str,
    n_max: int,
    radius: float,
    samples: int = 4000,
    seed: int = 0,
    dist_fn: Callable[[np.ndarray], np.ndarray] | None = None,
) -> FlatnessBoundReport:
    """Sampled sup of |f| / d^N over a ball, for N = 1..n_max.

    mode "norm" takes d = ||x|| (the flatness estimate at the origin; the sup
    is the smallest constant C_N with |f| <= C_N ||x||^N on the samples).
    mode "set" takes d = distance to the zero set and documents where the
    literal set-distance bound fails: near smooth points with nonzero normal
    derivative the ratio blows up as d -> 0, and the worst samples are
    reported rather than raised.
    """
    if mode not in ("norm", "set"):
        raise ValueError("mode must be 'norm' or 'set'")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if mode == "set" and dist_fn is None:
        from .witness import zero_set_distance

        dist_fn = zero_set_distance(field.zero_set, field.n)

    rng = np.random.default_rng((seed, 0xB0D))
    g = rng.standard_normal((samples, field.n))
    nrm = np.linalg.norm(g, axis=1)
    nrm[nrm == 0.0] = 1.0
    pts = (radius * rng.uniform(size=samples) ** (1.0 / field.n))[:, None] * (g / nrm[:, None])

    d = np.linalg.norm(pts, axis=1) if mode == "norm" else dist_fn(pts)
    keep = d > 1e-12
    n_excluded = int(np.sum(~keep))
    pts = pts[keep]
    d = d[keep]
    la = field.log_abs(pts)
    logd = np.log(d)

    rows = []
    for N in range(1, n_max + 1):
        ratio_log = la - N * logd
        if not ratio_log.size or not np.any(np.isfinite(ratio_log)):
            rows.append(BoundRow(N, None, None, None, None))
            continue
        order = np.argsort(ratio_log)
        top = order[::-1][:3]
        best = int(top[0])
        log_sup = float(ratio_log[best])
        sup = float(math.exp(log_sup)) if log_sup < 700.0 else None
        worst = [
            {
                "point": [float(v) for v in pts[i]],
                "d": float(d[i]),
                "log_ratio": float(ratio_log[i]),
            }
            for i in top
            if np.isfinite(ratio_log[i])
        ]
        rows.append(
            BoundRow(
                N=N,
                log_sup=log_sup,
                sup=sup,
                argmax=[float(v) for v in pts[best]],
                d_at_argmax=float(d[best]),
                worst=worst,
            )
        )
    return FlatnessBoundReport(mode=mode, radius=radius, rows=rows, n_excluded=n_excluded, seed=seed)
