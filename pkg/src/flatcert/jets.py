"""Arc jets and the two jet-determination predicates.

An arc jet stores the derivatives gamma^(k)(0), k = 1..K, of a smooth arc
through the origin.  Closed forms are provided for the earring circles;
generic arcs are differentiated by Richardson-extrapolated central finite
differences.  The nondegeneracy report evaluates, per degree m, both the
tangent predicate (no nonzero degree-m form vanishing on all first
nonvanishing jet directions) and the arc-restriction predicate (whether the
forms that do vanish on the tangents actually vanish along the arcs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .polynomials import FormBasis, basis_size, leading_term, vanishing_space
from .stencils import MAX_ORDER, reach, stencil

_DEGENERATE_TOL = 1e-12


@dataclass
class ArcJet:
    """Derivatives of an arc gamma with gamma(0) = 0, rows gamma^(k)(0)."""

    derivatives: np.ndarray
    fd_errors: np.ndarray | None = None

    def __post_init__(self):
        self.derivatives = np.atleast_2d(np.asarray(self.derivatives, dtype=float))
        if self.derivatives.shape[0] < 1:
            raise ValueError("a jet needs at least the first derivative")

    @property
    def n(self) -> int:
        return self.derivatives.shape[1]

    @property
    def order(self) -> int:
        return self.derivatives.shape[0]

    def derivative(self, k: int) -> np.ndarray:
        if not 1 <= k <= self.order:
            raise ValueError(f"jet holds derivative orders 1..{self.order}")
        return self.derivatives[k - 1]

    def first_nonzero(self) -> tuple[int, np.ndarray] | None:
        """(q, d_q) for the first derivative with nonzero norm, else None."""
        scale = float(np.max(np.abs(self.derivatives)))
        if scale == 0.0:
            return None
        for k in range(1, self.order + 1):
            d = self.derivatives[k - 1]
            if np.linalg.norm(d) > _DEGENERATE_TOL * max(1.0, scale):
                return k, d
        return None

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "K": self.order,
            "derivatives": [[float(v) for v in row] for row in self.derivatives],
        }
        if self.fd_errors is not None:
            out["fd_errors"] = [None if not math.isfinite(e) else float(e) for e in self.fd_errors]
        return out

    @classmethod
    def from_dict(cls, payload: dict) -> "ArcJet":
        der = np.asarray(payload["derivatives"], dtype=float)
        if "K" in payload and int(payload["K"]) != der.shape[0]:
            raise ValueError("jet order K does not match the derivative rows")
        if "n" in payload and int(payload["n"]) != der.shape[1]:
            raise ValueError("jet dimension n does not match the derivative rows")
        return cls(der)


def circle_arc_jet(n: int, K: int) -> ArcJet:
    """Jet of the unit-speed arc of C_n, gamma(s) = (1/n)(1 - cos ns, sin ns).

    gamma'(0) = (0, 1), gamma''(0) = (n, 0), gamma'''(0) = (0, -n^2), and so
    on with alternating signs; the curvature |gamma''(0)| equals n.
    """
    if n < 1:
        raise ValueError("circle index must be a positive integer")
    if K < 1:
        raise ValueError("jet order must be >= 1")
    der = np.zeros((K, 2))
    for k in range(1, K + 1):
        if k % 2 == 0:
            der[k - 1, 0] = (-1.0) ** (k // 2 + 1) * float(n) ** (k - 1)
        else:
            der[k - 1, 1] = (-1.0) ** ((k - 1) // 2) * float(n) ** (k - 1)
    return ArcJet(der)


def numeric_jet(s, points, K: int) -> ArcJet:
    """Jet of a sampled arc by central differences with Richardson extrapolation.

    Requires at least 2K+1 samples on a uniform grid symmetric about s = 0.
    Each derivative order is estimated at steps h and 2h and combined as
    (4 D_h - D_2h)/3 when the grid reaches far enough; the attached error
    estimate is |D_h - D_2h|/3 (max over components), NaN when only the
    single-step estimate was available.
    """
    s = np.asarray(s, dtype=float)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if K < 1:
        raise ValueError("jet order must be >= 1")
    if K > MAX_ORDER:
        raise ValueError(f"stencil table covers derivative orders up to {MAX_ORDER}")
    m = s.size
    if pts.shape[0] != m:
        raise ValueError("sample values and parameters disagree in length")
    if m < 2 * K + 1 or m % 2 == 0:
        raise ValueError(f"need an odd number of samples, at least {2 * K + 1}")
    mid = m // 2
    h = s[mid + 1] - s[mid]
    if h <= 0:
        raise ValueError("sample parameters must be increasing")
    tol = 1e-9 * max(1.0, float(np.max(np.abs(s))))
    if np.max(np.abs(np.diff(s) - h)) > tol:
        raise ValueError("sample grid must be uniform")
    if np.max(np.abs(s + s[::-1])) > tol:
        raise ValueError("sample grid must be symmetric about s = 0")

    der = np.zeros((K, pts.shape[1]))
    errs = np.full(K, np.nan)
    for k in range(1, K + 1):
        off, w = stencil(k)
        fine = (w[:, None] * pts[mid + off]).sum(axis=0) / h ** k
        if 2 * reach(k) <= mid:
            coarse = (w[:, None] * pts[mid + 2 * off]).sum(axis=0) / (2.0 * h) ** k
            der[k - 1] = (4.0 * fine - coarse) / 3.0
            errs[k - 1] = float(np.max(np.abs(fine - coarse))) / 3.0
        else:
            der[k - 1] = fine
    return ArcJet(der, fd_errors=errs)


def load_arc_samples(path, header: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Read an arc sample CSV with columns s, x1..xn."""
    from .geometry import read_points_csv

    table = read_points_csv(path, header=header)
    if table.shape[1] < 2:
        raise ValueError("arc sample files need columns s, x1..xn")
    return table[:, 0], table[:, 1:]


@dataclass
class ArcSummary:
    index: int
    order: int
    tangent_order: int | None
    degenerate: bool
    direction: list[float] | None


@dataclass
class DegreeReport:
    m: int
    dimension: int
    max_dimension: int
    condition_b: bool
    basis: FormBasis
    # one row per (basis form, arc): leading order/coefficient, or flat
    arc_restrictions: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "dimension": self.dimension,
            "max_dimension": self.max_dimension,
            "condition_b": self.condition_b,
            "vanishing_space": self.basis.to_dict(),
            "arc_restrictions": self.arc_restrictions,
        }


@dataclass
class NondegeneracyReport:
    n: int
    m_max: int
    tol: float
    degrees: list[DegreeReport]
    arcs: list[ArcSummary]

    def condition_b(self, m: int) -> bool:
        return self.degrees[m - 1].condition_b

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m_max": self.m_max,
            "tol": self.tol,
            "degrees": [d.to_dict() for d in self.degrees],
            "arcs": [
                {
                    "index": a.index,
                    "order": a.order,
                    "tangent_order": a.tangent_order,
                    "degenerate": a.degenerate,
                    "direction": a.direction,
                }
                for a in self.arcs
            ],
        }


def jet_nondegeneracy(arcs: list[ArcJet], m_max: int, tol: float = 1e-8) -> NondegeneracyReport:
    """Evaluate the tangent and arc-restriction predicates for degrees 1..m_max.

    The tangent predicate at degree m asks for the vanishing space of the
    degree-m forms on the set of first nonvanishing jet directions; the
    condition holds at m iff that space is trivial.  For each basis form of a
    nontrivial space, the report records its leading term along every arc,
    exposing forms that vanish on all tangents yet fail to vanish along the
    arcs themselves.
    """
    if not arcs:
        raise ValueError("need at least one arc")
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    n = arcs[0].n
    if any(a.n != n for a in arcs):
        raise ValueError("arcs must share one ambient dimension")

    summaries = []
    tangent_dirs = []
    usable = []
    for idx, arc in enumerate(arcs):
        fn = arc.first_nonzero()
        if fn is None:
            summaries.append(ArcSummary(idx, arc.order, None, True, None))
            continue
        q, d = fn
        direction = d / np.linalg.norm(d)
        summaries.append(
            ArcSummary(idx, arc.order, q, q > 1, [float(v) for v in direction])
        )
        tangent_dirs.append(direction)
        usable.append((idx, arc))
    if not tangent_dirs:
        raise ValueError("every arc has an identically zero jet")

    degrees = []
    for m in range(1, m_max + 1):
        basis = vanishing_space(np.array(tangent_dirs), m, tol=tol)
        restrictions = []
        for fi, form in enumerate(basis.forms):
            for idx, arc in usable:
                if arc.order < m:
                    restrictions.append(
                        {"form": fi, "arc": idx, "status": "insufficient_jet_order"}
                    )
                    continue
                lt = leading_term(form, arc)
                if lt is None:
                    restrictions.append(
                        {"form": fi, "arc": idx, "status": "flat_to_available_order"}
                    )
                else:
                    restrictions.append(
                        {
                            "form": fi,
                            "arc": idx,
                            "status": "nonvanishing",
                            "order": lt[0],
                            "coeff": lt[1],
                        }
                    )
        degrees.append(
            DegreeReport(
                m=m,
                dimension=basis.dimension,
                max_dimension=basis_size(n, m),
                condition_b=basis.dimension == 0,
                basis=basis,
                arc_restrictions=restrictions,
            )
        )
    return NondegeneracyReport(n=n, m_max=m_max, tol=tol, degrees=degrees, arcs=summaries)
