"""Homogeneous-form algebra over a fixed graded-lex monomial basis.

A degree-m form in n variables is a coefficient vector over the monomials
x^alpha with |alpha| = m, ordered graded-lex (descending in the leading
exponents), of length binom(n+m-1, m).  Provides evaluation matrices on
point sets, numerical and exact-rational vanishing spaces, and truncated
composition with arc jets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

DEFAULT_NULLSPACE_TOL = 1e-8


@lru_cache(maxsize=None)
def monomial_basis(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    """Graded-lex ordered exponent multi-indices of degree m in n variables."""
    if n < 1:
        raise ValueError("need at least one variable")
    if m < 0:
        raise ValueError("degree must be nonnegative")
    if n == 1:
        return ((m,),)
    out = []
    for e in range(m, -1, -1):
        for rest in monomial_basis(n - 1, m - e):
            out.append((e,) + rest)
    return tuple(out)


def basis_size(n: int, m: int) -> int:
    return math.comb(n + m - 1, m)


@dataclass
class HomogeneousForm:
    """Degree-m homogeneous polynomial in n variables (grlex coefficients)."""

    n: int
    m: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.shape != (basis_size(self.n, self.m),):
            raise ValueError(
                f"degree-{self.m} forms in {self.n} variables need "
                f"{basis_size(self.n, self.m)} coefficients"
            )

    @classmethod
    def zero(cls, n: int, m: int) -> "HomogeneousForm":
        return cls(n, m, np.zeros(basis_size(n, m)))

    @classmethod
    def from_terms(cls, n: int, m: int, terms: dict[tuple[int, ...], float]) -> "HomogeneousForm":
        basis = monomial_basis(n, m)
        coeffs = np.zeros(len(basis))
        for alpha, c in terms.items():
            coeffs[basis.index(tuple(alpha))] = c
        return cls(n, m, coeffs)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "order": "grlex",
            "coeffs": [float(c) for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "HomogeneousForm":
        if payload.get("order", "grlex") != "grlex":
            raise ValueError("only grlex coefficient order is supported")
        return cls(int(payload["n"]), int(payload["m"]), np.asarray(payload["coeffs"], float))


@dataclass
class TaylorPolynomial:
    """One homogeneous component per degree 0..K."""

    n: int
    components: list[HomogeneousForm]

    def __post_init__(self):
        for deg, comp in enumerate(self.components):
            if comp.n != self.n or comp.m != deg:
                raise ValueError("component degrees must be 0..K with matching n")

    @property
    def max_degree(self) -> int:
        return len(self.components) - 1


@dataclass
class FormBasis:
    """Orthonormal basis of a vanishing space, with its rank diagnostics.

    singular_values are those of the generating evaluation matrix; None when
    the basis came from exact-rational elimination.
    """

    n: int
    m: int
    forms: list[HomogeneousForm]
    singular_values: np.ndarray | None

    @property
    def dimension(self) -> int:
        return len(self.forms)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "dimension": self.dimension,
            "order": "grlex",
            "basis": [[float(c) for c in f.coeffs] for f in self.forms],
            "singular_values": None
            if self.singular_values is None
            else [float(s) for s in self.singular_values],
        }


def evaluation_matrix(points, m: int) -> np.ndarray:
    """Matrix M[i, j] = x_i^alpha_j over the grlex degree-m basis."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    alphas = np.array(monomial_basis(pts.shape[1], m), dtype=float)
    return np.prod(pts[:, None, :] ** alphas[None, :, :], axis=2)


def eval_form(P: HomogeneousForm, x):
    """Evaluate P at a point (or batch of points as rows)."""
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts2 = np.atleast_2d(pts)
    if pts2.shape[1] != P.n:
        raise ValueError(f"form in {P.n} variables cannot take points of dimension {pts2.shape[1]}")
    vals = evaluation_matrix(pts2, P.m) @ P.coeffs
    return float(vals[0]) if single else vals


def _canonical_sign(vec: np.ndarray) -> np.ndarray:
    lead = int(np.argmax(np.abs(vec)))
    return -vec if vec[lead] < 0 else vec


def _exact_nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Null-space basis of a matrix over Q by fraction-exact elimination."""
    mat = [row[:] for row in rows]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for r in range(rank, len(mat)):
            if mat[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        pv = mat[rank][col]
        mat[rank] = [v / pv for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[rank])]
        pivots.append(col)
        rank += 1
        if rank == min(len(mat), ncols):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -mat[r][fc]
        basis.append(vec)
    return basis


def vanishing_space(points, m: int, tol: float = DEFAULT_NULLSPACE_TOL, exact: bool = False) -> FormBasis:
    """Orthonormal basis of the degree-m forms vanishing on the point set.

    Floating path: numerical null space of the evaluation matrix, null
    directions being the right singular vectors with sigma <= tol * sigma_max.
    Exact path (tol ignored): fraction-exact elimination; valid whenever the
    coordinates are rational (ints, Fractions, or floats taken exactly).
    """
    pts_list = list(points) if not isinstance(points, np.ndarray) else points
    if len(pts_list) == 0:
        raise ValueError("vanishing_space needs at least one point")

    if exact:
        first = pts_list[0]
        n = len(first)
        basis = monomial_basis(n, m)
        rows = []
        for p in pts_list:
            coords = [Fraction(c) for c in p]
            rows.append([math.prod((c ** e for c, e in zip(coords, alpha)), start=Fraction(1)) for alpha in basis])
        null = _exact_nullspace(rows, len(basis))
        if not null:
            return FormBasis(n, m, [], None)
        mat = np.array([[float(v) for v in vec] for vec in null]).T
        q, _ = np.linalg.qr(mat)
        forms = [
            HomogeneousForm(n, m, _canonical_sign(q[:, j])) for j in range(mat.shape[1])
        ]
        return FormBasis(n, m, forms, None)

    pts = np.atleast_2d(np.asarray(pts_list, dtype=float))
    n = pts.shape[1]
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")
    A = evaluation_matrix(pts, m)
    ncols = A.shape[1]
    _, sigma, vt = np.linalg.svd(A, full_matrices=True)
    smax = float(sigma[0]) if sigma.size else 0.0
    if smax == 0.0:
        rank = 0
    else:
        rank = int(np.sum(sigma > tol * smax))
    forms = [HomogeneousForm(n, m, _canonical_sign(vt[j])) for j in range(rank, ncols)]
    return FormBasis(n, m, forms, sigma.copy())


# ---------------------------------------------------------------------------
# Truncated composition with arc jets
# ---------------------------------------------------------------------------


def _truncmul(p: np.ndarray, q: np.ndarray, K: int) -> np.ndarray:
    return np.convolve(p, q)[: K + 1]


def compose_truncated(P, jet, K: int) -> np.ndarray:
    """Coefficients of s^0..s^K in P(gamma(s)) for an arc jet gamma.

    The arc enters through its Taylor coefficients gamma^(k)(0)/k!, so the
    result is the exact expansion of P along the jet through order K.  For a
    homogeneous P of degree m, the s^m coefficient equals P(gamma'(0)): the
    lowest-order contribution takes one first-order factor from each slot.
    """
    if K < 0:
        raise ValueError("truncation order must be nonnegative")
    if K > jet.order:
        raise ValueError(f"jet only determines the composition through order {jet.order}")

    if isinstance(P, TaylorPolynomial):
        out = np.zeros(K + 1)
        for comp in P.components:
            out += compose_truncated(comp, jet, K)
        return out

    if P.n != jet.n:
        raise ValueError("form and jet dimensions differ")

    # coordinate series as polynomials in s, constant term zero
    series = []
    for i in range(jet.n):
        coeffs = np.zeros(K + 1)
        for k in range(1, min(jet.order, K) + 1):
            coeffs[k] = jet.derivatives[k - 1, i] / math.factorial(k)
        series.append(coeffs)

    alphas = monomial_basis(P.n, P.m)
    max_exp = [max(alpha[i] for alpha in alphas) for i in range(P.n)]
    powers = []
    for i in range(P.n):
        one = np.zeros(K + 1)
        one[0] = 1.0
        pw = [one]
        for _ in range(max_exp[i]):
            pw.append(_truncmul(pw[-1], series[i], K))
        powers.append(pw)

    out = np.zeros(K + 1)
    for alpha, c in zip(alphas, P.coeffs):
        if c == 0.0:
            continue
        term = np.zeros(K + 1)
        term[0] = 1.0
        for i, e in enumerate(alpha):
            if e:
                term = _truncmul(term, powers[i][e], K)
        out += c * term
    return out


def leading_term(P: HomogeneousForm, jet, tol: float = 1e-12) -> tuple[int, float] | None:
    """Smallest k with nonzero s^k coefficient of P along the jet, or None.

    None means the composition is flat to the available jet order.  By
    homogeneity the order is always >= P.m, with equality iff P(gamma'(0))
    is nonzero.
    """
    if jet.order < P.m:
        raise ValueError("jet order must be at least the form degree")
    coeffs = compose_truncated(P, jet, jet.order)
    scale = float(np.max(np.abs(coeffs)))
    if scale == 0.0:
        return None
    thresh = tol * max(1.0, scale)
    for k, c in enumerate(coeffs):
        if abs(c) > thresh:
            return k, float(c)
    return None
