"""Two-point witnesses and the moment polynomials that certify bounds.

A witness pair ``(alpha, beta)`` defines

    f(x) = x^r - S x + C,   S = sum_{i<r} alpha^i beta^(r-1-i),
                            C = alpha*beta * sum_{i<r-1} alpha^i beta^(r-2-i)

which vanishes at alpha and beta and factors as ``(x-alpha)(x-beta) g(x)``.
If the shape of a distribution forces ``E[f(X)] >= 0`` then
``E[X^r] >= S*mean - C``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConsistencyError,
    ConstraintInfeasibleError,
    InputError,
    LemmaViolationError,
    UnsupportedRegimeError,
)

__all__ = [
    "QuadraticWitness",
    "MomentPolynomial",
    "divided_sums",
    "witness_monotone",
    "witness_unimodal",
    "build_moment_polynomial",
    "synthetic_division",
    "witness_constraint_target",
    "solve_witness_constraint",
]

POLY_RTOL = 1e-9
GRID_POINTS = 1024
BISECT_RTOL = 1e-13
BISECT_MAXITER = 200


@dataclass(frozen=True)
class QuadraticWitness:
    alpha: float
    beta: float

    def to_json(self) -> dict[str, float]:
        return {"alpha": float(self.alpha), "beta": float(self.beta)}


def divided_sums(alpha, beta, r: int):
    """Return ``(S, C)``: linear and constant coefficients of the moment polynomial.

    ``S`` is the divided difference (beta^r - alpha^r)/(beta - alpha) and
    ``C`` is (beta^r alpha - alpha^r beta)/(beta - alpha), both expanded as
    sums so that neither divides by ``beta - alpha``.
    """
    if r < 1:
        raise InputError(f"order must be >= 1, got {r}")
    s = sum(alpha ** i * beta ** (r - 1 - i) for i in range(r))
    c = alpha * beta * sum(alpha ** i * beta ** (r - 2 - i) for i in range(r - 1))
    return s, c


def _clamp(x, lo, hi):
    # rounding in (2a + beta)/3 can land one ulp outside [a, beta]
    return min(max(x, lo), hi)


def witness_monotone(a, mean) -> QuadraticWitness:
    """Optimal witness for a non-increasing density starting at ``a``."""
    if mean < a:
        raise InputError(f"mean {mean} lies below the support start {a}")
    beta = 2 * mean - a
    return QuadraticWitness(_clamp((2 * a + beta) / 3, a, beta), beta)


def witness_unimodal(mode, mean) -> QuadraticWitness:
    """Optimal witness for a density unimodal at ``mode``.

    When the mean lies left of the mode the problem is reflected about the
    origin, solved, and reflected back so that ``alpha <= beta`` still holds.
    """
    if mean >= mode:
        beta = 2 * mean - mode
        return QuadraticWitness(_clamp((2 * mode + beta) / 3, mode, beta), beta)
    w = witness_unimodal(-mode, -mean)
    return QuadraticWitness(-w.beta, -w.alpha)


@dataclass(frozen=True)
class MomentPolynomial:
    """f and its cofactor g; coefficients are stored highest degree first."""

    order: int
    alpha: float
    beta: float
    coeffs_f: tuple[float, ...]
    coeffs_g: tuple[float, ...]
    residual: float

    def f(self, x):
        return np.polyval(self.coeffs_f, x)

    def g(self, x):
        return np.polyval(self.coeffs_g, x)


def synthetic_division(coeffs, root: float) -> tuple[list[float], float]:
    """Divide by ``(x - root)``; return (quotient, remainder)."""
    out = [float(coeffs[0])]
    for c in coeffs[1:]:
        out.append(c + out[-1] * root)
    return out[:-1], out[-1]


def _g_grid(alpha: float, beta: float, r: int) -> np.ndarray:
    if r % 2:
        return np.linspace(0.0, 2 * max(alpha, beta), GRID_POINTS)
    span = 2 * max(abs(alpha), abs(beta))
    return np.linspace(-span, span, GRID_POINTS)


def build_moment_polynomial(alpha: float, beta: float, r: int) -> MomentPolynomial:
    if r < 2:
        raise InputError(f"moment polynomial needs order >= 2, got {r}")
    if alpha == beta:
        raise InputError("moment polynomial needs alpha != beta")
    if r % 2 and (alpha < 0 or beta < 0):
        raise UnsupportedRegimeError(
            f"odd order {r} needs alpha, beta >= 0 (got {alpha}, {beta})")
    alpha, beta = float(alpha), float(beta)
    s, c = divided_sums(alpha, beta, r)
    coeffs_f = [1.0] + [0.0] * (r - 2) + [-s, c]

    scale = max(abs(v) for v in coeffs_f)
    q, rem1 = synthetic_division(coeffs_f, alpha)
    g, rem2 = synthetic_division(q, beta)
    residual = max(abs(rem1), abs(rem2)) / scale
    if residual > POLY_RTOL:
        raise ConsistencyError(
            f"division residual {residual:.3e} exceeds {POLY_RTOL} "
            f"(alpha={alpha}, beta={beta}, r={r})")

    xs = _g_grid(alpha, beta, r)
    gv = np.polyval(g, xs)
    mag = np.polyval(np.abs(g), np.abs(xs))
    worst = np.min(gv + POLY_RTOL * mag)
    if worst < 0:
        i = int(np.argmin(gv + POLY_RTOL * mag))
        raise LemmaViolationError(
            f"cofactor g({xs[i]:.6g}) = {gv[i]:.6g} < 0 "
            f"(alpha={alpha}, beta={beta}, r={r})")
    return MomentPolynomial(r, alpha, beta, tuple(coeffs_f), tuple(g), residual)


def witness_constraint_target(a: float, beta: float, r: int) -> float:
    """Right-hand side of the constraint that makes f integrate to zero on [a, beta].

    The constraint reads ``alpha^(r-1) + alpha^(r-2) beta + ... + alpha beta^(r-2)``
    equal to the value returned here.
    """
    num = (r - 1) * beta ** r + (r - 1) * a * beta ** (r - 1)
    num -= 2 * math.fsum(a ** k * beta ** (r - k) for k in range(2, r + 1))
    return num / ((r + 1) * (beta - a))


def _constraint_lhs(alpha: float, beta: float, r: int) -> float:
    return math.fsum(alpha ** (r - 1 - i) * beta ** i for i in range(r - 1))


def solve_witness_constraint(a: float, beta: float, r: int) -> float:
    """Find alpha in [a, beta] with the integral of f over [a, beta] equal to zero.

    Bisection on the constraint polynomial, which is increasing in alpha
    for non-negative arguments.
    """
    if r < 2:
        raise InputError(f"witness constraint needs order >= 2, got {r}")
    if not a < beta:
        raise InputError(f"witness constraint needs a < beta (got {a}, {beta})")
    if r % 2 and a < 0:
        raise UnsupportedRegimeError(f"odd order {r} needs a >= 0, got a={a}")
    a, beta = float(a), float(beta)
    target = witness_constraint_target(a, beta, r)

    def h(x: float) -> float:
        return _constraint_lhs(x, beta, r) - target

    lo, hi = a, beta
    h_lo, h_hi = h(lo), h(hi)
    if h_lo == 0:
        return lo
    if h_hi == 0:
        return hi
    if (h_lo > 0) == (h_hi > 0):
        raise ConstraintInfeasibleError(
            f"no sign change of the witness constraint on [{a}, {beta}] for r={r}")
    for _ in range(BISECT_MAXITER):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi) or hi - lo <= BISECT_RTOL * max(abs(lo), abs(hi)):
            break
        h_mid = h(mid)
        if h_mid == 0:
            return mid
        if (h_mid > 0) == (h_lo > 0):
            lo, h_lo = mid, h_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
