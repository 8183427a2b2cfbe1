"""Closed-form moment bounds for monotone, unimodal and discrete distributions.

Every function takes plain numbers (floats or Fractions) and returns a
:class:`BoundResult`, except the two building blocks :func:`two_point_raw_lb`
and :func:`tangent_raw_lb`, which return bare values.

Conventions: ``r`` is the order of the bounded moment for the raw-moment
bounds, and *half* the order for the even central-moment bounds
(:func:`central_even_lb_unimodal`, :func:`discrete_central_lb`).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any

from .errors import InputError, PreconditionError, UnsupportedRegimeError
from .witness import (
    QuadraticWitness,
    divided_sums,
    solve_witness_constraint,
    witness_monotone,
    witness_unimodal,
)

__all__ = [
    "ABS_TOL",
    "REL_TOL",
    "Source",
    "BoundKind",
    "BoundResult",
    "holds",
    "tolerance",
    "two_point_raw_lb",
    "tangent_raw_lb",
    "variance_lb_monotone",
    "variance_lb_unimodal",
    "variance_ub_jacobson",
    "raw_moment_lb_monotone",
    "raw_moment_lb_unimodal",
    "raw_moment_witness",
    "central_even_lb_unimodal",
    "discrete_central_lb",
    "lattice_variance_lb",
]

ABS_TOL = 1e-12
REL_TOL = 1e-9
SINGULAR_GAP = 1e-12


def tolerance(lhs, rhs, abs_tol: float = ABS_TOL, rel_tol: float = REL_TOL) -> float:
    return max(abs_tol, rel_tol * max(abs(float(lhs)), abs(float(rhs))))


def holds(lhs, rhs, abs_tol: float = ABS_TOL, rel_tol: float = REL_TOL) -> bool:
    """``lhs >= rhs`` up to the package-wide tolerance convention."""
    return lhs >= rhs - tolerance(lhs, rhs, abs_tol, rel_tol)


class Source(enum.Enum):
    """Which bound produced a value. ``label`` is the human-readable name."""

    NONINCREASING_VARIANCE = ("nonincreasing-variance",
                              "variance >= (mean-a)^2/3, non-increasing density")
    NONDECREASING_VARIANCE = ("nondecreasing-variance",
                              "variance >= (mean-b)^2/3, non-decreasing density")
    UNIMODAL_VARIANCE = ("unimodal-variance",
                         "variance >= (mean-M)^2/3, unimodal density (Johnson-Rogers)")
    TANGENT_RAW = ("tangent-raw-moment",
                   "E[X^r] >= r m^(r-1) mean - (r-1) m^r, tangent at m = mean")
    NONINCREASING_RAW = ("nonincreasing-raw-moment",
                         "E[X^r] >= raw moment of uniform[a, 2 mean - a]")
    UNIMODAL_RAW = ("unimodal-raw-moment",
                    "E[X^r] >= raw moment of uniform[M, 2 mean - M]")
    UNIMODAL_CENTRAL_EVEN = ("unimodal-central-even",
                             "E[(X-mean)^2r] >= (mean-M)^2r/(2r+1)")
    DISCRETE_WINDOW = ("discrete-window-central",
                       "E[(X-mean)^2r] >= two-point bound from the support gap around the mean")
    LATTICE_VARIANCE = ("lattice-unimodal-variance",
                        "3 variance >= (mean-M)^2 + |mean-M|, integer lattice (Abouammoh-Mashhour)")
    JACOBSON_UPPER = ("jacobson-upper", "variance <= (b-a)^2/9, unimodal density (Jacobson)")
    MEAN_RANGE = ("mean-range", "(a+M)/2 <= mean <= (b+M)/2, unimodal density")

    def __init__(self, tag: str, label: str):
        self.tag = tag
        self.label = label

    @classmethod
    def from_tag(cls, tag: str) -> "Source":
        for s in cls:
            if s.tag == tag:
                return s
        raise InputError(f"unknown bound tag {tag!r}")


class BoundKind(enum.Enum):
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class BoundResult:
    value: Any
    kind: BoundKind
    source: Source
    moment: str          # "variance", "raw" or "central"
    order: int           # order of the bounded moment
    witness: QuadraticWitness | None = None

    def to_json(self) -> dict[str, Any]:
        out = {
            "value": float(self.value),
            "kind": self.kind.value,
            "source": self.source.tag,
            "moment": self.moment,
            "order": self.order,
        }
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def _order(r: Any, minimum: int = 1) -> int:
    if isinstance(r, bool) or not isinstance(r, int) or r < minimum:
        raise InputError(f"order must be an integer >= {minimum}, got {r!r}")
    return r


def _in_range(name: str, x, lo, hi) -> None:
    slack = tolerance(lo, hi)
    if not (lo - slack <= x <= hi + slack):
        raise PreconditionError(
            f"{name} = {float(x)!r} outside [{float(lo)!r}, {float(hi)!r}]")


# --------------------------------------------------------------------------
# Building blocks
# --------------------------------------------------------------------------

def two_point_raw_lb(alpha, beta, mean, r: int):
    """Lower bound on E[X^r] certified by the witness pair (alpha, beta)."""
    r = _order(r)
    if alpha == beta:
        raise InputError("alpha == beta: use tangent_raw_lb for the limiting case")
    s, c = divided_sums(alpha, beta, r)
    return s * mean - c


def tangent_raw_lb(alpha, mean, r: int):
    """Lower bound from the tangent of x^r at alpha (any real alpha for even r)."""
    r = _order(r)
    return r * alpha ** (r - 1) * mean - (r - 1) * alpha ** r


# --------------------------------------------------------------------------
# Variance
# --------------------------------------------------------------------------

def variance_lb_monotone(a, b, mean, direction: str) -> BoundResult:
    if not a < b:
        raise InputError(f"support needs a < b, got [{a}, {b}]")
    mid = (a + b) / 2
    if direction == "non-increasing":
        _in_range("mean of a non-increasing density", mean, a, mid)
        w = witness_monotone(a, mean)
        return BoundResult((mean - a) ** 2 / 3, BoundKind.LOWER,
                           Source.NONINCREASING_VARIANCE, "variance", 2, w)
    if direction == "non-decreasing":
        _in_range("mean of a non-decreasing density", mean, mid, b)
        # mirror image of the non-increasing witness about the origin
        m = witness_monotone(-b, -mean)
        w = QuadraticWitness(-m.beta, -m.alpha)
        return BoundResult((mean - b) ** 2 / 3, BoundKind.LOWER,
                           Source.NONDECREASING_VARIANCE, "variance", 2, w)
    raise InputError(f"direction must be 'non-increasing' or 'non-decreasing', "
                     f"got {direction!r}")


def variance_lb_unimodal(mean, mode) -> BoundResult:
    """Johnson-Rogers bound. The caller is responsible for the mean range."""
    return BoundResult((mean - mode) ** 2 / 3, BoundKind.LOWER,
                       Source.UNIMODAL_VARIANCE, "variance", 2,
                       witness_unimodal(mode, mean))


def variance_ub_jacobson(a, b) -> BoundResult:
    if not a < b:
        raise InputError(f"support needs a < b, got [{a}, {b}]")
    return BoundResult((b - a) ** 2 / 9, BoundKind.UPPER,
                       Source.JACOBSON_UPPER, "variance", 2)


# --------------------------------------------------------------------------
# Raw moments of order r
# --------------------------------------------------------------------------

def _uniform_raw_moment(lo, mean, r: int):
    """E[X^r] for X uniform on [lo, 2*mean - lo], without dividing by the width."""
    if abs(mean - lo) < SINGULAR_GAP * max(1, abs(lo)):
        return lo ** r
    hi = 2 * mean - lo
    return sum(hi ** i * lo ** (r - i) for i in range(r + 1)) / (r + 1)


def raw_moment_lb_monotone(a, mean, r: int) -> BoundResult:
    r = _order(r)
    if mean < a - tolerance(a, mean):
        raise PreconditionError(f"mean {mean} lies below the support start {a}")
    if r % 2 and a < 0:
        raise UnsupportedRegimeError(f"odd order {r} needs a >= 0, got a={a}")
    return BoundResult(_uniform_raw_moment(a, mean, r), BoundKind.LOWER,
                       Source.NONINCREASING_RAW, "raw", r)


def raw_moment_lb_unimodal(mode, mean, r: int) -> BoundResult:
    r = _order(r)
    if r % 2 and (mode < 0 or 2 * mean - mode < 0):
        raise UnsupportedRegimeError(
            f"odd order {r} needs mode >= 0 and 2*mean - mode >= 0 "
            f"(mode={mode}, mean={mean})")
    return BoundResult(_uniform_raw_moment(mode, mean, r), BoundKind.LOWER,
                       Source.UNIMODAL_RAW, "raw", r)


def raw_moment_witness(a: float, mean: float, r: int) -> QuadraticWitness:
    """Witness pair behind :func:`raw_moment_lb_monotone` for ``mean > a``."""
    beta = 2 * float(mean) - float(a)
    return QuadraticWitness(solve_witness_constraint(a, beta, r), beta)


# --------------------------------------------------------------------------
# Even central moments
# --------------------------------------------------------------------------

def central_even_lb_unimodal(mean, mode, r: int) -> BoundResult:
    """Lower bound on the 2r-th central moment of a density unimodal at ``mode``."""
    r = _order(r)
    return BoundResult((mean - mode) ** (2 * r) / (2 * r + 1), BoundKind.LOWER,
                       Source.UNIMODAL_CENTRAL_EVEN, "central", 2 * r)


def discrete_central_lb(x_lo, x_hi, mean, r: int) -> BoundResult:
    """Lower bound on the 2r-th central moment of any pmf with no mass in (x_lo, x_hi)."""
    r = _order(r)
    if not x_lo < x_hi:
        raise InputError(f"need x_lo < x_hi, got {x_lo}, {x_hi}")
    if not x_lo <= mean <= x_hi:
        raise PreconditionError(f"mean {mean} outside the window [{x_lo}, {x_hi}]")
    left, right = mean - x_lo, x_hi - mean
    value = (left * right ** (2 * r) + right * left ** (2 * r)) / (x_hi - x_lo)
    return BoundResult(value, BoundKind.LOWER, Source.DISCRETE_WINDOW,
                       "central", 2 * r)


def lattice_variance_lb(mean, mode) -> BoundResult:
    d = mean - mode
    return BoundResult((d * d + abs(d)) / 3, BoundKind.LOWER,
                       Source.LATTICE_VARIANCE, "variance", 2)
