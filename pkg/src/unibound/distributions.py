"""Concrete distributions, shape classification and the exact moment oracle.

Two representations are supported:

* :class:`DiscretePMF` -- finitely many support points with probabilities.
* :class:`PiecewiseConstantDensity` -- a step density on ``[t_0, t_m]``.

Both accept either floats or exact rationals (``int`` / ``fractions.Fraction``).
When every input is rational the moments are computed exactly; otherwise all
values are coerced to ``float`` and sums use :func:`math.fsum`, which returns
the correctly rounded sum of its inputs.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real
from typing import Any, Iterable, Sequence, Union

from .errors import InputError

__all__ = [
    "MASS_TOL",
    "DiscretePMF",
    "PiecewiseConstantDensity",
    "Distribution",
    "Shape",
    "ShapeClass",
    "MomentValue",
    "raw_moment",
    "mean",
    "central_moment",
    "plateau_modes",
    "classify_shape",
    "from_json",
    "to_json",
    "load",
    "dumps",
]

#: Absolute tolerance on total probability mass.
MASS_TOL = 1e-12

Number = Union[float, Fraction]


def _coerce(values: Iterable[Any], name: str) -> tuple[list[Number], bool]:
    raw = list(values)
    for v in raw:
        if isinstance(v, bool) or not isinstance(v, (Real, str)):
            raise InputError(f"{name}: expected real numbers, got {v!r}")
    parsed: list[Any] = []
    for v in raw:
        if isinstance(v, str):
            try:
                v = Fraction(v)
            except (ValueError, ZeroDivisionError) as exc:
                raise InputError(f"{name}: cannot parse {v!r} as a rational") from exc
        parsed.append(v)
    return parsed, all(isinstance(v, Rational) for v in parsed)


def _normalize(columns: dict[str, list[Any]]) -> tuple[dict[str, tuple[Number, ...]], bool]:
    """Make all columns exact Fractions, or all finite floats."""
    exact = True
    parsed = {}
    for name, values in columns.items():
        parsed[name], col_exact = _coerce(values, name)
        exact = exact and col_exact
    out = {}
    for name, values in parsed.items():
        if exact:
            out[name] = tuple(Fraction(v) for v in values)
        else:
            floats = tuple(float(v) for v in values)
            if not all(math.isfinite(v) for v in floats):
                raise InputError(f"{name}: values must be finite")
            out[name] = floats
    return out, exact


def _sum(values: Iterable[Number], exact: bool) -> Number:
    if exact:
        return sum(values, Fraction(0))
    return math.fsum(values)


def _strictly_increasing(xs: Sequence[Number]) -> bool:
    return all(x0 < x1 for x0, x1 in zip(xs, xs[1:]))


@dataclass(frozen=True, init=False)
class DiscretePMF:
    """Probability mass function on strictly increasing support points."""

    points: tuple[Number, ...]
    probs: tuple[Number, ...]
    exact: bool

    def __init__(self, points: Iterable[Any], probs: Iterable[Any]):
        cols, exact = _normalize({"points": list(points), "probs": list(probs)})
        pts, ps = cols["points"], cols["probs"]
        if not pts:
            raise InputError("points: support must be non-empty")
        if len(pts) != len(ps):
            raise InputError(
                f"points and probs differ in length ({len(pts)} != {len(ps)})")
        if not _strictly_increasing(pts):
            raise InputError("points: support must be strictly increasing")
        if any(p < 0 for p in ps):
            raise InputError("probs: probabilities must be non-negative")
        mass = _sum(ps, exact)
        if abs(mass - 1) > MASS_TOL:
            raise InputError(f"probs: total mass {float(mass)!r} is not 1 "
                             f"within {MASS_TOL}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "probs", ps)
        object.__setattr__(self, "exact", exact)

    @property
    def support(self) -> tuple[Number, Number]:
        return self.points[0], self.points[-1]

    @property
    def weights(self) -> tuple[Number, ...]:
        return self.probs

    def is_lattice(self) -> bool:
        """True when the support is a run of consecutive integers."""
        if not all(float(x).is_integer() for x in self.points):
            return False
        return all(x1 - x0 == 1 for x0, x1 in zip(self.points, self.points[1:]))


@dataclass(frozen=True, init=False)
class PiecewiseConstantDensity:
    """Step density: ``heights[k]`` on ``(breakpoints[k], breakpoints[k+1])``."""

    breakpoints: tuple[Number, ...]
    heights: tuple[Number, ...]
    exact: bool

    def __init__(self, breakpoints: Iterable[Any], heights: Iterable[Any]):
        cols, exact = _normalize({"breakpoints": list(breakpoints),
                                  "heights": list(heights)})
        ts, hs = cols["breakpoints"], cols["heights"]
        if len(ts) < 2:
            raise InputError("breakpoints: need at least two breakpoints")
        if len(hs) != len(ts) - 1:
            raise InputError(
                f"heights: expected {len(ts) - 1} values, got {len(hs)}")
        if not _strictly_increasing(ts):
            raise InputError("breakpoints: must be strictly increasing")
        if any(h < 0 for h in hs):
            raise InputError("heights: density must be non-negative")
        mass = _sum((h * (t1 - t0) for h, t0, t1 in zip(hs, ts, ts[1:])), exact)
        if abs(mass - 1) > MASS_TOL:
            raise InputError(f"heights: total mass {float(mass)!r} is not 1 "
                             f"within {MASS_TOL}")
        object.__setattr__(self, "breakpoints", ts)
        object.__setattr__(self, "heights", hs)
        object.__setattr__(self, "exact", exact)

    @classmethod
    def uniform(cls, a: Any, b: Any) -> "PiecewiseConstantDensity":
        if not a < b:
            raise InputError(f"uniform density needs a < b, got [{a}, {b}]")
        width = b - a
        height = Fraction(1) / width if isinstance(width, Rational) else 1.0 / width
        return cls([a, b], [height])

    @property
    def support(self) -> tuple[Number, Number]:
        return self.breakpoints[0], self.breakpoints[-1]

    @property
    def weights(self) -> tuple[Number, ...]:
        return self.heights


Distribution = Union[DiscretePMF, PiecewiseConstantDensity]


# --------------------------------------------------------------------------
# Moments
# --------------------------------------------------------------------------

def _check_order(r: Any) -> int:
    if isinstance(r, bool) or not isinstance(r, int) or r < 0:
        raise InputError(f"moment order must be a non-negative integer, got {r!r}")
    return r


def _shifted_moment(dist: Distribution, r: int, shift: Number) -> Number:
    """E[(X - shift)^r]; step densities integrate each piece in closed form."""
    if isinstance(dist, DiscretePMF):
        return _sum((p * (x - shift) ** r for x, p in zip(dist.points, dist.probs)),
                    dist.exact)
    if isinstance(dist, PiecewiseConstantDensity):
        ts = [t - shift for t in dist.breakpoints]
        terms = (h * (t1 ** (r + 1) - t0 ** (r + 1))
                 for h, t0, t1 in zip(dist.heights, ts, ts[1:]))
        total = _sum(terms, dist.exact)
        return total / (r + 1)
    raise InputError(f"not a distribution: {type(dist).__name__}")


def raw_moment(dist: Distribution, r: int) -> Number:
    """Return E[X^r]."""
    return _shifted_moment(dist, _check_order(r), 0)


def mean(dist: Distribution) -> Number:
    return raw_moment(dist, 1)


def central_moment(dist: Distribution, r: int) -> Number:
    """Return E[(X - mean)^r], integrating on the re-centred support."""
    r = _check_order(r)
    return _shifted_moment(dist, r, raw_moment(dist, 1))


class MomentKind(enum.Enum):
    RAW = "raw"
    CENTRAL = "central"


@dataclass(frozen=True)
class MomentValue:
    order: int
    kind: MomentKind
    value: Number


# --------------------------------------------------------------------------
# Shape classification
# --------------------------------------------------------------------------

class Shape(enum.Enum):
    NON_INCREASING = "non-increasing"
    NON_DECREASING = "non-decreasing"
    UNIMODAL = "unimodal"
    NOT_UNIMODAL = "not-unimodal"


@dataclass(frozen=True)
class ShapeClass:
    """Result of :func:`classify_shape`.

    For every variant except ``NOT_UNIMODAL`` the fields ``mode_lo`` and
    ``mode_hi`` delimit the plateau of admissible modes (support points for a
    pmf, a closed interval of the real line for a density) and ``peak_lo`` /
    ``peak_hi`` are the indices of the first and last maximal weight.
    ``also_non_decreasing`` is set for constant weight sequences, which are
    reported as ``NON_INCREASING``.
    """

    shape: Shape
    mode_lo: Number | None = None
    mode_hi: Number | None = None
    peak_lo: int | None = None
    peak_hi: int | None = None
    also_non_decreasing: bool = False

    @property
    def is_unimodal(self) -> bool:
        return self.shape is not Shape.NOT_UNIMODAL

    @property
    def non_increasing(self) -> bool:
        return self.shape is Shape.NON_INCREASING

    @property
    def non_decreasing(self) -> bool:
        return self.shape is Shape.NON_DECREASING or self.also_non_decreasing

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"shape": self.shape.value}
        if self.is_unimodal:
            out["mode_lo"] = float(self.mode_lo)
            out["mode_hi"] = float(self.mode_hi)
            if self.also_non_decreasing:
                out["also_non_decreasing"] = True
        return out


def classify_shape(dist: Distribution) -> ShapeClass:
    """Classify the weight sequence (probs or heights) with exact comparisons."""
    w = dist.weights
    n = len(w)
    non_inc = all(w[i] >= w[i + 1] for i in range(n - 1))
    non_dec = all(w[i] <= w[i + 1] for i in range(n - 1))

    top = max(w)
    peak_lo = next(i for i in range(n) if w[i] == top)
    peak_hi = next(i for i in reversed(range(n)) if w[i] == top)
    if not (all(w[i] <= w[i + 1] for i in range(peak_lo))
            and all(w[i] == top for i in range(peak_lo, peak_hi + 1))
            and all(w[i] >= w[i + 1] for i in range(peak_hi, n - 1))):
        return ShapeClass(Shape.NOT_UNIMODAL)

    if isinstance(dist, DiscretePMF):
        lo, hi = dist.points[peak_lo], dist.points[peak_hi]
    else:
        lo, hi = dist.breakpoints[peak_lo], dist.breakpoints[peak_hi + 1]

    if non_inc:
        shape = Shape.NON_INCREASING
    elif non_dec:
        shape = Shape.NON_DECREASING
    else:
        shape = Shape.UNIMODAL
    return ShapeClass(shape, lo, hi, peak_lo, peak_hi,
                      also_non_decreasing=non_inc and non_dec)


def plateau_modes(dist: Distribution, shape: ShapeClass) -> list[Number]:
    """Admissible modes worth evaluating a bound at.

    Every bound in this package that depends on the mode is monotone in the
    distance between mode and mean, so for a density only the plateau
    endpoints matter. For a pmf each support point on the plateau is listed.
    """
    if not shape.is_unimodal:
        return []
    if isinstance(dist, DiscretePMF):
        return list(dist.points[shape.peak_lo:shape.peak_hi + 1])
    if shape.mode_lo == shape.mode_hi:
        return [shape.mode_lo]
    return [shape.mode_lo, shape.mode_hi]


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------

def _num_to_json(v: Number) -> Any:
    if isinstance(v, Fraction):
        return str(v)
    return v


def to_json(dist: Distribution) -> dict[str, Any]:
    """Encode a distribution; exact rationals become strings like ``"3/10"``."""
    if isinstance(dist, DiscretePMF):
        return {"type": "discrete",
                "points": [_num_to_json(v) for v in dist.points],
                "probs": [_num_to_json(v) for v in dist.probs]}
    if isinstance(dist, PiecewiseConstantDensity):
        return {"type": "piecewise",
                "breakpoints": [_num_to_json(v) for v in dist.breakpoints],
                "heights": [_num_to_json(v) for v in dist.heights]}
    raise InputError(f"not a distribution: {type(dist).__name__}")


def from_json(obj: Any) -> Distribution:
    if not isinstance(obj, dict):
        raise InputError("distribution JSON must be an object")
    kind = obj.get("type")
    for name in ("points", "probs", "breakpoints", "heights"):
        if name in obj and not isinstance(obj[name], list):
            raise InputError(f"{name}: expected a JSON array")
    try:
        if kind == "discrete":
            return DiscretePMF(obj["points"], obj["probs"])
        if kind == "piecewise":
            return PiecewiseConstantDensity(obj["breakpoints"], obj["heights"])
    except KeyError as exc:
        raise InputError(f"missing field {exc.args[0]!r} for type {kind!r}") from None
    except TypeError as exc:
        raise InputError(f"malformed {kind!r} distribution: {exc}") from None
    raise InputError(f"unknown distribution type {kind!r}; "
                     "expected 'discrete' or 'piecewise'")


def dumps(dist: Distribution) -> str:
    return json.dumps(to_json(dist), sort_keys=True)


def load(path) -> Distribution:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    return from_json(obj)
