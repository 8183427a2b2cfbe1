"""Random generators, oracle audits and the verification suite.

Everything here is deterministic given a master seed: each trial derives its
own generator from ``(master_seed, stream, trial_index)`` through
:class:`numpy.random.SeedSequence`, so the order in which trials run (and the
number of worker processes) cannot change any result.
"""

from __future__ import annotations

import bisect
import hashlib
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable

import numpy as np

from . import bounds as B
from .bounds import BoundKind, Source
from .distributions import (
    DiscretePMF,
    Distribution,
    PiecewiseConstantDensity,
    ShapeClass,
    central_moment,
    classify_shape,
    dumps,
    plateau_modes,
    raw_moment,
    to_json,
)
from .errors import DegenerateWitnessError, InputError, UniboundError
from .witness import build_moment_polynomial, solve_witness_constraint

__all__ = [
    "TrialConfig",
    "Check",
    "AuditReport",
    "trial_rng",
    "gen_discrete_unimodal",
    "gen_density_unimodal",
    "audit",
    "tightness_witness",
    "tightness_margins",
    "factorization_case",
    "consistency_cases",
    "compare",
    "run_suite",
    "worker_count",
]

GENERATOR_FAMILY = (
    "unimodal weights: peak index uniform; ascending run = random base plus "
    "cumulative exp(U(-6,1)) increments (15% zero); descending run = peak times "
    "cumulative exp(-exp(U(-6,1))) factors (15% unit); 10% chance each of a zero "
    "prefix/suffix. Discrete support: consecutive integers (lattice) or sorted "
    "U(-10,10) draws with gaps >= 1e-6. Densities: equal-width steps on [a, b], "
    "a ~ U(-5,5) or U(0,5), b - a ~ U(0.1,10)."
)

STREAM_DISCRETE, STREAM_DENSITY, STREAM_COMPARE = 0, 1, 2
STREAM_TIGHTNESS, STREAM_FACTOR = 3, 4

PASS, FAIL, NA = "pass", "fail", "n/a"


@dataclass(frozen=True)
class TrialConfig:
    master_seed: int = 0
    n_trials: int = 1000
    max_points: int = 12
    max_pieces: int = 64
    r_max: int = 3
    abs_tol: float = B.ABS_TOL
    rel_tol: float = B.REL_TOL

    def __post_init__(self):
        if not 0 <= self.master_seed < 2 ** 64:
            raise InputError(f"master_seed must be a 64-bit unsigned integer, "
                             f"got {self.master_seed}")
        for name in ("n_trials", "max_points", "max_pieces", "r_max"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.max_points < 2:
            raise InputError("max_points must be >= 2")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise InputError("tolerances must be positive")

    def to_json(self) -> dict[str, Any]:
        return dict(self.__dict__)


def trial_rng(master_seed: int, stream: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, stream, index]))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# --------------------------------------------------------------------------
# Generators
# --------------------------------------------------------------------------

def _unimodal_weights(rng: np.random.Generator, n: int,
                      peak: int | None = None) -> list[float]:
    if peak is None:
        peak = int(rng.integers(0, n))
    elif not 0 <= peak < n:
        raise InputError(f"peak index {peak} outside [0, {n})")
    w = [0.0] * n

    v = 0.0 if rng.random() < 0.2 else math.exp(rng.uniform(-8.0, 0.0))
    w[0] = v
    for i in range(1, peak + 1):
        if rng.random() >= 0.15:
            v += math.exp(rng.uniform(-6.0, 1.0))
        w[i] = v
    if w[peak] == 0.0:
        w[peak] = 1.0

    v = w[peak]
    for i in range(peak + 1, n):
        if rng.random() >= 0.15:
            v *= math.exp(-math.exp(rng.uniform(-6.0, 1.0)))
        w[i] = v

    if peak > 0 and rng.random() < 0.1:
        k = int(rng.integers(1, peak + 1))
        w[:k] = [0.0] * k
    if peak < n - 1 and rng.random() < 0.1:
        k = int(rng.integers(1, n - peak))
        w[n - k:] = [0.0] * k
    return w


def gen_discrete_unimodal(seed, n: int, lattice: bool,
                          peak: int | None = None) -> DiscretePMF:
    if n < 2:
        raise InputError(f"need at least 2 support points, got {n}")
    rng = _as_rng(seed)
    if lattice:
        start = int(rng.integers(-10, 11 - n)) if n < 21 else -10
        points = [float(start + i) for i in range(n)]
    else:
        while True:
            xs = np.sort(rng.uniform(-10.0, 10.0, size=n))
            if np.min(np.diff(xs)) >= 1e-6:
                break
        points = xs.tolist()
    w = _unimodal_weights(rng, n, peak)
    total = math.fsum(w)
    return DiscretePMF(points, [x / total for x in w])


def gen_density_unimodal(seed, pieces: int, a: float, b: float,
                         peak: int | None = None) -> PiecewiseConstantDensity:
    """Equal-width step density on [a, b], unimodal with its peak at piece ``peak``."""
    if pieces < 1:
        raise InputError(f"need at least one piece, got {pieces}")
    if not a < b:
        raise InputError(f"need a < b, got [{a}, {b}]")
    rng = _as_rng(seed)
    ts = np.linspace(a, b, pieces + 1).tolist()
    w = _unimodal_weights(rng, pieces, peak)
    total = math.fsum(h * (t1 - t0) for h, t0, t1 in zip(w, ts, ts[1:]))
    return PiecewiseConstantDensity(ts, [h / total for h in w])


def _discrete_trial(cfg: TrialConfig, i: int) -> DiscretePMF:
    rng = trial_rng(cfg.master_seed, STREAM_DISCRETE, i)
    n = int(rng.integers(2, cfg.max_points + 1))
    return gen_discrete_unimodal(rng, n, lattice=(i % 2 == 0))


def _density_trial(cfg: TrialConfig, i: int) -> PiecewiseConstantDensity:
    rng = trial_rng(cfg.master_seed, STREAM_DENSITY, i)
    pieces = int(rng.integers(1, cfg.max_pieces + 1))
    a = rng.uniform(-5.0, 5.0) if rng.random() < 0.5 else rng.uniform(0.0, 5.0)
    b = a + rng.uniform(0.1, 10.0)
    return gen_density_unimodal(rng, pieces, float(a), float(b))


# --------------------------------------------------------------------------
# Audit
# --------------------------------------------------------------------------

@dataclass
class Check:
    source: Source
    order: int
    status: str
    kind: BoundKind = BoundKind.LOWER
    bound: Any = None
    actual: Any = None
    margin: Any = None
    mode: Any = None
    note: str | None = None
    per_mode: list[tuple[Any, Any]] | None = None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"source": self.source.tag, "order": self.order,
                               "status": self.status, "kind": self.kind.value}
        for name in ("bound", "actual", "margin", "mode"):
            v = getattr(self, name)
            if v is not None:
                out[name] = float(v)
        if self.note:
            out["note"] = self.note
        if self.per_mode:
            out["per_mode"] = [[float(m), float(v)] for m, v in self.per_mode]
        return out


@dataclass
class AuditReport:
    dist_id: str
    distribution: Distribution
    shape: ShapeClass
    mean: Any
    variance: Any
    checks: list[Check] = field(default_factory=list)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, tag: str, order: int | None = None) -> Check:
        for c in self.checks:
            if c.source.tag == tag and (order is None or c.order == order):
                return c
        raise KeyError((tag, order))

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.dist_id,
            "distribution": to_json(self.distribution),
            "shape": self.shape.to_json(),
            "mean": float(self.mean),
            "variance": float(self.variance),
            "passed": self.passed,
            "n_failed": len(self.failures),
            "checks": [c.to_json() for c in self.checks],
        }


def dist_id(dist: Distribution) -> str:
    return hashlib.sha256(dumps(dist).encode()).hexdigest()[:16]


class _Auditor:
    def __init__(self, dist: Distribution, r_max: int, abs_tol: float, rel_tol: float):
        self.dist = dist
        self.r_max = r_max
        self.abs_tol, self.rel_tol = abs_tol, rel_tol
        self.shape = classify_shape(dist)
        self.a, self.b = dist.support
        self.raw = [raw_moment(dist, r) for r in range(2 * r_max + 1)]
        self.mean = self.raw[1]
        self.central = [central_moment(dist, r) for r in range(2 * r_max + 1)]
        self.checks: list[Check] = []

    def add(self, source: Source, order: int, actual, bound, kind=BoundKind.LOWER,
            mode=None, per_mode=None) -> None:
        if kind is BoundKind.LOWER:
            ok = B.holds(actual, bound, self.abs_tol, self.rel_tol)
            margin = actual - bound
        else:
            ok = B.holds(bound, actual, self.abs_tol, self.rel_tol)
            margin = bound - actual
        self.checks.append(Check(source, order, PASS if ok else FAIL, kind, bound,
                                 actual, margin, mode,
                                 per_mode=per_mode if per_mode and len(per_mode) > 1
                                 else None))

    def na(self, source: Source, order: int, note: str) -> None:
        self.checks.append(Check(source, order, NA, note=note))

    def add_plateau_max(self, source: Source, order: int, actual,
                        fn: Callable[[Any], Any], modes: Iterable[Any]) -> None:
        """Evaluate a mode-dependent bound at each admissible mode, keep the largest."""
        per_mode = []
        for m in modes:
            try:
                per_mode.append((m, fn(m)))
            except UniboundError:
                continue
        if not per_mode:
            self.na(source, order, "no admissible mode in the supported regime")
            return
        mode, value = max(per_mode, key=lambda mv: mv[1])
        self.add(source, order, actual, value, mode=mode, per_mode=per_mode)

    def run(self) -> None:
        mu, rmax2 = self.mean, 2 * self.r_max
        for r in range(2, rmax2 + 1):
            if r % 2 and self.a < 0:
                self.na(Source.TANGENT_RAW, r, "odd order needs support >= 0")
            else:
                self.add(Source.TANGENT_RAW, r, self.raw[r], B.tangent_raw_lb(mu, mu, r))
        if isinstance(self.dist, DiscretePMF):
            self._discrete()
        else:
            self._density()

    def _discrete(self) -> None:
        d: DiscretePMF = self.dist
        mu = self.mean
        if len(d.points) < 2:
            for r in range(1, self.r_max + 1):
                self.na(Source.DISCRETE_WINDOW, 2 * r, "single support point")
        else:
            x_lo, x_hi = straddling_window(d.points, mu)
            clamped = min(max(mu, x_lo), x_hi)
            for r in range(1, self.r_max + 1):
                bound = B.discrete_central_lb(x_lo, x_hi, clamped, r).value
                self.add(Source.DISCRETE_WINDOW, 2 * r, self.central[2 * r], bound)

        if not d.is_lattice():
            self.na(Source.LATTICE_VARIANCE, 2, "support is not a run of consecutive integers")
        elif not self.shape.is_unimodal:
            self.na(Source.LATTICE_VARIANCE, 2, "pmf is not unimodal")
        else:
            self.add_plateau_max(Source.LATTICE_VARIANCE, 2, self.central[2],
                                 lambda m: B.lattice_variance_lb(mu, m).value,
                                 plateau_modes(d, self.shape))

    def _density(self) -> None:
        mu, a, b = self.mean, self.a, self.b
        var = self.central[2]
        rmax2 = 2 * self.r_max
        s = self.shape
        unimodal_only = [Source.UNIMODAL_VARIANCE, Source.UNIMODAL_RAW,
                         Source.UNIMODAL_CENTRAL_EVEN, Source.JACOBSON_UPPER,
                         Source.MEAN_RANGE]
        if not s.is_unimodal:
            for src in unimodal_only:
                self.na(src, 2, "density is not unimodal")
            return

        # mean clamped to its admissible range; it can leave it only by rounding
        if s.non_increasing:
            m = min(max(mu, a), (a + b) / 2)
            self.add(Source.NONINCREASING_VARIANCE, 2, var,
                     B.variance_lb_monotone(a, b, m, "non-increasing").value)
            for r in range(2, rmax2 + 1):
                if r % 2 and a < 0:
                    self.na(Source.NONINCREASING_RAW, r, "odd order needs support >= 0")
                    continue
                self.add(Source.NONINCREASING_RAW, r, self.raw[r],
                         B.raw_moment_lb_monotone(a, mu, r).value)
        if s.non_decreasing:
            m = max(min(mu, b), (a + b) / 2)
            self.add(Source.NONDECREASING_VARIANCE, 2, var,
                     B.variance_lb_monotone(a, b, m, "non-decreasing").value)

        modes = plateau_modes(self.dist, s)
        self.add_plateau_max(Source.UNIMODAL_VARIANCE, 2, var,
                             lambda m: B.variance_lb_unimodal(mu, m).value, modes)
        for r in range(2, rmax2 + 1):
            if r % 2 and a < 0:
                self.na(Source.UNIMODAL_RAW, r, "odd order needs support >= 0")
                continue
            self.add_plateau_max(Source.UNIMODAL_RAW, r, self.raw[r],
                                 lambda m, r=r: B.raw_moment_lb_unimodal(m, mu, r).value,
                                 modes)
        for r in range(1, self.r_max + 1):
            self.add_plateau_max(Source.UNIMODAL_CENTRAL_EVEN, 2 * r, self.central[2 * r],
                                 lambda m, r=r: B.central_even_lb_unimodal(mu, m, r).value,
                                 modes)
        self.add(Source.JACOBSON_UPPER, 2, var, B.variance_ub_jacobson(a, b).value,
                 kind=BoundKind.UPPER)
        self.add(Source.MEAN_RANGE, 1, mu, (a + s.mode_lo) / 2, mode=s.mode_lo)
        self.add(Source.MEAN_RANGE, 1, mu, (b + s.mode_hi) / 2, kind=BoundKind.UPPER,
                 mode=s.mode_hi)


def straddling_window(points, mean):
    """Consecutive support points ``(x_lo, x_hi)`` with ``x_lo <= mean <= x_hi``."""
    n = len(points)
    j = bisect.bisect_left(points, mean)
    j = min(max(j, 1), n - 1)
    return points[j - 1], points[j]


def audit(dist: Distribution, config: TrialConfig | None = None) -> AuditReport:
    """Evaluate every applicable bound on ``dist`` against its exact moments."""
    cfg = config or TrialConfig()
    aud = _Auditor(dist, cfg.r_max, cfg.abs_tol, cfg.rel_tol)
    aud.run()
    return AuditReport(dist_id(dist), dist, aud.shape, aud.mean, aud.central[2],
                       aud.checks)


# --------------------------------------------------------------------------
# Tightness, factorization and consistency
# --------------------------------------------------------------------------

def tightness_witness(mode, mean) -> PiecewiseConstantDensity:
    """Uniform density on [mode, 2*mean - mode] (or reversed): equality case."""
    if mean == mode:
        raise DegenerateWitnessError("mean == mode: the equality case is a point mass")
    other = 2 * mean - mode
    return PiecewiseConstantDensity.uniform(min(mode, other), max(mode, other))


def _rel_gap(x, y) -> float:
    x, y = float(x), float(y)
    scale = max(abs(x), abs(y))
    return abs(x - y) / scale if scale else 0.0


def tightness_margins(mode, mean, raw_orders=range(2, 6),
                      central_halves=range(1, 4)) -> dict[str, float]:
    """Relative gaps between each equality-case bound and the witness's moments."""
    dist = tightness_witness(mode, mean)
    mu = raw_moment(dist, 1)
    out = {Source.UNIMODAL_VARIANCE.tag:
           _rel_gap(central_moment(dist, 2), B.variance_lb_unimodal(mu, mode).value)}
    lo = dist.support[0]
    for r in raw_orders:
        if r % 2 and lo < 0:
            continue
        actual = raw_moment(dist, r)
        out[f"{Source.UNIMODAL_RAW.tag}:{r}"] = _rel_gap(
            actual, B.raw_moment_lb_unimodal(mode, mu, r).value)
        if mode == lo:
            out[f"{Source.NONINCREASING_RAW.tag}:{r}"] = _rel_gap(
                actual, B.raw_moment_lb_monotone(mode, mu, r).value)
    for r in central_halves:
        out[f"{Source.UNIMODAL_CENTRAL_EVEN.tag}:{2 * r}"] = _rel_gap(
            central_moment(dist, 2 * r), B.central_even_lb_unimodal(mu, mode, r).value)
    return out


def tightness_pairs(master_seed: int, count: int = 100) -> list[tuple[float, float]]:
    rng = trial_rng(master_seed, STREAM_TIGHTNESS, 0)
    pairs = []
    for _ in range(count):
        mode = float(rng.uniform(-10.0, 10.0))
        gap = float(rng.uniform(0.1, 10.0)) * (1 if rng.random() < 0.5 else -1)
        pairs.append((mode, mode + gap))
    return pairs


def factorization_case(rng: np.random.Generator, r_max: int = 8) -> tuple[float, float, int]:
    while True:
        alpha, beta = sorted(rng.uniform(0.0, 10.0, size=2).tolist())
        if alpha < beta:
            return alpha, beta, int(rng.integers(2, r_max + 1))


def consistency_cases() -> list[tuple[float, float, int]]:
    """(a, mean, r) grid for the witness-constraint identity."""
    return [(a, a + d, r) for r in range(2, 7) for a in (0.0, 0.5, 1.0)
            for d in (0.25, 1.0)]


def consistency_error(a: float, mean: float, r: int) -> float:
    """Relative gap between the solved-witness bound and the closed form."""
    beta = 2 * mean - a
    alpha = solve_witness_constraint(a, beta, r)
    via_witness = B.two_point_raw_lb(alpha, beta, mean, r)
    fa, fm = Fraction(a), Fraction(mean)
    fu = 2 * fm - fa
    closed = (fu ** (r + 1) - fa ** (r + 1)) / (2 * (r + 1) * (fm - fa))
    return _rel_gap(via_witness, closed)


# --------------------------------------------------------------------------
# Comparison of the discrete-window and lattice variance bounds
# --------------------------------------------------------------------------

def _window_vs_lattice(pmf: DiscretePMF, cfg: TrialConfig) -> tuple[float, float]:
    mu = raw_moment(pmf, 1)
    x_lo, x_hi = straddling_window(pmf.points, mu)
    window = B.discrete_central_lb(x_lo, x_hi, min(max(mu, x_lo), x_hi), 1).value
    shape = classify_shape(pmf)
    lattice = max(B.lattice_variance_lb(mu, m).value for m in plateau_modes(pmf, shape))
    return window, lattice


def _verdict(window, lattice, cfg: TrialConfig) -> str:
    if abs(window - lattice) <= B.tolerance(window, lattice, cfg.abs_tol, cfg.rel_tol):
        return "tie"
    return "win" if window > lattice else "loss"


def builtin_comparison_cases() -> dict[str, DiscretePMF]:
    return {
        "three-point": DiscretePMF([-1, 0, 1], [Fraction(1, 5), Fraction(1, 2),
                                                Fraction(3, 10)]),
        "point-mass": DiscretePMF([0, 1], [1, 0]),
    }


def compare(config: TrialConfig) -> dict[str, Any]:
    """How often the window bound beats the lattice bound on random lattice pmfs."""
    counts = {"win": 0, "tie": 0, "loss": 0}
    ratios: list[float] = []
    extremes: dict[str, Any] = {}
    for i in range(config.n_trials):
        rng = trial_rng(config.master_seed, STREAM_COMPARE, i)
        n = int(rng.integers(2, config.max_points + 1))
        pmf = gen_discrete_unimodal(rng, n, lattice=True)
        window, lattice = _window_vs_lattice(pmf, config)
        counts[_verdict(window, lattice, config)] += 1
        if lattice > 0:
            ratio = float(window / lattice)
            ratios.append(ratio)
            for key, better in (("min_ratio", ratio.__lt__), ("max_ratio", ratio.__gt__)):
                if key not in extremes or better(extremes[key]["ratio"]):
                    extremes[key] = {"trial": i, "ratio": ratio,
                                     "window_bound": float(window),
                                     "lattice_bound": float(lattice),
                                     "distribution": to_json(pmf)}

    builtin = {}
    for name, pmf in builtin_comparison_cases().items():
        window, lattice = _window_vs_lattice(pmf, config)
        entry = {"window_bound": float(window), "lattice_bound": float(lattice),
                 "verdict": _verdict(window, lattice, config),
                 "distribution": to_json(pmf)}
        if lattice:
            ratio = window / lattice
            entry["ratio"] = float(ratio)
            if isinstance(ratio, Fraction):
                entry["ratio_exact"] = str(ratio)
        builtin[name] = entry

    n = config.n_trials
    return {
        "config": config.to_json(),
        "generator": GENERATOR_FAMILY,
        "trials": n,
        "wins": counts["win"],
        "ties": counts["tie"],
        "losses": counts["loss"],
        "win_fraction": counts["win"] / n,
        "mean_ratio": math.fsum(ratios) / len(ratios) if ratios else None,
        "ratio_count": len(ratios),
        **extremes,
        "builtin": builtin,
    }


# --------------------------------------------------------------------------
# Full suite
# --------------------------------------------------------------------------

def worker_count() -> int:
    n = os.cpu_count() or 1
    cap = os.environ.get("UNIBOUND_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise InputError(f"UNIBOUND_THREADS must be an integer, got {cap!r}") from None
    return n


def _run_chunk(args: tuple[TrialConfig, str, int, int]) -> list[dict[str, Any]]:
    cfg, family, start, stop = args
    make = _discrete_trial if family == "discrete" else _density_trial
    out = []
    for i in range(start, stop):
        report = audit(make(cfg, i), cfg)
        out.append({
            "trial": i,
            "shape": report.shape.shape.value,
            "checks": [(c.source.tag, c.status, None if c.margin is None else float(c.margin))
                       for c in report.checks],
            "failure": None if report.passed else report.to_json(),
        })
    return out


def _chunks(n: int, size: int) -> list[tuple[int, int]]:
    return [(s, min(s + size, n)) for s in range(0, n, size)]


def _family_summary(rows: list[dict[str, Any]]) -> dict[str, Any]:
    checks: dict[str, dict[str, Any]] = {}
    shapes: dict[str, int] = {}
    failures = []
    for row in rows:
        shapes[row["shape"]] = shapes.get(row["shape"], 0) + 1
        for tag, status, margin in row["checks"]:
            c = checks.setdefault(tag, {"checked": 0, "passed": 0, "failed": 0,
                                        "not_applicable": 0, "min_margin": None})
            if status == NA:
                c["not_applicable"] += 1
                continue
            c["checked"] += 1
            c["passed" if status == PASS else "failed"] += 1
            if c["min_margin"] is None or margin < c["min_margin"]:
                c["min_margin"] = margin
        if row["failure"] is not None:
            failures.append({"trial": row["trial"], **row["failure"]})
    return {
        "trials": len(rows),
        "shapes": dict(sorted(shapes.items())),
        "checks": dict(sorted(checks.items())),
        "violations": sum(c["failed"] for c in checks.values()),
        "failures": failures,
    }


def _failure_size(failure: dict[str, Any]) -> tuple[int, int]:
    d = failure["distribution"]
    return len(d.get("points") or d.get("heights")), failure["trial"]


def run_suite(config: TrialConfig, workers: int | None = None) -> dict[str, Any]:
    """Run every property check; the result depends on ``config`` only."""
    workers = worker_count() if workers is None else max(1, workers)
    n = config.n_trials
    chunk = max(64, n // (8 * workers) + 1)
    jobs = [(config, fam, s, e) for fam in ("discrete", "density")
            for s, e in _chunks(n, chunk)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_chunk, jobs))
    else:
        results = [_run_chunk(j) for j in jobs]

    rows: dict[str, list] = {"discrete": [], "density": []}
    for (_, fam, _, _), res in zip(jobs, results):
        rows[fam].extend(res)
    discrete = _family_summary(rows["discrete"])
    density = _family_summary(rows["density"])
    discrete["lattice_trials"] = (n + 1) // 2

    tight = [max(tightness_margins(m, mu).values())
             for m, mu in tightness_pairs(config.master_seed)]
    tight_bad = sum(t > 1e-12 for t in tight)

    rng = trial_rng(config.master_seed, STREAM_FACTOR, 0)
    residuals, fact_bad = [], 0
    for _ in range(500):
        alpha, beta, r = factorization_case(rng)
        try:
            residuals.append(build_moment_polynomial(alpha, beta, r).residual)
        except UniboundError:
            fact_bad += 1

    cons = [consistency_error(a, m, r) for a, m, r in consistency_cases()]
    cons_bad = sum(e > 1e-10 for e in cons)

    failures = discrete["failures"] + density["failures"]
    minimal = min(failures, key=_failure_size, default=None)

    total = (discrete["violations"] + density["violations"] + tight_bad
             + fact_bad + cons_bad)
    return {
        "config": config.to_json(),
        "generator": GENERATOR_FAMILY,
        "discrete": discrete,
        "density": density,
        "tightness": {"pairs": len(tight), "max_rel_gap": max(tight),
                      "violations": tight_bad},
        "factorization": {"cases": 500, "max_residual": max(residuals, default=0.0),
                          "violations": fact_bad},
        "consistency": {"cases": len(cons), "max_rel_error": max(cons),
                        "violations": cons_bad},
        "violations": total,
        "minimal_counterexample": None if minimal is None else minimal["distribution"],
    }
