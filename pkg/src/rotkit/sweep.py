"""Parameter sweeps over the map families, with deterministic CSV emission.

Grid cells are independent pure computations, so sweeps parallelize over a
process pool; results are collected in grid order and the emitted CSV is
byte-identical for any worker count.  Floats are printed with up to 17
significant digits (lossless round-trip).
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from multiprocessing import Pool
from typing import IO, Iterable, Sequence

from .families import FamilyParams, build_lifting, f_mu
from .rotnum import (
    DEFAULT_ERROR,
    DEFAULT_SIMO_N,
    DEFAULT_TOL,
    PeriodicOrbitDetected,
    RotationEstimate,
    rho_csb,
    rho_direct,
    rho_simo,
    rotation_interval,
)
from .envelope import NumericEnvelopeFailure

STAIRCASE_HEADER = ["mu", "rho", "kind", "m", "n", "error_bound", "iterations"]
INTERVAL_HEADER = ["a", "omega", "lo", "lo_kind", "lo_err", "hi", "hi_kind", "hi_err"]
TONGUE_HEADER = ["a", "omega", "member", "lo", "hi"]
BENCH_HEADER = ["problem", "family", "algorithm", "seconds", "status"]

ALGORITHMS = ("direct", "simo", "csb")


class UsageError(ValueError):
    """Bad sweep configuration (empty grid, unknown algorithm, ...)."""


@dataclass(frozen=True)
class SweepConfig:
    """Grid and estimator settings shared by all sweep operations."""

    family: str = "fmu"
    mu_min: float = 0.0
    mu_max: float = 1.0
    mu_step: float = 1e-5
    omega: float = 0.0
    omega_min: float = 0.0
    omega_max: float = 1.0
    omega_steps: int = 512
    a_min: float = 0.0
    a_max: float = 4.0 * math.pi
    a_steps: int = 512
    error: float = DEFAULT_ERROR
    tol: float = DEFAULT_TOL
    simo_n: int = DEFAULT_SIMO_N
    algorithms: tuple[str, ...] = ("csb",)
    workers: int = 1

    def validate(self) -> None:
        if self.mu_step <= 0.0:
            raise UsageError("mu_step must be positive")
        if self.error <= 0.0 or self.tol < 0.0:
            raise UsageError("error must be positive and tol non-negative")
        if self.a_steps < 1 or self.omega_steps < 1:
            raise UsageError("grids need at least one point")
        if self.mu_max < self.mu_min or self.a_max < self.a_min or self.omega_max < self.omega_min:
            raise UsageError("empty parameter range")
        if not self.algorithms:
            raise UsageError("select at least one algorithm")
        for alg in self.algorithms:
            if alg not in ALGORITHMS:
                raise UsageError(f"unknown algorithm {alg!r}; choose from {ALGORITHMS}")
        if self.workers < 1:
            raise UsageError("worker count must be positive")


@dataclass(frozen=True)
class StaircaseRow:
    mu: float
    rho: float
    kind: str
    m: int | None
    n: int | None
    error_bound: float | None
    iterations: int


@dataclass(frozen=True)
class IntervalRow:
    a: float
    omega: float
    lo: RotationEstimate | None
    hi: RotationEstimate | None
    status: str  # "ok" or "error"


@dataclass(frozen=True)
class TongueCell:
    a: float
    omega: float
    member: bool | None
    lo: float | None
    hi: float | None
    lo_err: float | None
    hi_err: float | None
    status: str


@dataclass(frozen=True)
class InvertResult:
    status: str  # "ok" or "ill_conditioned"
    mu: float
    rho: float
    bisections: int
    bracket_width: float


@dataclass(frozen=True)
class BenchmarkRow:
    problem: str
    family: str
    algorithm: str
    seconds: float | None
    status: str  # "ok" or "n/a"


# ---------------------------------------------------------------------------
# grids and the worker pool


def mu_grid(cfg: SweepConfig) -> list[float]:
    """Accumulated-step grid {mu_min, +step, ...} with mu_max appended exactly.

    Accumulation (rather than i*step) reproduces the classic sweep loop; the
    index-multiplication grid lands inside the tolerance deadband of the
    plateau-edge tangency at mu = 3/4 and would force a spurious fallback.
    """
    count = round((cfg.mu_max - cfg.mu_min) / cfg.mu_step)
    grid = [cfg.mu_min] * max(count, 0)
    mu = cfg.mu_min
    for i in range(1, count):
        mu += cfg.mu_step
        grid[i] = mu
    grid.append(cfg.mu_max)
    return grid


def _linspace(lo: float, hi: float, steps: int) -> list[float]:
    if steps == 1:
        return [lo]
    h = (hi - lo) / (steps - 1)
    pts = [lo + i * h for i in range(steps - 1)]
    pts.append(hi)
    return pts


def _run_ordered(worker, tasks: Sequence, workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 8))
    with Pool(processes=workers) as pool:
        return pool.map(worker, tasks, chunksize=chunk)


# ---------------------------------------------------------------------------
# Devil's staircase


def _estimate_to_row(mu: float, est: RotationEstimate) -> StaircaseRow:
    return StaircaseRow(
        mu=mu,
        rho=est.value,
        kind=est.kind,
        m=est.m,
        n=est.n,
        error_bound=None if est.is_exact else est.error_bound,
        iterations=est.iterations_used,
    )


def _staircase_cell(args: tuple) -> StaircaseRow:
    mu, algorithm, error, tol, simo_n = args
    F = f_mu(mu)
    if algorithm == "csb":
        return _estimate_to_row(mu, rho_csb(F, error, tol))
    if algorithm == "direct":
        return _estimate_to_row(mu, rho_direct(F, error))
    try:
        br = rho_simo(F, simo_n)
        est = RotationEstimate.approx(
            value=0.5 * (br.rho_min + br.rho_max),
            error_bound=0.5 * (br.rho_max - br.rho_min),
            iterations_used=simo_n,
        )
    except PeriodicOrbitDetected as hit:
        est = RotationEstimate.exact(hit.rotation.numerator, hit.rotation.denominator, simo_n)
    return _estimate_to_row(mu, est)


def devils_staircase(cfg: SweepConfig) -> list[StaircaseRow]:
    """Rotation number of the staircase family over the mu grid, in mu order."""
    cfg.validate()
    if cfg.family != "fmu":
        raise UsageError("the staircase sweep is defined for the fmu family")
    if len(cfg.algorithms) != 1:
        raise UsageError("pick exactly one algorithm for a staircase sweep")
    alg = cfg.algorithms[0]
    tasks = [(mu, alg, cfg.error, cfg.tol, cfg.simo_n) for mu in mu_grid(cfg)]
    return _run_ordered(_staircase_cell, tasks, cfg.workers)


# ---------------------------------------------------------------------------
# rotation-interval graphs


def _interval_cell(args: tuple) -> IntervalRow:
    family, omega, a, error, tol, method = args
    try:
        F = build_lifting(FamilyParams(family=family, omega=omega, a=a))
        ri = rotation_interval(F, error, tol, method=method)
        return IntervalRow(a=a, omega=omega, lo=ri.lower, hi=ri.upper, status="ok")
    except NumericEnvelopeFailure:
        return IntervalRow(a=a, omega=omega, lo=None, hi=None, status="error")


def _interval_method(cfg: SweepConfig) -> str:
    if "simo" in cfg.algorithms:
        raise UsageError("the sorting estimator does not apply to rotation intervals (rho outside [0,1])")
    return "direct" if cfg.algorithms == ("direct",) else "csb"


def rotation_interval_graph(cfg: SweepConfig) -> list[IntervalRow]:
    """Rotation-interval endpoints as a function of a, at fixed omega."""
    cfg.validate()
    if cfg.family not in ("standard", "pwl", "disc"):
        raise UsageError("interval graphs are defined for standard, pwl and disc")
    method = _interval_method(cfg)
    tasks = [
        (cfg.family, cfg.omega, a, cfg.error, cfg.tol, method)
        for a in _linspace(cfg.a_min, cfg.a_max, cfg.a_steps)
    ]
    return _run_ordered(_interval_cell, tasks, cfg.workers)


# ---------------------------------------------------------------------------
# Arnold tongues


def _tongue_cell(args: tuple) -> TongueCell:
    family, omega, a, error, tol, method, t_num, t_den, t_float = args
    try:
        F = build_lifting(FamilyParams(family=family, omega=omega, a=a))
        ri = rotation_interval(F, error, tol, method=method)
    except NumericEnvelopeFailure:
        return TongueCell(a, omega, None, None, None, None, None, "error")
    lo, hi = ri.lower, ri.upper
    if t_num is not None and lo.is_exact and hi.is_exact:
        target = Fraction(t_num, t_den)
        member = lo.as_fraction <= target <= hi.as_fraction
    else:
        member = (lo.value - lo.error_bound) <= t_float <= (hi.value + hi.error_bound)
    return TongueCell(
        a=a,
        omega=omega,
        member=member,
        lo=lo.value,
        hi=hi.value,
        lo_err=lo.error_bound,
        hi_err=hi.error_bound,
        status="ok",
    )


def arnold_tongue(cfg: SweepConfig, target: "float | Fraction") -> list[TongueCell]:
    """Membership grid of the target rotation number over (a, omega).

    When both interval endpoints are exact and the target is rational the
    membership test is an exact rational comparison; otherwise the interval
    is inflated by the endpoint error bounds.  Cells are emitted in row-major
    (a outer, omega inner) order.
    """
    cfg.validate()
    if cfg.family not in ("standard", "pwl", "disc"):
        raise UsageError("tongues are defined for standard, pwl and disc")
    method = _interval_method(cfg)
    if isinstance(target, Fraction):
        t_num, t_den, t_float = target.numerator, target.denominator, float(target)
    else:
        t_num, t_den, t_float = None, None, float(target)
    tasks = [
        (cfg.family, omega, a, cfg.error, cfg.tol, method, t_num, t_den, t_float)
        for a in _linspace(cfg.a_min, cfg.a_max, cfg.a_steps)
        for omega in _linspace(cfg.omega_min, cfg.omega_max, cfg.omega_steps)
    ]
    return _run_ordered(_tongue_cell, tasks, cfg.workers)


# ---------------------------------------------------------------------------
# staircase inversion


def invert_staircase(
    target: float,
    eps: float,
    max_bisections: int = 200,
    error: float = DEFAULT_ERROR,
    tol: float = DEFAULT_TOL,
) -> InvertResult:
    """Bisect on mu for rho(F_mu) within eps of the target.

    The staircase is non-decreasing in mu with rho(F_0) = 0 and rho(F_1) = 1,
    so plain bisection converges onto a mode-locked plateau for rational
    targets.  Irrational targets are expected to exhaust the budget (or stall
    at float resolution) and come back ill_conditioned with the final bracket
    width; that is a documented outcome, not a failure.
    """
    if not 0.0 < target < 1.0:
        raise UsageError("target must lie strictly inside (0, 1)")
    if eps <= 0.0:
        raise UsageError("eps must be positive")
    lo, hi = 0.0, 1.0
    rho_mid = math.nan
    for k in range(1, max_bisections + 1):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return InvertResult("ill_conditioned", mid, rho_mid, k - 1, hi - lo)
        est = rho_csb(f_mu(mid), error, tol)
        rho_mid = est.value
        if abs(est.value - target) <= eps:
            return InvertResult("ok", mid, est.value, k, hi - lo)
        if est.value < target:
            lo = mid
        else:
            hi = mid
    return InvertResult("ill_conditioned", 0.5 * (lo + hi), rho_mid, max_bisections, hi - lo)


# ---------------------------------------------------------------------------
# three-algorithm benchmark


def benchmark(
    cfg: SweepConfig,
    problems: Iterable[str] = ("staircase",),
    target: "float | Fraction" = Fraction(1, 2),
) -> list[BenchmarkRow]:
    """Wall-clock seconds per algorithm per problem at the configured grids.

    The orbit-sorting estimator is only defined for rotation numbers in
    [0, 1], so interval and tongue problems mark it n/a.
    """
    cfg.validate()
    rows: list[BenchmarkRow] = []
    for problem in problems:
        if problem not in ("staircase", "interval", "tongue"):
            raise UsageError(f"unknown benchmark problem {problem!r}")
        family = "fmu" if problem == "staircase" else cfg.family
        for alg in cfg.algorithms:
            if problem != "staircase" and alg == "simo":
                rows.append(BenchmarkRow(problem, family, alg, None, "n/a"))
                continue
            sub = replace(cfg, family=family, algorithms=(alg,))
            start = time.perf_counter()
            if problem == "staircase":
                devils_staircase(sub)
            elif problem == "interval":
                rotation_interval_graph(sub)
            else:
                arnold_tongue(sub, target)
            rows.append(BenchmarkRow(problem, family, alg, time.perf_counter() - start, "ok"))
    return rows


# ---------------------------------------------------------------------------
# CSV emission


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _opt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return _fmt(x)
    return str(x)


def _writer(stream: IO[str]) -> "csv.writer":
    return csv.writer(stream, lineterminator="\n")


def write_staircase_csv(rows: Iterable[StaircaseRow], stream: IO[str]) -> None:
    w = _writer(stream)
    w.writerow(STAIRCASE_HEADER)
    for r in rows:
        w.writerow([_fmt(r.mu), _fmt(r.rho), r.kind, _opt(r.m), _opt(r.n), _opt(r.error_bound), r.iterations])


def write_interval_csv(rows: Iterable[IntervalRow], stream: IO[str]) -> int:
    """Emit interval rows; returns the number of failed cells."""
    w = _writer(stream)
    w.writerow(INTERVAL_HEADER)
    failures = 0
    for r in rows:
        if r.status != "ok":
            failures += 1
            w.writerow([_fmt(r.a), _fmt(r.omega), "", "error", "", "", "error", ""])
            continue
        w.writerow(
            [
                _fmt(r.a),
                _fmt(r.omega),
                _fmt(r.lo.value),
                r.lo.kind,
                _fmt(r.lo.error_bound),
                _fmt(r.hi.value),
                r.hi.kind,
                _fmt(r.hi.error_bound),
            ]
        )
    return failures


def write_tongue_csv(rows: Iterable[TongueCell], stream: IO[str]) -> int:
    w = _writer(stream)
    w.writerow(TONGUE_HEADER)
    failures = 0
    for r in rows:
        if r.status != "ok":
            failures += 1
            w.writerow([_fmt(r.a), _fmt(r.omega), "error", "", ""])
            continue
        w.writerow([_fmt(r.a), _fmt(r.omega), int(r.member), _fmt(r.lo), _fmt(r.hi)])
    return failures


def write_benchmark_csv(rows: Iterable[BenchmarkRow], stream: IO[str]) -> None:
    w = _writer(stream)
    w.writerow(BENCH_HEADER)
    for r in rows:
        w.writerow([r.problem, r.family, r.algorithm, _opt(r.seconds), r.status])


def write_invert_csv(result: InvertResult, target: float, eps: float, stream: IO[str]) -> None:
    w = _writer(stream)
    w.writerow(["target", "eps", "status", "mu", "rho", "bisections", "bracket_width"])
    w.writerow(
        [
            _fmt(target),
            _fmt(eps),
            result.status,
            _fmt(result.mu),
            _fmt(result.rho),
            result.bisections,
            _fmt(result.bracket_width),
        ]
    )
