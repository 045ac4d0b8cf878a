"""Rotation number estimators and rotation-interval assembly.

Three estimators for non-decreasing degree-one liftings:

* rho_direct       -- F^n(0)/n with n = ceil(1/error); the error bound 1/n
                      needs nothing beyond monotonicity.
* rho_simo         -- sorts the fractional parts of an orbit and brackets the
                      rotation number from adjacent index pairs (Simo's
                      continuation-method estimator); no a-priori error bound
                      unless the rotation number is Diophantine.
* rho_constant_section -- orbit of 0 for a map whose constant section starts
                      at the origin; the first iterate whose fractional part
                      falls inside the section certifies an exact rational
                      rotation number, otherwise the direct estimate is
                      returned after max_iter steps.

The rotation interval of an arbitrary lifting is [rho(lower map),
rho(upper map)]; rotation_interval wires the envelope module to the
estimators, preferring the constant-section algorithm whenever a usable
section exists.

Everything here is pure and safe to call concurrently; identical inputs give
bit-identical outputs regardless of process or thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .envelope import ConstantSection, lower_map, reparametrize_to_zero, upper_map, widest_section
from .lifting import Lifting, evaluate_exact

DEFAULT_ERROR = 1e-6
DEFAULT_TOL = 1e-10
DEFAULT_SIMO_N = 1000

SIMO_TIE_EPS = 1e-14


class InvalidSection(ValueError):
    """Constant-section estimator called with a non-positive test bound."""


class PeriodicOrbitDetected(Exception):
    """Two orbit points share a fractional part: a lifted cycle was hit.

    The exact rotation number of the cycle is carried on the exception.
    """

    def __init__(self, rotation: Fraction, i: int, j: int):
        self.rotation = rotation
        self.i = i
        self.j = j
        super().__init__(f"periodic orbit: rho = {rotation} from iterates {i} and {j}")


@dataclass(frozen=True)
class RotationEstimate:
    """Either an exact rational m/n or a float estimate with an error bound.

    Exact estimates keep the raw pair (m, n) as produced by the hit; the
    reduced form is available as as_fraction.  Their error bound is 0.0,
    conditional on the rounding-error-below-tol assumption of the
    constant-section algorithm.
    """

    kind: str  # "exact" or "approx"
    value: float
    error_bound: float
    iterations_used: int
    m: int | None = None
    n: int | None = None

    @classmethod
    def exact(cls, m: int, n: int, iterations_used: int | None = None) -> "RotationEstimate":
        return cls(
            kind="exact",
            value=m / n,
            error_bound=0.0,
            iterations_used=n if iterations_used is None else iterations_used,
            m=m,
            n=n,
        )

    @classmethod
    def approx(cls, value: float, error_bound: float, iterations_used: int) -> "RotationEstimate":
        return cls(kind="approx", value=value, error_bound=error_bound, iterations_used=iterations_used)

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    @property
    def as_fraction(self) -> Fraction:
        if not self.is_exact:
            raise ValueError("approximate estimate has no exact fraction")
        return Fraction(self.m, self.n)


@dataclass(frozen=True)
class RotationInterval:
    """Estimates for the endpoints [rho(lower map), rho(upper map)]."""

    lower: RotationEstimate
    upper: RotationEstimate


@dataclass(frozen=True)
class SimoBracket:
    """Lower/upper bounds for the rotation number from n sorted iterates."""

    rho_min: float
    rho_max: float
    n: int

    @property
    def is_consistent(self) -> bool:
        return self.rho_min <= self.rho_max


def _require_non_decreasing(F: Lifting, who: str) -> None:
    if not F.is_non_decreasing:
        raise ValueError(f"{who} requires a non-decreasing lifting, got {F.label!r}")


def _normalized_fundamental(F: Lifting) -> tuple:
    """Shift F by -floor(F(0)) so the iteration starts in [0, 1)."""
    k0 = math.floor(F.fundamental(0.0))
    if k0 == 0:
        return F.fundamental, 0
    fund = F.fundamental

    def shifted(x: float, _f=fund, _k=k0) -> float:
        return _f(x) - _k

    return shifted, k0


def rho_direct(F: Lifting, error: float = DEFAULT_ERROR) -> RotationEstimate:
    """Estimate rho as F^n(0)/n with n = ceil(1/error) iterates.

    For non-decreasing liftings |rho - F^n(0)/n| < 1/n, so the returned
    error bound is 1/n.  There is deliberately no early-convergence test.
    """
    _require_non_decreasing(F, "rho_direct")
    if error <= 0.0:
        raise ValueError("error must be positive")
    n = math.ceil(1.0 / error)
    fund, k0 = _normalized_fundamental(F)
    floor = math.floor
    x = 0.0
    m = 0
    for _ in range(n):
        x = fund(x)
        if not 0.0 <= x < 1.0:
            s = floor(x)
            m += s
            x -= s
    return RotationEstimate.approx(value=(m + x) / n + k0, error_bound=1.0 / n, iterations_used=n)


def rho_simo(F: Lifting, n: int = DEFAULT_SIMO_N) -> SimoBracket:
    """Bracket rho by sorting the fractional parts of F^0(0) .. F^n(0).

    Adjacent pairs in fractional-part order with ascending iterate indices
    raise the lower bound, descending ones cut the upper bound.  Restricted
    to rho in [0, 1] after the usual shift by floor(F(0)); the shift is added
    back to both bounds.  Two fractional parts closer than 1e-14 mean the
    orbit is numerically periodic: PeriodicOrbitDetected then carries the
    exact cycle rotation number instead of a bracket.
    """
    _require_non_decreasing(F, "rho_simo")
    if n < 2:
        raise ValueError("rho_simo needs at least 2 iterates")
    fund, k0 = _normalized_fundamental(F)
    floor = math.floor

    alphas = [0.0] * (n + 1)
    ks = [0] * (n + 1)
    x = 0.0
    m = 0
    for i in range(1, n + 1):
        x = fund(x)
        if not 0.0 <= x < 1.0:
            s = floor(x)
            m += s
            x -= s
        alphas[i] = x
        ks[i] = m

    order = sorted(range(n + 1), key=alphas.__getitem__)
    for t in range(n):
        i0 = order[t]
        i1 = order[t + 1]
        if abs(alphas[i1] - alphas[i0]) <= SIMO_TIE_EPS:
            i, j = (i0, i1) if i0 < i1 else (i1, i0)
            raise PeriodicOrbitDetected(Fraction(ks[j] - ks[i], j - i) + k0, i, j)

    rho_min = 0.0
    rho_max = 1.0
    for t in range(n):
        i0 = order[t]
        i1 = order[t + 1]
        rho_aux = (ks[i1] - ks[i0]) / (i1 - i0)
        if i1 > i0:
            if rho_aux > rho_min:
                rho_min = rho_aux
        else:
            if rho_aux < rho_max:
                rho_max = rho_aux
    return SimoBracket(rho_min=rho_min + k0, rho_max=rho_max + k0, n=n)


def simo_error_bound(c: float, nu: float, n: int) -> float:
    """Error bound 1/(c n^nu)^(1/(nu-1)) for a Diophantine rotation number.

    Applies when |rho - p/q| <= c q^(-nu) for all rationals p/q, with c > 0
    and nu >= 2.
    """
    if c <= 0.0:
        raise ValueError("c must be positive")
    if nu < 2.0:
        raise ValueError("nu must be at least 2")
    if n < 1:
        raise ValueError("n must be at least 1")
    return (c * float(n) ** nu) ** (-1.0 / (nu - 1.0))


def rho_constant_section(
    G: Lifting, beta: float, error: float = DEFAULT_ERROR, tol: float = DEFAULT_TOL
) -> RotationEstimate:
    """Exact-when-possible rotation number of a map with a section at the origin.

    pre: G is non-decreasing and [-tol, beta + tol] is a constant section of
    G (reparametrize_to_zero produces exactly this, with beta already shrunk
    by tol on each side).  The orbit of 0 is the orbit of the section; at the
    first n with fractional part x <= beta the section returns to itself
    (mod 1) and rho = m/n exactly, provided the accumulated rounding error
    stays below tol.  Cycles longer than ceil(1/error) are invisible and fall
    back to the direct estimate.
    """
    _require_non_decreasing(G, "rho_constant_section")
    if beta <= 0.0:
        raise InvalidSection(f"test bound beta must be positive, got {beta}")
    if error <= 0.0:
        raise ValueError("error must be positive")
    if tol < 0.0:
        raise ValueError("tol must be non-negative")
    max_iter = math.ceil(1.0 / error)
    fund = G.fundamental
    floor = math.floor
    x = 0.0
    m = 0
    for n in range(1, max_iter + 1):
        x = fund(x)
        if not 0.0 <= x < 1.0:
            s = floor(x)
            m += s
            x -= s
        if x <= beta:
            return RotationEstimate.exact(m, n)
    return RotationEstimate.approx(
        value=(m + x) / max_iter, error_bound=1.0 / max_iter, iterations_used=max_iter
    )


def rho_constant_section_exact(
    F: Lifting, alpha: Fraction, beta: Fraction, max_iter: int
) -> RotationEstimate | None:
    """Exact-rational twin of the constant-section algorithm.

    [alpha, beta] must be a true constant section of F (no tolerance padding:
    rational arithmetic has no rounding error).  Iterates the section orbit
    F^n(alpha); a hit certifies rho = m/n unconditionally.  Returns None when
    no cycle through the section shows up within max_iter iterates.
    """
    if F.fundamental_exact is None:
        raise ValueError(f"lifting {F.label!r} has no exact-rational evaluator")
    width = beta - alpha
    if width <= 0:
        raise InvalidSection("section must be non-degenerate")
    v = alpha
    for n in range(1, max_iter + 1):
        v = evaluate_exact(F, v)
        d = v - alpha
        whole = d.numerator // d.denominator
        if d - whole <= width:
            return RotationEstimate.exact(whole, n)
    return None


def rho_csb(F: Lifting, error: float = DEFAULT_ERROR, tol: float = DEFAULT_TOL) -> RotationEstimate:
    """Constant-section estimate of a non-decreasing lifting.

    Reparametrizes the widest maximal section (ties to the leftmost) so it
    starts at the origin and runs rho_constant_section; falls back to
    rho_direct when no section wider than 2*tol exists.
    """
    _require_non_decreasing(F, "rho_csb")
    return _rho_of_envelope(upper_map(F), error, tol)


def rotation_interval(
    F: Lifting, error: float = DEFAULT_ERROR, tol: float = DEFAULT_TOL, method: str = "csb"
) -> RotationInterval:
    """rot(F) = [rho of the lower map, rho of the upper map].

    With method="csb" each envelope goes through the constant-section
    algorithm when it has a section wider than 2*tol and through the direct
    estimator otherwise; method="direct" forces the direct estimator (used
    for benchmarking).  Works for continuous liftings and for heavy
    (downward-jumping) ones, whose envelopes are continuous.
    """
    lo = _rho_of_envelope(lower_map(F), error, tol, method)
    hi = _rho_of_envelope(upper_map(F), error, tol, method)
    return RotationInterval(lower=lo, upper=hi)


def _rho_of_envelope(env, error: float, tol: float, method: str = "csb") -> RotationEstimate:
    if method == "csb":
        sec = widest_section(env.sections)
        if sec is not None and sec.width > 2.0 * tol:
            guarded = ConstantSection(alpha=sec.alpha, beta=sec.beta, tol=tol)
            G, K0 = reparametrize_to_zero(env.lifting, guarded)
            return rho_constant_section(G, K0.beta, error, tol)
    elif method != "direct":
        raise ValueError(f"unknown rotation-interval method {method!r}")
    return rho_direct(env.lifting, error)
