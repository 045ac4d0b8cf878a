"""Constructors for the map families the sweeps study.

Every constructor returns an immutable Lifting with a float fundamental, an
exact-rational twin of the same map (built from the binary values of the
float parameters unless true rationals are passed in), and, where a closed
form exists, registered analytic envelopes.  Trigonometric families get no
exact twin.

The nonlinearity is parametrized as a coefficient a/(2*pi), so a figure-style
value like a = 2*pi means coefficient 1; a can also be given directly as
that rational coefficient via a_over_2pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .envelope import ConstantSection, MonotoneEnvelope
from .lifting import Continuity, Lifting, Monotonicity

TWO_PI = 2.0 * math.pi
GOLDEN_MEAN = (math.sqrt(5.0) - 1.0) / 2.0


class InvalidParam(ValueError):
    """Family parameter outside its documented domain."""


def _as_pair(value) -> tuple[float, Fraction]:
    """Float value plus an exact Fraction twin of a numeric parameter."""
    if isinstance(value, Fraction):
        return float(value), value
    if isinstance(value, int):
        return float(value), Fraction(value)
    if isinstance(value, str):
        q = Fraction(value)
        return float(q), q
    return float(value), Fraction(float(value))


def _coefficient(a, a_over_2pi) -> tuple[float, float, Fraction]:
    """Resolve (a, a/(2*pi)) from either parametrization."""
    if (a is None) == (a_over_2pi is None):
        raise InvalidParam("give exactly one of a or a_over_2pi")
    if a_over_2pi is not None:
        c, c_q = _as_pair(a_over_2pi)
        return c * TWO_PI, c, c_q
    a_f = float(a)
    c = a_f / TWO_PI
    return a_f, c, Fraction(c)


def _memo_pair(build):
    cache: dict[str, tuple[MonotoneEnvelope, MonotoneEnvelope]] = {}

    def builder(F: Lifting):
        if "pair" not in cache:
            cache["pair"] = build(F)
        return cache["pair"]

    return builder


def _self_pair(sections: tuple[ConstantSection, ...]):
    def build(F: Lifting):
        env = MonotoneEnvelope(lifting=F, sections=sections, source="analytic")
        return env, env

    return _memo_pair(build)


def _root_on_increasing(f, target: float, lo: float, hi: float) -> float:
    """Bisection root of f(x) = target for f non-decreasing on [lo, hi]."""
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# the one-parameter staircase family


def f_mu(mu) -> Lifting:
    """Lifting with fundamental (4/3)x + mu on [0, 3/4] and mu + 1 above.

    Non-decreasing and continuous, with the constant section [3/4, 1]; the
    rotation number as a function of mu draws a Devil's staircase.
    """
    mu_f, mu_q = _as_pair(mu)
    if not 0.0 <= mu_f <= 1.0:
        raise InvalidParam(f"mu must lie in [0, 1], got {mu_f}")

    def fund(x: float) -> float:
        if x > 0.75:
            return mu_f + 1.0
        return (4.0 / 3.0) * x + mu_f

    four_thirds = Fraction(4, 3)
    three_quarters = Fraction(3, 4)

    def fund_exact(q: Fraction) -> Fraction:
        if q > three_quarters:
            return mu_q + 1
        return four_thirds * q + mu_q

    return Lifting(
        fundamental=fund,
        monotone_class=Monotonicity.NON_DECREASING,
        continuity_class=Continuity.CONTINUOUS,
        label=f"F_mu(mu={mu_f:.8g})",
        fundamental_exact=fund_exact,
        envelope_builder=_self_pair((ConstantSection(0.75, 1.0),)),
    )


# ---------------------------------------------------------------------------
# standard map and its piecewise-linear / discontinuous variants


def tau(x: float) -> float:
    """Triangle wave on [0, 1]: 4x, then 2 - 4x, then 4(x - 1); range [-1, 1]."""
    if x <= 0.25:
        return 4.0 * x
    if x <= 0.75:
        return 2.0 - 4.0 * x
    return 4.0 * (x - 1.0)


def tau_exact(q: Fraction) -> Fraction:
    if q <= Fraction(1, 4):
        return 4 * q
    if q <= Fraction(3, 4):
        return 2 - 4 * q
    return 4 * (q - 1)


def standard_map(omega, a=None, *, a_over_2pi=None) -> Lifting:
    """x + omega - (a/2pi) sin(2 pi x); invertible exactly when a <= 1."""
    omega_f, _ = _as_pair(omega)
    a_f, c, _ = _coefficient(a, a_over_2pi)
    if a_f < 0.0:
        raise InvalidParam(f"a must be non-negative, got {a_f}")

    def fund(x: float) -> float:
        return x + omega_f - c * math.sin(TWO_PI * x)

    non_decreasing = a_f <= 1.0
    builder = None
    if not non_decreasing:
        builder = _memo_pair(lambda F: _standard_envelopes(F, omega_f, a_f, c))

    return Lifting(
        fundamental=fund,
        monotone_class=Monotonicity.NON_DECREASING if non_decreasing else Monotonicity.GENERAL,
        continuity_class=Continuity.CONTINUOUS,
        label=f"S(omega={omega_f:.8g}, a={a_f:.8g})",
        envelope_builder=builder,
    )


def _standard_envelopes(F: Lifting, omega: float, a: float, c: float):
    """Envelopes of the standard map for a > 1 from its critical points.

    s has a local min at x1 = arccos(1/a)/(2 pi) and a local max at
    x2 = 1 - x1; each flat ends where s crosses the extreme value (shifted by
    one period) on the increasing middle branch.
    """
    s = F.fundamental
    x1 = math.acos(1.0 / a) / TWO_PI
    x2 = 1.0 - x1
    s1 = s(x1)
    s2 = s(x2)
    u = _root_on_increasing(s, s2 - 1.0, x1, x2)
    low = _root_on_increasing(s, s1 + 1.0, x1, x2)

    def upper_fund(x: float) -> float:
        if x <= u:
            return s2 - 1.0
        if x <= x2:
            return s(x)
        return s2

    def lower_fund(x: float) -> float:
        if x <= x1:
            return s1
        if x <= low:
            return s(x)
        return s1 + 1.0

    upper = Lifting(
        fundamental=upper_fund,
        monotone_class=Monotonicity.NON_DECREASING,
        continuity_class=Continuity.CONTINUOUS,
        label=f"{F.label}.upper",
    )
    lower = Lifting(
        fundamental=lower_fund,
        monotone_class=Monotonicity.NON_DECREASING,
        continuity_class=Continuity.CONTINUOUS,
        label=f"{F.label}.lower",
    )
    return (
        MonotoneEnvelope(upper, (ConstantSection(x2 - 1.0, u),), "analytic"),
        MonotoneEnvelope(lower, (ConstantSection(low - 1.0, x1),), "analytic"),
    )


def pwl_standard(omega, a=None, *, a_over_2pi=None) -> Lifting:
    """Piecewise-linear standard map x + omega - (a/2pi) tau(<x>).

    Slope of the outer branches is 1 - 4a/(2 pi), so the map stops being
    non-decreasing beyond a = pi/2.
    """
    omega_f, omega_q = _as_pair(omega)
    a_f, c, c_q = _coefficient(a, a_over_2pi)
    if a_f < 0.0:
        raise InvalidParam(f"a must be non-negative, got {a_f}")

    def fund(x: float) -> float:
        return x + omega_f - c * tau(x)

    def fund_exact(q: Fraction) -> Fraction:
        return q + omega_q - c_q * tau_exact(q)

    return Lifting(
        fundamental=fund,
        monotone_class=Monotonicity.NON_DECREASING if c <= 0.25 else Monotonicity.GENERAL,
        continuity_class=Continuity.CONTINUOUS,
        label=f"T(omega={omega_f:.8g}, a={a_f:.8g})",
        fundamental_exact=fund_exact,
        envelope_builder=_memo_pair(lambda F: _pwl_envelopes(F, omega_f, omega_q, c, c_q)),
    )


def _pwl_envelopes(F: Lifting, omega: float, omega_q: Fraction, c: float, c_q: Fraction):
    if c < 0.25:
        env = MonotoneEnvelope(F, (), "analytic")
        return env, env
    if c == 0.25:
        # outer branches are exactly flat; one section straddling the origin
        env = MonotoneEnvelope(F, (ConstantSection(-0.25, 0.25),), "analytic")
        return env, env

    t = F.fundamental
    peak = t(0.75)
    trough = t(0.25)
    # crossings of peak-1 / trough+1 on the middle branch of slope 1 + 4c
    xu_q = (12 * c_q - 1) / (4 * (1 + 4 * c_q))
    xl_q = (5 + 4 * c_q) / (4 * (1 + 4 * c_q))
    xu = float(xu_q)
    xl = float(xl_q)

    def upper_fund(x: float) -> float:
        if x <= xu:
            return peak - 1.0
        if x <= 0.75:
            return t(x)
        return peak

    def lower_fund(x: float) -> float:
        if x <= 0.25:
            return trough
        if x <= xl:
            return t(x)
        return trough + 1.0

    peak_q = Fraction(3, 4) + omega_q + c_q
    trough_q = Fraction(1, 4) + omega_q - c_q

    def upper_exact(q: Fraction) -> Fraction:
        if q <= xu_q:
            return peak_q - 1
        if q <= Fraction(3, 4):
            return q + omega_q - c_q * tau_exact(q)
        return peak_q

    def lower_exact(q: Fraction) -> Fraction:
        if q <= Fraction(1, 4):
            return trough_q
        if q <= xl_q:
            return q + omega_q - c_q * tau_exact(q)
        return trough_q + 1

    upper = Lifting(
        fundamental=upper_fund,
        monotone_class=Monotonicity.NON_DECREASING,
        continuity_class=Continuity.CONTINUOUS,
        label=f"{F.label}.upper",
        fundamental_exact=upper_exact,
    )
    lower = Lifting(
        fundamental=lower_fund,
        monotone_class=Monotonicity.NON_DECREASING,
        continuity_class=Continuity.CONTINUOUS,
        label=f"{F.label}.lower",
        fundamental_exact=lower_exact,
    )
    return (
        MonotoneEnvelope(upper, (ConstantSection(-0.25, xu),), "analytic"),
        MonotoneEnvelope(lower, (ConstantSection(xl - 1.0, 0.25),), "analytic"),
    )


def disc_standard(omega, a=None, *, a_over_2pi=None) -> Lifting:
    """Discontinuous standard map x + omega + (a/2pi) <x>.

    Heavy: the jump at every integer falls, so the envelopes are continuous
    and carry constant sections for a > 0.  The value at integers uses
    <x> = 0; one-sided limits are exposed separately.
    """
    omega_f, omega_q = _as_pair(omega)
    a_f, c, c_q = _coefficient(a, a_over_2pi)
    if a_f < 0.0:
        raise InvalidParam(f"a must be non-negative for a heavy map, got {a_f}")

    def fund(x: float) -> float:
        frac = x - math.floor(x)
        return x + omega_f + c * frac

    def fund_exact(q: Fraction) -> Fraction:
        frac = q - (q.numerator // q.denominator)
        return q + omega_q + c_q * frac

    def left_lim(x: float) -> float:
        # treat <.> continuously from the left: at 1 this is 1 + omega + c
        return (1.0 + c) * x + omega_f

    def right_lim(x: float) -> float:
        if x >= 1.0:
            return omega_f + 1.0
        return (1.0 + c) * x + omega_f

    return Lifting(
        fundamental=fund,
        monotone_class=Monotonicity.NON_DECREASING if c == 0.0 else Monotonicity.GENERAL,
        continuity_class=Continuity.CONTINUOUS if c == 0.0 else Continuity.HEAVY,
        label=f"D(omega={omega_f:.8g}, a={a_f:.8g})",
        fundamental_exact=fund_exact,
        left_limit=None if c == 0.0 else left_lim,
        right_limit=None if c == 0.0 else right_lim,
        envelope_builder=_memo_pair(lambda F: _disc_envelopes(F, omega_f, omega_q, c, c_q)),
    )


def _disc_envelopes(F: Lifting, omega: float, omega_q: Fraction, c: float, c_q: Fraction):
    if c == 0.0:
        env = MonotoneEnvelope(F, (), "analytic")
        return env, env

    slope = 1.0 + c
    qu_q = c_q / (1 + c_q)
    pl_q = 1 / (1 + c_q)
    qu = float(qu_q)
    pl = float(pl_q)

    def upper_fund(x: float) -> float:
        if x <= qu:
            return omega + c
        return slope * x + omega

    def lower_fund(x: float) -> float:
        if x <= pl:
            return slope * x + omega
        return omega + 1.0

    def upper_exact(q: Fraction) -> Fraction:
        if q <= qu_q:
            return omega_q + c_q
        return (1 + c_q) * q + omega_q

    def lower_exact(q: Fraction) -> Fraction:
        if q <= pl_q:
            return (1 + c_q) * q + omega_q
        return omega_q + 1

    upper = Lifting(
        fundamental=upper_fund,
        monotone_class=Monotonicity.NON_DECREASING,
        continuity_class=Continuity.CONTINUOUS,
        label=f"{F.label}.upper",
        fundamental_exact=upper_exact,
    )
    lower = Lifting(
        fundamental=lower_fund,
        monotone_class=Monotonicity.NON_DECREASING,
        continuity_class=Continuity.CONTINUOUS,
        label=f"{F.label}.lower",
        fundamental_exact=lower_exact,
    )
    return (
        MonotoneEnvelope(upper, (ConstantSection(0.0, qu),), "analytic"),
        MonotoneEnvelope(lower, (ConstantSection(pl, 1.0),), "analytic"),
    )


# ---------------------------------------------------------------------------
# the no-cycle-through-the-section example


def counterexample_map() -> Lifting:
    """Five-piece non-decreasing lifting whose section meets no lifted cycle.

    Rotation number 1/3 (cycle {0.1, 0.3, 0.4} + Z), constant section
    [0.8, 1]; the exact algorithm must always fall back to estimation here.
    """

    def fund(x: float) -> float:
        if x <= 0.1:
            return x + 0.2
        if x <= 0.3:
            return 0.5 * x + 0.25
        if x <= 0.4:
            return 7.0 * x - 1.7
        if x <= 0.8:
            return 0.25 * x + 1.0
        return 1.2

    def fund_exact(q: Fraction) -> Fraction:
        if q <= Fraction(1, 10):
            return q + Fraction(1, 5)
        if q <= Fraction(3, 10):
            return q / 2 + Fraction(1, 4)
        if q <= Fraction(2, 5):
            return 7 * q - Fraction(17, 10)
        if q <= Fraction(4, 5):
            return q / 4 + 1
        return Fraction(6, 5)

    return Lifting(
        fundamental=fund,
        monotone_class=Monotonicity.NON_DECREASING,
        continuity_class=Continuity.CONTINUOUS,
        label="counterexample",
        fundamental_exact=fund_exact,
        envelope_builder=_self_pair((ConstantSection(0.8, 1.0),)),
    )


# ---------------------------------------------------------------------------
# sweep plumbing: picklable parameter records


FAMILY_NAMES = ("fmu", "standard", "pwl", "disc", "counterexample")


@dataclass(frozen=True)
class FamilyParams:
    """Picklable family selector so sweep workers can rebuild liftings."""

    family: str
    mu: float | None = None
    omega: float | None = None
    a: float | None = None


def build_lifting(params: FamilyParams) -> Lifting:
    if params.family == "fmu":
        return f_mu(params.mu)
    if params.family == "standard":
        return standard_map(params.omega, params.a)
    if params.family == "pwl":
        return pwl_standard(params.omega, params.a)
    if params.family == "disc":
        return disc_standard(params.omega, params.a)
    if params.family == "counterexample":
        return counterexample_map()
    raise InvalidParam(f"unknown family {params.family!r}; expected one of {FAMILY_NAMES}")
