"""Monotone upper/lower envelopes of degree-one liftings and their constant sections.

The upper map of a lifting F is the smallest non-decreasing majorant
sup{F(y) : y <= x}; the lower map is the largest non-decreasing minorant
inf{F(y) : y >= x}.  Both are again degree-one liftings, they coincide with
F exactly when F is non-decreasing, and whenever they differ they carry
non-degenerate constant sections.  Those sections are what the exact
rotation-number algorithm feeds on, so this module also extracts maximal
sections and reparametrizes a lifting so a chosen section starts at 0.

Families with closed-form envelopes register a builder on the Lifting; the
generic numeric constructor (uniform grid, running extremum, local
refinement of every flat-run boundary) is the fallback and doubles as a
cross-check for the analytic forms.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .lifting import Continuity, Lifting, Monotonicity, evaluate_exact, split_floor

GRID = 4096
SECTION_EPS = 1e-12
REFINE_XTOL = 1e-15


class NumericEnvelopeFailure(RuntimeError):
    """Grid refinement could not certify a monotone envelope to tolerance."""


class SectionTooSmall(ValueError):
    """Section narrower than 2*tol: the exact algorithm cannot use it."""


@dataclass(frozen=True)
class ConstantSection:
    """A closed interval [alpha, beta] on which a monotone lifting is constant.

    tol is the padding claimed around the stored endpoints: the true
    constant section contains [alpha - tol, beta + tol].  Sections found
    numerically carry tol = 0 and store the refined true endpoints.
    """

    alpha: float
    beta: float
    tol: float = 0.0

    def __post_init__(self) -> None:
        if self.beta < self.alpha:
            raise ValueError(f"empty section: [{self.alpha}, {self.beta}]")
        if self.beta - self.alpha + 2.0 * self.tol >= 1.0:
            raise ValueError("constant section of a degree-one lifting has diameter < 1")

    @property
    def width(self) -> float:
        return self.beta - self.alpha


@dataclass(frozen=True)
class MonotoneEnvelope:
    """A non-decreasing envelope lifting plus its maximal constant sections."""

    lifting: Lifting
    sections: tuple[ConstantSection, ...]
    source: str  # "analytic" or "numeric"


def _self_envelope(F: Lifting) -> MonotoneEnvelope:
    probe = MonotoneEnvelope(lifting=F, sections=(), source="analytic")
    return MonotoneEnvelope(F, tuple(find_maximal_sections(probe)), "analytic")


def upper_map(F: Lifting) -> MonotoneEnvelope:
    """Smallest non-decreasing lifting above F (sup over the left half-line)."""
    if F.envelope_builder is not None:
        return F.envelope_builder(F)[0]
    if F.is_non_decreasing:
        return _self_envelope(F)
    return _numeric_envelope(F, upper=True)


def lower_map(F: Lifting) -> MonotoneEnvelope:
    """Largest non-decreasing lifting below F (inf over the right half-line)."""
    if F.envelope_builder is not None:
        return F.envelope_builder(F)[1]
    if F.is_non_decreasing:
        return _self_envelope(F)
    return _numeric_envelope(F, upper=False)


def widest_section(sections: "list[ConstantSection] | tuple[ConstantSection, ...]") -> ConstantSection | None:
    """Pick the widest section; ties broken by leftmost alpha."""
    best: ConstantSection | None = None
    for sec in sections:
        if best is None or sec.width > best.width or (sec.width == best.width and sec.alpha < best.alpha):
            best = sec
    return best


# ---------------------------------------------------------------------------
# numeric envelope construction


def _refine_extremum(
    f: Callable[[float], float], lo: float, hi: float, find_max: bool
) -> tuple[float, float]:
    """Trisection refinement of a local extremum of f inside [lo, hi].

    Works on weakly unimodal brackets; for a jump discontinuity it converges
    to the one-sided limit from the surviving side.  Returns (x, value) of
    the best point seen.
    """
    a, b = lo, hi
    best_x = a
    best_v = f(a)
    for x in (b, 0.5 * (a + b)):
        v = f(x)
        if (v > best_v) if find_max else (v < best_v):
            best_x, best_v = x, v
    while b - a > REFINE_XTOL:
        third = (b - a) / 3.0
        m1 = a + third
        m2 = b - third
        v1 = f(m1)
        v2 = f(m2)
        for x, v in ((m1, v1), (m2, v2)):
            if (v > best_v) if find_max else (v < best_v):
                best_x, best_v = x, v
        if (v1 < v2) if find_max else (v1 > v2):
            a = m1
        else:
            b = m2
    return best_x, best_v


def _bisect_boundary(pred: Callable[[float], bool], lo: float, hi: float) -> float:
    """Flip point of a predicate on [lo, hi]; pre: pred(lo) != pred(hi)."""
    plo = pred(lo)
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if pred(mid) == plo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _sample(F: Lifting, n: int) -> tuple[list[float], list[float]]:
    fund = F.fundamental
    xs = [i / n for i in range(n + 1)]
    return xs, [fund(x) for x in xs]


def _flat_runs(values: list[float], env: list[float], upper: bool) -> list[tuple[int, int]]:
    """Maximal index runs where the running extremum sits strictly off the map."""
    runs: list[tuple[int, int]] = []
    start = None
    for i, (v, e) in enumerate(zip(values, env)):
        off = e > v if upper else e < v
        if off and start is None:
            start = i
        elif not off and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(values) - 1))
    return runs


def _build_pieces(
    F: Lifting, n: int, upper: bool
) -> tuple[list[float], list[float], list[float], float]:
    """Flat pieces (starts, ends, levels) of the numeric envelope, refined."""
    fund = F.fundamental
    xs, fs = _sample(F, n)

    i_ext = max(range(n + 1), key=fs.__getitem__) if upper else min(range(n + 1), key=fs.__getitem__)
    lo_b = xs[max(i_ext - 1, 0)]
    hi_b = xs[min(i_ext + 1, n)]
    _, period_ext = _refine_extremum(fund, lo_b, hi_b, find_max=upper)
    if upper:
        period_ext = max(period_ext, fs[i_ext])
        seed = period_ext - 1.0
    else:
        period_ext = min(period_ext, fs[i_ext])
        seed = period_ext + 1.0

    env = [0.0] * (n + 1)
    if upper:
        cur = seed
        for i, v in enumerate(fs):
            cur = max(cur, v)
            env[i] = cur
    else:
        cur = seed
        for i in range(n, -1, -1):
            cur = min(cur, fs[i])
            env[i] = cur

    starts: list[float] = []
    ends: list[float] = []
    levels: list[float] = []
    for i, j in _flat_runs(fs, env, upper):
        level = env[i]
        if upper:
            # flat begins at the local max that set the level, ends where
            # the map climbs back to it
            if i == 0:
                start = 0.0
            else:
                start, level = _refine_extremum(fund, xs[max(i - 2, 0)], xs[i], find_max=True)
            if j == n:
                end = 1.0
            else:
                k = j + 1
                while k < n and fund(xs[k]) < level:
                    k += 1
                end = _bisect_boundary(lambda x, _l=level: fund(x) >= _l, xs[k - 1], xs[k])
        else:
            # flat ends at the local min that set the level, begins where
            # the map last came up through it
            if j == n:
                end = 1.0
            else:
                end, level = _refine_extremum(fund, xs[j], xs[min(j + 2, n)], find_max=False)
            if i == 0:
                start = 0.0
            else:
                k = i - 1
                while k > 0 and fund(xs[k]) > level:
                    k -= 1
                start = _bisect_boundary(lambda x, _l=level: fund(x) <= _l, xs[k], xs[k + 1])
        if starts and start < ends[-1]:
            start = ends[-1]
        if end <= start:
            continue
        starts.append(start)
        ends.append(end)
        levels.append(level)
    return starts, ends, levels, period_ext


def _numeric_envelope(F: Lifting, upper: bool) -> MonotoneEnvelope:
    fund = F.fundamental
    last_error = "grid exhausted"
    for n in (GRID, 4 * GRID, 16 * GRID):
        starts, ends, levels, _ = _build_pieces(F, n, upper)

        if not starts:
            env_fund = fund
        else:
            _starts = starts
            _ends = ends
            _levels = levels
            if upper:

                def env_fund(x: float, _s=_starts, _e=_ends, _l=_levels, _f=fund) -> float:
                    j = bisect_right(_s, x) - 1
                    if j >= 0 and x <= _e[j]:
                        v = _f(x)
                        lev = _l[j]
                        return lev if lev > v else v
                    return _f(x)

            else:

                def env_fund(x: float, _s=_starts, _e=_ends, _l=_levels, _f=fund) -> float:
                    j = bisect_right(_s, x) - 1
                    if j >= 0 and x <= _e[j]:
                        v = _f(x)
                        lev = _l[j]
                        return lev if lev < v else v
                    return _f(x)

        lifting = Lifting(
            fundamental=env_fund,
            monotone_class=Monotonicity.NON_DECREASING,
            continuity_class=Continuity.CONTINUOUS,
            label=f"{F.label}.{'upper' if upper else 'lower'}",
        )
        ok, last_error = _certify(lifting, F, 2 * n, upper)
        if ok:
            env = MonotoneEnvelope(lifting=lifting, sections=(), source="numeric")
            return MonotoneEnvelope(lifting, tuple(find_maximal_sections(env)), "numeric")
    raise NumericEnvelopeFailure(f"{F.label}: {last_error}")


def _certify(env: Lifting, F: Lifting, n: int, upper: bool) -> tuple[bool, str]:
    """Grid check: non-decreasing, on the correct side of F, degree-one."""
    e = env.fundamental
    f = F.fundamental
    prev = e(0.0)
    for i in range(1, n + 1):
        x = i / n
        cur = e(x)
        if cur < prev - SECTION_EPS:
            return False, f"monotonicity violated near x={x:.6g}"
        side_ok = cur >= f(x) - SECTION_EPS if upper else cur <= f(x) + SECTION_EPS
        if not side_ok:
            return False, f"envelope crosses the map near x={x:.6g}"
        prev = cur
    if abs(e(1.0) - e(0.0) - 1.0) > 1e-10:
        return False, "degree-one gluing violated"
    return True, ""


# ---------------------------------------------------------------------------
# constant sections


def _refine_section_edge(
    fund: Callable[[float], float], anchor_value: float, inside: float, outside: float, exact: bool
) -> float:
    """Locate the edge of {x : fund(x) == anchor_value} between inside and outside."""
    lo, hi = inside, outside
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        v = fund(mid)
        on = v == anchor_value if exact else abs(v - anchor_value) <= SECTION_EPS
        if on:
            lo = mid
        else:
            hi = mid
    return lo


def find_maximal_sections(E: MonotoneEnvelope) -> list[ConstantSection]:
    """All inclusion-maximal constant sections of the envelope within one period.

    Grid scan for runs of (near-)equal samples, then bisection refinement of
    both endpoints; a run hugging x=1 merges with a level-minus-one run
    hugging x=0 into a single section represented with a negative alpha.
    Returns [] when the envelope is strictly increasing on the grid.

    Endpoints at transversal crossings resolve to ~1e-13; where the envelope
    leaves its level tangentially (a smooth local extremum) the endpoint is
    only float-determined to sqrt(ulp / curvature), a few 1e-9 for the
    sine-based family.  Sections narrower than one grid cell are invisible.
    """
    fund = E.lifting.fundamental
    xs, fs = _sample(E.lifting, GRID)

    runs: list[tuple[int, int]] = []
    i = 0
    while i < GRID:
        if abs(fs[i + 1] - fs[i]) <= SECTION_EPS:
            # extend while the cumulative variation stays inside the band
            j = i
            lo_v = hi_v = fs[i]
            while j < GRID:
                nv = fs[j + 1]
                new_lo = nv if nv < lo_v else lo_v
                new_hi = nv if nv > hi_v else hi_v
                if new_hi - new_lo > SECTION_EPS:
                    break
                lo_v, hi_v = new_lo, new_hi
                j += 1
            runs.append((i, j))
            i = j + 1
        else:
            i += 1

    refined: list[tuple[float, float, float, bool, bool]] = []
    for i, j in runs:
        mid = (i + j) // 2
        v = fs[mid]
        exact_run = all(fs[k] == v for k in range(i, j + 1))
        if i == 0:
            alpha = 0.0
        else:
            alpha = _refine_section_edge(fund, v, xs[i], xs[i - 1], exact_run)
        if j == GRID:
            beta = 1.0
        else:
            beta = _refine_section_edge(fund, v, xs[j], xs[j + 1], exact_run)
        if beta > alpha:
            refined.append((alpha, beta, v, i == 0, j == GRID))

    sections: list[ConstantSection] = []
    left_edge = next((r for r in refined if r[3]), None)
    right_edge = next((r for r in refined if r[4]), None)
    merged_pair = None
    if left_edge is not None and right_edge is not None and left_edge is not right_edge:
        if abs(right_edge[2] - left_edge[2] - 1.0) <= SECTION_EPS:
            merged_pair = (left_edge, right_edge)
            sections.append(ConstantSection(alpha=right_edge[0] - 1.0, beta=left_edge[1]))
    for r in refined:
        if merged_pair is not None and (r is merged_pair[0] or r is merged_pair[1]):
            continue
        sections.append(ConstantSection(alpha=r[0], beta=r[1]))
    sections.sort(key=lambda s: s.alpha)
    return sections


def reparametrize_to_zero(F: Lifting, K: ConstantSection) -> tuple[Lifting, ConstantSection]:
    """Conjugate F by a rotation so the section starts at the origin.

    G(x) = F(x + delta) - delta with delta = alpha + tol keeps the rotation
    number and turns the section into [-tol, beta' + tol] with
    beta' = width - 2*tol; the returned section is that pre-shrunk test
    interval [0, beta'] carrying the same tol, ready for the constant-section
    algorithm's single comparison x <= beta'.
    """
    tol = K.tol
    width = K.beta - K.alpha
    if width <= 2.0 * tol:
        raise SectionTooSmall(
            f"section width {width:.3g} <= 2*tol = {2.0 * tol:.3g}; use the direct estimator"
        )
    shift = K.alpha + tol
    fund = F.fundamental

    def g(x: float, _shift=shift, _fund=fund) -> float:
        frac, whole = split_floor(x + _shift)
        return _fund(frac) + whole - _shift

    g_exact = None
    if F.fundamental_exact is not None:
        shift_q = Fraction(shift)

        def g_exact(q: Fraction, _F=F, _sq=shift_q) -> Fraction:
            return evaluate_exact(_F, q + _sq) - _sq

    G = Lifting(
        fundamental=g,
        monotone_class=F.monotone_class,
        continuity_class=F.continuity_class,
        label=f"{F.label}@+{shift:.8g}",
        fundamental_exact=g_exact,
    )
    return G, ConstantSection(alpha=0.0, beta=width - 2.0 * tol, tol=tol)
