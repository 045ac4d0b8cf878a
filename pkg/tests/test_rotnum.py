import math
import random
from fractions import Fraction

import pytest

from rotkit import (
    GOLDEN_MEAN,
    ConstantSection,
    InvalidSection,
    PeriodicOrbitDetected,
    RotationEstimate,
    counterexample_map,
    disc_standard,
    evaluate_exact,
    f_mu,
    pwl_standard,
    reparametrize_to_zero,
    rho_constant_section,
    rho_constant_section_exact,
    rho_csb,
    rho_direct,
    rho_simo,
    rotation_interval,
    simo_error_bound,
    standard_map,
    upper_map,
)
from _oracles import direct_value_oracle, exact_section_certificate, ell_of_n, random_flat_pl_lifting

TWO_PI = 2.0 * math.pi


def _rigid(omega, omega_q=None):
    from rotkit.lifting import Continuity, Lifting, Monotonicity

    return Lifting(
        fundamental=lambda x: x + omega,
        monotone_class=Monotonicity.NON_DECREASING,
        continuity_class=Continuity.CONTINUOUS,
        label=f"rigid({omega})",
        fundamental_exact=None if omega_q is None else (lambda q: q + omega_q),
    )


# ---------------------------------------------------------------------------
# direct estimator


def test_rho_direct_rigid_golden():
    est = rho_direct(_rigid(GOLDEN_MEAN), 1e-4)
    assert est.kind == "approx"
    assert est.error_bound == pytest.approx(1e-4)
    assert abs(est.value - GOLDEN_MEAN) < 1e-4


def test_rho_direct_counterexample_third():
    est = rho_direct(counterexample_map(), 1e-6)
    assert abs(est.value - 1.0 / 3.0) < 1e-6


def test_rho_direct_fixed_point():
    est = rho_direct(f_mu(0), 1e-3)
    assert est.value == 0.0


def test_rho_direct_normalization_outside_unit():
    # F(0) = 2.7: the estimator shifts by 2 and adds it back
    est = rho_direct(_rigid(2.7), 1e-4)
    assert abs(est.value - 2.7) < 1e-4


def test_rho_direct_requires_monotone():
    with pytest.raises(ValueError):
        rho_direct(standard_map(0, 3.0), 1e-3)


def test_rho_direct_matches_independent_oracle():
    for mu in (0.3, 0.123, 0.777):
        F = f_mu(mu)
        est = rho_direct(F, 1e-3)
        assert est.value == direct_value_oracle(F.fundamental, 1e-3)


# ---------------------------------------------------------------------------
# orbit-sorting bracket


def test_rho_simo_contains_golden():
    br = rho_simo(_rigid(GOLDEN_MEAN), 1000)
    assert br.rho_min <= GOLDEN_MEAN <= br.rho_max
    assert br.is_consistent


def test_rho_simo_counterexample_brackets_third():
    # the float orbit closes onto the 3-cycle, so either a bracket containing
    # 1/3 or an exact periodic-orbit detection of 1/3 is a sound outcome
    try:
        br = rho_simo(counterexample_map(), 1000)
    except PeriodicOrbitDetected as hit:
        assert hit.rotation == Fraction(1, 3)
    else:
        assert br.rho_min <= 1.0 / 3.0 <= br.rho_max


def test_rho_simo_detects_rational_cycle():
    with pytest.raises(PeriodicOrbitDetected) as info:
        rho_simo(_rigid(1.0 / 3.0), 1000)
    assert info.value.rotation == Fraction(1, 3)


def test_rho_simo_shift_is_added_back():
    with pytest.raises(PeriodicOrbitDetected) as info:
        rho_simo(_rigid(1.25), 1000)
    assert info.value.rotation == Fraction(5, 4)
    br = rho_simo(_rigid(GOLDEN_MEAN + 2.0), 500)
    assert br.rho_min <= GOLDEN_MEAN + 2.0 <= br.rho_max


def test_simo_error_bound_values():
    assert simo_error_bound(1, 2, 1000) == pytest.approx(1e-6)
    assert simo_error_bound(1, 3, 100) == pytest.approx(1e-3)
    assert simo_error_bound(2, 2, 10) == pytest.approx(5e-3)
    with pytest.raises(ValueError):
        simo_error_bound(0, 2, 10)
    with pytest.raises(ValueError):
        simo_error_bound(1, 1.5, 10)


# ---------------------------------------------------------------------------
# constant-section algorithm


def _reparametrized_fmu(mu, tol=1e-10):
    F = f_mu(mu)
    return reparametrize_to_zero(F, ConstantSection(0.75, 1.0, tol))


def test_csb_exact_rational_mode_certifies_two_fifths():
    F = f_mu(Fraction(819, 3124))
    est = rho_constant_section_exact(F, Fraction(3, 4), Fraction(1), 1000)
    assert est is not None and est.is_exact
    assert (est.m, est.n) == (2, 5)
    # independent re-iteration of the section orbit, in rationals
    x = Fraction(3, 4)
    for _ in range(5):
        x = evaluate_exact(F, x)
    assert x == Fraction(3, 4) + 2


def test_csb_tangency_guard_rejects_false_exact():
    mu_star = 819 / 3124 - 1e-16
    G, K = _reparametrized_fmu(mu_star)
    est = rho_constant_section(G, K.beta, 1e-6, 1e-10)
    assert (est.m, est.n) != (2, 5)
    assert abs(est.value - 0.3983) < 1e-3
    # whatever the float path returned is re-certified on the same map in
    # exact arithmetic
    cert = rho_constant_section_exact(f_mu(Fraction(mu_star)), Fraction(3, 4), Fraction(1), 10**5)
    assert cert is not None
    if est.is_exact:
        assert cert.as_fraction == est.as_fraction


def test_csb_counterexample_falls_back():
    C = counterexample_map()
    G, K = reparametrize_to_zero(C, ConstantSection(0.8, 1.0, 1e-10))
    est = rho_constant_section(G, K.beta, 1e-6, 1e-10)
    assert est.kind == "approx"
    assert abs(est.value - 1.0 / 3.0) < 1e-6


def test_csb_mu_zero_takes_approx_path():
    G, K = _reparametrized_fmu(0.0)
    est = rho_constant_section(G, K.beta, 1e-4, 1e-10)
    assert est.kind == "approx"
    assert abs(est.value) < 1e-4


def test_csb_invalid_section():
    G, K = _reparametrized_fmu(0.3)
    with pytest.raises(InvalidSection):
        rho_constant_section(G, 0.0, 1e-4)


def test_csb_exact_matches_direct_on_plateaus():
    for mu in (0.1, 0.2, 0.35, 0.55, 0.9):
        est = rho_csb(f_mu(mu), 1e-4, 1e-10)
        direct = rho_direct(f_mu(mu), 1e-4)
        assert est.is_exact
        assert abs(est.value - direct.value) <= direct.error_bound


def test_exactness_cross_check_in_rationals():
    # every float-path exact result must re-certify under exact re-iteration
    for i in range(1, 40):
        mu = i / 40
        est = rho_csb(f_mu(mu), 1e-4, 1e-10)
        if not est.is_exact:
            continue
        cert = rho_constant_section_exact(f_mu(Fraction(mu)), Fraction(3, 4), Fraction(1), 20000)
        assert cert is not None
        assert cert.as_fraction == est.as_fraction


# ---------------------------------------------------------------------------
# rotation intervals


def test_rotation_interval_monotone_degenerate():
    ri = rotation_interval(standard_map(0, 0.5), 1e-4)
    assert ri.lower.value == 0.0 and ri.upper.value == 0.0


def test_rotation_interval_disc_full_unit():
    ri = rotation_interval(disc_standard(0, TWO_PI), 1e-5)
    assert abs(ri.lower.value - 0.0) < 1e-5
    assert abs(ri.upper.value - 1.0) < 1e-5


def test_rotation_interval_standard_symmetric():
    error = 1e-5
    S = standard_map(0, TWO_PI)
    ri = rotation_interval(S, error)
    assert abs(ri.lower.value + ri.upper.value) < 2 * error
    assert ri.lower.value <= ri.upper.value + ri.lower.error_bound + ri.upper.error_bound
    # endpoint cross-check against the direct estimator on the envelope
    oracle = rho_direct(upper_map(S).lifting, error)
    assert abs(ri.upper.value - oracle.value) <= oracle.error_bound + ri.upper.error_bound


def test_rotation_interval_pwl_degenerate_until_half_pi():
    ri = rotation_interval(pwl_standard(0.2, math.pi / 2), 1e-4)
    assert ri.lower.value == ri.upper.value


def test_rotation_interval_numeric_envelope_path_matches_registered():
    from rotkit.lifting import Continuity, Lifting, Monotonicity

    T = pwl_standard(0, 2.5 * math.pi)
    plain = Lifting(
        fundamental=T.fundamental,
        monotone_class=Monotonicity.GENERAL,
        continuity_class=Continuity.CONTINUOUS,
        label="pwl-plain",
    )
    a = rotation_interval(T, 1e-4, 1e-10)
    b = rotation_interval(plain, 1e-4, 1e-10)
    assert b.lower.value == pytest.approx(a.lower.value, abs=1e-9)
    assert b.upper.value == pytest.approx(a.upper.value, abs=1e-9)


def test_conjugacy_preserves_rotation_number():
    for mu in (0.17, 0.42, 0.73):
        F = f_mu(mu)
        G, _ = _reparametrized_fmu(mu)
        a = rho_direct(F, 1e-4)
        b = rho_direct(G, 1e-4)
        assert abs(a.value - b.value) <= a.error_bound + b.error_bound
        c = rho_csb(F, 1e-4, 1e-10)
        assert abs(c.value - a.value) <= a.error_bound


# ---------------------------------------------------------------------------
# error-bound properties on maps with certified rotation numbers


def _certified_pl_maps(count, seed=11):
    rng = random.Random(seed)
    found = []
    while len(found) < count:
        F, beta, xs, ys = random_flat_pl_lifting(rng)
        cert = exact_section_certificate(F.fundamental_exact, beta, 3000)
        if cert is None:
            continue
        m, n = cert
        found.append((F, Fraction(m, n), xs, ys))
    return found


def test_error_bound_pointwise():
    # |rho - F^n(0)/n| < 1/n for every n, here swept to 2000
    cases = [(_rigid(0.25, Fraction(1, 4)), Fraction(1, 4), None, None)]
    cases += [(F, rho, xs, ys) for F, rho, xs, ys in _certified_pl_maps(5)]
    for F, rho, _, _ in cases:
        fund = F.fundamental
        x = 0.0
        m = 0
        rho_f = float(rho)
        for n in range(1, 2001):
            x = fund(x)
            if not 0.0 <= x < 1.0:
                s = math.floor(x)
                m += s
                x -= s
            assert abs(rho_f - (m + x) / n) < 1.0 / n


def test_error_bound_floor_bracket():
    # ell(n)/n <= rho <= (ell(n)+1)/n with ell the grid floor-minimum
    for F, rho, xs, ys in _certified_pl_maps(3, seed=5):
        ells = ell_of_n(xs, ys, 60, grid=512)
        for n, ell in enumerate(ells, start=1):
            assert Fraction(ell, n) <= rho <= Fraction(ell + 1, n)


def test_simo_soundness_on_certified_maps():
    for F, rho, _, _ in _certified_pl_maps(4, seed=23):
        shift = math.floor(F.fundamental(0.0))
        if not 0 <= float(rho) - shift <= 1:
            continue
        try:
            br = rho_simo(F, 400)
        except PeriodicOrbitDetected as hit:
            assert hit.rotation == rho
            continue
        assert br.rho_min - 1e-12 <= float(rho) <= br.rho_max + 1e-12


def test_counterexample_cycle_rotation():
    C = counterexample_map()
    x = Fraction(1, 10)
    for _ in range(3):
        x = evaluate_exact(C, x)
    assert x == Fraction(1, 10) + 1  # rho = 1/3 from the 3-cycle


# ---------------------------------------------------------------------------
# estimate type invariants


def test_estimate_invariants():
    e = RotationEstimate.exact(4, 10)
    assert e.as_fraction == Fraction(2, 5)
    assert (e.m, e.n) == (4, 10)  # raw pair preserved
    assert e.error_bound == 0.0
    a = RotationEstimate.approx(0.5, 1e-3, 1000)
    assert a.error_bound <= 1.0 / a.iterations_used
    with pytest.raises(ValueError):
        _ = a.as_fraction


def test_widest_section_feeds_csb():
    # rho_csb picks the registered section and certifies plateau values
    est = rho_csb(f_mu(0.375), 1e-4, 1e-10)
    assert est.is_exact and est.as_fraction == Fraction(1, 2)
    est = rho_csb(f_mu(0.5), 1e-4, 1e-10)
    assert est.is_exact and est.as_fraction == Fraction(17, 27)
    env = upper_map(f_mu(0.5))
    assert env.sections[0].width == pytest.approx(0.25, abs=1e-12)
