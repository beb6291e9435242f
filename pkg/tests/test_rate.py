"""Rate engine: profiles, rate function, duality, inversion, boundaries."""

import math

import numpy as np
import pytest

from levyclocks import (
    AssumptionError,
    DomainError,
    brownian_drift,
    cp_minus_drift,
    cp_plus_drift,
    csbp_immigration,
    hypergeometric_stable,
    classify_boundaries,
    invert_L,
    legendre_dual,
    log_gamma,
    profile,
    rate_I,
    rate_curve,
    rate_curve_text,
    saw_tooth,
    stable_conditioned,
)
from levyclocks.rate import _concave_sup
from oracles import (
    rate_brownian,
    rate_cp_minus,
    rate_cp_plus,
    rate_saw_tooth,
)

MODELS = [
    brownian_drift(1.0),
    cp_plus_drift(1.0, 2.0, 1.0),
    cp_minus_drift(2.0, 1.0),
    saw_tooth(1.0, 3.0),
    stable_conditioned(1.5, 1.0),
    csbp_immigration(0.5, 0.6, 1.0),
    hypergeometric_stable(1.0, 3.0),
]


def delta_grid(prof, n, frac_lo=0.05, frac_hi=0.95, cap=8.0):
    hi_edge = prof.tau_zero if math.isfinite(prof.tau_zero) else cap * prof.tau_e
    lo = prof.tau_plus + frac_lo * (hi_edge - prof.tau_plus)
    hi = prof.tau_plus + frac_hi * (hi_edge - prof.tau_plus)
    return np.linspace(lo, hi, n)


class TestProfile:
    def test_sawtooth(self):
        p = profile(saw_tooth(1.0, 3.0))
        assert p.m0 == pytest.approx(-3.0 + math.sqrt(3.0), abs=1e-10)
        assert p.psi_m0 == pytest.approx(-(math.sqrt(3) - 1.0) ** 2, abs=1e-10)
        assert p.tau_plus == pytest.approx(1.0, abs=1e-12)
        assert math.isinf(p.tau_zero)
        assert p.tau_e == pytest.approx(1.5, rel=1e-12)
        assert p.delta == (p.tau_plus, p.tau_zero)

    def test_hypergeometric_cauchy(self):
        p = profile(hypergeometric_stable(1, 3))
        assert p.m0 == pytest.approx(-1.0, abs=1e-10)
        assert p.psi_m0 == pytest.approx(-2.0 / math.pi, abs=1e-10)
        assert p.tau_plus == 0.0
        assert math.isinf(p.tau_zero)

    def test_cp_plus(self):
        p = profile(cp_plus_drift(1.0, 2.0, 1.0))
        assert p.tau_plus == 0.0
        assert p.tau_zero == pytest.approx(1.0, abs=1e-12)
        assert p.tau_e == pytest.approx(1.0 / 3.0, rel=1e-12)

    def test_brownian_critical_point(self):
        # psi(m0) = -nu^2/2 (the consistent value; asymptote slope nu^2/2
        # and the transform domain theta < nu^2/2 both pin it down)
        p = profile(brownian_drift(1.0))
        assert p.m0 == pytest.approx(-0.5, abs=1e-12)
        assert p.psi_m0 == pytest.approx(-0.5, abs=1e-12)
        assert p.tau_e == pytest.approx(0.5, rel=1e-14)

    def test_ordering_invariant(self):
        for model in MODELS:
            p = profile(model)
            assert p.tau_plus < p.tau_e < p.tau_zero
            assert p.tau_e == pytest.approx(1.0 / p.mean, rel=1e-14)

    def test_drift_violation(self):
        bad = saw_tooth(1.0, 3.0).esscher(-2.5)   # below m0
        with pytest.raises(AssumptionError):
            profile(bad)

    def test_stable_digamma_criticality(self):
        from levyclocks import digamma
        for alpha in (1.2, 1.5, 1.9):
            p = profile(stable_conditioned(alpha, 1.0))
            assert -1.0 < p.m0 < 0.0
            assert abs(digamma(p.m0 + alpha) - digamma(p.m0)) <= 1e-9
            assert p.tau_e == pytest.approx(
                1.0 / math.exp(log_gamma(alpha)), rel=1e-10)

    def test_hypergeometric_critical_closed_form(self):
        for alpha, d in ((1.0, 3.0), (1.3, 3.7), (0.8, 2.5)):
            p = profile(hypergeometric_stable(alpha, d))
            assert p.m0 == pytest.approx((alpha - d) / 2.0, abs=1e-9)
            ref = -2.0 ** alpha * math.exp(
                2.0 * (log_gamma((d + alpha) / 4.0)
                       - log_gamma((d - alpha) / 4.0)))
            assert p.psi_m0 == pytest.approx(ref, abs=1e-9)

    def test_cp_plus_scaling_law(self):
        # psi_{d,beta,gamma}(m) = d psi_{1,beta/d,gamma}(m): the profile
        # scales as tau -> tau/d.
        p1 = profile(cp_plus_drift(1.0, 1.25, 1.0))
        p2 = profile(cp_plus_drift(2.5, 2.5 * 1.25, 1.0))
        assert p2.tau_zero == pytest.approx(p1.tau_zero / 2.5, rel=1e-10)
        assert p2.tau_e == pytest.approx(p1.tau_e / 2.5, rel=1e-10)


class TestClassification:
    def test_labels(self):
        expected = {
            "brownian_drift": ("3a", "4c"),
            "cp_plus_drift": ("3b", "4a"),
            "cp_minus_drift": ("3a", "4a"),
            "saw_tooth": ("3a", "4b"),
            "stable_conditioned": ("3a", "4c"),
            "csbp_immigration": ("3a", "4a"),
            "hypergeometric_stable": ("3a", "4a"),
        }
        for model in MODELS:
            zero_rep, plus_rep = classify_boundaries(model)
            assert (zero_rep.case_label, plus_rep.case_label) == \
                expected[model.family.value]

    def test_asymptotes(self):
        nu = 1.0
        p = profile(brownian_drift(nu))
        assert p.asymptote[0] == pytest.approx(nu * nu / 2.0, abs=1e-10)
        assert p.asymptote[1] == pytest.approx(-nu / 2.0, abs=1e-10)
        beta, gamma = 1.0, 3.0
        p = profile(saw_tooth(beta, gamma))
        assert p.asymptote[0] == pytest.approx(
            (math.sqrt(gamma) - math.sqrt(beta)) ** 2, abs=1e-10)
        assert p.asymptote[1] == pytest.approx(
            math.sqrt(beta * gamma) - gamma, abs=1e-10)
        p = profile(cp_minus_drift(2.0, 1.0))
        assert p.asymptote[0] == pytest.approx(
            (math.sqrt(2.0) - 1.0) ** 2, abs=1e-10)
        assert p.asymptote[1] == pytest.approx(1.0 - math.sqrt(2.0), abs=1e-10)

    def test_boundary_values(self):
        # 4b: I(tau_plus) = b tau_plus with b = beta for the saw tooth
        _, plus_rep = classify_boundaries(saw_tooth(1.0, 3.0))
        assert plus_rep.value_I == pytest.approx(1.0, abs=1e-8)
        # 3b: I(tau_zero) = b tau_zero = beta/d for cp_plus
        zero_rep, plus_rep = classify_boundaries(cp_plus_drift(1.0, 2.0, 1.0))
        assert zero_rep.value_I == pytest.approx(2.0, abs=1e-8)
        assert plus_rep.value_I == 1.0   # I(0) = m_plus = gamma
        assert math.isinf(plus_rep.slope_I)

    def test_cp_plus_degenerate_drift_is_3c(self):
        zero_rep, plus_rep = classify_boundaries(cp_plus_drift(0.0, 2.0, 1.0))
        assert zero_rep.case_label == "3c"
        assert zero_rep.slope_I == pytest.approx(2.0, abs=1e-10)  # -psi(-inf)
        assert plus_rep.case_label == "4a"


class TestRateFunction:
    def test_zero_at_tau_e(self):
        for model in MODELS:
            p = profile(model)
            assert rate_I(model, p.tau_e, p) == 0.0

    def test_known_values(self):
        m = brownian_drift(1.0)
        assert rate_I(m, 0.5) == 0.0
        assert rate_I(m, 1.0) == pytest.approx(0.125, abs=1e-10)
        s = saw_tooth(1.0, 3.0)
        assert rate_I(s, 2.0) == pytest.approx(
            (math.sqrt(3.0) - math.sqrt(2.0)) ** 2, abs=1e-10)

    def test_outside_closure(self):
        p = profile(saw_tooth(1.0, 3.0))
        with pytest.raises(DomainError):
            rate_I(saw_tooth(1.0, 3.0), 0.5, p)
        with pytest.raises(DomainError):
            rate_I(cp_plus_drift(1, 2, 1), 1.5)

    def test_boundary_values_through_rate_I(self):
        assert rate_I(cp_plus_drift(1, 2, 1), 0.0) == 1.0        # 4a: m_plus
        assert rate_I(cp_plus_drift(1, 2, 1), 1.0) == pytest.approx(
            2.0, abs=1e-8)                                        # 3b: b tau0
        assert math.isinf(rate_I(brownian_drift(1.0), 0.0))       # 4c
        assert rate_I(saw_tooth(1, 3), 1.0) == pytest.approx(1.0, abs=1e-8)

    def test_closed_forms(self):
        cases = [
            (brownian_drift(1.0), lambda x: rate_brownian(1.0, x), 0.05, 3.0),
            (cp_plus_drift(1, 2, 1), lambda x: rate_cp_plus(1, 2, 1, x),
             0.01, 0.99),
            (cp_minus_drift(2, 1), lambda x: rate_cp_minus(2, 1, x),
             0.05, 5.0),
            (saw_tooth(1, 3), lambda x: rate_saw_tooth(1, 3, x),
             1.000001, 6.0),
        ]
        for model, ref, lo, hi in cases:
            p = profile(model)
            for x in np.linspace(lo, hi, 60):
                x = float(x)
                assert abs(rate_I(model, x, p) - ref(x)) <= 1e-8

    def test_shape(self):
        for model in MODELS:
            p = profile(model)
            xs = delta_grid(p, 80)
            vals = np.array([rate_I(model, float(x), p) for x in xs])
            assert np.all(vals >= 0.0)
            below = xs < p.tau_e
            above = xs > p.tau_e
            assert np.all(np.diff(vals[below]) <= 1e-12)
            assert np.all(np.diff(vals[above]) >= -1e-12)
            mid = 0.5 * (vals[:-2] + vals[2:])
            assert np.all(vals[1:-1] <= mid + 1e-10)


class TestDuality:
    def test_legendre_known_values(self):
        m = brownian_drift(1.0)
        assert legendre_dual(m, 2.0) == pytest.approx(0.0, abs=1e-12)
        assert legendre_dual(m, 4.0) == pytest.approx(0.5, abs=1e-10)
        assert legendre_dual(m, 1.0) == pytest.approx(0.125, abs=1e-10)

    def test_legendre_edges(self):
        cp = cp_plus_drift(1.0, 2.0, 1.0)
        assert math.isinf(legendre_dual(cp, 0.5))
        assert legendre_dual(cp, 1.0) == pytest.approx(2.0, abs=1e-8)

    def test_pair_identity(self):
        for model in MODELS:
            p = profile(model)
            for x in delta_grid(p, 100):
                x = float(x)
                gap = rate_I(model, x, p) - x * legendre_dual(model, 1.0 / x)
                assert abs(gap) <= 1e-8

    def test_gartner_ellis_consistency(self):
        for model in MODELS:
            p = profile(model)
            theta_hi = -p.psi_m0
            for x in delta_grid(p, 12):
                x = float(x)
                sup, _, _ = _concave_sup(
                    lambda th: x * th - invert_L(model, th, p),
                    -math.inf, theta_hi)
                assert abs(rate_I(model, x, p) - sup) <= 1e-6


class TestInvertL:
    def test_zero(self):
        for model in MODELS:
            assert invert_L(model, 0.0) == 0.0

    def test_round_trip(self):
        for model in MODELS:
            p = profile(model)
            lo = p.m0 if math.isfinite(p.m0) else -6.0
            hi = model.m_plus if math.isfinite(model.m_plus) else 6.0
            for m in np.linspace(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), 17):
                m = float(m)
                if m == 0.0:
                    continue
                theta = -model.psi(m)
                assert invert_L(model, theta, p) == pytest.approx(
                    -m, abs=1e-9 * max(1.0, abs(m)))

    def test_strictly_increasing(self):
        for model in MODELS:
            p = profile(model)
            theta_hi = -p.psi_m0
            hi = theta_hi - 0.05 * (abs(theta_hi) + 1.0) \
                if math.isfinite(theta_hi) else 5.0
            thetas = np.linspace(-10.0, hi, 25)
            vals = [invert_L(model, float(t), p) for t in thetas]
            assert np.all(np.diff(vals) > 0.0)

    def test_brownian_explicit(self):
        m = brownian_drift(1.0)
        assert invert_L(m, -4.0) == pytest.approx(-1.0, abs=1e-10)
        # true closed form L(theta) = (nu - sqrt(nu^2 - 2 theta))/2
        for theta in (-3.0, -1.0, -0.25, 0.2, 0.4):
            ref = (1.0 - math.sqrt(1.0 - 2.0 * theta)) / 2.0
            assert invert_L(m, theta) == pytest.approx(ref, abs=1e-10)

    def test_cauchy_limit(self):
        h = hypergeometric_stable(1, 3)
        theta0 = 2.0 / math.pi
        val = invert_L(h, theta0 - 1e-7)
        assert 0.99 < val < 1.0
        with pytest.raises(DomainError):
            invert_L(h, theta0)
        with pytest.raises(DomainError):
            invert_L(h, theta0 + 0.1)


class TestRateCurve:
    def test_matches_rate_I_and_envelope(self):
        model = brownian_drift(1.0)
        p = profile(model)
        rows = rate_curve(model, 0.1, 3.0, 30, p)
        assert len(rows) == 30
        xs = [r[0] for r in rows]
        assert xs == sorted(xs)
        h = 1e-6
        for x, val, slope in rows[1:-1]:
            assert val == rate_I(model, x, p)
            num = (rate_I(model, x + h, p) - rate_I(model, x - h, p)) / (2 * h)
            assert slope == pytest.approx(num, abs=5e-5)

    def test_boundary_rows(self):
        rows = rate_curve(saw_tooth(1, 3), 1.0, 6.0, 11)
        assert rows[0][0] == 1.0
        assert rows[0][1] == pytest.approx(1.0, abs=1e-8)
        assert rows[0][2] == -math.inf

    def test_grid_validation(self):
        with pytest.raises(DomainError):
            rate_curve(saw_tooth(1, 3), 0.5, 6.0, 10)
        with pytest.raises(DomainError):
            rate_curve(saw_tooth(1, 3), 1.0, 6.0, 1)

    def test_text_format(self):
        rows = rate_curve(brownian_drift(1.0), 0.5, 1.0, 3)
        text = rate_curve_text(rows)
        lines = text.strip().split("\n")
        assert lines[0] == "x,I,Iprime"
        assert len(lines) == 4
        first = lines[1].split(",")
        assert float(first[0]) == 0.5
        assert float(first[1]) == 0.0
