import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spdelab import comparison as cmp
from spdelab.comparison import GrowthFunction
from spdelab.dynamics import DiffusionSpec, DriftSpec, InitialProfile, ProblemSpec
from spdelab.grid import Domain1D, Field
from spdelab.spectral import analytic_eigenpair

D = Domain1D(1.0, 400)
EIG = analytic_eigenpair(D)
PI2 = math.pi ** 2


def sine(c):
    return Field.from_function(D, lambda x: c * np.sin(np.pi * x))


def scaled(mass):
    return InitialProfile("scaled_phi", mass=mass).field(D, EIG)


# --- criteria -----------------------------------------------------------------


def test_fujita_examples():
    r13 = cmp.check_fujita(sine(13), 1.0, EIG)
    assert r13.satisfied and r13.inputs["pairing"] == pytest.approx(13 * math.pi / 4, rel=1e-4)
    assert not cmp.check_fujita(sine(12), 1.0, EIG).satisfied
    z = cmp.check_fujita(Field.zeros(D), 1.0, EIG)
    assert not z.satisfied and z.margin == pytest.approx(-PI2)
    with pytest.raises(ValueError):
        cmp.check_fujita(sine(1), 0.0, EIG)


def test_deterministic_blowup_root_is_operative():
    # root of a1 r^2 - lambda1 r is lambda1 / a1
    assert cmp.check_thm31(scaled(PI2 * 1.01), 1, 0, 2, EIG).satisfied
    rep = cmp.check_thm31(scaled(PI2 * 0.99), 1, 0, 2, EIG)
    assert not rep.satisfied and rep.margin == pytest.approx(-0.01 * PI2, rel=1e-6)
    assert len(rep.notes) == 3
    rep = cmp.check_thm31(sine(20), 1, 0, 2, EIG)  # pairing 5 pi
    assert rep.satisfied
    with pytest.raises(ValueError):
        cmp.check_thm31(sine(1), 1, 0, 1.0, EIG)


def test_deterministic_blowup_large_a2_needs_nonnegative_datum():
    assert cmp.check_thm31(sine(0.01), 1, 20, 2, EIG).satisfied
    assert not cmp.check_thm31(sine(-0.01), 1, 20, 2, EIG).satisfied
    assert not cmp.check_thm31(Field.zeros(D), 1, 20, 2, EIG).satisfied


def test_noise_assisted_boundary():
    kw = dict(alpha=2.0, m=1.5, q1=1.0, eig=EIG)
    assert not cmp.check_thm32(scaled(1.0), b=4.0, **kw).satisfied
    assert cmp.check_thm32(scaled(1.0), b=5.0, **kw).satisfied
    with pytest.raises(ValueError):
        cmp.check_thm32(scaled(1.0), b=1.0, alpha=1.0, m=1.5, q1=1.0, eig=EIG)


def test_noise_induced():
    # operative margin: (b^2 q1 / 2) eta^m - lambda1 eta at eta = 1
    rep = cmp.check_thm33(scaled(1.0), m=2, b=6, q1=1, eig=EIG)
    assert rep.satisfied and rep.margin == pytest.approx(18 - PI2, rel=1e-9)
    # b^2 = 12: stated test passes (1 >= pi^2/12) but operative fails
    rep = cmp.check_thm33(scaled(1.0), m=2, b=math.sqrt(12), q1=1, eig=EIG)
    assert not rep.satisfied and rep.inputs["stated_condition"]
    assert any("disagree" in n for n in rep.notes)
    for bad in (dict(m=1.0, b=1, q1=1), dict(m=2, b=0, q1=1), dict(m=2, b=1, q1=0)):
        with pytest.raises(ValueError):
            cmp.check_thm33(scaled(1.0), eig=EIG, **bad)


def test_positivity_22():
    assert cmp.check_positivity_22(1, 0, 2, 0.5, 4 / 3, 1).satisfied
    assert not cmp.check_positivity_22(1, 0, 2, 0.5, 1.6, 1).satisfied
    assert not cmp.check_positivity_22(-1, 0, 2, 0.5, 1.2, 1).satisfied  # sign of a1
    assert cmp.check_positivity_22(-1, 0, 3, 0.5, 1.5, 1).satisfied
    assert not cmp.check_positivity_22(1, 0, 2, 0.5, 0.9, 1).satisfied


@pytest.mark.parametrize("kind,ok,bad", [
    ("thm22", {"p": 5, "m": 2, "n": 1}, {"p": 3, "m": 2, "n": 1}),
    ("thm23", {"m": 1, "n": 1}, {"m": 0.4, "n": 1}),
    ("thm41", {"m": 1.5}, {"m": 2.0}),
    ("cor41", {"m": 1.5, "gamma": 3}, {"m": 2.5, "gamma": 3}),
    ("thm42", {"nu": 1, "q0": 1}, {"nu": 1, "q0": 2}),
])
def test_aux_ranges(kind, ok, bad):
    assert cmp.check_aux_ranges(kind, ok).satisfied
    assert not cmp.check_aux_ranges(kind, bad).satisfied


def test_aux_ranges_errors():
    with pytest.raises(ValueError):
        cmp.check_aux_ranges("nope", {})
    with pytest.raises(ValueError):
        cmp.check_aux_ranges("thm41", {})


def test_ns_conditions():
    n = cmp.check_NS_power("N", u0=sine(20), eig=EIG, a1=1, beta=2)
    assert n.satisfied and n.inputs["M1"] == pytest.approx(PI2, rel=1e-6)
    assert not cmp.check_NS_power("N", u0=sine(20), eig=EIG, a1=1, beta=1).satisfied
    s = cmp.check_NS_power("S", u0=scaled(1.0), eig=EIG, b=6, m=2, q1=1)
    assert s.inputs["M2"] == pytest.approx(2 * PI2 / 36, rel=1e-6)
    assert s.satisfied
    assert not cmp.check_NS_power("S", u0=scaled(1.0), eig=EIG, b=6, m=2, q1=0).satisfied
    with pytest.raises(ValueError):
        cmp.check_NS_power("X", u0=scaled(1.0), eig=EIG)


def test_report_serializes():
    d = cmp.check_fujita(sine(13), 1.0, EIG).to_dict()
    assert set(d) == {"name", "satisfied", "margin", "inputs", "notes"}


# --- growth functions and bounds ------------------------------------------------


def test_growth_function_merges_and_sorts():
    g = GrowthFunction.of((1, 2), (-1, 1), (2, 2), (0, 3))
    assert g.terms == ((-1.0, 1.0), (3.0, 2.0))
    assert g(2.0) == pytest.approx(10.0)
    assert g.leading == (3.0, 2.0)
    with pytest.raises(ValueError):
        GrowthFunction.of((1, 0.5))


def test_bound_ln2():
    g = GrowthFunction.of((1, 2), (-1, 1))
    for method in ("closed_form", "quadrature", "auto"):
        assert cmp.blowup_time_bound(g, 2.0, method).t_star == pytest.approx(math.log(2), abs=1e-8)


def test_bound_closed_forms():
    t = cmp.blowup_time_bound(GrowthFunction.of((1, 2), (-PI2, 1)), 5 * math.pi).t_star
    assert t == pytest.approx(math.log(5 * math.pi / (5 * math.pi - PI2)) / PI2, rel=1e-14)
    assert t == pytest.approx(0.100279405, abs=1e-9)
    t = cmp.blowup_time_bound(GrowthFunction.of((36, 2), (-2 * PI2, 1)), 1.0).t_star
    assert t == pytest.approx(0.04026312, abs=1e-8)
    assert cmp.blowup_time_bound(GrowthFunction.of((2, 2)), 1.0).t_star == pytest.approx(0.5)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 10), st.floats(1.2, 4), st.floats(0.1, 10))
def test_bound_pure_power_closed_form(c, p, x0):
    # int_x0^inf dr / (c r^p) = x0^(1-p) / (c (p-1))
    res = cmp.blowup_time_bound(GrowthFunction.of((c, p)), x0)
    exact = x0 ** (1 - p) / (c * (p - 1))
    assert res.t_star == pytest.approx(exact, rel=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 5), st.floats(0.0, 5), st.floats(1.1, 10))
def test_bound_quadrature_vs_closed(a, c, mult):
    x0 = (c / a) * mult + 0.1
    g = GrowthFunction.of((a, 2), (-c, 1))
    q = cmp.blowup_time_bound(g, x0, "quadrature").t_star
    cf = cmp.blowup_time_bound(g, x0, "closed_form").t_star
    assert q == pytest.approx(cf, rel=1e-8)


def test_bound_monotone_in_x0():
    g = GrowthFunction.of((1, 3), (0.5, 1.5), (-2, 1))
    ts = [cmp.blowup_time_bound(g, x).t_star for x in (2, 3, 5, 10)]
    assert all(a > b for a, b in zip(ts, ts[1:]))


def test_bound_errors():
    with pytest.raises(cmp.DivergentIntegralError):
        cmp.blowup_time_bound(GrowthFunction.of((1, 1)), 1.0)
    with pytest.raises(cmp.NoFiniteBoundError):
        cmp.blowup_time_bound(GrowthFunction.of((1, 2), (-1, 1)), 0.5)
    with pytest.raises(cmp.NoFiniteBoundError):
        cmp.blowup_time_bound(GrowthFunction.of((-1, 2)), 1.0)
    # g positive at x0 but with a zero further out
    g = GrowthFunction.of((1, 3), (-3, 2), (2.1, 1))
    with pytest.raises(cmp.NoFiniteBoundError):
        cmp.blowup_time_bound(g, 0.5)


def test_rk4_matches_bound():
    g = GrowthFunction.of((1, 2), (-1, 1))
    tr = cmp.integrate_comparison_ode(g, 2.0, 1e-3, 5.0)
    assert tr.blow_up_time == pytest.approx(math.log(2), rel=1e-6)
    # exact solution of zeta' = zeta^2 - zeta: zeta = 1 / (1 - (1 - 1/x0) e^t)
    t = np.array([0.1, 0.3, 0.6])
    z = cmp.comparison_solution(g, 2.0, t, dt=1e-3)
    np.testing.assert_allclose(z, 1 / (1 - 0.5 * np.exp(t)), rtol=1e-8)
    assert np.isnan(cmp.comparison_solution(g, 2.0, [0.8])[0])


def test_rk4_decay_stays_finite():
    g = GrowthFunction.of((-PI2, 1))
    tr = cmp.integrate_comparison_ode(g, 1.0, 1e-3, 1.0)
    assert tr.blow_up_time is None
    assert tr.values[-1] == pytest.approx(math.exp(-PI2), rel=1e-8)


# --- problem-level -----------------------------------------------------------


def test_growth_for_problem():
    p = ProblemSpec(D, drift=DriftSpec.zero(), diffusion=DiffusionSpec.power(6, 2),
                    initial=InitialProfile("scaled_phi", mass=1.0))
    g, obs, x0 = cmp.growth_for_problem(p, EIG, 1.0)
    assert obs == "phi_pairing_sq" and x0 == pytest.approx(1.0)
    assert g.terms == ((-2 * PI2, 1.0), (36.0, 2.0))
    p = ProblemSpec(D, drift=DriftSpec.power(1, 0, 2), initial=InitialProfile("sine", 20))
    g, obs, x0 = cmp.growth_for_problem(p, EIG, 0.0)
    assert obs == "phi_pairing" and x0 == pytest.approx(5 * math.pi, rel=1e-5)


def test_allen_cahn_rate():
    assert cmp.allen_cahn_energy_rate(1.0, 1.0, 1.5, eps=1.0) == pytest.approx(2.25)
    # Young's inequality: K x^(2m) <= eps x^4 + C x^2 for every x >= 0
    K, m, eps = 3.0, 1.3, 0.7
    C = cmp.young_constant(K, m, eps)
    x = np.linspace(0, 50, 100_001)
    assert (K * x ** (2 * m) <= eps * x ** 4 + C * x ** 2 + 1e-9).all()
    # and C is sharp: the gap closes somewhere
    assert (eps * x ** 4 + C * x ** 2 - K * x ** (2 * m)).min() < 1e-6 * C


def test_applicable_criteria_sets():
    p = ProblemSpec(D, drift=DriftSpec.power(1, 0, 2), diffusion=DiffusionSpec.power(0.5, 4 / 3),
                    initial=InitialProfile("sine", 5.0))
    names = [r.name for r in cmp.applicable_criteria(p, EIG, 1.0, 1.0)]
    assert "positivity_power_noise" in names and "deterministic_blowup" in names
    p = ProblemSpec(D, drift=DriftSpec.allen_cahn(), diffusion=DiffusionSpec.power(1, 1.5))
    names = [r.name for r in cmp.applicable_criteria(p, EIG, 1.0, 1.0)]
    assert "thm41" in names


def test_noise_induced_factor_two_exhibit():
    rep = cmp.check_thm33(scaled(1.0), m=2, b=4, q1=1, eig=EIG)
    assert not rep.satisfied and rep.margin == pytest.approx(8 - PI2, rel=1e-9)
    assert rep.inputs["stated_condition"] is True


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.5, 4.0))
def test_noise_assisted_without_noise_is_deterministic_branch(mass, alpha):
    r = mass ** 2
    rep = cmp.check_thm32(scaled(mass), alpha, 1.0, 0.0, 1.0, EIG)
    assert rep.satisfied == (r ** (alpha / 2) > PI2 * (1 + 1e-12)) or \
        abs(r ** (alpha / 2) - PI2) < 1e-9


def test_zero_margin_is_not_satisfied():
    rep = cmp.check_aux_ranges("thm42", {"nu": 1, "q0": 2})
    assert rep.margin == 0 and not rep.satisfied


def test_ode_from_equilibrium_stays_put():
    g = GrowthFunction.of((1, 2), (-1, 1))
    tr = cmp.integrate_comparison_ode(g, 1.0, 1e-2, 3.0)
    assert tr.blow_up_time is None and np.all(tr.values == 1.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.5, 5), st.floats(1.5, 4), st.floats(-3, 3), st.floats(1.05, 5))
def test_ode_blowup_time_equals_bound(a, p, c, mult):
    g = GrowthFunction.of((a, p), (c, 1))
    # start beyond the positive root of a r^(p-1) + c
    root = (max(-c, 0.0) / a) ** (1 / (p - 1))
    x0 = max(root * mult, 0.1)
    t_star = cmp.blowup_time_bound(g, x0).t_star
    tr = cmp.integrate_comparison_ode(g, x0, t_star / 200, 10 * t_star)
    assert tr.blow_up_time == pytest.approx(t_star, rel=1e-3)
