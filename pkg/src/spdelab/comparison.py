"""Blow-up / positivity / global-existence criteria and comparison ODEs.

Pairing the equation with the principal eigenfunction and applying Jensen's
inequality turns each blow-up statement into a scalar differential
inequality ``d zeta/dt >= g(zeta)`` with a power-sum right-hand side
``g(r) = sum_i c_i r^p_i``.  The equality ODE blows up at exactly
``int_{x0}^inf dr / g(r)``, which bounds the blow-up time of the moment.

Every checker returns a :class:`CriterionReport` whose ``margin`` is
positive exactly when the (strict) criterion holds.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate, optimize

from .grid import Field, inner_product
from .spectral import EigenPair

__all__ = [
    "GrowthFunction",
    "CriterionReport",
    "BoundResult",
    "ComparisonTrajectory",
    "NoFiniteBoundError",
    "DivergentIntegralError",
    "check_fujita",
    "check_thm31",
    "check_thm32",
    "check_thm33",
    "check_positivity_22",
    "check_aux_ranges",
    "check_NS_power",
    "blowup_time_bound",
    "integrate_comparison_ode",
    "comparison_solution",
    "growth_for_problem",
    "applicable_criteria",
    "young_constant",
    "allen_cahn_energy_rate",
]


class NoFiniteBoundError(ValueError):
    """``g`` is not positive on the whole half-line ``[x0, inf)``."""


class DivergentIntegralError(ValueError):
    """Leading exponent <= 1: ``int dr / g`` diverges at infinity."""


@dataclass(frozen=True)
class GrowthFunction:
    """``g(r) = sum(c * r**p for c, p in terms)`` with exponents ``p >= 1``.

    Terms with equal exponents are merged and zero coefficients dropped.
    """

    terms: tuple

    def __post_init__(self):
        merged: dict[float, float] = {}
        for c, p in self.terms:
            p = float(p)
            if p < 1:
                raise ValueError(f"exponents must be >= 1, got {p}")
            merged[p] = merged.get(p, 0.0) + float(c)
        terms = tuple(sorted(((c, p) for p, c in merged.items() if c != 0),
                             key=lambda t: t[1]))
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, *terms) -> "GrowthFunction":
        return cls(tuple(terms))

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for c, p in self.terms:
            out = out + c * (r ** p if p.is_integer() else np.sign(r) * np.abs(r) ** p)
        return out[()] if out.ndim == 0 else out

    @property
    def leading(self) -> tuple[float, float]:
        if not self.terms:
            return 0.0, 1.0
        return self.terms[-1]

    def scaled(self, factor: float) -> "GrowthFunction":
        return GrowthFunction(tuple((factor * c, p) for c, p in self.terms))

    def describe(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c:.12g}*r^{p:g}" for c, p in reversed(self.terms))


@dataclass
class CriterionReport:
    name: str
    satisfied: bool
    margin: float
    inputs: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BoundResult:
    t_star: float
    abs_error_estimate: float
    method: str  # "quadrature" | "closed_form"


def _report(name, margin, inputs, notes=()):
    margin = float(margin)
    return CriterionReport(name, bool(margin > 0), margin, dict(inputs), list(notes))


def _pairing(u0: Field, eig: EigenPair) -> float:
    return inner_product(u0, eig.phi)


def check_fujita(u0: Field, alpha: float, eig: EigenPair) -> CriterionReport:
    """Supercritical initial mass for ``u_t = Lap u + u^(1+alpha)``: ``(u0, phi) > lambda1^(1/alpha)``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    xi0 = _pairing(u0, eig)
    threshold = eig.lambda1 ** (1.0 / alpha)
    return _report("fujita_threshold", xi0 - threshold,
                   {"alpha": alpha, "pairing": xi0, "threshold": threshold,
                    "lambda1": eig.lambda1})


def check_thm31(u0: Field, a1: float, a2: float, beta: float, eig: EigenPair) -> CriterionReport:
    """Deterministic-type blow-up for ``f >= a1 u^beta + a2 u``.

    With ``lambda1 >= a2`` the operative test is positivity of
    ``g(r) = a1 r^beta - (lambda1 - a2) r`` at ``r = (u0, phi)``, i.e. the
    pairing exceeds the positive root ``((lambda1 - a2)/a1)^(1/(beta-1))``.
    The two other thresholds in circulation for this result are evaluated
    and reported in the notes.  With ``lambda1 < a2`` any nonnegative,
    nontrivial datum qualifies.
    """
    if not a1 > 0:
        raise ValueError("a1 must be positive")
    if not beta > 1:
        raise ValueError("beta must exceed 1")
    lam = eig.lambda1
    xi0 = _pairing(u0, eig)
    inputs = {"a1": a1, "a2": a2, "beta": beta, "pairing": xi0, "lambda1": lam}
    if lam < a2:
        vals = u0.values
        margin = float(vals.max()) if vals.min() >= 0 else float(vals.min())
        return _report("deterministic_blowup", margin, inputs,
                       ["lambda1 < a2: requires u0 >= 0 and u0 not identically zero"])
    root = ((lam - a2) / a1) ** (1.0 / (beta - 1.0))
    alt_exp = ((lam - a2) / a1) ** (1.0 / beta)
    alt_scaled = (a1 * lam) ** (1.0 / (beta - 1.0))
    g0 = float(GrowthFunction.of((a1, beta), (a2 - lam, 1.0))(xi0))
    notes = [
        f"operative: g(pairing) = {g0:.12g}, root of g = {root:.12g}",
        f"threshold ((lambda1-a2)/a1)^(1/beta) = {alt_exp:.12g}: "
        f"{'passes' if xi0 > alt_exp else 'fails'}",
        f"threshold (a1*lambda1)^(1/(beta-1)) = {alt_scaled:.12g}: "
        f"{'passes' if xi0 > alt_scaled else 'fails'}",
    ]
    inputs["root"] = root
    return _report("deterministic_blowup", xi0 - root, inputs, notes)


def check_thm32(u0: Field, alpha: float, m: float, b: float, q1: float,
                eig: EigenPair) -> CriterionReport:
    """Noise-assisted blow-up for ``du = (Lap u + |u|^(1+alpha))dt + b u^m dW``.

    Tests ``r^(1+alpha/2) + (b^2 q1/2) r^m - lambda1 r > 0`` at ``r = (u0, phi)^2``.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if not 1 <= m < 1 + alpha / 2:
        raise ValueError(f"need 1 <= m < 1 + alpha/2, got m={m}, alpha={alpha}")
    if q1 < 0:
        raise ValueError("q1 must be nonnegative")
    lam = eig.lambda1
    r = _pairing(u0, eig) ** 2
    expr = r ** (1 + alpha / 2) + 0.5 * b * b * q1 * r ** m - lam * r
    return _report("noise_assisted_blowup", expr,
                   {"alpha": alpha, "m": m, "b": b, "q1": q1, "r": r, "lambda1": lam})


def check_thm33(u0: Field, m: float, b: float, q1: float, eig: EigenPair) -> CriterionReport:
    """Noise-induced blow-up for ``du = (Lap u + f)dt + b u^m dW`` with ``f >= 0``.

    Satisfied when ``(b^2 q1/2) eta0^m - lambda1 eta0 > 0`` with
    ``eta0 = (u0, phi)^2``, the condition under which the comparison ODE
    ``eta' = q1 b^2 eta^m - 2 lambda1 eta`` grows.  The weaker stated
    threshold ``(u0, phi)^(2(m-1)) >= lambda1/(q1 b^2)`` is reported in the
    notes; the two differ by a factor of two.
    """
    if not m > 1:
        raise ValueError("m must exceed 1")
    if b == 0:
        raise ValueError("b must be nonzero")
    if not q1 > 0:
        raise ValueError("q1 must be positive")
    lam = eig.lambda1
    xi0 = _pairing(u0, eig)
    eta0 = xi0 * xi0
    operative = 0.5 * b * b * q1 * eta0 ** m - lam * eta0
    stated_ok = xi0 ** (2 * (m - 1)) >= lam / (q1 * b * b) if xi0 > 0 else False
    notes = [f"stated threshold (u0,phi)^(2(m-1)) >= lambda1/(q1 b^2): "
             f"{'passes' if stated_ok else 'fails'}"]
    if stated_ok != (operative > 0):
        notes.append("stated and operative verdicts disagree (factor-2 gap)")
    return _report("noise_induced_blowup", operative,
                   {"m": m, "b": b, "q1": q1, "eta0": eta0, "lambda1": lam,
                    "stated_condition": bool(stated_ok)}, notes)


def check_positivity_22(a1: float, a2: float, beta: float, b: float, m: float,
                        q0: float) -> CriterionReport:
    """Positivity with reaction ``a1 u^beta + a2 u`` and noise ``b u^m``.

    Needs ``1 <= m < (1 + beta)/2`` and ``a1`` of the sign of ``(-1)^beta``
    (positive for even, negative for odd integer beta).  The noise bound
    ``(q0/2) sigma^2 <= b1 u^(2m)`` holds with ``b1 = q0 b^2 / 2``.
    """
    notes = [f"noise bound holds with b1 = q0*b^2/2 = {0.5 * q0 * b * b:.12g}, b2 = 0"]
    if float(beta).is_integer():
        want = 1 if int(beta) % 2 == 0 else -1
        sign_ok = a1 * want > 0
        notes.append(f"(-1)^beta = {want:+d}, needs a1 {'>' if want > 0 else '<'} 0")
    else:
        sign_ok = a1 > 0
        notes.append("non-integer beta: (-1)^beta is not real; odd extension "
                     "sgn(u)|u|^beta is used and a1 > 0 required")
        if a1 < 0:
            notes.append("ambiguous: non-integer beta with a1 < 0")
    upper = 0.5 * (1 + beta) - m
    if m < 1:
        margin = m - 1
    elif not sign_ok:
        margin = -abs(a1)
    else:
        margin = upper
    return _report("positivity_power_noise", margin,
                   {"a1": a1, "a2": a2, "beta": beta, "b": b, "m": m, "q0": q0,
                    "m_upper": 0.5 * (1 + beta)}, notes)


_AUX_RULES = {
    # kind: (required params, margin function, description)
    "thm22": (("p", "m", "n"), lambda p, m, n: p - max(2 * m, n),
              "p-Laplacian positivity: p > max(2m, n)"),
    "thm23": (("m", "n"), lambda m, n: 2 * m - n,
              "positivity via beta_eps: 2m > n"),
    "thm41": (("m",), lambda m: min(m - 1, 2 - m),
              "Allen-Cahn global existence: 1 < m < 2"),
    "cor41": (("m", "gamma"), lambda m, gamma: min(gamma - 1, m - 1, 0.5 * (gamma + 1) - m),
              "power-decay global existence: gamma > 1, 1 < m < (gamma+1)/2"),
    "thm42": (("nu", "q0"), lambda nu, q0: 2 * nu - q0,
              "gradient-noise global existence: 2 nu - q0 > 0"),
}


def check_aux_ranges(kind: str, params: dict) -> CriterionReport:
    """Parameter-range conditions of the remaining positivity/global-existence results."""
    if kind not in _AUX_RULES:
        raise ValueError(f"unknown criterion kind {kind!r}; expected one of {sorted(_AUX_RULES)}")
    names, rule, text = _AUX_RULES[kind]
    missing = [k for k in names if k not in params]
    if missing:
        raise ValueError(f"{kind} needs parameters {missing}")
    args = [float(params[k]) for k in names]
    return _report(kind, rule(*args), {k: params[k] for k in names}, [text])


def check_NS_power(family: str, *, u0: Field, eig: EigenPair, a1: float = 1.0,
                   beta: float = 2.0, b: float = 0.0, m: float = 1.0,
                   q1: float = 0.0) -> CriterionReport:
    """Explosion conditions specialised to power laws.

    ``N``: reaction bounded below by ``F(r) = a1 r^beta``; needs ``beta > 1``
    and ``(u0, phi) > M1`` with ``F(M1) = lambda1 M1``.
    ``S``: noise with ``G(s) = (b^2/2) s^m``; needs ``q1 > 0``, ``m > 1`` and
    ``(u0, phi) > sqrt(M2)`` with ``q1 G(M2) = lambda1 M2``.
    """
    lam = eig.lambda1
    xi0 = _pairing(u0, eig)
    if family == "N":
        inputs = {"a1": a1, "beta": beta, "pairing": xi0, "lambda1": lam}
        if not beta > 1:
            return _report("N_conditions", min(beta - 1, 0.0), inputs,
                           ["beta <= 1: integral of dr/(F(r) - lambda1 r) diverges"])
        if not a1 > 0:
            return _report("N_conditions", -abs(a1), inputs, ["F must be positive: a1 > 0"])
        M1 = (lam / a1) ** (1.0 / (beta - 1.0)) * (1 + 1e-9)
        inputs["M1"] = M1
        return _report("N_conditions", xi0 - M1, inputs)
    if family == "S":
        inputs = {"b": b, "m": m, "q1": q1, "pairing": xi0, "lambda1": lam}
        if not q1 > 0:
            return _report("S_conditions", min(q1, 0.0), inputs,
                           ["q1 = 0: correlation is not bounded below"])
        if not m > 1:
            return _report("S_conditions", m - 1, inputs,
                           ["m <= 1: integral of dr/(q1 G(r) - lambda1 r) diverges"])
        if b == 0:
            return _report("S_conditions", 0.0, inputs, ["b = 0: no noise"])
        M2 = (2 * lam / (q1 * b * b)) ** (1.0 / (m - 1.0)) * (1 + 1e-9)
        inputs["M2"] = M2
        return _report("S_conditions", xi0 - math.sqrt(M2), inputs,
                       [f"pairing > M2 (unsquared form): {'passes' if xi0 > M2 else 'fails'}"])
    raise ValueError(f"family must be 'N' or 'S', got {family!r}")


# --- blow-up time bounds ------------------------------------------------------


def _largest_root(g: GrowthFunction, lo: float, hi: float) -> float | None:
    """Largest zero of ``g(r)/r`` in ``[lo, hi]`` located by bracketing + bisection."""
    grid = np.geomspace(lo, hi, 4001)
    vals = g(grid) / grid
    sign = np.sign(vals)
    change = np.nonzero(sign[:-1] * sign[1:] <= 0)[0]
    if change.size == 0:
        return None
    i = change[-1]
    if vals[i + 1] == 0:
        return float(grid[i + 1])
    if vals[i] == 0:
        return float(grid[i])
    return optimize.bisect(lambda r: g(r) / r, grid[i], grid[i + 1], xtol=1e-14, rtol=1e-14)


def _dominance_radius(g: GrowthFunction) -> float:
    c, p = g.leading
    others = g.terms[:-1]
    if not others:
        return 1.0
    S = sum(abs(ci) for ci, _ in others)
    q = max(pi for _, pi in others)
    return max(1.0, (S / c) ** (1.0 / (p - q))) * (1 + 1e-9)


def blowup_time_bound(g: GrowthFunction, x0: float, method: str = "auto") -> BoundResult:
    """Blow-up time ``int_{x0}^inf dr / g(r)`` of ``zeta' = g(zeta)``, ``zeta(0) = x0``.

    ``method="auto"`` uses the closed form for ``a r^2 - c r`` and adaptive
    Gauss-Kronrod quadrature after ``s = 1/r`` otherwise.
    """
    c_lead, p_lead = g.leading
    if not p_lead > 1:
        raise DivergentIntegralError(f"leading exponent {p_lead} <= 1: {g.describe()}")
    if not c_lead > 0:
        raise NoFiniteBoundError(f"leading coefficient must be positive: {g.describe()}")
    if not x0 > 0:
        raise NoFiniteBoundError("initial value must be positive")
    if not g(x0) > 0:
        raise NoFiniteBoundError(f"g({x0}) = {g(x0)} <= 0")
    R = _dominance_radius(g)
    if x0 < R:
        root = _largest_root(g, x0, R)
        if root is not None and root >= x0:
            raise NoFiniteBoundError(f"g has a zero at r = {root} >= x0 = {x0}")

    two_term = (len(g.terms) == 2 and g.terms[0][1] == 1.0 and g.terms[1][1] == 2.0)
    if method == "auto":
        method = "closed_form" if two_term else "quadrature"
    if method == "closed_form":
        if not (two_term or (len(g.terms) == 1 and p_lead == 2.0)):
            raise ValueError("closed form only applies to a r^2 - c r")
        a = c_lead
        c = -g.terms[0][0] if two_term else 0.0
        t = 1.0 / (a * x0) if c == 0 else -math.log1p(-c / (a * x0)) / c
        return BoundResult(t, 4 * np.finfo(float).eps * abs(t), "closed_form")
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")

    # s = 1/r: dr/g(r) = s^(p-2) ds / sum_i c_i s^(p - p_i), finite-or-integrable at s = 0
    terms = g.terms

    def integrand(s):
        den = 0.0
        for c, p in terms:
            den += c * s ** (p_lead - p)
        return s ** (p_lead - 2.0) / den

    val, err = integrate.quad(integrand, 0.0, 1.0 / x0, epsabs=1e-12, epsrel=1e-12, limit=500)
    if err > 1e-8:
        raise RuntimeError(f"quadrature error estimate {err:.3g} exceeds 1e-8")
    return BoundResult(float(val), float(err), "quadrature")


@dataclass(eq=False)
class ComparisonTrajectory:
    times: np.ndarray
    values: np.ndarray
    blow_up_time: float | None


def _rk4_step(g, t, y, h):
    k1 = g(y)
    k2 = g(y + 0.5 * h * k1)
    k3 = g(y + 0.5 * h * k2)
    k4 = g(y + h * k3)
    return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _step_size(g, y, dt, max_rel):
    rate = abs(float(g(y)))
    if rate == 0 or y == 0:
        return dt
    return min(dt, max_rel * abs(y) / rate)


def integrate_comparison_ode(g: GrowthFunction, x0: float, dt: float, t_max: float,
                             cap: float = 1e12, max_rel: float = 0.05) -> ComparisonTrajectory:
    """Classical RK4 for ``zeta' = g(zeta)`` from ``zeta(0) = x0``.

    The step is ``dt`` capped so that ``zeta`` changes by at most ``max_rel``
    (relative) per step, which keeps the blow-up time accurate when the
    solution runs off to infinity.  Integration stops when ``zeta > cap``
    (recorded as the blow-up time) or at ``t_max``.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    t, y = 0.0, float(x0)
    ts, ys = [t], [y]
    blow = None
    while t < t_max:
        h = min(_step_size(g, y, dt, max_rel), t_max - t)
        y = float(_rk4_step(g, t, y, h))
        t += h
        ts.append(t)
        ys.append(y)
        if not np.isfinite(y) or y > cap:
            blow = t
            break
        if t_max - t < 1e-14 * max(1.0, t_max):
            break
    return ComparisonTrajectory(np.array(ts), np.array(ys), blow)


def comparison_solution(g: GrowthFunction, x0: float, times, dt: float = 1e-4,
                        cap: float = 1e12, max_rel: float = 0.05) -> np.ndarray:
    """Values of the equality solution at the given (sorted) times; NaN once it has blown up."""
    times = np.asarray(times, dtype=float)
    out = np.full(times.shape, np.nan)
    t, y = 0.0, float(x0)
    for idx, target in enumerate(times):
        while t < target - 1e-15 * max(1.0, target):
            h = min(_step_size(g, y, dt, max_rel), target - t)
            y = float(_rk4_step(g, t, y, h))
            t = t + h if target - (t + h) > 1e-15 * max(1.0, target) else target
            if not np.isfinite(y) or y > cap:
                return out
        out[idx] = y
    return out


# --- problem-level helpers ----------------------------------------------------


def growth_for_problem(problem, eig: EigenPair, q1: float):
    """Comparison ODE ``(g, observable, x0)`` implied by a configured problem.

    power drift      -> first moment of ``(u, phi)``: ``a1 r^beta + (a2 - lambda1) r``
    fujita drift     -> second moment: ``2 r^(1+alpha/2) + q1 b^2 r^m - 2 lambda1 r``
    zero drift       -> second moment: ``q1 b^2 r^m - 2 lambda1 r`` (or pure decay)
    """
    lam = eig.lambda1
    drift, diff = problem.drift, problem.diffusion
    u0 = problem.initial_field()
    xi0 = _pairing(u0, eig)
    power_noise = diff.family == "power" and diff.b != 0
    if drift.family == "power":
        g = GrowthFunction.of((drift.a1, drift.beta), (drift.a2 - lam, 1.0))
        return g, "phi_pairing", xi0
    if drift.family == "fujita":
        terms = [(2.0, 1 + drift.alpha / 2), (-2 * lam, 1.0)]
        if power_noise:
            terms.append((q1 * diff.b ** 2, diff.m))
        return GrowthFunction(tuple(terms)), "phi_pairing_sq", xi0 * xi0
    if drift.family == "zero":
        if power_noise:
            g = GrowthFunction.of((q1 * diff.b ** 2, diff.m), (-2 * lam, 1.0))
            return g, "phi_pairing_sq", xi0 * xi0
        return GrowthFunction.of((-lam, 1.0)), "phi_pairing", xi0
    raise ValueError(f"no comparison ODE for drift family {drift.family!r}")


def young_constant(K: float, m: float, eps: float) -> float:
    """Constant ``C`` in ``K |v|_{2m}^{2m} <= eps |v|_4^4 + C |v|_2^2`` for ``1 < m < 2``.

    Holder interpolation (constant one) gives
    ``|v|_{2m}^{2m} <= |v|_2^(4-2m) |v|_4^(4m-4)``; Young's inequality with
    exponents ``P = 1/(m-1)`` and ``Q = 1/(2-m)`` then yields
    ``C = (eps P)^(-Q/P) K^Q / Q``.
    """
    if not 1 < m < 2:
        raise ValueError("need 1 < m < 2")
    if not eps > 0:
        raise ValueError("eps must be positive")
    P = 1.0 / (m - 1.0)
    Q = 1.0 / (2.0 - m)
    return (eps * P) ** (-Q / P) * K ** Q / Q


def allen_cahn_energy_rate(q0: float, b: float, m: float, eps: float = 1.0) -> float:
    """Rate ``C`` with ``L |v|^2 <= C |v|^2`` for ``du = (Lap u + u - u^3)dt + b u^m dW``.

    The generator is bounded by ``2|v|^2 - 2|v|_4^4 + q0 b^2 |v|_{2m}^{2m}``;
    absorbing the noise term with :func:`young_constant` needs ``eps <= 2`` and
    leaves ``C = 2 + C(eps)``.
    """
    if eps > 2:
        raise ValueError("eps must not exceed 2 for the quartic term to absorb it")
    return 2.0 + young_constant(q0 * b * b, m, eps)


def _guarded(name, fn, *args, **kwargs) -> CriterionReport:
    try:
        return fn(*args, **kwargs)
    except ValueError as exc:
        return CriterionReport(name, False, 0.0, {}, [f"not applicable: {exc}"])


def applicable_criteria(problem, eig: EigenPair, q0: float, q1: float) -> list[CriterionReport]:
    """Every criterion whose hypotheses concern the configured drift/noise/operator."""
    drift, diff, op = problem.drift, problem.diffusion, problem.operator
    u0 = problem.initial_field()
    b = diff.b if diff.family == "power" else 0.0
    m = diff.m if diff.family == "power" else 1.0
    out = []
    if drift.family == "power":
        out.append(_guarded("deterministic_blowup", check_thm31, u0, drift.a1, drift.a2,
                            drift.beta, eig))
        out.append(check_positivity_22(drift.a1, drift.a2, drift.beta, b, m, q0))
        out.append(check_NS_power("N", u0=u0, eig=eig, a1=drift.a1, beta=drift.beta))
        if drift.a1 == 1 and drift.a2 == 0 and drift.beta > 1:
            out.append(check_fujita(u0, drift.beta - 1, eig))
    if drift.family == "fujita":
        out.append(check_fujita(u0, drift.alpha, eig))
        out.append(_guarded("noise_assisted_blowup", check_thm32, u0, drift.alpha, m, b, q1, eig))
    if diff.family == "power" and drift.family in ("fujita", "zero"):
        out.append(check_aux_ranges("thm23", {"m": m, "n": 1}))
        out.append(_guarded("noise_induced_blowup", check_thm33, u0, m, b, q1, eig))
    if diff.family == "power" and m > 1:
        out.append(check_NS_power("S", u0=u0, eig=eig, b=b, m=m, q1=q1))
    if drift.family == "allen_cahn" and diff.family == "power":
        out.append(check_aux_ranges("thm41", {"m": m}))
    if drift.family == "power_decay" and diff.family == "power":
        out.append(check_aux_ranges("cor41", {"m": m, "gamma": drift.gamma}))
    if diff.family == "gradient":
        out.append(check_aux_ranges("thm42", {"nu": op.nu, "q0": diff.k ** 2 * q0}))
    if op.type == "p_laplacian":
        out.append(check_aux_ranges("thm22", {"p": op.p, "m": m, "n": 1}))
    return out
