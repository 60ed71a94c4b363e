"""Time stepping for the stochastic reaction-diffusion families.

    du = (nu * Lap u + f(u)) dt + sigma(u) dW,   u = 0 on the boundary.

Two schemes are available.  ``semi_implicit`` treats the (linear) Laplacian
implicitly and everything else explicitly, one tridiagonal solve per step.
``tamed_explicit`` is fully explicit with the drift increment divided by
``1 + dt * |drift|_inf``; it is the only scheme for the p-Laplacian.

Paths are advanced in blocks: a block of ``P`` paths is a ``(P, n)`` array,
each row driven by its own random stream.  A path that crosses the blow-up
threshold (or produces a non-finite value) is frozen at zero and stops
contributing samples.  Nothing is clipped: negative values are allowed so
that positivity can be observed rather than imposed.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .grid import Domain1D, Field, TridiagonalSolver, _centered_gradient, _lap, _p_lap
from .noise import CovarianceOperator, Kernel, assemble, path_rng
from .spectral import EigenPair, analytic_eigenpair

__all__ = [
    "DriftSpec",
    "DiffusionSpec",
    "Operator",
    "InitialProfile",
    "ProblemSpec",
    "SolverConfig",
    "PathResult",
    "OBSERVABLES",
    "drift_eval",
    "diffusion_apply",
    "step",
    "simulate_path",
    "simulate_block",
]

OBSERVABLES = ("phi_pairing", "phi_pairing_sq", "l2sq", "l4_4", "sup", "neg_l2sq", "neg_l1")

DRIFT_FAMILIES = ("power", "fujita", "allen_cahn", "power_decay", "zero")
DIFFUSION_FAMILIES = ("power", "gradient", "zero")
OPERATORS = ("laplacian", "p_laplacian")
PROFILES = ("sine", "scaled_phi", "bump", "constant")
SCHEMES = ("semi_implicit", "tamed_explicit")


def _signed_power(u, p):
    if float(p).is_integer():
        return u ** int(p)
    return np.sign(u) * np.abs(u) ** p


def _odd_power(u, p):
    if p == 1:
        return u
    return np.sign(u) * np.abs(u) ** p


@dataclass(frozen=True)
class DriftSpec:
    """Reaction term ``f(u)``.

    power        ``a1 * u^beta + a2 * u`` (``sgn(u)|u|^beta`` for non-integer beta)
    fujita       ``|u|^(1 + alpha)``
    allen_cahn   ``a * u (1 - u^2)``
    power_decay  ``-sgn(u)|u|^gamma``
    zero         ``0``
    """

    family: str = "zero"
    a1: float = 0.0
    a2: float = 0.0
    beta: float = 1.0
    alpha: float = 1.0
    gamma: float = 3.0
    a: float = 1.0

    def __post_init__(self):
        if self.family not in DRIFT_FAMILIES:
            raise ValueError(f"unknown drift family {self.family!r}")
        if self.family == "power" and self.beta < 1:
            raise ValueError("power drift needs beta >= 1")
        if self.family == "fujita" and not self.alpha > 0:
            raise ValueError("fujita drift needs alpha > 0")
        if self.family == "power_decay" and not self.gamma > 1:
            raise ValueError("power_decay drift needs gamma > 1")

    @classmethod
    def power(cls, a1, a2=0.0, beta=2.0):
        return cls("power", a1=a1, a2=a2, beta=beta)

    @classmethod
    def fujita(cls, alpha):
        return cls("fujita", alpha=alpha)

    @classmethod
    def allen_cahn(cls, a=1.0):
        return cls("allen_cahn", a=a)

    @classmethod
    def power_decay(cls, gamma):
        return cls("power_decay", gamma=gamma)

    @classmethod
    def zero(cls):
        return cls("zero")

    def __call__(self, u: np.ndarray) -> np.ndarray:
        fam = self.family
        if fam == "power":
            return self.a1 * _signed_power(u, self.beta) + self.a2 * u
        if fam == "fujita":
            return np.abs(u) ** (1.0 + self.alpha)
        if fam == "allen_cahn":
            return self.a * u * (1.0 - u * u)
        if fam == "power_decay":
            return -_odd_power(u, self.gamma)
        return np.zeros_like(u)


@dataclass(frozen=True)
class DiffusionSpec:
    """Noise coefficient: ``b sgn(u)|u|^m``, ``k du/dx`` or nothing."""

    family: str = "zero"
    b: float = 0.0
    m: float = 1.0
    k: float = 0.0

    def __post_init__(self):
        if self.family not in DIFFUSION_FAMILIES:
            raise ValueError(f"unknown diffusion family {self.family!r}")
        if self.m < 1:
            raise ValueError("diffusion exponent m must be >= 1")

    @classmethod
    def power(cls, b, m=1.0):
        return cls("power", b=b, m=m)

    @classmethod
    def gradient(cls, k):
        return cls("gradient", k=k)

    @classmethod
    def zero(cls):
        return cls("zero")

    @property
    def is_zero(self) -> bool:
        return (self.family == "zero"
                or (self.family == "power" and self.b == 0)
                or (self.family == "gradient" and self.k == 0))

    def coefficient(self, u: np.ndarray, h: float) -> np.ndarray:
        if self.family == "power":
            return self.b * _odd_power(u, self.m)
        if self.family == "gradient":
            return self.k * _centered_gradient(u, h)
        return np.zeros_like(u)


@dataclass(frozen=True)
class Operator:
    type: str = "laplacian"
    nu: float = 1.0
    p: float = 2.0

    def __post_init__(self):
        if self.type not in OPERATORS:
            raise ValueError(f"unknown operator {self.type!r}")
        if not self.nu > 0:
            raise ValueError("viscosity nu must be positive")
        if self.type == "p_laplacian" and self.p < 2:
            raise ValueError("p-Laplacian needs p >= 2")

    def apply(self, u: np.ndarray, h: float) -> np.ndarray:
        if self.type == "laplacian":
            return self.nu * _lap(u, h)
        return _p_lap(u, h, self.p)


@dataclass(frozen=True)
class InitialProfile:
    """Initial datum.

    sine        ``amplitude * sin(pi x / L)``
    scaled_phi  sine profile rescaled so that ``(u0, phi) = mass`` on the grid
    bump        smooth compact bump of peak ``amplitude`` and half-width ``width``
    constant    ``amplitude`` at every interior node
    """

    profile: str = "sine"
    amplitude: float = 1.0
    mass: float = 1.0
    center: float = 0.5
    width: float = 0.25

    def __post_init__(self):
        if self.profile not in PROFILES:
            raise ValueError(f"unknown initial profile {self.profile!r}")
        if self.profile == "bump" and not self.width > 0:
            raise ValueError("bump width must be positive")

    def field(self, domain: Domain1D, eig: EigenPair | None = None) -> Field:
        x, L = domain.nodes, domain.length
        if self.profile == "sine":
            return Field(domain, self.amplitude * np.sin(np.pi * x / L))
        if self.profile == "scaled_phi":
            eig = eig or analytic_eigenpair(domain)
            s = np.sin(np.pi * x / L)
            return Field(domain, self.mass * s / (domain.h * s @ eig.phi.values))
        if self.profile == "bump":
            z = (x - self.center * L) / self.width
            vals = np.zeros_like(x)
            inside = np.abs(z) < 1
            vals[inside] = self.amplitude * np.exp(1.0 - 1.0 / (1.0 - z[inside] ** 2))
            return Field(domain, vals)
        return Field.constant(domain, self.amplitude)


@dataclass(frozen=True)
class ProblemSpec:
    domain: Domain1D
    drift: DriftSpec = DriftSpec()
    diffusion: DiffusionSpec = DiffusionSpec()
    kernel: Kernel = Kernel("constant")
    initial: InitialProfile = InitialProfile()
    operator: Operator = Operator()

    def eigenpair(self) -> EigenPair:
        return analytic_eigenpair(self.domain)

    def initial_field(self) -> Field:
        return self.initial.field(self.domain, self.eigenpair())


@dataclass(frozen=True)
class SolverConfig:
    dt: float = 1e-4
    t_max: float = 1.0
    blowup_threshold: float = 1e6
    scheme: str = "semi_implicit"
    record_stride: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if not self.dt < self.t_max:
            raise ValueError("dt must be smaller than t_max")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ValueError("record_stride must be a positive integer")
        if not self.blowup_threshold > 0:
            raise ValueError("blowup_threshold must be positive")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))

    @property
    def record_times(self) -> np.ndarray:
        stride = int(self.record_stride)
        return self.dt * stride * np.arange(self.n_steps // stride + 1)


@dataclass(eq=False)
class PathResult:
    times: np.ndarray
    observables: dict = field(repr=False)
    blow_up_time: float | None = None
    exploded: bool = False

    def __getitem__(self, name):
        return self.observables[name]


def drift_eval(spec: DriftSpec, u: Field) -> Field:
    return Field(u.domain, spec(u.values))


def diffusion_apply(spec: DiffusionSpec, u: Field, dW: Field) -> Field:
    if u.domain != dW.domain:
        raise ValueError("noise increment lives on a different domain")
    return Field(u.domain, spec.coefficient(u.values, u.domain.h) * dW.values)


class _Engine:
    """Everything about a (problem, config) pair that does not change in time."""

    def __init__(self, problem: ProblemSpec, config: SolverConfig):
        if problem.operator.type == "p_laplacian" and config.scheme != "tamed_explicit":
            raise ValueError("the p-Laplacian operator requires scheme 'tamed_explicit'")
        self.problem = problem
        self.config = config
        self.h = problem.domain.h
        self.phi = problem.eigenpair().phi.values
        self.noisy = not problem.diffusion.is_zero
        self.cov: CovarianceOperator | None = (
            assemble(problem.kernel, problem.domain) if self.noisy else None)
        if config.scheme == "semi_implicit":
            self.solver = TridiagonalSolver(problem.domain, config.dt * problem.operator.nu)

    def advance(self, U: np.ndarray, dW: np.ndarray | None) -> np.ndarray:
        dt, prob = self.config.dt, self.problem
        noise = 0.0 if dW is None else prob.diffusion.coefficient(U, self.h) * dW
        if self.config.scheme == "semi_implicit":
            return self.solver.solve(U + dt * prob.drift(U) + noise)
        A = prob.operator.apply(U, self.h) + prob.drift(U)
        tame = 1.0 + dt * np.max(np.abs(A), axis=-1, keepdims=True)
        return U + dt * A / tame + noise

    def observe(self, U: np.ndarray) -> np.ndarray:
        h = self.h
        pair = h * (U @ self.phi)
        sq = U * U
        neg = np.maximum(-U, 0.0)
        return np.stack([
            pair,
            pair * pair,
            h * sq.sum(axis=-1),
            h * (sq * sq).sum(axis=-1),
            np.abs(U).max(axis=-1),
            h * (neg * neg).sum(axis=-1),
            h * neg.sum(axis=-1),
        ], axis=-1)


@functools.lru_cache(maxsize=16)
def _engine(problem: ProblemSpec, config: SolverConfig) -> _Engine:
    return _Engine(problem, config)


def step(u: Field, problem: ProblemSpec, config: SolverConfig,
         rng: np.random.Generator) -> Field:
    """Advance one time step.  A non-finite result marks the field as exploded."""
    eng = _engine(problem, config)
    dW = None
    if eng.noisy:
        dW = eng.cov.increments(rng.standard_normal(eng.cov.rank), config.dt)
    with np.errstate(over="ignore", invalid="ignore"):
        return Field(u.domain, eng.advance(u.values, dW))


@dataclass(eq=False)
class BlockResult:
    times: np.ndarray
    obs: np.ndarray  # (paths, records, observables); NaN after blow-up
    blow_up_times: np.ndarray  # NaN where no blow-up


def simulate_block(problem: ProblemSpec, config: SolverConfig, seeds) -> BlockResult:
    """Simulate one path per ``(base_seed, index)`` pair in ``seeds`` as a single batch.

    The arithmetic done for a row never depends on the other rows' values,
    only on the block size, so a fixed block partition gives reproducible
    results whatever the execution schedule.
    """
    eng = _engine(problem, config)
    u0 = problem.initial_field()
    thr = config.blowup_threshold
    if not thr > np.max(np.abs(u0.values)):
        raise ValueError("blowup_threshold must exceed the initial sup-norm")
    streams = [path_rng(s, i) for s, i in seeds]
    P, n = len(streams), problem.domain.n
    n_steps, stride, dt = config.n_steps, int(config.record_stride), config.dt
    times = config.record_times
    obs = np.full((P, len(times), len(OBSERVABLES)), np.nan)
    blow = np.full(P, np.nan)
    alive = np.ones(P, dtype=bool)

    U = np.tile(u0.values, (P, 1))
    obs[:, 0] = eng.observe(U)
    rank = eng.cov.rank if eng.noisy else 0
    chunk = max(1, min(512, (1 << 21) // max(1, P * rank)))
    Z = None
    k = 0
    with np.errstate(over="ignore", invalid="ignore"):
        while k < n_steps:
            todo = min(chunk, n_steps - k)
            if eng.noisy:
                Z = np.stack([s.standard_normal((todo, rank)) for s in streams])
            for j in range(todo):
                dW = eng.cov.increments(Z[:, j], dt) if eng.noisy else None
                U = eng.advance(U, dW)
                k += 1
                sup = np.abs(U).max(axis=-1)
                bad = alive & ~(sup <= thr)  # catches NaN as well
                if bad.any():
                    blow[bad] = k * dt
                    alive &= ~bad
                if not alive.all():
                    U[~alive] = 0.0
                if k % stride == 0:
                    rec = eng.observe(U)
                    rec[~alive] = np.nan
                    obs[:, k // stride] = rec
                if not alive.any():
                    k = n_steps
                    break
    return BlockResult(times, obs, blow)


def simulate_path(problem: ProblemSpec, config: SolverConfig, seed: int = 0) -> PathResult:
    """Simulate a single path driven by stream ``(seed, 0)``.

    Sampling stops at the first blow-up; ``blow_up_time`` is the step time at
    which the sup-norm first exceeded the threshold or became non-finite.
    """
    res = simulate_block(problem, config, [(seed, 0)])
    bt = res.blow_up_times[0]
    valid = ~np.isnan(res.obs[0, :, 0])
    observables = {name: res.obs[0, valid, i] for i, name in enumerate(OBSERVABLES)}
    exploded = bool(np.isfinite(bt))
    return PathResult(res.times[valid], observables,
                      float(bt) if exploded else None, exploded)
