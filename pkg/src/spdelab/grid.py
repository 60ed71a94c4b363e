"""Spatial grid, fields and discrete operators on a Dirichlet interval.

The domain ``(0, L)`` is covered by ``n`` interior nodes ``x_i = i*h`` with
``h = L/(n+1)``.  Boundary values are identically zero and never stored.
Integrals use the midpoint-type rule ``h * sum(...)``, under which the
three-point Laplacian is self-adjoint.

Also collected here are the regularized negative-part functionals used in
positivity arguments: the C^2 quartic smoothing ``k_eps`` of ``(r^-)^2`` and
the C^infinity mollified functional ``beta_eps`` of ``r^-``.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.linalg import lapack

__all__ = [
    "Domain1D",
    "Field",
    "MollifierParams",
    "TridiagonalSolver",
    "laplacian_apply",
    "p_laplacian_apply",
    "inner_product",
    "lp_norm",
    "sup_norm",
    "negative_part_mass",
    "k_eps",
    "k_eps_d1",
    "k_eps_d2",
    "mollifier",
    "mollifier_constant",
    "rho_eps",
    "beta_eps",
    "beta_eps_d2",
    "c_hat",
]


@dataclass(frozen=True)
class Domain1D:
    """Interval ``(0, length)`` with ``n`` equispaced interior nodes."""

    length: float
    n: int

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"domain length must be positive, got {self.length}")
        if int(self.n) != self.n or self.n < 3:
            raise ValueError(f"need at least 3 interior nodes, got {self.n}")
        object.__setattr__(self, "length", float(self.length))
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self) -> float:
        return self.length / (self.n + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(1, self.n + 1)


@dataclass(frozen=True, eq=False)
class Field:
    """Real values on the interior nodes of a domain.

    The array is copied and made read-only on construction so fields can be
    shared freely.
    """

    domain: Domain1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (self.domain.n,):
            raise ValueError(
                f"field needs {self.domain.n} values, got shape {values.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, domain: Domain1D, func) -> "Field":
        return cls(domain, func(domain.nodes))

    @classmethod
    def zeros(cls, domain: Domain1D) -> "Field":
        return cls(domain, np.zeros(domain.n))

    @classmethod
    def constant(cls, domain: Domain1D, c: float) -> "Field":
        return cls(domain, np.full(domain.n, float(c)))

    @property
    def exploded(self) -> bool:
        return not bool(np.all(np.isfinite(self.values)))

    def __len__(self):
        return self.domain.n


def _check_same(u: Field, v: Field):
    if u.domain != v.domain:
        raise ValueError(f"domain mismatch: {u.domain} vs {v.domain}")


def _lap(values: np.ndarray, h: float) -> np.ndarray:
    # works on (..., n) stacks; zero Dirichlet data outside
    padded = np.zeros(values.shape[:-1] + (values.shape[-1] + 2,))
    padded[..., 1:-1] = values
    return (padded[..., :-2] - 2.0 * values + padded[..., 2:]) / (h * h)


def _p_lap(values: np.ndarray, h: float, p: float) -> np.ndarray:
    padded = np.zeros(values.shape[:-1] + (values.shape[-1] + 2,))
    padded[..., 1:-1] = values
    g = np.diff(padded, axis=-1) / h
    if p == 2:
        flux = g
    else:
        flux = np.abs(g) ** (p - 2) * g
    return np.diff(flux, axis=-1) / h


def _centered_gradient(values: np.ndarray, h: float) -> np.ndarray:
    padded = np.zeros(values.shape[:-1] + (values.shape[-1] + 2,))
    padded[..., 1:-1] = values
    return (padded[..., 2:] - padded[..., :-2]) / (2.0 * h)


def laplacian_apply(u: Field) -> Field:
    """Three-point Laplacian ``(u[i-1] - 2u[i] + u[i+1]) / h^2`` with zero boundary values."""
    return Field(u.domain, _lap(u.values, u.domain.h))


def p_laplacian_apply(u: Field, p: float) -> Field:
    """Face-centred p-Laplacian ``div(|u'|^(p-2) u')``.

    Face gradients ``g[i+1/2] = (u[i+1] - u[i]) / h`` are formed on all
    ``n + 1`` faces, fluxes ``|g|^(p-2) g`` differenced back onto the nodes.
    At ``p = 2`` this reproduces :func:`laplacian_apply`.
    """
    if p < 2:
        raise ValueError(f"p-Laplacian needs p >= 2, got {p}")
    return Field(u.domain, _p_lap(u.values, u.domain.h, p))


def inner_product(u: Field, v: Field) -> float:
    _check_same(u, v)
    return float(u.domain.h * np.dot(u.values, v.values))


def lp_norm(u: Field, p: float) -> float:
    if p < 1:
        raise ValueError(f"L^p norm needs p >= 1, got {p}")
    return float((u.domain.h * np.sum(np.abs(u.values) ** p)) ** (1.0 / p))


def sup_norm(u: Field) -> float:
    return float(np.max(np.abs(u.values)))


def negative_part_mass(u: Field) -> tuple[float, float]:
    """Return ``(h*sum((u^-)^2), h*sum(u^-))`` with ``u^- = max(-u, 0)``."""
    neg = np.maximum(-u.values, 0.0)
    h = u.domain.h
    return float(h * np.dot(neg, neg)), float(h * np.sum(neg))


class TridiagonalSolver:
    """LU-factored ``I - c * Laplacian`` for repeated solves with many right-hand sides.

    ``c = 0`` is allowed; ``c < 0`` is not (the matrix could become singular).
    """

    def __init__(self, domain: Domain1D, c: float):
        if c < 0:
            raise ValueError("coefficient must be nonnegative")
        n, h = domain.n, domain.h
        r = c / (h * h)
        self.domain = domain
        self.c = float(c)
        dl = np.full(n - 1, -r)
        d = np.full(n, 1.0 + 2.0 * r)
        du = np.full(n - 1, -r)
        self._lu = lapack.dgttrf(dl, d, du)
        info = self._lu[-1]
        if info != 0:
            raise np.linalg.LinAlgError(f"tridiagonal factorization failed (info={info})")

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve for ``rhs`` of shape ``(n,)`` or a stack ``(k, n)``."""
        dl, d, du, du2, ipiv, _ = self._lu
        b = np.asfortranarray(np.atleast_2d(rhs).T)
        x, info = lapack.dgttrs(dl, d, du, du2, ipiv, b)
        if info != 0:
            raise np.linalg.LinAlgError(f"tridiagonal solve failed (info={info})")
        return x.T.reshape(np.shape(rhs))


# --- regularized negative part ----------------------------------------------


@dataclass(frozen=True)
class MollifierParams:
    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


def _eps(eps) -> float:
    if isinstance(eps, MollifierParams):
        return eps.epsilon
    eps = float(eps)
    if not eps > 0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    return eps


def k_eps(r, eps):
    """C^2 regularization of ``(r^-)^2``.

    ``r^2 - eps^2/6`` for ``r < -eps``; ``-(r^3/eps)(r/(2 eps) + 4/3)`` on
    ``[-eps, 0)``; zero for ``r >= 0``.
    """
    e = _eps(eps)
    r = np.asarray(r, dtype=float)
    out = np.select(
        [r < -e, r < 0],
        [r * r - e * e / 6.0, -(r ** 3 / e) * (r / (2 * e) + 4.0 / 3.0)],
        0.0,
    )
    return out[()] if out.ndim == 0 else out


def k_eps_d1(r, eps):
    e = _eps(eps)
    r = np.asarray(r, dtype=float)
    out = np.select(
        [r < -e, r < 0],
        [2.0 * r, -2.0 * r ** 3 / e ** 2 - 4.0 * r ** 2 / e],
        0.0,
    )
    return out[()] if out.ndim == 0 else out


def k_eps_d2(r, eps):
    e = _eps(eps)
    r = np.asarray(r, dtype=float)
    out = np.select(
        [r < -e, r < 0],
        [np.full_like(r, 2.0), -6.0 * r ** 2 / e ** 2 - 8.0 * r / e],
        0.0,
    )
    return out[()] if out.ndim == 0 else out


def _bump(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1
    xi = x[inside]
    out[inside] = np.exp(1.0 / (xi * xi - 1.0))
    return out


@functools.cache
def mollifier_constant() -> float:
    """Constant making the 1-D bump ``exp(1/(x^2-1))`` integrate to one."""
    val, _ = integrate.quad(lambda x: float(_bump(np.array(x))), -1.0, 1.0,
                            epsabs=1e-14, epsrel=1e-13, limit=200)
    return 1.0 / val


def mollifier(x):
    """Normalized mollifier ``J`` supported on ``(-1, 1)``."""
    return mollifier_constant() * _bump(x)


_GL_ORDER = 1024


@functools.cache
def _gauss_legendre():
    return np.polynomial.legendre.leggauss(_GL_ORDER)


def _tail_integrals(a: np.ndarray):
    """For ``a`` in ``[-1, 1]`` return ``int_a^1 J`` and ``int_a^1 J(s)(s - a) ds``."""
    x, w = _gauss_legendre()
    half = 0.5 * (1.0 - a)[:, None]
    s = 0.5 * (1.0 + a)[:, None] + half * x[None, :]
    js = mollifier(s)
    mass = (half * (w * js)).sum(axis=1)
    first = (half * (w * js * (s - a[:, None]))).sum(axis=1)
    return mass, first


def rho_eps(r, eps):
    """``rho_eps(r) = int_{r+eps}^inf J_eps``: 1 for ``r <= -2 eps``, 0 for ``r >= 0``."""
    e = _eps(eps)
    r = np.asarray(r, dtype=float)
    out = np.where(r <= -2 * e, 1.0, 0.0)
    mid = (r > -2 * e) & (r < 0)
    if np.any(mid):
        a = np.clip(r[mid] / e + 1.0, -1.0, 1.0)
        out[mid] = _tail_integrals(a)[0]
    return out[()] if out.ndim == 0 else out


def beta_eps(r, eps):
    """Smooth convex surrogate of ``r^-``: ``beta_eps(r) = int_r^inf rho_eps``.

    Outside ``[-2 eps, 0]`` the closed branches are used; inside, the single
    integral ``eps * int_{a}^{1} J(s)(s - a) ds`` with ``a = r/eps + 1`` is
    evaluated by fixed-order Gauss-Legendre quadrature.
    """
    e = _eps(eps)
    r = np.asarray(r, dtype=float)
    out = np.where(r <= -2 * e, -2 * e - r + e * c_hat(), 0.0)
    mid = (r > -2 * e) & (r < 0)
    if np.any(mid):
        a = np.clip(r[mid] / e + 1.0, -1.0, 1.0)
        out[mid] = e * _tail_integrals(a)[1]
    return out[()] if out.ndim == 0 else out


def beta_eps_d2(r, eps):
    """``beta_eps'' (r) = J_eps(r + eps)``."""
    e = _eps(eps)
    r = np.asarray(r, dtype=float)
    out = mollifier((r + e) / e) / e
    return out[()] if out.ndim == 0 else out


@functools.cache
def c_hat() -> float:
    """``int_{-2}^{0} int_{t+1}^{1} J(s) ds dt`` evaluated numerically."""
    val, _ = integrate.quad(lambda t: float(_tail_integrals(np.array([t + 1.0]))[0][0]),
                            -2.0, 0.0, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val
