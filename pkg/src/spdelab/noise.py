"""Spatially correlated Wiener increments on the grid.

A kernel ``q(x, y)`` is assembled into a dense covariance matrix, factored
once, and increments over ``dt`` are drawn as ``sqrt(dt) * F z``.  Every
path owns its own counter-based (Philox) stream derived from
``(base_seed, path_index)``, so results do not depend on the order in which
paths are simulated.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Domain1D, Field

__all__ = [
    "Kernel",
    "CovarianceOperator",
    "IndefiniteKernelError",
    "assemble",
    "sample_increment",
    "path_rng",
]

KERNEL_TYPES = ("constant", "exponential", "diagonal")


class IndefiniteKernelError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class Kernel:
    """Covariance kernel of the driving Wiener field.

    ``constant``: ``q = q0`` (perfectly correlated, rank one).
    ``exponential``: ``q = s2 * exp(-|x - y| / ell)``.
    ``diagonal``: grid white-noise idealization ``Q = (q0 / h) I``.
    """

    type: str
    q0: float = 1.0
    s2: float = 1.0
    ell: float = 1.0

    def __post_init__(self):
        if self.type not in KERNEL_TYPES:
            raise ValueError(f"unknown kernel type {self.type!r}; expected one of {KERNEL_TYPES}")
        for name in ("q0", "s2", "ell"):
            if not getattr(self, name) > 0:
                raise ValueError(f"kernel parameter {name} must be positive")

    @classmethod
    def constant(cls, q0: float = 1.0) -> "Kernel":
        return cls("constant", q0=q0)

    @classmethod
    def exponential(cls, s2: float = 1.0, ell: float = 1.0) -> "Kernel":
        return cls("exponential", s2=s2, ell=ell)

    @classmethod
    def diagonal(cls, q0: float = 1.0) -> "Kernel":
        return cls("diagonal", q0=q0)

    def matrix(self, domain: Domain1D) -> np.ndarray:
        n, x = domain.n, domain.nodes
        if self.type == "constant":
            return np.full((n, n), self.q0)
        if self.type == "exponential":
            return self.s2 * np.exp(-np.abs(x[:, None] - x[None, :]) / self.ell)
        return (self.q0 / domain.h) * np.eye(n)


@dataclass(frozen=True, eq=False)
class CovarianceOperator:
    """Assembled covariance ``Q`` with a factor ``F`` such that ``F F^T = Q + jitter I``.

    ``F`` is ``n x n`` lower triangular, except for the constant kernel where
    the exact rank-one factor ``sqrt(q0) * ones((n, 1))`` is kept so that
    increments are spatially constant to the last bit.
    """

    domain: Domain1D
    kernel: Kernel
    Q: np.ndarray
    factor: np.ndarray
    jitter: float
    q_sup: float
    q_inf: float

    @property
    def rank(self) -> int:
        return self.factor.shape[1]

    def increments(self, z: np.ndarray, dt: float) -> np.ndarray:
        """Map standard normals ``z`` of shape ``(..., rank)`` to increments ``(..., n)``."""
        return (z @ self.factor.T) * np.sqrt(dt)


_JITTER_LADDER = (0.0, 1e-12, 1e-10, 1e-8)


def assemble(kernel: Kernel, domain: Domain1D) -> CovarianceOperator:
    Q = kernel.matrix(domain)
    Q.setflags(write=False)
    if kernel.type == "constant":
        factor = np.full((domain.n, 1), np.sqrt(kernel.q0))
        jitter = 0.0
    else:
        scale = np.trace(Q) / domain.n
        for level in _JITTER_LADDER:
            jitter = level * scale
            try:
                factor = np.linalg.cholesky(Q + jitter * np.eye(domain.n))
                break
            except np.linalg.LinAlgError:
                continue
        else:
            raise IndefiniteKernelError(
                f"covariance of {kernel} is not positive definite even with jitter "
                f"{_JITTER_LADDER[-1]} * trace/n")
    factor.setflags(write=False)
    return CovarianceOperator(domain, kernel, Q, factor, jitter,
                              q_sup=float(np.max(np.diag(Q))), q_inf=float(np.min(Q)))


def path_rng(base_seed: int, index: int = 0) -> np.random.Generator:
    """Independent Philox stream for path ``index`` of an ensemble seeded with ``base_seed``."""
    seq = np.random.SeedSequence(int(base_seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.Philox(seq))


def sample_increment(cov: CovarianceOperator, dt: float, rng: np.random.Generator) -> Field:
    """One Wiener increment over ``dt``: mean zero, covariance ``dt * (Q + jitter I)``."""
    if dt < 0:
        raise ValueError("dt must be nonnegative")
    z = rng.standard_normal(cov.rank)
    return Field(cov.domain, cov.increments(z, dt))
