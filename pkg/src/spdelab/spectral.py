"""Principal Dirichlet eigenpair of -d^2/dx^2 on an interval.

The eigenfunction is normalized to unit integral, ``phi >= 0`` and
``h * sum(phi) = 1``, which is the normalization the moment equations for
``(u, phi)`` rely on.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Domain1D, Field, TridiagonalSolver, _lap

__all__ = ["EigenPair", "ConvergenceError", "analytic_eigenpair",
           "discrete_eigenpair", "discrete_lambda1"]


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class EigenPair:
    lambda1: float
    phi: Field
    source: str  # "analytic" | "discrete"
    iterations: int = 0

    def __post_init__(self):
        if not self.lambda1 > 0:
            raise ValueError("principal eigenvalue must be positive")
        if np.any(self.phi.values < 0):
            raise ValueError("principal eigenfunction must be nonnegative")


def analytic_eigenpair(domain: Domain1D) -> EigenPair:
    """``lambda1 = (pi/L)^2`` and ``phi = (pi/(2L)) sin(pi x / L)`` sampled at the nodes.

    The scaling makes the continuum integral exactly one; the midpoint sum is
    one up to ``O(h^2)``.
    """
    L = domain.length
    x = domain.nodes
    phi = (np.pi / (2 * L)) * np.sin(np.pi * x / L)
    return EigenPair((np.pi / L) ** 2, Field(domain, phi), "analytic")


def discrete_lambda1(domain: Domain1D) -> float:
    """Closed form ``2(1 - cos(pi h / L)) / h^2`` of the three-point stencil."""
    h, L = domain.h, domain.length
    return 2.0 * (1.0 - np.cos(np.pi * h / L)) / h ** 2


def discrete_eigenpair(domain: Domain1D, tol: float = 1e-10,
                       max_iter: int = 10_000) -> EigenPair:
    """Inverse power iteration on the three-point Dirichlet Laplacian.

    Stops once the Rayleigh quotient changes by less than ``tol`` and the
    L^2 residual of ``-Lap phi = lambda phi`` is below ``10 * tol`` (or has
    stopped decreasing, which happens at the round-off floor on fine grids).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    h = domain.h
    # (I - 1*Lap) shares the spectrum ordering of -Lap; shifted inverse
    # iteration with shift -1 converges to the same principal vector.
    solver = TridiagonalSolver(domain, 1.0)
    v = np.ones(domain.n)
    v /= np.sqrt(h * v @ v)
    rq_old = np.inf
    res_old = np.inf
    for it in range(1, max_iter + 1):
        w = solver.solve(v)
        v = w / np.sqrt(h * w @ w)
        av = -_lap(v, h)
        rq = h * v @ av
        res = np.sqrt(h * np.sum((av - rq * v) ** 2))
        if abs(rq - rq_old) < tol and (res < 10 * tol or res >= res_old):
            break
        rq_old, res_old = rq, res
    else:
        raise ConvergenceError(f"inverse iteration did not converge in {max_iter} steps")
    if v.sum() < 0:
        v = -v
    v = np.maximum(v, 0.0)
    phi = v / (h * v.sum())
    return EigenPair(float(rq), Field(domain, phi), "discrete", it)
