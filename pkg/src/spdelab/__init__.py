"""Numerical experiments for stochastic reaction-diffusion equations on an interval.

Submodules: ``grid`` (mesh, operators, mollifiers), ``spectral`` (principal
Dirichlet eigenpair), ``noise`` (coloured Gaussian increments), ``dynamics``
(time stepping and observables), ``comparison`` (criteria, comparison ODEs,
blow-up time bounds), ``montecarlo`` (ensembles and censored moments),
``config`` and ``cli``.
"""
from .grid import Domain1D, Field
from .spectral import EigenPair, analytic_eigenpair, discrete_eigenpair
from .noise import Kernel, assemble
from .dynamics import (DiffusionSpec, DriftSpec, InitialProfile, Operator, ProblemSpec,
                       SolverConfig, simulate_path)
from .comparison import GrowthFunction, blowup_time_bound, applicable_criteria
from .montecarlo import EnsembleConfig, run_ensemble, moment_domination_report

__version__ = "0.1.0"
