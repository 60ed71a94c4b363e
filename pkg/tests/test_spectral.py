import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spdelab.grid import Domain1D, Field, inner_product, laplacian_apply
from spdelab.spectral import (ConvergenceError, EigenPair, analytic_eigenpair,
                              discrete_eigenpair, discrete_lambda1)


def test_analytic_pair():
    eig = analytic_eigenpair(Domain1D(1.0, 200))
    assert eig.lambda1 == pytest.approx(np.pi ** 2, rel=1e-15)
    assert eig.source == "analytic"
    assert (eig.phi.values >= 0).all()
    eig2 = analytic_eigenpair(Domain1D(2.0, 50))
    assert eig2.lambda1 == pytest.approx(np.pi ** 2 / 4, rel=1e-15)


def test_discrete_matches_closed_form_and_dense_solver():
    d = Domain1D(1.0, 40)
    eig = discrete_eigenpair(d)
    assert eig.lambda1 == pytest.approx(discrete_lambda1(d), rel=1e-10)
    A = -np.array([laplacian_apply(Field(d, e)).values for e in np.eye(d.n)]).T
    assert eig.lambda1 == pytest.approx(np.linalg.eigvalsh(A)[0], rel=1e-10)


def test_three_node_case():
    eig = discrete_eigenpair(Domain1D(1.0, 3))
    assert eig.lambda1 == pytest.approx(32 * (1 - np.sqrt(2) / 2), rel=1e-10)
    assert eig.lambda1 == pytest.approx(9.3726, abs=1e-4)


def test_n200_accuracy():
    eig = discrete_eigenpair(Domain1D(1.0, 200))
    assert abs(eig.lambda1 - np.pi ** 2) <= 0.01


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 20.0), st.integers(3, 300))
def test_discrete_pair_properties(L, n):
    d = Domain1D(L, n)
    eig = discrete_eigenpair(d)
    phi = eig.phi
    assert (phi.values >= 0).all()
    assert d.h * phi.values.sum() == pytest.approx(1.0, abs=1e-12)
    resid = laplacian_apply(phi).values + eig.lambda1 * phi.values
    assert np.sqrt(d.h * resid @ resid) <= 1e-6 * eig.lambda1 * np.sqrt(inner_product(phi, phi))
    # the discrete eigenvalue sits below the continuum one
    assert eig.lambda1 <= analytic_eigenpair(d).lambda1 * (1 + 1e-12)


def test_second_order_convergence():
    ns = [100, 200, 400]
    errs = [abs(discrete_eigenpair(Domain1D(1.0, n)).lambda1 - np.pi ** 2) for n in ns]
    hs = [1.0 / (n + 1) for n in ns]
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert 1.8 <= slope <= 2.2


def test_nonconvergence_is_reported():
    with pytest.raises(ConvergenceError):
        discrete_eigenpair(Domain1D(1.0, 200), tol=1e-14, max_iter=2)


def test_eigenpair_validation():
    d = Domain1D(1.0, 5)
    with pytest.raises(ValueError):
        EigenPair(-1.0, Field.constant(d, 1.0), "analytic")
    with pytest.raises(ValueError):
        EigenPair(1.0, Field.constant(d, -1.0), "analytic")
