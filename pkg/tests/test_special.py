import math

import mpmath
import numpy as np
import pytest
from oracles import catalan_slow, hyp2f1_series

from sigwind.exceptions import ConvergenceError, DomainError
from sigwind.special import (
    QuadratureSpec,
    catalan_constant,
    catalan_partial_sum,
    hyp2f1,
    hyp_G,
    integrand_A,
    quad_integral_A,
    sigma_ratio,
    two_point_moment_mc_check,
)


def test_catalan_against_mpmath():
    assert catalan_constant() == pytest.approx(float(mpmath.catalan), abs=1e-15)
    assert round(catalan_constant(), 3) == 0.916


def test_catalan_against_slow_series():
    assert abs(catalan_constant() - catalan_slow(10**7)) < 1e-12


def test_partial_sums_bracket_limit():
    K = catalan_constant()
    for n in range(1, 40):
        s = catalan_partial_sum(n)
        # alternating series: error below the first omitted term, sign alternates
        assert abs(s - K) <= 1 / (2 * n + 1) ** 2
        assert (s - K) * (-1) ** n < 0


def test_hyp2f1_at_zero():
    assert hyp2f1(1, 4 / 3, 5 / 3, 0.0) == 1.0


@pytest.mark.parametrize("z", [-3.0, -1.5, -0.9, -0.5, -0.2, 0.0, 0.3, 0.5, 0.6, 0.75, 0.9, 0.99])
def test_hyp2f1_against_mpmath(z):
    ref = float(mpmath.hyp2f1(1, mpmath.mpf(4) / 3, mpmath.mpf(5) / 3, z))
    assert hyp2f1(1, 4 / 3, 5 / 3, z) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("sigma", [0.25, 0.5, 2.0, 4.0])
def test_G_against_references(sigma):
    ref = 1 - sigma * mpmath.hyp2f1(1, mpmath.mpf(4) / 3, mpmath.mpf(5) / 3, 1 - sigma)
    assert hyp_G(sigma) == pytest.approx(float(ref), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("sigma", [0.25, 0.5])
def test_G_against_brute_series(sigma):
    ref = 1 - sigma * hyp2f1_series(1, 4 / 3, 5 / 3, 1 - sigma)
    assert hyp_G(sigma) == pytest.approx(ref, rel=1e-9)


def test_G_exact_values_and_domain():
    assert hyp_G(1.0) == 0.0
    for bad in (0.0, -1.0):
        with pytest.raises(DomainError):
            hyp_G(bad)


@pytest.mark.parametrize("edge", [0.5, 1.5])
def test_G_continuous_across_switchover(edge):
    eps = 1e-9
    assert abs(hyp_G(edge - eps) - hyp_G(edge + eps)) < 1e-8


def test_sigma_ratio_properties():
    rng = np.random.default_rng(0)
    r1, r2 = rng.exponential(size=(2, 1000))
    t1, t2 = rng.uniform(0, math.pi, size=(2, 1000))
    s = sigma_ratio(r1, t1, r2, t2)
    assert np.all((s >= 0) & (s <= 1 + 1e-15))
    assert sigma_ratio(1.0, 0.7, 1.0, 0.7) == 0.0
    w1, w2 = r1 * np.exp(1j * t1), r2 * np.exp(1j * t2)
    direct = np.abs(w1 - w2) ** 2 / np.abs(w1 - np.conj(w2)) ** 2
    assert np.allclose(s, direct, rtol=1e-10)


def test_integrand_symmetric_in_points():
    rng = np.random.default_rng(1)
    r1, r2 = rng.exponential(size=(2, 200))
    t1, t2 = rng.uniform(0, math.pi, size=(2, 200))
    assert np.allclose(integrand_A(r1, t1, r2, t2), integrand_A(r2, t2, r1, t1), rtol=1e-13)


def test_integrand_diagonal_reduces_to_one_point():
    # coincident points: Gamma_2 equals the one-point function (1 + cos t)/2
    r, t = 0.8, 1.1
    q = r * r + 2 * r * math.sin(t) + 1
    expect = r * r * (1 + math.cos(t)) / 2 / q**4
    assert integrand_A(r, t, r, t) == pytest.approx(expect, rel=1e-12)


def test_quadrature_self_consistent():
    value, err, info = quad_integral_A(QuadratureSpec(panels=2), return_info=True)
    assert err <= 1e-3 * value
    finer, _ = quad_integral_A(QuadratureSpec(panels=4))
    assert abs(finer - value) <= max(err, 1e-3 * value)
    assert info["nodes_used"] > 0


def test_quadrature_non_convergence():
    with pytest.raises(ConvergenceError) as exc:
        quad_integral_A(QuadratureSpec(panels=1, nodes_r=4, nodes_theta=4, tol=1e-12, max_refinements=1))
    assert exc.value.best is not None


def test_spec_validation():
    with pytest.raises(DomainError):
        quad_integral_A(QuadratureSpec(nodes_r=2))
    with pytest.raises(DomainError):
        quad_integral_A(QuadratureSpec(variant="other"))


def test_mc_check_insufficient():
    class Empty:
        count = 0
        samples = None

    assert two_point_moment_mc_check(Empty())["status"] == "insufficient samples"
