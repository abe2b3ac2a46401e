"""Acceptance checks 1-11, each at its fixed tolerance.

Every check records one PASS/FAIL line; the lines are printed in the
pytest terminal summary and when the file is run as a script.
"""

import math
import time

import numpy as np
import pytest
from conftest import ACCEPTANCE_LINES, make_corpus
from oracles import catalan_slow

from sigwind import sle
from sigwind.lyndon import lie_to_lyndon
from sigwind.paths import PolyLine, circle, concatenate, polyline_signature, reverse
from sigwind.special import QuadratureSpec, catalan_constant, hyp_G, qmc_integral_A, quad_integral_A
from sigwind.tensor import TruncatedTensor, shuffle_defect, tensor_log, word_coefficient
from sigwind.winding import (
    fourth_level_from_winding,
    isoperimetric_report,
    moment_exact,
    moment_pairs,
    moment_table,
    sharpness_report,
    moment_word,
    winding_numbers,
)


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[f"{n:>2}"] = line
    print(line)
    return ok


@pytest.fixture(scope="module")
def polygons():
    return make_corpus()


@pytest.fixture(scope="module")
def quad_A():
    return quad_integral_A()


def test_criterion_01_lyndon_coordinates_equal_moments(polygons):
    start = time.perf_counter()
    worst = 0.0
    for p in polygons:
        exp = lie_to_lyndon(tensor_log(polyline_signature(p, 6)))
        for n, k in moment_pairs(6):
            mom = (-1) ** k / (math.factorial(n) * math.factorial(k)) * moment_exact(p, n, k)
            worst = max(worst, abs(exp[moment_word(n, k)] - mom))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 30
    assert record(1, ok, f"max |Lyndon - moment| = {worst:.3e} (< 1e-9), {elapsed:.1f} s (< 30 s)")


def test_criterion_02_word_coefficient_equals_lyndon(polygons):
    worst = 0.0
    for p in polygons:
        sig = polyline_signature(p, 6)
        exp = lie_to_lyndon(tensor_log(sig))
        for n, k in moment_pairs(6):
            w = moment_word(n, k)
            worst = max(worst, abs(word_coefficient(sig, w) - exp[w]))
    assert record(2, worst < 1e-12, f"max |word coeff - Lyndon coord| = {worst:.3e} (< 1e-12)")


def test_criterion_03_sharpness_pair():
    start = time.perf_counter()
    rep = sharpness_report()
    elapsed = time.perf_counter() - start
    ok = rep["gamma"] == 1 and rep["gamma_tilde"] == -1 and rep["moment_table_max_abs_diff"] <= 1e-12 and elapsed < 1
    detail = (
        f"12121 coefficients {rep['gamma']:g}, {rep['gamma_tilde']:g} (expected +1, -1); "
        f"moment diff {rep['moment_table_max_abs_diff']:.1e}; {elapsed:.2f} s"
    )
    assert record(3, ok, detail)


def test_criterion_04_level4_from_moments(polygons):
    worst = 0.0
    for p in polygons:
        rebuilt = fourth_level_from_winding(moment_table(p, 4))
        worst = max(worst, float(np.max(np.abs(rebuilt.coeffs - tensor_log(polyline_signature(p, 4)).coeffs))))
    assert record(4, worst < 1e-12, f"max |rebuilt - log S| = {worst:.3e} (< 1e-12)")


def test_criterion_05_semicircle_closed_form():
    exact = sle.semicircle_signature(4).coeffs
    errs = [float(np.max(np.abs(polyline_signature(sle.semicircle_polyline(m), 4).coeffs - exact))) for m in (100, 1000, 10000)]
    ok = errs[2] < 1e-5 and errs[0] > errs[1] > errs[2]
    assert record(5, ok, "errors at m=1e2,1e3,1e4: " + ", ".join(f"{e:.2e}" for e in errs))


def test_criterion_06_isoperimetric(polygons):
    worst = 0.0
    for p in polygons:
        rep = isoperimetric_report(p, 256)
        worst = max(worst, rep["lhs"] / rep["rhs"])
    ngon = isoperimetric_report(circle(1.0, m=256), 2048)["ratio"]
    ok = worst <= 1.02 and abs(ngon - 1) < 1e-3
    assert record(6, ok, f"max 4pi|w|^2/L^2 = {worst:.4f} (<= 1.02); 256-gon ratio {ngon:.6f}")


def test_criterion_07_retraced_path():
    rng = np.random.default_rng(7)
    worst_sig, bad_wind = 0.0, 0
    for _ in range(20):
        a = PolyLine(rng.normal(size=(int(rng.integers(2, 12)), 2)))
        loop = concatenate(a, reverse(a))
        sig = polyline_signature(loop, 5)
        worst_sig = max(worst_sig, float(np.max(np.abs(sig.coeffs - TruncatedTensor.identity(2, 5).coeffs))))
        wn, near = winding_numbers(loop, rng.uniform(-3, 3, size=(100, 2)), on_curve="mask")
        bad_wind += int(np.count_nonzero(wn[~near]))
    ok = worst_sig < 1e-12 and bad_wind == 0
    assert record(7, ok, f"max |S - 1| = {worst_sig:.2e} (< 1e-12); nonzero windings {bad_wind}")


@pytest.fixture(scope="module")
def mc_estimate():
    cfg = sle.SLEConfig(kappa=8 / 3, steps=20000, T=16.0, samples=1000, seed=7)
    start = time.perf_counter()
    est = sle.mc_expected_signature(cfg)
    return est, time.perf_counter() - start


@pytest.mark.slow
def test_criterion_08_sle_monte_carlo(mc_estimate):
    est, elapsed = mc_estimate
    rows = sle.mc_target_report(est, catalan_constant())
    ok = all(r["passed"] for r in rows)
    detail = "; ".join(f"{r['word']} {r['mean']:.5f}+-{r['se']:.5f} vs {r['target']:.5f}" for r in rows)
    assert record(8, ok, f"{detail}; {elapsed:.0f} s")


def test_criterion_09a_free_moment_invariance(quad_A):
    K, A = catalan_constant(), quad_A[0]
    a = sle.even_two_projection(sle.theorem6_assemble(K, A, (0.0, 0.0, 0.0)))
    b = sle.even_two_projection(sle.theorem6_assemble(K, A, (7.0, -3.0, 11.0)))
    diff = float(np.max(np.abs(a.coeffs - b.coeffs)))
    assert record("9a", diff < 1e-12, f"even-2 projection change under free moments {diff:.1e} (< 1e-12)")


def test_criterion_09b_assembly_equals_display(quad_A):
    K, A = catalan_constant(), quad_A[0]
    a = sle.even_two_projection(sle.theorem6_assemble(K, A))
    d = sle.even_two_projection(sle.theorem6_display(K, A))
    diff = float(np.max(np.abs(a.coeffs - d.coeffs)))
    assert record("9b", diff < 1e-12, f"max |assembled - display| = {diff:.6e} (< 1e-12; pi^2/64 = {math.pi**2 / 64:.6e})")


@pytest.mark.slow
def test_criterion_10_special_functions(quad_A):
    start = time.perf_counter()
    K = catalan_constant()
    k_err = abs(K - catalan_slow(10**7))
    g1 = hyp_G(1.0)
    value, err = quad_A
    finer, finer_err = quad_integral_A(QuadratureSpec(panels=6))
    qmc, qmc_se = qmc_integral_A(2**22, replicates=16, seed=0)
    elapsed = time.perf_counter() - start
    combined = math.hypot(err, qmc_se)
    self_ok = abs(finer - value) <= max(err, finer_err) and err <= 1e-3 * value
    qmc_ok = abs(qmc - value) <= 3 * combined and 3 * combined <= 1e-3 * value
    ok = k_err < 1e-12 and g1 == 0.0 and self_ok and qmc_ok and elapsed < 600
    detail = (
        f"|K - slow| = {k_err:.1e}; G(1) = {g1}; A = {value:.7f} +- {err:.1e}, refined {finer:.7f}; "
        f"QMC {qmc:.7f} +- {qmc_se:.1e}; {elapsed:.0f} s"
    )
    assert record(10, ok, detail)


def test_criterion_11_per_sample_shuffle():
    cfg = sle.SLEConfig(kappa=8 / 3, steps=20000, T=16.0, seed=7)
    worst = max(shuffle_defect(polyline_signature(sle.sample_loop(cfg, i), 4), 4) for i in range(50))
    assert record(11, worst < 1e-10, f"max shuffle defect over 50 loops = {worst:.2e} (< 1e-10)")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
