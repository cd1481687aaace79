import math
import os

import numpy as np
import pytest

import dampchain as dc

DATA = os.path.join(os.path.dirname(__file__), "..", "..", "data")

A, B, C = 1 / 5, 1 / 4, 1 / 3
P5 = np.array([
    [A, A, A, A, A],
    [B, 0, B, B, B],
    [0, C, 0, C, C],
    [0, C, C, 0, C],
    [0, C, C, C, 0],
])
PI5 = np.array([5 / 66, 8 / 33, 5 / 22, 5 / 22, 5 / 22])


def test_stationary_methods_agree():
    assert np.allclose(dc.stationary(P5), PI5, atol=1e-12)
    pe = dc.damped_matrix(P5, epsilon=0.15)
    assert np.allclose(dc.stationary(pe, "power"), dc.stationary_series(P5, epsilon=0.15), atol=1e-9)


def test_structure_and_spectrum():
    assert dc.decompose(P5)["regime"] == "regular"
    eig = np.sort(dc.spectrum(P5).real)
    ref = np.sort([1, -1 / 3, -1 / 3, -1 / 15 - math.sqrt(34) / 30, -1 / 15 + math.sqrt(34) / 30])
    assert np.allclose(eig, ref, atol=1e-8)


def test_expansion_coefficients():
    base, coeffs = dc.expansion(P5, order=2)
    assert np.allclose(base, PI5)
    assert np.round(coeffs[0, 0], 5) == 0.14096
    assert np.round(coeffs[1, 0], 5) == -0.01946


def test_bounds_and_coupling():
    k = 67 / 4488 * math.sqrt(34) + 49 / 132
    b = dc.deviation_bound(P5, epsilon=0.15, C=2 * k, lam=1 / 3)
    assert np.allclose(np.round(b[:3], 5), [0.08738, 0.07510, 0.07283])
    start = np.eye(5)[0]
    tail, se = dc.coupling_tail(P5, start, epsilon=0.15, trials=20000, seed=1, horizon=10)
    bound = dc.rate_bound(P5, start, epsilon=0.15, steps=list(range(11)))[:, 0]
    assert all(t <= b + 3 * s + 1e-12 for t, s, b in zip(tail, se, bound))
    q, delta = dc.ergodicity_coefficient(P5, 1)
    assert delta == pytest.approx(0.5)


def test_errors_carry_codes():
    with pytest.raises(dc.DampchainError) as info:
        dc.stationary(np.array([[0.5, 0.6], [0.5, 0.5]]))
    assert info.value.args[0] == "invalid_input"


def test_run_command_report():
    rep = dc.run_command("structure", os.path.join(DATA, "fig3.edges"))
    assert rep["result"]["regime"] == "singular"
    lim = dc.triangular_limit(P5, np.eye(5)[0], t=1.0)
    assert np.allclose(lim, PI5)
