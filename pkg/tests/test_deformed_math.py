import json
import math
import pathlib

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from qotto.deformed_math import (
    cosh_q,
    dawson,
    erf,
    erfc,
    erfi,
    erfi_scaled,
    hyp2f1_poly,
    log_abs_erfi,
    log_cosh_q,
    sinh_q,
    tanh_q,
)
from qotto.errors import DegenerateHypergeometric

DATA = json.loads((pathlib.Path(__file__).with_name("data") / "oracles.json").read_text())

qs = st.floats(min_value=1e-3, max_value=50.0)
ys = st.floats(min_value=-300.0, max_value=300.0)


# ---------------------------------------------------------------------------
# deformed hyperbolic functions
# ---------------------------------------------------------------------------

def test_cosh_q_examples():
    assert cosh_q(0.0, 1.0) == 1.0
    assert cosh_q(0.0, 0.5) == 0.75
    c, s = cosh_q(1.3, 0.7), sinh_q(1.3, 0.7)
    assert abs(c * c - s * s - 0.7) < 1e-14


def test_sinh_q_examples():
    assert sinh_q(0.0, 1.0) == 0.0
    assert sinh_q(0.0, 0.8) == pytest.approx(0.1, abs=1e-16)
    assert tanh_q(2.0, 0.9) == pytest.approx(sinh_q(2.0, 0.9) / cosh_q(2.0, 0.9), rel=1e-14)


def test_tanh_q_examples():
    assert tanh_q(0.0, 1.0) == 0.0
    for q in (0.2, 0.5, 3.0):
        assert tanh_q(0.0, q) == pytest.approx((1 - q) / (1 + q), rel=1e-15)
    assert abs(tanh_q(50.0, 0.5) - 1.0) <= 1e-15
    assert tanh_q(1e6, 0.5) == 1.0
    assert tanh_q(-1e6, 0.5) == -1.0


def test_overflow_signalled():
    with pytest.raises(OverflowError):
        cosh_q(800.0, 1.0)
    with pytest.raises(OverflowError):
        sinh_q(-800.0, 0.5)
    with pytest.raises(ValueError):
        cosh_q(1.0, 0.0)


@given(ys, qs)
def test_deformed_identity(y, q):
    c, s = cosh_q(y, q), sinh_q(y, q)
    # cancellation in c^2 - s^2 is relative to c^2
    assert abs((c * c - s * s) - q) <= 1e-13 * max(q, c * c)


@given(st.floats(min_value=-20.0, max_value=20.0), qs)
def test_deformed_identity_moderate(y, q):
    c, s = cosh_q(y, q), sinh_q(y, q)
    if c * c < 1e3 * q:
        assert abs((c * c - s * s) / q - 1.0) < 1e-13 * max(1.0, c * c / q)


@given(st.floats(min_value=-700.0, max_value=700.0))
def test_undeformed_limit(y):
    assert cosh_q(y, 1.0) == pytest.approx(math.cosh(y), rel=1e-15)
    assert tanh_q(y, 1.0) == pytest.approx(math.tanh(y), rel=1e-15, abs=1e-300)
    s = sinh_q(y, 1.0)
    if abs(y) > 1e-3:
        assert s == pytest.approx(math.sinh(y), rel=1e-15)
    else:
        # (e^y - e^-y)/2 cancels; absolute error is what is preserved
        assert abs(s - math.sinh(y)) < 1e-16


@given(ys, qs)
def test_tanh_q_bounded_and_consistent(y, q):
    t = tanh_q(y, q)
    assert -1.0 <= t <= 1.0
    if abs(y) < 15:
        assert t == pytest.approx(sinh_q(y, q) / cosh_q(y, q), rel=1e-12, abs=1e-15)


@given(st.floats(min_value=-2000.0, max_value=2000.0), qs)
def test_log_cosh_q(y, q):
    ref = mp.log((mp.exp(y) + q * mp.exp(-y)) / 2)
    assert log_cosh_q(y, q) == pytest.approx(float(ref), rel=1e-14, abs=1e-14)


def test_vectorized_shapes():
    y = np.linspace(-3, 3, 7)
    assert cosh_q(y, 0.5).shape == (7,)
    assert np.allclose(tanh_q(y, 0.5), sinh_q(y, 0.5) / cosh_q(y, 0.5), rtol=1e-14)


# ---------------------------------------------------------------------------
# error-function family
# ---------------------------------------------------------------------------

def test_special_examples():
    assert erf(0.0) == 0.0 and erfi(0.0) == 0.0 and dawson(0.0) == 0.0
    assert erf(1.0) == pytest.approx(0.8427007929497149, rel=1e-15)
    assert erfi(1.0) == pytest.approx(1.6504257587975429, rel=1e-15)


def test_series_oracles_agree_with_mpmath():
    # the frozen series oracles are themselves checked against mpmath's builtins
    for x in (1e-3, 0.5, 2.0, 5.5):
        assert float(oracles.erf(x)) == pytest.approx(float(mp.erf(x)), rel=1e-15)
        assert float(oracles.erfi(x)) == pytest.approx(float(mp.erfi(x)), rel=1e-15)
    with mp.workdps(40):
        assert oracles.dawson(30.0) == pytest.approx(mp.sqrt(mp.pi) / 2 * mp.exp(-900) * mp.erfi(30), rel=1e-30)


@pytest.mark.parametrize("name,fn,tol", [
    ("erf", erf, 1e-14), ("erfc", erfc, 1e-14), ("dawson", dawson, 1e-13), ("erfi", erfi, 1e-13),
])
def test_against_frozen_oracles(name, fn, tol):
    block = DATA["special"][name]
    x = np.array(block["x"])
    ref = np.array([float(v) for v in block["value"]])
    for got in (fn(x), np.array([fn(float(v)) for v in x])):
        rel = np.abs(got - ref) / np.abs(ref)
        assert rel.max() < tol, (name, x[rel.argmax()], rel.max())


def test_erfc_deep_tail():
    for x in (6.0, 10.0, 26.0):
        assert erfc(x) == pytest.approx(float(mp.erfc(x)), rel=1e-14)
    assert erfc(-3.0) == pytest.approx(float(mp.erfc(-3.0)), rel=1e-15)


@given(st.floats(min_value=-6.0, max_value=6.0))
def test_erf_erfc_sum(x):
    assert abs(erf(x) + erfc(x) - 1.0) < 1e-14


@given(st.floats(min_value=0.0, max_value=50.0))
def test_odd_symmetry(x):
    assert erf(-x) == -erf(x)
    assert dawson(-x) == -dawson(x)
    assert erfi_scaled(-x) == -erfi_scaled(x)
    if x * x < 700:
        assert erfi(-x) == -erfi(x)


@given(st.floats(min_value=-40.0, max_value=40.0))
def test_dawson_ode(x):
    h = 1e-5
    deriv = (dawson(x + h) - dawson(x - h)) / (2 * h)
    assert abs(deriv - (1.0 - 2.0 * x * dawson(x))) < 1e-8


def test_dawson_branch_seams():
    # series/sampling/asymptotic crossovers must agree across the seam
    for seam in (0.5, 7.0):
        lo, hi = np.nextafter(seam, 0), seam
        for x in (lo, hi):
            assert dawson(x) == pytest.approx(float(oracles.dawson(x)), rel=1e-13)


def test_erfi_overflow_and_scaled():
    with pytest.raises(OverflowError):
        erfi(30.0)
    ref = mp.erfi(30) * mp.exp(-900)
    assert erfi_scaled(30.0) == pytest.approx(float(ref), rel=1e-13)
    assert log_abs_erfi(30.0) == pytest.approx(float(mp.log(mp.erfi(30))), rel=1e-15)
    assert log_abs_erfi(-30.0) == log_abs_erfi(30.0)


# ---------------------------------------------------------------------------
# terminating hypergeometric polynomials
# ---------------------------------------------------------------------------

def test_hyp2f1_examples():
    assert hyp2f1_poly(0, 3.3, -0.7, 0.9) == 1.0
    b, c, x = 2.2, 1.4, 0.35
    assert hyp2f1_poly(1, b, c, x) == pytest.approx(1 - b * x / c, rel=1e-15)
    n, b, c, x = DATA["hyp2f1"]["args"]
    assert hyp2f1_poly(n, b, c, x) == pytest.approx(float(DATA["hyp2f1"]["value"]), rel=1e-13)


def test_hyp2f1_degenerate():
    with pytest.raises(DegenerateHypergeometric):
        hyp2f1_poly(3, 1.0, -1.0, 0.2)
    # c = -3 only matters once k reaches 3
    assert math.isfinite(hyp2f1_poly(3, 1.0, -3.0, 0.2))


@given(st.integers(min_value=0, max_value=10),
       st.floats(min_value=-5.0, max_value=5.0),
       st.floats(min_value=0.3, max_value=6.0),
       st.floats(min_value=-1.0, max_value=1.0))
def test_hyp2f1_matches_pochhammer(n, b, c, x):
    ref = oracles.hyp2f1_terminating(n, b, c, x)
    # relative to the term magnitudes, since the sum may cancel
    scale = float(oracles.hyp2f1_terminating(n, abs(b), c, -abs(x)) if x else 1)
    scale = max(abs(float(ref)), abs(scale), 1.0)
    assert abs(hyp2f1_poly(n, b, c, x) - float(ref)) <= 1e-12 * scale


def test_hyp2f1_vectorized():
    x = np.linspace(-1, 1, 5)
    got = hyp2f1_poly(4, -1.5, 0.8, x)
    assert got.shape == (5,)
    for xi, g in zip(x, got):
        assert g == pytest.approx(hyp2f1_poly(4, -1.5, 0.8, float(xi)), rel=1e-15)
