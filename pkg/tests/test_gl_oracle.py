import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from focdigital.errors import DegenerateInput, InvalidParams
from focdigital.gl_oracle import GlSpec, gl_apply, gl_weights


def test_weights_examples():
    np.testing.assert_allclose(gl_weights(0.5, 4), [1, -0.5, -0.125, -0.0625, -0.0390625], rtol=1e-15)
    np.testing.assert_array_equal(gl_weights(0.0, 5), [1, 0, 0, 0, 0, 0])
    np.testing.assert_array_equal(gl_weights(1.0, 3), [1, -1, 0, 0])


def test_weights_are_binomial():
    r = -0.37
    for k, w in enumerate(gl_weights(r, 12)):
        assert w == pytest.approx((-1) ** k * math.gamma(r + 1) / (math.gamma(k + 1) * math.gamma(r - k + 1)),
                                  rel=1e-12)


def test_apply_examples():
    np.testing.assert_allclose(gl_apply(np.ones(4), GlSpec(-0.5, 1.0)), [1, 1.5, 1.875, 2.1875], rtol=1e-15)
    x = np.random.default_rng(0).normal(size=20)
    np.testing.assert_array_equal(gl_apply(x, GlSpec(0.0, 0.1)), x)
    np.testing.assert_array_equal(gl_apply(np.ones(6), GlSpec(1.0, 1.0)), [1, 0, 0, 0, 0, 0])


def test_spec_validation():
    with pytest.raises(InvalidParams):
        GlSpec(1.5, 1.0)
    with pytest.raises(InvalidParams):
        GlSpec(0.5, 1.0, memory_len=0)
    with pytest.raises(DegenerateInput):
        gl_apply([], GlSpec(0.5, 1.0))


def test_composition_identity():
    rng = np.random.default_rng(20240)
    for _ in range(100):
        x = rng.normal(size=100)
        half = GlSpec(0.5, 1.0)
        twice = gl_apply(gl_apply(x, half), half)
        np.testing.assert_allclose(twice, gl_apply(x, GlSpec(1.0, 1.0)), rtol=0, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(-1, 1), st.floats(-5, 5), st.floats(-5, 5), st.integers(0, 2**32 - 1))
def test_linearity(r, a, b, seed):
    rng = np.random.default_rng(seed)
    x, y = rng.normal(size=(2, 64))
    spec = GlSpec(r, 0.5)
    lhs = gl_apply(a * x + b * y, spec)
    rhs = a * gl_apply(x, spec) + b * gl_apply(y, spec)
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(lhs))))


def test_short_memory_converges():
    step = np.ones(400)
    full = gl_apply(step, GlSpec(-0.5, 0.01))
    errs = [np.max(np.abs(gl_apply(step, GlSpec(-0.5, 0.01, L)) - full)) for L in (10, 25, 50, 100, 200, 400)]
    assert all(e1 > e2 for e1, e2 in zip(errs, errs[1:]))
    assert errs[-1] == 0


def test_half_integral_of_step_tracks_sqrt():
    T = 0.01
    y = gl_apply(np.ones(300), GlSpec(-0.5, T))
    n = np.arange(50, 300)
    analytic = (n * T) ** 0.5 / math.gamma(1.5)
    assert np.max(np.abs(y[50:] - analytic) / analytic) < 0.02
