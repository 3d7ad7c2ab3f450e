import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cascadeflow as cf
from cascadeflow.discretize import derivative_sign_encode

# dyadic grid values make float add/negate exact, so symmetry laws hold exactly
dyadic = st.integers(-64, 64).map(lambda n: n / 64.0)


def encode(values, epsilon=0.0):
    return derivative_sign_encode(np.asarray(values, dtype=float), epsilon).symbols.tolist()


def test_worked_example():
    assert encode([0.1, 0.3, 0.3, 0.2]) == [3, 2, 1]


def test_constant_series_all_flat():
    assert encode([0.5] * 6) == [2, 2, 2, 2, 2]


def test_strictly_increasing_all_up():
    assert encode([0.0, 0.1, 0.25, 0.7]) == [3, 3, 3]


def test_length_contract():
    sym = derivative_sign_encode(np.linspace(0, 1, 10))
    assert len(sym) == 9


def test_too_short_rejected():
    with pytest.raises(ValueError, match="too short"):
        derivative_sign_encode(np.array([1.0]))


def test_negative_epsilon_rejected():
    with pytest.raises(ValueError):
        derivative_sign_encode(np.array([1.0, 2.0]), epsilon=-0.1)


def test_nonuniform_series_rejected():
    ts = cf.TimeSeries(0, 60, [0.1, 0.2], [1, 1], uniform=False)
    with pytest.raises(ValueError, match="nonuniform"):
        derivative_sign_encode(ts)


def test_epsilon_widens_flat_band():
    values = [0.0, 0.05, 0.2, 0.15]
    assert encode(values) == [3, 3, 1]
    assert encode(values, epsilon=0.06) == [2, 3, 2]


def test_timeseries_input_carries_bin_width():
    ts = cf.TimeSeries(0, 60, [0.1, 0.2, 0.2], [1, 1, 1])
    sym = derivative_sign_encode(ts)
    assert sym.source_bin_width_s == 60
    assert sym.symbols.tolist() == [3, 2]


@given(st.lists(dyadic, min_size=2, max_size=30), st.integers(-32, 32))
@settings(max_examples=100)
def test_constant_shift_invariance(values, shift_n):
    shift = shift_n / 16.0
    shifted = [v + shift for v in values]
    assert encode(values) == encode(shifted)


@given(st.lists(dyadic, min_size=2, max_size=30))
@settings(max_examples=100)
def test_negation_swaps_up_and_down(values):
    swap = {1: 3, 2: 2, 3: 1}
    assert encode([-v for v in values]) == [swap[s] for s in encode(values)]


@given(st.lists(dyadic, min_size=2, max_size=30), st.integers(-6, 6))
@settings(max_examples=100)
def test_positive_scaling_preserves_symbols(values, log_scale):
    scale = 2.0**log_scale
    assert encode([v * scale for v in values]) == encode(values)
