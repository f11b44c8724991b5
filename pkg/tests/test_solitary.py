import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fput_micropteron.dispersion import WaveParameters
from fput_micropteron.solitary import kdv_limit_profile, kdv_seed, rescaled_error, solve_monatomic
from fput_micropteron.spectral_ops import Grid, ProfilePair, GridFunction, residual_G

from conftest import solitary_at

# peak heights and rescaled errors against eps^2/16 sech^2(eps x / (2 sqrt 2)), frozen from a reference run
PEAKS = {0.4: 0.009990156993738715, 0.2: 0.002499377483921666, 0.1: 0.0006249609765739406}
LIMIT_ERRORS = {0.4: 2.553e-4, 0.2: 6.415e-5, 0.1: 1.606e-5}


@pytest.mark.parametrize("eps", [0.4, 0.2, 0.1])
def test_solitary_frozen_values(eps):
    s = solitary_at(eps)
    assert s.residual <= 1e-10
    assert abs(s.stabilizing_factor - 1) < 1e-10
    assert float(np.max(s.profile.values)) == pytest.approx(PEAKS[eps], rel=1e-8)
    assert rescaled_error(s, eps) == pytest.approx(LIMIT_ERRORS[eps], rel=2e-3)


@pytest.mark.parametrize("eps", [0.4, 0.2])
def test_profile_positive_even_and_decaying(eps):
    s = solitary_at(eps)
    v = s.profile.values
    assert np.all(v > 0)
    s.profile.check()
    x = s.grid.x
    peak = np.argmax(v)
    assert x[peak] == 0.0
    assert np.all(np.diff(v[peak:]) <= 0)


def test_tail_rate_matches_linear_decay(sol02):
    assert sol02.fitted_tail_rate == pytest.approx(sol02.tail_rate, rel=1e-3)
    assert sol02.tail_rate == pytest.approx(0.2 / math.sqrt(2), rel=2e-3)


def test_long_wave_limit_peak_is_one_sixteenth():
    grid = Grid(64.0, 256)
    assert np.max(kdv_limit_profile(0.5, grid).values) == pytest.approx(0.25 / 16, rel=1e-12)
    assert np.max(kdv_seed(0.5, grid).values) == pytest.approx(0.0625, rel=1e-12)


def test_residual_recomputed_independently(sol02, params02):
    pair = ProfilePair(sol02.profile, GridFunction.zeros(sol02.grid, "odd"))
    assert residual_G(params02, pair).sup() <= 1e-10


@settings(max_examples=8, deadline=None)
@given(st.floats(0.25, 0.6))
def test_solitary_properties_random_eps(eps):
    s = solve_monatomic(WaveParameters.from_epsilon(eps))
    assert s.residual <= 1e-10
    assert np.all(s.profile.values > 0)
    # peak scales like eps^2/16 with an O(eps^2) relative correction
    assert abs(np.max(s.profile.values) / (eps**2 / 16) - 1) < 0.05 * eps**2 + 1e-6
