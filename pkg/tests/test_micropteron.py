import numpy as np
import pytest

from fput_micropteron.dispersion import WaveParameters
from fput_micropteron.micropteron import (BealeNonContraction, assemble_profiles, assembled_residual,
                                          beale_iterate, mu_sweep, supersonic_margin)
from fput_micropteron.solitary import solve_monatomic
from fput_micropteron.spectral_ops import residual_G

from conftest import jost_at, solitary_at

_SOL = {}


def solution(mu):
    if mu not in _SOL:
        p = WaveParameters.from_epsilon(0.2, mu)
        _SOL[mu] = beale_iterate(p, solitary_at(0.2), jost_at(0.2))
    return _SOL[mu]


def test_mu_zero_trivial_in_one_step(params02, sol02, jost02):
    r = beale_iterate(params02, sol02, jost02)
    assert r.iterations == 1 and r.a == 0.0
    assert not np.any(r.eta1.values) and not np.any(r.eta2.values)
    assert r.residual <= 1e-10


@pytest.mark.parametrize("mu", [5e-4, 1e-3])
def test_converged_solution_properties(mu):
    r = solution(mu)
    assert r.residual <= 1e-10
    r.eta1.check()
    r.eta2.check()
    assert abs(r.a) < 1e-14
    assert abs(r.solvability_multiplier) < 1e-18
    # frozen from a reference run
    assert r.size() / mu == pytest.approx({5e-4: 0.75056, 1e-3: 0.75020}[mu], rel=1e-4)


def test_assembled_residual_recomputed_directly():
    mu = 1e-3
    r = solution(mu)
    prof = assemble_profiles(r, solitary_at(0.2))
    direct = residual_G(WaveParameters.from_epsilon(0.2, mu), prof["rho"]).sup()
    assert direct <= 1e-10
    assert direct == pytest.approx(assembled_residual(WaveParameters.from_epsilon(0.2, mu), solitary_at(0.2),
                                                      r.eta1, r.eta2, r.a, r.periodic), rel=1e-3)


def test_corrector_matches_speed_derivative_to_first_order():
    """eta1 = -(mu c / 4) d(varsigma)/dc + O(mu^2): h1 = (mu/2) c^2 varsigma'' and H_c d_c varsigma = -2 c varsigma''."""
    s = solitary_at(0.2)
    p = WaveParameters.from_epsilon(0.2)
    d = 1e-5
    dc = (solve_monatomic(WaveParameters(p.c + d), s.grid).profile.values
          - solve_monatomic(WaveParameters(p.c - d), s.grid).profile.values) / (2 * d)
    errs = []
    for mu in (5e-4, 1e-3):
        lead = -(mu * p.c / 4) * dc
        errs.append(np.max(np.abs(solution(mu).eta1.values - lead)) / np.max(np.abs(lead)))
    assert errs[1] < 100 * 1e-3
    assert 1.7 < errs[1] / errs[0] < 2.3


def test_subsonic_detuning_does_not_contract(params02, sol02, jost02):
    p = params02.with_mu(4e-3)
    assert supersonic_margin(p) < 0
    with pytest.raises(BealeNonContraction):
        beale_iterate(p, sol02, jost02)


def test_sweep_halves_on_failure(params02, sol02, jost02):
    out = mu_sweep(params02, sol02, jost02, [4e-3])
    assert out[0].mu == 2e-3
    assert out[0].residual <= 1e-10
