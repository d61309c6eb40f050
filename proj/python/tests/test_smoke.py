import json
import math

import numpy as np
import pytest

import qiopa


def test_pair_extraction_matches_h_input():
    g = 1.0
    res = qiopa.pair_extracted_rho(qiopa.GainParams(g), qiopa.PolarizationQubit.preset("H"))
    assert res["basis"] == ["HH", "HV", "VH", "VV"]
    assert np.allclose(res["rho"], qiopa.h_input(math.tanh(g)), atol=1e-12)


def test_generic_input_matches_corrected_closed_form():
    q = qiopa.PolarizationQubit(0.6, 0.8j)
    res = qiopa.pair_extracted_rho(qiopa.GainParams(0.7), q)
    assert np.allclose(res["rho"], qiopa.pair_analytic(math.tanh(0.7), q), atol=1e-12)


def test_three_qubit_and_werner_weight():
    t = math.tanh(1.0)
    res = qiopa.pair_extracted_rho3(qiopa.GainParams(1.0))
    assert np.allclose(res["rho"], qiopa.three_qubit(t), atol=1e-12)
    fit = qiopa.werner_fit(qiopa.reduced_pair(t, "k1k2"))
    assert fit["bell"] == "psi-"
    assert fit["weight"] == pytest.approx(qiopa.werner_p(t), abs=1e-12)
    assert fit["entangled"]


def test_metrics():
    phi = np.array([1, 0, 0, -1]) / math.sqrt(2)
    rho = np.outer(phi, phi.conj())
    assert qiopa.concurrence(rho) == pytest.approx(1.0)
    assert qiopa.uhlmann_fidelity(rho, rho) == pytest.approx(1.0)
    assert qiopa.hs_distance(rho, rho) == pytest.approx(0.0)
    assert np.allclose(qiopa.unot_on_pair(rho), qiopa.reduced_pair(0.3, "kTk2"), atol=1e-14)


def test_convention_a_gives_eta_squared_scaling():
    gain = qiopa.GainParams(0.3)
    hi = qiopa.pair_extracted_rho(gain, qiopa.PolarizationQubit.preset("H"),
                                  qiopa.LossSpec(1e-3, qiopa.LossConvention.a))
    lo = qiopa.pair_extracted_rho(gain, qiopa.PolarizationQubit.preset("H"),
                                  qiopa.LossSpec(1e-4, qiopa.LossConvention.a))
    assert hi["success_probability"] / lo["success_probability"] == pytest.approx(100, rel=0.05)


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        qiopa.GainParams(-1.0)
    with pytest.raises(ValueError):
        qiopa.PolarizationQubit(1.0, 1.0)


def test_verify_subset_passes():
    report = json.loads(qiopa.verify(criteria=[5, 6, 7]))
    assert report["pass"]
    assert report["failed"] == 0
