import numpy as np
import pytest

from gaugecolor import NoiseParams, derive_stream
from gaugecolor.noise import sample_measurement_flips, sample_qubit_errors


def test_noise_params_defaults_and_validation():
    np_ = NoiseParams(0.01)
    assert np_.q == 0.01
    assert NoiseParams(0.01, 0.2).q == 0.2
    for bad in (-0.1, 1.5):
        with pytest.raises(ValueError):
            NoiseParams(bad)
    with pytest.raises(ValueError):
        NoiseParams(0.1, 1.2)


def test_degenerate_rates():
    s = derive_stream(1, 0, 0, "qubit")
    assert not sample_qubit_errors(500, 0.0, s).any()
    s = derive_stream(1, 0, 0, "qubit")
    assert sample_qubit_errors(500, 1.0, s).all()
    s = derive_stream(1, 0, 0, "flip")
    assert sample_measurement_flips(300, 1.0, s).all()


def test_empirical_rate_within_3_sigma():
    # 1e5 draws of 651 bits at p = 0.01: mean weight 6.51, binomial moments
    draws = 100_000
    total = 0
    for chunk in range(10):
        s = derive_stream(7, chunk, 0, "qubit")
        bits = s.random((draws // 10, 651)) < 0.01
        total += int(bits.sum())
    mean_weight = total / draws
    sigma_one = np.sqrt(651 * 0.01 * 0.99)
    sigma_mean = sigma_one / np.sqrt(draws)
    assert abs(mean_weight - 6.51) < 3 * sigma_mean


def test_stream_determinism_and_independence():
    a1 = sample_qubit_errors(4000, 0.5, derive_stream(42, 3, 1, "qubit"))
    a2 = sample_qubit_errors(4000, 0.5, derive_stream(42, 3, 1, "qubit"))
    assert (a1 == a2).all()
    b = sample_qubit_errors(4000, 0.5, derive_stream(42, 3, 2, "qubit"))
    c = sample_qubit_errors(4000, 0.5, derive_stream(42, 4, 1, "qubit"))
    d = sample_qubit_errors(4000, 0.5, derive_stream(42, 3, 1, "flip"))
    for other in (b, c, d):
        assert (a1 != other).any()
        # agreement rate of independent fair bits: 0.5 +- 3 sigma
        agree = (a1 == other).mean()
        assert abs(agree - 0.5) < 3 * 0.5 / np.sqrt(4000)


def test_distinct_master_seeds_differ():
    a = sample_qubit_errors(1000, 0.5, derive_stream(1, 0, 0, "qubit"))
    b = sample_qubit_errors(1000, 0.5, derive_stream(2, 0, 0, "qubit"))
    assert (a != b).any()
