import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from funcspace_lab.corpus import lacunary, packet, packet_sum
from funcspace_lab.grid import GridFunction, lp_norm
from funcspace_lab.norms import (CoefficientProfile, NormParams, besov_norm, conjugate_exponent,
                                 dyadic_besov_norm, dyadic_profile, envelope_functional,
                                 growth_envelope_estimate, lg_norm, lorentz_besov_norm,
                                 lorentz_sequence_norm, luxemburg_norm, sup_over_p)


def dense_p_grid_luxemburg(f, nu):
    ps = np.geomspace(1, 4096, 20001)
    return max(p ** (-1 / nu) * lp_norm(f, p) for p in ps[::20])


def indicator(J, measure_log2):
    v = np.zeros(2**J)
    v[: 2 ** (J - measure_log2)] = 1.0
    return GridFunction(J, v)


def test_params_validation():
    assert NormParams(q=4 / 3).q_prime == pytest.approx(4.0)
    assert conjugate_exponent(1) == np.inf
    for bad in ({"q": 2.5}, {"nu": 0}, {"gamma": 0.5}):
        with pytest.raises(ValueError):
            NormParams(**bad)


def test_luxemburg_constant():
    value, p = luxemburg_norm(GridFunction.constant(-3.0, 6), 2.0, return_argmax=True)
    assert value == pytest.approx(3.0) and p == pytest.approx(1.0)
    assert luxemburg_norm(GridFunction.constant(0.0, 4), 2.0) == 0.0


def test_luxemburg_indicator_calculus_oracle():
    f = indicator(12, 10)
    value, p = luxemburg_norm(f, 2.0, return_argmax=True)
    exact = (2 * math.e * 10 * math.log(2)) ** -0.5
    assert value == pytest.approx(exact, rel=1e-9)
    assert value == pytest.approx(0.1629, abs=5e-5)
    assert p == pytest.approx(2 * 10 * math.log(2), rel=1e-3)
    assert dense_p_grid_luxemburg(f, 2.0) <= value * (1 + 1e-12)
    assert dense_p_grid_luxemburg(f, 2.0) == pytest.approx(value, rel=1e-4)


@pytest.mark.parametrize("nu", [1.0, 4 / 3, 2.0, 4.0])
def test_luxemburg_against_dense_grid(rng, nu):
    f = GridFunction(10, rng.standard_t(3, size=1024))
    assert luxemburg_norm(f, nu) == pytest.approx(dense_p_grid_luxemburg(f, nu), rel=1e-4)


@given(arrays(np.float64, 64, elements=st.floats(-1e3, 1e3)), st.floats(0.1, 100))
def test_luxemburg_homogeneous(values, c):
    f = GridFunction(6, values)
    assert luxemburg_norm(f * c, 2.0) == pytest.approx(c * luxemburg_norm(f, 2.0), rel=1e-9,
                                                       abs=1e-300)


@given(arrays(np.float64, 32, elements=st.floats(-1e3, 1e3)),
       arrays(np.float64, 32, elements=st.floats(-1e3, 1e3)))
def test_luxemburg_triangle(a, b):
    f, g = GridFunction(5, a), GridFunction(5, b)
    assert luxemburg_norm(f + g, 2.0) <= (luxemburg_norm(f, 2.0) + luxemburg_norm(g, 2.0)) * (1 + 1e-9) + 1e-12


def test_sup_over_p_interior_maximum():
    # with L = ln p: L/4 - L^2/10 after the p^(-1/4) weight, peaking at L = 5/4
    value, p = sup_over_p(lambda p: np.log(p) / 2 - np.log(p) ** 2 / 10, 4.0)
    assert p == pytest.approx(math.exp(1.25), rel=1e-5)
    assert value == pytest.approx(math.exp(1.25 / 4 - 1.25**2 / 10), rel=1e-10)


def test_besov_examples():
    J = 10
    x = np.arange(2**J) / 2**J
    c8 = GridFunction(J, np.cos(2 * np.pi * 8 * x))
    for q in (1, 4 / 3, 2):
        assert besov_norm(c8, q) == pytest.approx(1.0)
    assert besov_norm(GridFunction.constant(1.0, J), 2) == pytest.approx(1.0)
    a = np.array([0.0, 0.3, 1.2, 0.5, 0.0, 0.7, 0.1, 0.9, 0.4])
    f = lacunary(a, J)
    for q in (1, 1.5, 2):
        assert besov_norm(f, q) == pytest.approx(np.sum(a**q) ** (1 / q), rel=1e-10)


def test_dyadic_besov_examples():
    J = 8
    haar = GridFunction(J, packet(1, J))
    assert dyadic_besov_norm(haar, 1.3) == pytest.approx(1.0)
    assert dyadic_besov_norm(GridFunction.constant(-2.0, J), 2) == pytest.approx(2.0)
    two = GridFunction(J, packet(2, J) + packet(5, J))
    assert dyadic_besov_norm(two, 2) == pytest.approx(math.sqrt(2))


def test_lorentz_examples():
    assert lorentz_sequence_norm([0, 1, 0], 1.5) == pytest.approx(1.0)
    # two equal heights: (1 * 1 + 2^(2/q - 1) * 1)^(1/2), which is sqrt(2) at q = 2
    assert lorentz_sequence_norm([1, 1], 2) == pytest.approx(math.sqrt(2))
    assert lorentz_sequence_norm([1, 1], 4 / 3) == pytest.approx(math.sqrt(1 + 2**0.5))
    b = (1.0 + np.arange(64)) ** -1.0
    q = 4 / 3
    oracle = math.sqrt(sum(n ** (2 / q - 1) * (1 / n) ** 2 for n in range(1, 65)))
    assert lorentz_sequence_norm(b[::-1], q) == pytest.approx(oracle, rel=1e-12)
    with pytest.raises(ValueError):
        lorentz_sequence_norm([1], 1)


@given(arrays(np.float64, st.integers(1, 40), elements=st.floats(0, 1e3)), st.floats(1.01, 2))
def test_lorentz_dominated_by_lq(b, q):
    assert lorentz_sequence_norm(b, q) <= np.sum(b**q) ** (1 / q) * (1 + 1e-9) + 1e-12


def test_lorentz_besov_of_packets():
    J = 8
    f = GridFunction(J, 0.5 * packet(3, J) + packet(6, J))
    assert lorentz_besov_norm(f, 2) == pytest.approx(math.sqrt(1.25))


def test_lg_examples():
    J = 10
    x = np.arange(2**J) / 2**J
    for g in (0.6, 1, 3):
        assert lg_norm(GridFunction.constant(1.0, J), g, "fourier") == pytest.approx(1.0)
        assert lg_norm(GridFunction.constant(1.0, J), g, "dyadic") == pytest.approx(1.0)
    assert lg_norm(GridFunction(J, np.cos(2 * np.pi * 8 * x)), 1, "fourier") == pytest.approx(4.0)
    assert lg_norm(GridFunction(J, packet(1, J)), 1, "dyadic") == pytest.approx(2.0)
    with pytest.raises(ValueError):
        lg_norm(GridFunction.constant(1.0, J), 1, "other")


def test_profile_ordering_is_stable():
    prof = CoefficientProfile.from_values([0.5, 1.0, 0.5, 2.0])
    assert list(prof.ordering) == [3, 1, 0, 2]
    assert list(prof.sorted_values) == [2.0, 1.0, 0.5, 0.5]
    f = packet_sum([0.0, 1.0, 0.25], 6)
    assert list(dyadic_profile(f).ordering[:2]) == [1, 2]


def test_envelope_estimate():
    t = [2.0**-j for j in range(1, 10)]
    est = growth_envelope_estimate(2, t, [GridFunction.constant(1.0, 10)])
    assert all(e == pytest.approx(1.0) for _, e in est)
    K, q = 12, 2.0
    heights = np.full(K, K ** (-1 / q))
    w = lacunary(heights, 14)
    e = dict(growth_envelope_estimate(q, [2.0**-12], [w]))[2.0**-12]
    assert e >= 0.25 * K ** (1 / conjugate_exponent(q))
    vals = [e for _, e in growth_envelope_estimate(q, sorted(t), [w])]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        growth_envelope_estimate(2, t, [])


def test_envelope_functional_constant():
    assert envelope_functional(GridFunction.constant(1.0, 8), 2) == pytest.approx(1.0)
