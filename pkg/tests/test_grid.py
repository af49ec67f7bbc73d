import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from funcspace_lab.grid import (GridFunction, SpectralFunction, forward_transform, frequencies,
                                inverse_transform, lp_norm, read_csv, rearrangement,
                                rearrangement_at, sup_norm, write_csv)


def direct_dft(samples):
    """O(N^2) coefficients c_l = (1/N) sum_m f_m e^{-2 pi i l m / N}, l = -N/2..N/2-1."""
    N = samples.size
    m = np.arange(N)
    ells = np.arange(-N // 2, N // 2)
    return np.array([np.sum(samples * np.exp(-2j * np.pi * l * m / N)) / N for l in ells])


def test_constant_transform():
    c = forward_transform(GridFunction.constant(1.0, 3))
    assert c.coeff(0) == pytest.approx(1.0)
    others = np.delete(c.coeffs, np.nonzero(c.frequencies == 0)[0])
    assert np.abs(others).max() < 1e-15


def test_cosine_transform():
    c = forward_transform(GridFunction.from_callable(lambda x: np.cos(2 * np.pi * x), 4))
    assert c.coeff(1) == pytest.approx(0.5)
    assert c.coeff(-1) == pytest.approx(0.5)
    mask = np.abs(c.frequencies) != 1
    assert np.abs(c.coeffs[mask]).max() < 1e-15


def test_fast_transform_matches_direct_sum(rng):
    f = GridFunction(10, rng.normal(size=2**10))
    assert np.abs(forward_transform(f).coeffs - direct_dft(f.samples)).max() < 1e-12
    back = inverse_transform(forward_transform(f))
    assert np.abs(back.samples - f.samples).max() < 1e-12


def test_frequency_ordering():
    assert list(frequencies(3)) == [-4, -3, -2, -1, 0, 1, 2, 3]


def test_inverse_rejects_non_hermitian():
    c = np.zeros(8, dtype=complex)
    c[5] = 1.0  # l = 1 without its conjugate partner
    with pytest.raises(ValueError):
        inverse_transform(SpectralFunction(3, c))
    assert not SpectralFunction(3, c).is_hermitian()


@given(arrays(np.float64, 64, elements=st.floats(-1e3, 1e3)))
def test_plancherel(values):
    f = GridFunction(6, values)
    c = forward_transform(f).coeffs
    assert np.sum(np.abs(c) ** 2) == pytest.approx(np.mean(values**2), rel=1e-10, abs=1e-10)


@given(arrays(np.float64, 32, elements=st.floats(-1e3, 1e3)))
def test_round_trip(values):
    f = GridFunction(5, values)
    assert np.allclose(inverse_transform(forward_transform(f)).samples, values, atol=1e-10)


def test_lp_norm_examples():
    assert lp_norm(GridFunction.constant(-2.5, 4), 7) == pytest.approx(2.5)
    half = GridFunction(4, np.r_[np.ones(8), np.zeros(8)])
    assert lp_norm(half, 2) == pytest.approx(0.5**0.5)
    assert lp_norm(half, np.inf) == 1.0


def test_lp_norm_lacunary_quadrature():
    J = 10
    x = np.arange(2**J) / 2**J
    vals = sum(np.cos(2 * np.pi * 2**k * x) for k in range(1, 6))
    oracle = (sum(v**4 for v in vals) / 2**J) ** 0.25
    assert lp_norm(GridFunction(J, vals), 4) == pytest.approx(oracle, rel=1e-12)


def test_lp_norm_rejects_small_p():
    with pytest.raises(ValueError):
        lp_norm(GridFunction.constant(1.0, 2), 0.5)


@given(arrays(np.float64, 16, elements=st.floats(-50, 50)), st.floats(1, 40))
def test_lp_monotone_in_p(values, p):
    f = GridFunction(4, values)
    assert lp_norm(f, p) <= lp_norm(f, p + 1) * (1 + 1e-12) + 1e-300
    assert lp_norm(f, p) <= sup_norm(f) * (1 + 1e-12)


def test_rearrangement_examples(rng):
    assert list(rearrangement(GridFunction.constant(1.0, 3))) == [1.0] * 8
    assert list(rearrangement(GridFunction(2, [-3, 1, 0, 2]))) == [3, 2, 1, 0]
    assert rearrangement_at(GridFunction(2, [-3, 1, 0, 2]), 0.3) == 2
    f = GridFunction(9, rng.normal(size=512))
    r = rearrangement(f)
    for p in (1, 2.5, 7):
        assert np.mean(r**p) ** (1 / p) == pytest.approx(lp_norm(f, p), rel=1e-12)


def test_validation():
    with pytest.raises(ValueError):
        GridFunction(3, np.ones(7))
    with pytest.raises(ValueError):
        GridFunction(2, [1, 2, np.nan, 0])
    with pytest.raises(ValueError):
        GridFunction(17, np.ones(4))
    with pytest.raises(ValueError):
        GridFunction.constant(1, 3) + GridFunction.constant(1, 4)


def test_samples_read_only():
    f = GridFunction.constant(1.0, 3)
    with pytest.raises(ValueError):
        f.samples[0] = 2.0


def test_arithmetic():
    f = GridFunction.constant(2.0, 3)
    g = (f * 3 - f) / 2 + (-f)
    assert np.all(g.samples == 0.0)


def test_csv_round_trip(tmp_path, rng):
    f = GridFunction(5, rng.normal(size=32))
    write_csv(f, tmp_path / "f.csv")
    assert (tmp_path / "f.csv").read_text().startswith("x,value\n")
    g = read_csv(tmp_path / "f.csv")
    assert np.allclose(g.samples, f.samples, rtol=1e-11)
