import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from funcspace_lab.dyadic import (Difference, Expectation, block_mean, conditional_expectation,
                                  decompose, good_lambda_ratios, martingale_difference,
                                  maximal_function, square_function)
from funcspace_lab.grid import GridFunction, lp_norm


def loop_block_mean(values, k):
    N = values.size
    w = N // 2**k
    out = np.empty(N)
    for b in range(2**k):
        out[b * w:(b + 1) * w] = sum(values[b * w:(b + 1) * w]) / w
    return out


def haar_step(J):
    return GridFunction(J, np.r_[np.ones(2 ** (J - 1)), -np.ones(2 ** (J - 1))])


def test_block_mean_matches_loop(rng):
    f = GridFunction(10, rng.normal(size=1024))
    assert np.abs(conditional_expectation(f, 2).samples - loop_block_mean(f.samples, 2)).max() < 1e-14


def test_expectation_examples(rng):
    cos = GridFunction.from_callable(lambda x: np.cos(2 * np.pi * x), 8)
    assert np.abs(conditional_expectation(cos, 0).samples).max() < 1e-15
    f = GridFunction(6, rng.normal(size=64))
    assert np.array_equal(conditional_expectation(f, 6).samples, f.samples)
    with pytest.raises(ValueError):
        conditional_expectation(f, 7)
    with pytest.raises(ValueError):
        martingale_difference(f, -1)


def test_haar_and_constant_pieces():
    d = decompose(haar_step(6))
    norms = d.piece_sup_norms()
    assert norms[1] == 1.0 and np.all(np.delete(norms, 1) < 1e-15)
    d = decompose(GridFunction.constant(3.0, 5))
    assert np.allclose(d.pieces[0].samples, 3.0)
    assert np.all(d.piece_sup_norms()[1:] < 1e-15)


def test_exactness_random(rng):
    for _ in range(20):
        f = GridFunction(12, rng.normal(size=4096))
        d = decompose(f)
        assert np.abs(d.reconstruct().samples - f.samples).max() < 1e-12


@given(arrays(np.float64, 64, elements=st.floats(-100, 100)), st.integers(0, 6), st.integers(0, 6))
def test_difference_orthogonality(values, k, l):
    dk = block_difference_of(values, k)
    dkl = block_difference_of(dk, l)
    if k == l:
        assert np.allclose(dkl, dk, atol=1e-9)
    else:
        assert np.abs(dkl).max() < 1e-9


def block_difference_of(values, k):
    return martingale_difference(GridFunction(6, values), k).samples


@given(arrays(np.float64, 32, elements=st.floats(-100, 100)), st.integers(0, 5), st.integers(0, 5))
def test_expectation_nesting(values, k, l):
    f = GridFunction(5, values)
    a = conditional_expectation(conditional_expectation(f, k), l).samples
    assert np.allclose(a, conditional_expectation(f, min(k, l)).samples, atol=1e-10)


def test_block_mean_batched_and_complex(rng):
    v = rng.normal(size=(3, 64)) + 1j * rng.normal(size=(3, 64))
    out = block_mean(v, 3)
    for row, orow in zip(v, out):
        assert np.allclose(orow.real, loop_block_mean(row.real, 3))
        assert np.allclose(orow.imag, loop_block_mean(row.imag, 3))


def test_operator_objects(rng):
    v = rng.normal(size=256)
    assert np.allclose(Expectation(3).apply_array(v), block_mean(v, 3))
    assert np.allclose(Difference(3).apply_array(v), block_mean(v, 3) - block_mean(v, 2))
    assert Difference(0).shift_level is None and Difference(1).shift_level == 1
    assert Difference(5).shift_level == 4 and Expectation(0).shift_level is None


def test_square_function(rng):
    assert np.allclose(square_function(decompose(haar_step(7))).samples, 1.0)
    assert np.allclose(square_function(decompose(GridFunction.constant(-2.0, 5))).samples, 2.0)
    for _ in range(10):
        f = GridFunction(10, rng.normal(size=1024))
        S = square_function(decompose(f))
        assert lp_norm(S, 2) / lp_norm(f, 2) == pytest.approx(1.0, abs=1e-10)


def test_maximal_function(rng):
    assert np.allclose(maximal_function(decompose(GridFunction.constant(4.0, 5))).samples, 0.0)
    assert np.allclose(maximal_function(decompose(haar_step(5))).samples, 1.0)
    f = GridFunction(9, rng.normal(size=512))
    M0 = maximal_function(decompose(f)).samples
    assert np.all(M0 >= np.abs(f.samples - f.samples.mean()) - 1e-12)


def test_decomposition_csv(tmp_path):
    d = decompose(haar_step(3))
    d.write_csv(tmp_path / "d.csv")
    lines = (tmp_path / "d.csv").read_text().splitlines()
    assert lines[0] == "k,block_index,value"
    assert len(lines) == 1 + sum(2**k for k in range(4))
    assert "1,0,1" in lines and "1,1,-1" in lines


def test_good_lambda_ratios_small_for_small_eps(rng):
    corpus = [GridFunction(10, rng.normal(size=1024)) for _ in range(8)]
    r = good_lambda_ratios(corpus)
    assert r[0.125] <= r[0.25] <= r[0.5] <= 1.0
