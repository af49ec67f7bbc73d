"""Dyadic martingale structure: conditional expectations, differences,
square and maximal functions."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import GridFunction


def block_mean(values: np.ndarray, k: int) -> np.ndarray:
    """Replace each level-``k`` block of the last axis by its mean.

    Works for real or complex arrays; the last axis length must be a power of
    two ``>= 2**k``.
    """
    values = np.asarray(values)
    N = values.shape[-1]
    nb = 2**k
    if nb > N:
        raise ValueError(f"level {k} finer than grid of size {N}")
    shaped = values.reshape(values.shape[:-1] + (nb, N // nb))
    means = shaped.mean(axis=-1, keepdims=True)
    return np.broadcast_to(means, shaped.shape).reshape(values.shape)


def block_difference(values: np.ndarray, k: int) -> np.ndarray:
    if k == 0:
        return block_mean(values, 0)
    return block_mean(values, k) - block_mean(values, k - 1)


def _check_level(f: GridFunction, k: int):
    if int(k) != k or not 0 <= k <= f.J:
        raise ValueError(f"level k={k} out of range 0..{f.J}")


def conditional_expectation(f: GridFunction, k: int) -> GridFunction:
    _check_level(f, k)
    return GridFunction(f.J, block_mean(f.samples, k))


def martingale_difference(f: GridFunction, k: int) -> GridFunction:
    _check_level(f, k)
    return GridFunction(f.J, block_difference(f.samples, k))


@dataclass(frozen=True)
class Expectation:
    """The operator E_k, usable inside operator compositions."""

    k: int

    def apply_array(self, values):
        return block_mean(values, self.k)

    @property
    def output_block_level(self) -> int:
        return self.k

    @property
    def shift_level(self):
        # commutes with shifts by N / 2**shift_level samples; None = all shifts
        return self.k or None


@dataclass(frozen=True)
class Difference:
    """The operator D_k, usable inside operator compositions."""

    k: int

    def apply_array(self, values):
        return block_difference(values, self.k)

    @property
    def output_block_level(self) -> int:
        return self.k

    @property
    def shift_level(self):
        if self.k == 0:
            return None
        return self.k if self.k == 1 else self.k - 1


@dataclass(frozen=True, eq=False)
class DyadicDecomposition:
    J: int
    pieces: tuple
    expectations: tuple

    def reconstruct(self) -> GridFunction:
        return GridFunction(self.J, np.sum([p.samples for p in self.pieces], axis=0))

    def piece_sup_norms(self) -> np.ndarray:
        return np.array([np.abs(p.samples).max() for p in self.pieces])

    def write_csv(self, path) -> None:
        """Rows ``k,block_index,value``; piece ``k`` has ``2**k`` block values."""
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["k", "block_index", "value"])
            for k, piece in enumerate(self.pieces):
                vals = piece.samples[:: 2**self.J // 2**k]
                for b, v in enumerate(vals):
                    w.writerow([k, b, f"{v:.12g}"])


def decompose(f: GridFunction) -> DyadicDecomposition:
    exps = [block_mean(f.samples, k) for k in range(f.J + 1)]
    pieces = [exps[0]] + [exps[k] - exps[k - 1] for k in range(1, f.J + 1)]
    return DyadicDecomposition(
        f.J,
        tuple(GridFunction(f.J, p) for p in pieces),
        tuple(GridFunction(f.J, e) for e in exps),
    )


def square_function(d: DyadicDecomposition) -> GridFunction:
    sq = np.sum([p.samples**2 for p in d.pieces], axis=0)
    return GridFunction(d.J, np.sqrt(sq))


def maximal_function(d: DyadicDecomposition) -> GridFunction:
    e0 = d.expectations[0].samples
    dev = np.max([np.abs(e.samples - e0) for e in d.expectations], axis=0)
    return GridFunction(d.J, dev)


def good_lambda_ratios(corpus, epsilons=(0.5, 0.25, 0.125), lambdas=None):
    """Pooled empirical ratios of the good-lambda inequality.

    For each ``eps`` returns
    ``sum meas{M0 f > 2 lam, S f < eps lam} / sum meas{sup_k |E_k f| > lam}``
    pooled over the corpus and the ``lam`` grid. ``lambdas`` are multiples of
    each function's L^2 norm (default ``0.25 .. 4``).
    """
    if lambdas is None:
        lambdas = np.geomspace(0.25, 4.0, 9)
    num = np.zeros(len(epsilons))
    den = 0.0
    for f in corpus:
        d = decompose(f)
        S = square_function(d).samples
        M0 = maximal_function(d).samples
        Mx = np.max([np.abs(e.samples) for e in d.expectations], axis=0)
        scale = np.sqrt(np.mean(f.samples**2))
        if scale == 0:
            continue
        for lam in np.asarray(lambdas) * scale:
            den += np.mean(Mx > lam)
            for i, eps in enumerate(epsilons):
                num[i] += np.mean((M0 > 2 * lam) & (S < eps * lam))
    if den == 0:
        raise ValueError("corpus has no mass above any lambda")
    return dict(zip(epsilons, num / den))
