"""Function-space norms: exponential Luxemburg, Besov and dyadic Besov,
Lorentz-Besov, LG classes, and the growth-envelope estimator."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .dyadic import decompose
from .grid import GridFunction, rearrangement
from .multipliers import littlewood_paley_pieces

# geometric p-grid 2**(j/8), p in [1, 2**12]
P_GRID = 2.0 ** (np.arange(0, 12 * 8 + 1) / 8.0)


@dataclass(frozen=True)
class NormParams:
    q: float = 2.0
    nu: float = 2.0
    gamma: float = 1.0

    def __post_init__(self):
        if not 1.0 <= self.q <= 2.0:
            raise ValueError(f"q must lie in [1, 2], got {self.q}")
        if not self.nu > 0:
            raise ValueError(f"nu must be positive, got {self.nu}")
        if not self.gamma > 0.5:
            raise ValueError(f"gamma must exceed 1/2, got {self.gamma}")

    @property
    def q_prime(self) -> float:
        return conjugate_exponent(self.q)


def conjugate_exponent(q: float) -> float:
    return np.inf if q == 1 else q / (q - 1.0)


@dataclass(frozen=True, eq=False)
class CoefficientProfile:
    """Piece sup-norms ``b_k`` and the ordering ``n -> k(n, f)``."""

    values: np.ndarray
    ordering: np.ndarray

    @classmethod
    def from_values(cls, values) -> "CoefficientProfile":
        v = np.asarray(values, dtype=float)
        # stable: ties keep increasing k
        order = np.argsort(-v, kind="stable")
        return cls(v, order)

    @property
    def sorted_values(self) -> np.ndarray:
        return self.values[self.ordering]


def dyadic_profile(f: GridFunction) -> CoefficientProfile:
    return CoefficientProfile.from_values(decompose(f).piece_sup_norms())


def _lq(values, q: float) -> float:
    v = np.abs(np.asarray(values, dtype=float))
    if np.isinf(q):
        return float(v.max(initial=0.0))
    m = v.max(initial=0.0)
    if m == 0:
        return 0.0
    return float(m * np.sum((v / m) ** q) ** (1.0 / q))


class _Distribution:
    """|f| compressed to distinct values with counts, for fast p-sweeps."""

    def __init__(self, samples: np.ndarray):
        a = np.abs(samples)
        self.max = float(a.max(initial=0.0))
        vals, counts = np.unique(a, return_counts=True)
        # values far below the max underflow to ratio 0 and contribute nothing
        ratios = vals / self.max if self.max else vals
        keep = ratios > 0
        self.ratios = ratios[keep]
        self.logr = np.log(self.ratios)
        self.weights = counts[keep] / a.size

    def log_norm(self, p):
        """``ln ||f||_p`` for scalar or array ``p``."""
        p = np.asarray(p, dtype=float)
        s = np.exp(np.multiply.outer(p, self.logr)) @ self.weights
        return np.log(self.max) + np.log(s) / p


def sup_over_p(log_norm, nu: float):
    """Maximize ``p^(-1/nu) exp(log_norm(p))`` over ``p >= 1``.

    ``log_norm`` maps an array of ``p`` to ``ln ||.||_p``. Grid search on
    ``P_GRID`` followed by bounded refinement between the neighbours of the
    grid argmax. Returns ``(value, argmax_p)``.
    """
    def g(lp):
        return -lp / nu + log_norm(np.exp(lp))

    lps = np.log(P_GRID)
    vals = g(lps)
    i = int(np.argmax(vals))
    best_lp, best = lps[i], vals[i]
    lo, hi = lps[max(i - 1, 0)], lps[min(i + 1, len(lps) - 1)]
    if hi > lo:
        res = minimize_scalar(lambda t: -float(g(np.atleast_1d(t))[0]), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-7})
        if -res.fun > best:
            best_lp, best = res.x, -res.fun
    return float(np.exp(best)), float(np.exp(best_lp))


def luxemburg_norm(f: GridFunction, nu: float, return_argmax: bool = False):
    """``sup_{p >= 1} p^(-1/nu) ||f||_p``."""
    if not nu > 0:
        raise ValueError(f"nu must be positive, got {nu}")
    dist = _Distribution(f.samples)
    if dist.max == 0:
        return (0.0, 1.0) if return_argmax else 0.0
    value, p = sup_over_p(dist.log_norm, nu)
    return (value, p) if return_argmax else value


def besov_norm(f: GridFunction, q: float) -> float:
    """``(sum_k ||L_k f||_inf^q)^(1/q)`` for band-limited ``f``."""
    pieces = littlewood_paley_pieces(f)
    return _lq([np.abs(p.samples).max() for p in pieces], q)


def dyadic_besov_norm(f: GridFunction, q: float) -> float:
    return _lq(decompose(f).piece_sup_norms(), q)


def lorentz_sequence_norm(values, q: float) -> float:
    """``(sum_{n>=1} n^(2/q - 1) (b*_n)^2)^(1/2)`` with ``b*`` nonincreasing."""
    if not q > 1:
        raise ValueError("q must exceed 1")
    b = np.sort(np.abs(np.asarray(values, dtype=float)))[::-1]
    n = np.arange(1, b.size + 1, dtype=float)
    return float(np.sqrt(np.sum(n ** (2.0 / q - 1.0) * b**2)))


def lorentz_besov_norm(f: GridFunction, q: float) -> float:
    return lorentz_sequence_norm(decompose(f).piece_sup_norms(), q)


def lg_norm(f: GridFunction, gamma: float, flavor: str = "dyadic") -> float:
    if flavor == "fourier":
        b = np.array([np.abs(p.samples).max() for p in littlewood_paley_pieces(f)])
    elif flavor == "dyadic":
        b = decompose(f).piece_sup_norms()
    else:
        raise ValueError(f"flavor must be 'fourier' or 'dyadic', got {flavor!r}")
    return float(np.max((1.0 + np.arange(b.size)) ** gamma * b))


def growth_envelope_estimate(q: float, t_grid, corpus):
    """Corpus maximum of ``f*(t)``: a lower estimate of the growth envelope.

    Members are expected to have unit Besov norm (see ``corpus``).
    """
    corpus = list(corpus)
    if not corpus:
        raise ValueError("empty corpus")
    t = np.asarray(t_grid, dtype=float)
    best = np.zeros_like(t)
    for f in corpus:
        r = rearrangement(f)
        idx = np.minimum(np.floor(t * f.N).astype(int), f.N - 1)
        best = np.maximum(best, r[idx])
    return list(zip(t.tolist(), best.tolist()))


def envelope_functional(f: GridFunction, q: float) -> float:
    """``sup_t f*(t) log(e/t)^(-1/q')`` over grid points ``t = (m+1)/N``."""
    r = rearrangement(f)
    t = np.arange(1, f.N + 1) / f.N
    return float(np.max(r * np.log(np.e / t) ** (-1.0 / conjugate_exponent(q))))
