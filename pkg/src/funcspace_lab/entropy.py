"""Approximation profiles, covering bounds and entropy-number estimates for
the unit ball of the dyadic LG class in exponential Orlicz targets.

Upper bounds come from approximation by dyadic step functions (level ``M``,
dimension ``2**M``) fed into Lorentz's covering estimate
``ln N_eps <= 2 n ln(18 delta_0 / eps)`` for ``eps >= delta_n``. Lower bounds
come from greedy packings of random-sign packet sums.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import zeta

from .corpus import lg_heights, packet, packet_sum
from .dyadic import block_mean
from .grid import GridFunction
from .norms import _Distribution, luxemburg_norm, sup_over_p
from .parallel import pmap
from .stats import Fit, linear_fit

SAFETY = 1.1


def approx_error(f: GridFunction, M: int, nu: float) -> float:
    """``|| f - E_M f ||_{exp L^nu}``."""
    if int(M) != M or not 0 <= M <= f.J:
        raise ValueError(f"M={M} out of range 0..{f.J}")
    return luxemburg_norm(f - GridFunction(f.J, block_mean(f.samples, M)), nu)


def in_region(gamma: float, nu: float) -> bool:
    return (gamma > 0.5 and nu <= 2) or (nu >= 2 and gamma > 1.0 - 1.0 / nu)


def predicted_exponent(gamma: float, nu: float) -> float:
    """Rate ``a`` in ``M^-a`` and ``(log n)^-a``."""
    return gamma - 0.5 if nu <= 2 else gamma + 1.0 / nu - 1.0


@dataclass(frozen=True, eq=False)
class ApproximationProfile:
    """Nonincreasing errors ``delta`` at approximation dimensions ``dims``.

    ``delta_n`` for arbitrary ``n`` is the value at the largest stored
    dimension ``<= n``.
    """

    deltas: np.ndarray
    dims: np.ndarray = None
    family_descriptor: str = "sequence"

    def __post_init__(self):
        d = np.asarray(self.deltas, dtype=float)
        dims = np.arange(d.size) if self.dims is None else np.asarray(self.dims, dtype=int)
        if d.size == 0 or dims.shape != d.shape:
            raise ValueError("deltas and dims must be nonempty and aligned")
        if np.any(d <= 0) or np.any(np.diff(d) > 0):
            raise ValueError("deltas must be positive and nonincreasing")
        if dims[0] != 0 or np.any(np.diff(dims) <= 0):
            raise ValueError("dims must start at 0 and increase")
        object.__setattr__(self, "deltas", d)
        object.__setattr__(self, "dims", dims)

    @property
    def delta0(self) -> float:
        return float(self.deltas[0])

    def delta(self, n: int) -> float:
        return float(self.deltas[np.searchsorted(self.dims, n, side="right") - 1])

    def write_csv(self, path):
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "delta"])
            for n, d in zip(self.dims, self.deltas):
                w.writerow([int(n), f"{d:.12g}"])


def lorentz_cover_bound(profile: ApproximationProfile, eps: float) -> float:
    """Natural-log covering bound ``min_{n: delta_n <= eps} 2 n ln(18 delta_0 / eps)``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    ok = np.nonzero(profile.deltas <= eps)[0]
    if ok.size == 0:
        raise ValueError(f"no admissible n: eps={eps:g} is below every stored delta")
    n = int(profile.dims[ok[0]])
    return max(0.0, 2.0 * n * math.log(18.0 * profile.delta0 / eps))


# ----------------------------------------------------------- tail bounds

def rademacher_tail_log_norm(gamma: float, start: int, p):
    """Upper bound on ``ln || sum_{k >= start} (1+k)^-gamma r_k ||_p``.

    Splits the coefficients at ``start + L``: the first ``L`` are bounded in
    sup norm, the rest by Khintchine's inequality with constant
    ``max(1, sqrt(p))``; the best ``L`` is taken per ``p``.
    """
    p = np.atleast_1d(np.asarray(p, dtype=float))
    L_max = int(4 * p.max()) + 16
    L = np.arange(L_max + 1)
    k = start + np.arange(L_max, dtype=float)
    head = np.concatenate([[0.0], np.cumsum((1.0 + k) ** (-gamma))])
    tail2 = zeta(2.0 * gamma, start + L + 1.0)
    vals = head[None, :] + np.maximum(1.0, np.sqrt(p))[:, None] * np.sqrt(tail2)[None, :]
    return np.log(vals.min(axis=1))


def class_profile(gamma: float, nu: float, J: int = 16, M_list=None,
                  corpus_size: int = 64, seed: int = 0, safety: float = SAFETY,
                  include_tail: bool = True) -> ApproximationProfile:
    """Approximation profile of the unit ball of the dyadic LG class.

    For level ``M`` (dimension ``2**M``) the error is the max over a corpus of
    random-sign packet sums (heights ``(1+k)^-gamma``, ``k <= J``) of
    ``||f - E_M f||_p``, plus, when ``include_tail``, an analytic bound for
    the levels ``k > J`` that the grid cannot carry; the sup over ``p`` of
    ``p^(-1/nu)`` times that sum, times ``safety``. Dimension 0 uses ``f``
    itself.
    """
    if M_list is None:
        M_list = range(0, J)
    M_list = sorted(int(M) for M in M_list)
    corpus = [packet_sum(lg_heights(gamma, J), J, np.random.default_rng([seed, i]))
              for i in range(corpus_size)]
    levels = [-1] + M_list

    def one(M):
        tail = (lambda p: rademacher_tail_log_norm(gamma, J + 1, p)) if include_tail else None
        best = 0.0
        for f in corpus:
            g = f.samples if M < 0 else f.samples - block_mean(f.samples, M)
            dist = _Distribution(g)
            if dist.max == 0 and tail is None:
                continue
            if tail is None:
                ln = dist.log_norm
            elif dist.max == 0:
                ln = tail
            else:
                def ln(p, dist=dist):
                    return np.logaddexp(dist.log_norm(p), tail(p))
            best = max(best, sup_over_p(ln, nu)[0])
        return safety * best

    deltas = np.array(pmap(one, levels))
    dims = np.array([0] + [2**M for M in M_list])
    # enforce monotonicity against p-grid jitter
    deltas = np.minimum.accumulate(deltas)
    return ApproximationProfile(deltas, dims, f"dyadic-steps(gamma={gamma:g},nu={nu:g},J={J})")


# -------------------------------------------------------------- curves

@dataclass
class EntropyCurve:
    entries: list  # (n, upper, lower)
    breakpoints: list = field(default_factory=list)  # (n, upper) from the covering bound
    fitted_exponent: float = float("nan")
    fit: Fit | None = None
    reference_exponent: float = float("nan")

    def upper_at(self, n: int) -> float:
        vals = [u for m, u in self.breakpoints if m <= n]
        return min(vals) if vals else self.breakpoints[0][1]

    def write_csv(self, path):
        """Rows ``n,upper,lower,reference`` with reference ``(ln n)^(-a)``."""
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["n", "upper", "lower", "reference"])
            for n, u, lo in self.entries:
                ref = math.log(n) ** self.reference_exponent if n > 1 else float("nan")
                w.writerow([int(n), f"{u:.12g}", f"{lo:.12g}", f"{ref:.12g}"])


def fit_exponent(curve) -> Fit:
    """Least-squares slope of ``ln value`` against ``ln ln n``."""
    pts = [(float(n), float(v)) for n, v in curve]
    if len(pts) < 4:
        raise ValueError("need at least 4 points")
    n = np.array([p[0] for p in pts])
    v = np.array([p[1] for p in pts])
    if np.any(n <= 1):
        raise ValueError("n must exceed 1")
    if np.any(v <= 0):
        raise ValueError("values must be positive")
    return linear_fit(np.log(np.log(n)), np.log(v))


def entropy_upper_curve(gamma: float, nu: float, n_list=None, J: int = 16,
                        corpus_size: int = 64, seed: int = 0,
                        profile: ApproximationProfile | None = None) -> EntropyCurve:
    """Upper bounds for ``e_n`` from the covering estimate.

    Each profile level gives ``eps = delta_{2^M}`` and a cover by ``N`` balls
    with ``ln N`` from :func:`lorentz_cover_bound`; hence
    ``e_m <= eps`` for ``m = 1 + ceil(ln N / ln 2)``. Entries at ``n_list``
    (default: the breakpoints) take the best breakpoint at or below ``n``.
    """
    if not in_region(gamma, nu):
        raise ValueError(f"(gamma={gamma}, nu={nu}) outside the compactness region")
    if profile is None:
        profile = class_profile(gamma, nu, J, corpus_size=corpus_size, seed=seed)
    bps = [(1, profile.delta0)]
    for eps in profile.deltas[1:]:
        m = 1 + math.ceil(lorentz_cover_bound(profile, eps) / math.log(2.0))
        bps.append((m, float(eps)))
    # keep the nonincreasing envelope, one value per n
    best = {}
    for m, eps in bps:
        best[m] = min(eps, best.get(m, math.inf))
    env, cur = [], math.inf
    for m in sorted(best):
        cur = min(cur, best[m])
        env.append((m, cur))
    curve = EntropyCurve(entries=[], breakpoints=env,
                         reference_exponent=-predicted_exponent(gamma, nu))
    fit_pts = [(m, u) for m, u in env if m >= 3]
    curve.fit = fit_exponent(fit_pts)
    curve.fitted_exponent = curve.fit.slope
    ns = [m for m, _ in env] if n_list is None else sorted(int(n) for n in n_list)
    curve.entries = [(n, curve.upper_at(n), 0.0) for n in ns]
    return curve


# ------------------------------------------------------------- packings

def _mask_distances(gamma: float, nu: float, J: int) -> np.ndarray:
    """``dist[mask]`` = exp L^nu norm of ``sum_{k in mask} 2 a_k r_k``."""
    a = lg_heights(gamma, J)
    R = np.array([packet(k, J) for k in range(J + 1)])
    masks = np.arange(2 ** (J + 1))
    bits = (masks[:, None] >> np.arange(J + 1)[None, :]) & 1

    def one(mask):
        g = (2.0 * a * bits[mask]) @ R
        return luxemburg_norm(GridFunction(J, g), nu)

    return np.array(pmap(one, masks))


def packing_lower_bound(gamma: float, nu: float, n: int, budget: int, seed: int = 0,
                        J: int = 10, restarts: int = 8, _dist=None) -> float:
    """Certified lower bound for ``e_n`` from a greedy packing.

    Candidates are ``budget`` sign patterns of ``sum_k (1+k)^-gamma eps_k r_k``
    (the unit ball of the dyadic LG class), drawn together with their
    negatives, plus the zero function. If ``m > 2^(n-1)`` candidates are
    pairwise at least ``d`` apart, no ``2^(n-1)`` balls of radius below
    ``d / 2`` cover them, so ``e_n >= d / 2``. Greedy farthest-point
    insertion is restarted from zero and from random pool members; the best
    certified value is returned (0 if no restart reaches ``m`` points).
    """
    if budget < 2:
        raise ValueError("budget must be >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    need = 2 ** (n - 1) + 1
    if need > budget + 1:
        return 0.0
    dist = _mask_distances(gamma, nu, J) if _dist is None else _dist
    full = 2 ** (J + 1) - 1
    d_zero = dist[full] / 2.0  # every pattern has the same norm
    rng = np.random.default_rng(seed)
    best = 0.0
    for r in range(restarts):
        # pool closed under negation (pattern ^ full); negation pairs attain the diameter
        half = rng.choice(2**J, size=min(budget // 2, 2**J), replace=False)
        pool = np.concatenate([half, full ^ half])
        if pool.size < budget:
            pool = np.append(pool, rng.integers(2 ** (J + 1)))
        # last slot is the zero function
        mind = np.full(pool.size + 1, np.inf)

        def insert(i):
            nonlocal mind
            if i == pool.size:
                mind = np.minimum(mind, d_zero)
            else:
                upd = np.append(dist[pool ^ pool[i]], d_zero)
                mind = np.minimum(mind, upd)
            mind[i] = -1.0

        insert(pool.size if r == 0 else int(rng.integers(pool.size)))
        chosen, sep = 1, math.inf
        while chosen < need:
            i = int(np.argmax(mind))
            if mind[i] <= 0:
                break
            sep = min(sep, mind[i])
            insert(i)
            chosen += 1
        if chosen >= need and np.isfinite(sep):
            best = max(best, 0.5 * sep * (1.0 - 1e-12))
    return float(best)


def quantization_cover(profile: ApproximationProfile, level: int, eps: float,
                       radius_bound: float) -> tuple:
    """Explicit net: quantize the ``2**level`` block values of ``E_level f``
    (bounded by ``radius_bound`` in sup norm) to pitch ``eps / 2``.

    Returns ``(cover_radius, ln_count)`` with
    ``cover_radius = delta_{2^level} + eps / 4``.
    """
    n = 2**level
    steps = math.ceil(2.0 * radius_bound / (eps / 2.0)) + 1
    return profile.delta(n) + eps / 4.0, n * math.log(steps)


def quantization_curve(profile: ApproximationProfile, gamma: float, levels) -> list:
    """Entropy upper bounds from explicit quantization nets.

    For each level ``M`` the block values of ``E_M f`` are bounded by
    ``R = sum_{k <= M} (1+k)^-gamma``; a net of pitch ``eps/2`` with
    ``eps = delta_{2^M}`` then covers the ball at radius ``1.25 eps``.
    Returns ``(m, radius)`` with ``m = 1 + ceil(ln count / ln 2)``.
    """
    out = []
    for M in levels:
        eps = profile.delta(2**M)
        R = float(lg_heights(gamma, M).sum())
        radius, ln_count = quantization_cover(profile, M, eps, R)
        out.append((1 + math.ceil(ln_count / math.log(2.0)), radius))
    return out
