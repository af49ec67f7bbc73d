"""Corpus generators realizing unit balls of the Besov, LG and dyadic classes.

Lacunary cosines ``cos(2 pi 2^k x)`` are isolated by ``L_k`` (so their Besov
and Fourier-LG profiles are exactly the prescribed heights). Dyadic packets
``h_k`` satisfy ``D_k h_k = h_k`` and ``|h_k| = 1``, realizing dyadic
profiles exactly.
"""
from __future__ import annotations

import numpy as np

from .grid import DEFAULT_J, GridFunction
from .norms import besov_norm, lg_norm

KINDS = ("lacunary", "dyadic_packets", "lg_profile", "besov_profile", "mixture")
MEMBERSHIP_TOL = 1e-6


def lacunary(heights, J: int = DEFAULT_J, signs=None) -> GridFunction:
    """``sum_k signs_k * heights_k * cos(2 pi 2^k x)``, ``k = 0 .. len-1``."""
    heights = np.asarray(heights, dtype=float)
    if heights.size > J - 1:
        raise ValueError(f"lacunary frequencies need k <= J-2 = {J - 2}")
    signs = np.ones_like(heights) if signs is None else np.asarray(signs, float)
    x = np.arange(2**J) / 2**J
    f = np.zeros(2**J)
    for k, (a, s) in enumerate(zip(heights, signs)):
        if a:
            f += s * a * np.cos(2 * np.pi * 2**k * x)
    return GridFunction(J, f)


def packet(k: int, J: int, rng=None) -> np.ndarray:
    """A level-``k`` dyadic packet: +-1, constant on level-``k`` blocks, mean
    zero on level-``(k-1)`` blocks. Block signs are random when ``rng`` is
    given, else all +1 (Rademacher function)."""
    N = 2**J
    if k == 0:
        s = 1.0 if rng is None else rng.choice([-1.0, 1.0])
        return np.full(N, s)
    half = N >> k
    pattern = np.where((np.arange(N) // half) % 2 == 0, 1.0, -1.0)
    if rng is None:
        return pattern
    block_signs = rng.choice([-1.0, 1.0], size=2 ** (k - 1))
    return pattern * np.repeat(block_signs, 2 * half)


def packet_sum(heights, J: int = DEFAULT_J, rng=None, signs=None) -> GridFunction:
    heights = np.asarray(heights, dtype=float)
    if heights.size > J + 1:
        raise ValueError(f"packets need k <= J = {J}")
    signs = np.ones_like(heights) if signs is None else np.asarray(signs, float)
    f = np.zeros(2**J)
    for k, (a, s) in enumerate(zip(heights, signs)):
        if a:
            f += s * a * packet(k, J, rng)
    return GridFunction(J, f)


def lg_heights(gamma: float, K: int) -> np.ndarray:
    return (1.0 + np.arange(K + 1)) ** (-gamma)


def _normalize(f: GridFunction, measure) -> GridFunction:
    n = measure(f)
    if not n > 0:
        raise ValueError("degenerate corpus member (zero norm)")
    g = f / n
    if abs(measure(g) - 1.0) > MEMBERSHIP_TOL:
        raise ValueError("normalized member failed its norm re-check")
    return g


def generate_corpus(kind: str, size: int, seed: int, J: int = DEFAULT_J,
                    params: dict | None = None) -> list:
    """Return ``size`` functions in the unit sphere of the class named by
    ``kind``. Deterministic in ``seed``.

    params: ``q`` (Besov index), ``gamma`` (LG smoothness), ``heights``
    (explicit profile), ``K`` (top level), ``weights`` (mixture weights).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown corpus kind {kind!r}; expected one of {KINDS}")
    if size < 1:
        raise ValueError("size must be >= 1")
    params = dict(params or {})
    q = float(params.get("q", 2.0))
    gamma = float(params.get("gamma", 1.0))
    rng = np.random.default_rng(seed)
    out = []

    def besov(f):
        return besov_norm(f, q)

    if kind == "lacunary":
        K = int(params.get("K", J - 2))
        heights = np.asarray(params.get("heights", np.full(K + 1, (K + 1) ** (-1 / q))))
        for _ in range(size):
            s = rng.choice([-1.0, 1.0], size=heights.size)
            out.append(_normalize(lacunary(heights, J, s), besov))
    elif kind == "besov_profile":
        K = int(params.get("K", J - 2))
        for _ in range(size):
            h = rng.pareto(1.5, size=K + 1) * rng.choice([0.0, 1.0], size=K + 1, p=[0.3, 0.7])
            h[rng.integers(K + 1)] += 1.0
            s = rng.choice([-1.0, 1.0], size=K + 1)
            out.append(_normalize(lacunary(h, J, s), besov))
    elif kind == "lg_profile":
        K = int(params.get("K", J - 2))
        heights = lg_heights(gamma, K)
        for _ in range(size):
            s = rng.choice([-1.0, 1.0], size=K + 1)
            out.append(_normalize(lacunary(heights, J, s),
                                  lambda f: lg_norm(f, gamma, "fourier")))
    elif kind == "dyadic_packets":
        K = int(params.get("K", J))
        heights = np.asarray(params.get("heights", lg_heights(gamma, K)))
        for _ in range(size):
            out.append(_normalize(packet_sum(heights, J, rng),
                                  lambda f: lg_norm(f, gamma, "dyadic")))
    else:  # mixture of a flat lacunary and an LG-profile lacunary, Besov-normalized
        w = np.asarray(params.get("weights", (0.5, 0.5)), dtype=float)
        if w.shape != (2,) or np.any(w < 0):
            raise ValueError("mixture weights must be two nonnegative numbers")
        K = int(params.get("K", J - 2))
        flat = np.full(K + 1, (K + 1) ** (-1 / q))
        decay = lg_heights(gamma, K)
        for _ in range(size):
            s1 = rng.choice([-1.0, 1.0], size=K + 1)
            s2 = rng.choice([-1.0, 1.0], size=K + 1)
            f = w[0] * lacunary(flat, J, s1) + w[1] * lacunary(decay, J, s2)
            out.append(_normalize(f, besov))
    return out


def envelope_witness(level: int, q: float, J: int = DEFAULT_J,
                     top: int | None = None) -> GridFunction:
    """Unit-Besov witness that is large on a set of measure ``2**-level``.

    Level 0 carries a constant, levels ``1..top`` carry ``cos(2 pi 2^k x)``;
    the function peaks at ``x = 0`` and ``x = 1/2``. Heights are the Hoelder
    extremizers ``a_k ~ w_k^(q'-1)`` for the weights
    ``w_k = cos(pi 2^(k - level - 1))^+`` (the value of the ``k``-th term at
    distance ``2**-(level+2)`` from a peak).
    """
    top = J - 2 if top is None else top
    if not 0 <= top <= J - 2:
        raise ValueError(f"top level must lie in 0..{J - 2}")
    k = np.arange(top + 1)
    w = np.where(k == 0, 1.0, np.clip(np.cos(np.pi * 2.0 ** (k - level - 1)), 0.0, None))
    if q == 1:
        a = (w == w.max()).astype(float)
    else:
        a = w ** (1.0 / (q - 1.0))
    a /= np.sum(a**q) ** (1.0 / q)
    x = np.arange(2**J) / 2**J
    f = np.full(2**J, a[0])
    for j in range(1, top + 1):
        f += a[j] * np.cos(2 * np.pi * 2**j * x)
    return GridFunction(J, f)


def envelope_corpus(q: float, J: int = DEFAULT_J) -> list:
    """Witnesses for every target level ``1..J`` and truncation ``1..J-2``."""
    return [envelope_witness(level, q, J, top)
            for level in range(1, J + 1) for top in range(1, J - 1)]
