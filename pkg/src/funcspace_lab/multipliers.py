"""Smooth dyadic symbols, Fourier multipliers on the grid, and exact
L^inf -> L^inf norms of compositions with E_k and D_k."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .grid import GridFunction, forward_transform, frequencies


def _h(u):
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def bump(s):
    """Smooth even cutoff: 1 on ``|s| <= 1``, 0 on ``|s| >= 2``."""
    a = np.abs(np.asarray(s, dtype=float))
    out = np.where(a <= 1.0, 1.0, 0.0)
    mid = (a > 1.0) & (a < 2.0)
    if np.any(mid):
        am = a[mid]
        num = _h(2.0 - am)
        out[mid] = num / (num + _h(am - 1.0))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Symbol:
    """A compactly supported multiplier symbol ``s -> phase * evaluator(s)``.

    ``evaluator`` is real-valued; ``parity`` is ``"even"`` or ``"odd"``.
    """

    evaluator: Callable
    support_radius: float
    descriptor: str
    parity: str = "even"
    phase: complex = 1.0

    def __call__(self, s):
        v = np.asarray(self.evaluator(np.asarray(s, dtype=float)), dtype=float)
        return v if self.phase == 1.0 else self.phase * v

    def scaled(self, lam: float) -> "Symbol":
        """The symbol ``s -> self(s / lam)``."""
        ev = self.evaluator
        return Symbol(lambda s: ev(np.asarray(s, dtype=float) / lam),
                      self.support_radius * lam, f"scaled({self.descriptor},{lam:g})",
                      self.parity, self.phase)


def make_phi() -> Symbol:
    return Symbol(bump, 2.0, "Phi")


def make_phi_k(k: int) -> Symbol:
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return Symbol(bump, 2.0, "phi_k(0)")

    def ev(s, k=k):
        s = np.asarray(s, dtype=float)
        return bump(s / 2.0**k) - bump(s / 2.0 ** (k - 1))

    return Symbol(ev, 2.0 ** (k + 1), f"phi_k({k})")


def _psi(s):
    s = np.asarray(s, dtype=float)
    return bump(s) - bump(2.0 * s)


def _psi_minus1(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    nz = s != 0
    out[nz] = _psi(s[nz]) / (2.0 * np.pi * s[nz])
    return out


def _psi_plus1(s):
    s = np.asarray(s, dtype=float)
    return s * _psi(s)


def _Psi(s):
    a = np.abs(np.asarray(s, dtype=float))
    return bump(a / 4.0) * (1.0 - bump(4.0 * a))


def _Psi0(s):
    return bump(np.asarray(s, dtype=float) / 2.0)


_AUX = {
    # (evaluator, support radius, parity, phase)
    "psi": (_psi, 2.0, "even", 1.0),
    # (2 pi i s)^-1 psi(s) = -i * psi(s) / (2 pi s)
    "psi_minus1": (_psi_minus1, 2.0, "odd", -1j),
    "psi_plus1": (_psi_plus1, 2.0, "odd", 1.0),
    "Psi": (_Psi, 8.0, "even", 1.0),
    "Psi0": (_Psi0, 4.0, "even", 1.0),
}


def make_auxiliary(which: str) -> Symbol:
    try:
        ev, r, parity, phase = _AUX[which]
    except KeyError:
        raise ValueError(f"unknown auxiliary symbol {which!r}") from None
    return Symbol(ev, r, which, parity, phase)


def make_Psi_n(n: int) -> Symbol:
    """``Psi_0`` for ``n = 0``, else ``Psi(2**-n s)``; reproduces ``phi_n``."""
    if n == 0:
        return make_auxiliary("Psi0")
    s = make_auxiliary("Psi").scaled(2.0**n)
    return Symbol(s.evaluator, s.support_radius, f"Psi_n({n})")


@dataclass(frozen=True, eq=False)
class MultiplierOperator:
    symbol: Symbol
    J: int
    values: np.ndarray = field(init=False, repr=False)
    kernel: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        N = 2**self.J
        if self.symbol.support_radius > N / 2:
            raise ValueError(
                f"symbol {self.symbol.descriptor} has support radius "
                f"{self.symbol.support_radius:g} > N/2 = {N // 2} (aliasing)")
        vals = np.asarray(self.symbol(frequencies(self.J)), dtype=complex)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        # natural FFT order for direct use in apply_array
        object.__setattr__(self, "_fft_values", np.fft.ifftshift(vals))
        flipped = np.asarray(self.symbol(-frequencies(self.J)), dtype=complex)
        object.__setattr__(self, "_fft_values_T", np.fft.ifftshift(flipped))
        K = np.fft.ifft(self._fft_values) * N
        if np.abs(K.imag).max() <= 1e-12 * max(1.0, np.abs(K).max()):
            K = K.real
        K.setflags(write=False)
        object.__setattr__(self, "kernel", K)

    shift_level = None
    output_block_level = None

    def apply_array(self, values):
        return np.fft.ifft(np.fft.fft(values, axis=-1) * self._fft_values, axis=-1)

    def transpose_apply_array(self, values):
        return np.fft.ifft(np.fft.fft(values, axis=-1) * self._fft_values_T, axis=-1)


def apply(op: MultiplierOperator, f: GridFunction) -> GridFunction:
    if op.J != f.J:
        raise ValueError(f"resolution mismatch: operator J={op.J}, function J={f.J}")
    out = op.apply_array(f.samples)
    scale = max(1.0, np.abs(out).max())
    if np.abs(out.imag).max() > 1e-9 * scale:
        raise ValueError(f"{op.symbol.descriptor} does not map real functions to real ones")
    return GridFunction(f.J, out.real)


def lp_operator(k: int, J: int) -> MultiplierOperator:
    """The Littlewood-Paley operator L_k; defined for ``k <= J - 2``."""
    if not 0 <= k <= J - 2:
        raise ValueError(f"L_k needs 0 <= k <= J-2 = {J - 2}, got k={k}")
    return MultiplierOperator(make_phi_k(k), J)


def band_limit(J: int) -> int:
    return 2 ** (J - 2)


def check_band_limited(f: GridFunction, tol: float = 1e-10) -> None:
    """Raise unless the spectrum of ``f`` vanishes for ``|l| > 2**(J-2)``."""
    c = forward_transform(f).coeffs
    freqs = frequencies(f.J)
    outside = np.abs(c[np.abs(freqs) > band_limit(f.J)])
    if outside.size and outside.max() > tol * max(1.0, np.abs(c).max()):
        raise ValueError(
            f"function is not band-limited to |l| <= {band_limit(f.J)} "
            f"(max outside coefficient {outside.max():.3g})")


def littlewood_paley_pieces(f: GridFunction, check: bool = True) -> list:
    """``[L_0 f, ..., L_{J-2} f]`` computed from one transform."""
    if check:
        check_band_limited(f)
    F = np.fft.fft(f.samples)
    freqs = np.fft.fftfreq(f.N, 1.0 / f.N)
    out = []
    for k in range(f.J - 1):
        piece = np.fft.ifft(F * make_phi_k(k)(freqs)).real
        out.append(GridFunction(f.J, piece))
    return out


def infty_operator_norm(ops: Sequence, J: int) -> float:
    """Exact grid L^inf -> L^inf norm of ``ops[0] o ops[1] o ... o ops[-1]``.

    This is the maximal absolute row sum of the composed matrix. Only rows
    that are distinct up to the shifts commuting with every factor are
    formed: each row is the transposed composition applied to a delta.
    """
    N = 2**J
    ops = list(ops)
    if not ops:
        return 1.0
    period = 1
    for op in ops:
        if getattr(op, "J", J) != J:
            raise ValueError("resolution mismatch inside composition")
        lvl = op.shift_level
        if lvl is not None:
            period = max(period, N >> lvl)
    lead = ops[0].output_block_level
    step = N >> lead if lead is not None else 1
    reps = np.arange(0, period, step) if step < period else np.array([0])
    rows = np.zeros((len(reps), N), dtype=complex)
    rows[np.arange(len(reps)), reps] = 1.0
    for op in ops:
        if isinstance(op, MultiplierOperator):
            rows = op.transpose_apply_array(rows)
        else:
            rows = op.apply_array(rows)
    return float(np.abs(rows).sum(axis=1).max())


def kernel_l1_bound(which: str, lam: float, J: int) -> float:
    """L^1(T) norm of the kernel of ``sigma(D / lam)``.

    The kernel is a trigonometric polynomial; its modulus is integrated on a
    refinement grid fine enough that the value does not depend on ``J``.
    """
    N = 2**J
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    if lam > N / 4:
        raise ValueError(f"lambda={lam:g} exceeds N/4={N // 4} (aliasing guard)")
    sym = make_auxiliary(which).scaled(lam)
    M = max(2**16, 2 ** (math.ceil(math.log2(lam)) + 10))
    freqs = np.fft.fftfreq(M, 1.0 / M)
    K = np.fft.ifft(sym(freqs)) * M
    return float(np.abs(K).mean())


def write_symbol_csv(symbol: Symbol, path, s_values) -> None:
    vals = np.asarray(symbol.evaluator(np.asarray(s_values, dtype=float)))
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["s", "value"])
        for s, v in zip(s_values, vals):
            w.writerow([f"{s:.12g}", f"{v:.12g}"])
