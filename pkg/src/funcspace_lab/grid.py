"""Sampled 1-periodic functions on a dyadic grid.

A :class:`GridFunction` holds ``N = 2**J`` samples ``f(m / N)``. The sample
vector is the function: integral operators act by block means, Fourier
operators act on the trigonometric interpolant through the discrete transform.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAX_J = 16
DEFAULT_J = 12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GridFunction:
    J: int
    samples: np.ndarray

    def __post_init__(self):
        if int(self.J) != self.J or not 0 <= self.J <= MAX_J:
            raise ValueError(f"J must be an integer in [0, {MAX_J}], got {self.J}")
        s = np.asarray(self.samples, dtype=float)
        if s.shape != (2**self.J,):
            raise ValueError(f"expected {2**self.J} samples, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "J", int(self.J))
        object.__setattr__(self, "samples", _frozen(s))

    @property
    def N(self) -> int:
        return 2**self.J

    @property
    def x(self) -> np.ndarray:
        return np.arange(self.N) / self.N

    @classmethod
    def from_callable(cls, func, J: int = DEFAULT_J) -> "GridFunction":
        return cls(J, func(np.arange(2**J) / 2**J))

    @classmethod
    def constant(cls, c: float, J: int = DEFAULT_J) -> "GridFunction":
        return cls(J, np.full(2**J, float(c)))

    def _check(self, other: "GridFunction"):
        if other.J != self.J:
            raise ValueError(f"resolution mismatch: J={self.J} vs J={other.J}")

    def __add__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.J, self.samples + other.samples)
        return GridFunction(self.J, self.samples + other)

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            self._check(other)
            return GridFunction(self.J, self.samples - other.samples)
        return GridFunction(self.J, self.samples - other)

    def __mul__(self, c):
        return GridFunction(self.J, self.samples * float(c))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return GridFunction(self.J, self.samples / float(c))

    def __neg__(self):
        return GridFunction(self.J, -self.samples)

    def __repr__(self):
        return f"GridFunction(J={self.J}, sup={np.abs(self.samples).max():.6g})"


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """Fourier coefficients ``c_l`` for ``l = -N/2 .. N/2 - 1`` (in that order)."""

    J: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (2**self.J,):
            raise ValueError(f"expected {2**self.J} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coeffs", _frozen(c))

    @property
    def frequencies(self) -> np.ndarray:
        return frequencies(self.J)

    def coeff(self, ell: int) -> complex:
        N = 2**self.J
        if not -N // 2 <= ell < N // 2:
            raise IndexError(ell)
        return complex(self.coeffs[ell + N // 2])

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        # c_{-l} = conj(c_l); the Nyquist entry pairs with itself
        c = self.coeffs
        mirrored = np.roll(c[::-1], 1)
        return bool(np.max(np.abs(mirrored - np.conj(c)), initial=0.0)
                    <= tol * max(1.0, np.abs(c).max()))


def frequencies(J: int) -> np.ndarray:
    N = 2**J
    return np.arange(-N // 2, N // 2)


def forward_transform(f: GridFunction) -> SpectralFunction:
    c = np.fft.fftshift(np.fft.fft(f.samples)) / f.N
    return SpectralFunction(f.J, c)


def inverse_transform(s: SpectralFunction) -> GridFunction:
    """Samples of the trigonometric polynomial with coefficients ``s``.

    Raises ``ValueError`` when the result has a non-negligible imaginary part.
    """
    N = 2**s.J
    v = np.fft.ifft(np.fft.ifftshift(s.coeffs)) * N
    scale = max(1.0, np.abs(v).max())
    if np.abs(v.imag).max(initial=0.0) > 1e-9 * scale:
        raise ValueError("coefficients do not represent a real function")
    return GridFunction(s.J, v.real)


def _lp_values(values: np.ndarray, p: float, weights: np.ndarray | None = None,
               total: float | None = None) -> float:
    a = np.abs(values)
    m = a.max(initial=0.0)
    if m == 0.0:
        return 0.0
    if np.isinf(p):
        return float(m)
    r = (a / m) ** p
    if weights is None:
        mean = r.mean()
    else:
        mean = np.dot(weights, r) / total
    return float(m * mean ** (1.0 / p))


def lp_norm(f: GridFunction, p: float) -> float:
    """``((1/N) sum |f|^p)^(1/p)``, or the max for ``p = inf``."""
    if not (p >= 1):
        raise ValueError(f"p must be >= 1, got {p}")
    return _lp_values(f.samples, p)


def sup_norm(f: GridFunction) -> float:
    return float(np.abs(f.samples).max())


def rearrangement(f: GridFunction) -> np.ndarray:
    """Nonincreasing rearrangement: ``f*(t) = out[floor(t N)]``."""
    return np.sort(np.abs(f.samples))[::-1]


def rearrangement_at(f: GridFunction, t: float) -> float:
    r = rearrangement(f)
    m = min(int(np.floor(t * f.N)), f.N - 1)
    return float(r[m])


def write_csv(f: GridFunction, path) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "value"])
        for x, v in zip(f.x, f.samples):
            w.writerow([f"{x:.12g}", f"{v:.12g}"])


def read_csv(path) -> GridFunction:
    with Path(path).open() as fh:
        rows = list(csv.DictReader(fh))
    values = np.array([float(r["value"]) for r in rows])
    J = int(round(np.log2(len(values)))) if len(values) else -1
    if len(values) == 0 or 2**J != len(values):
        raise ValueError(f"row count {len(values)} is not a power of two")
    return GridFunction(J, values)
