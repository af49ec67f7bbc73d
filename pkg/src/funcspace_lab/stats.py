"""Least-squares slope fits on log-transformed data."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class Fit:
    slope: float
    intercept: float
    band: tuple  # 95% confidence interval for the slope

    def as_dict(self):
        return {"slope": self.slope, "intercept": self.intercept,
                "band": list(self.band)}


def linear_fit(x, y) -> Fit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 2 or np.ptp(x) == 0:
        raise ValueError("degenerate abscissas")
    res = stats.linregress(x, y)
    if x.size > 2:
        half = stats.t.ppf(0.975, x.size - 2) * res.stderr
    else:
        half = 0.0
    return Fit(float(res.slope), float(res.intercept),
               (float(res.slope - half), float(res.slope + half)))


def loglog_fit(x, y) -> Fit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit needs positive data")
    return linear_fit(np.log(x), np.log(y))
