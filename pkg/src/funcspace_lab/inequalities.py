"""Ratio harnesses for the embedding and square-function inequalities.

Every ``check_*`` returns a :class:`RatioReport`: one sample per cell with
``ratio = lhs / rhs``, the corpus-wide constant (max ratio), and slope fits
where the inequality predicts a power law.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import lg_heights, packet
from .dyadic import Difference, Expectation, block_difference, decompose, square_function
from .grid import GridFunction, lp_norm
from .multipliers import MultiplierOperator, infty_operator_norm, make_auxiliary, make_Psi_n
from .norms import (besov_norm, conjugate_exponent, dyadic_besov_norm, lg_norm,
                    lorentz_sequence_norm, luxemburg_norm)
from .parallel import pmap
from .stats import linear_fit

EPS = 1e-300


def _ratio(lhs: float, rhs: float) -> float:
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs == 0 else math.inf


def _param_key(params: dict) -> str:
    return ";".join(f"{k}={_fmt(v)}" for k, v in sorted(params.items()))


def _fmt(v):
    return f"{v:.12g}" if isinstance(v, float) else str(v)


@dataclass
class RatioReport:
    inequality_id: str
    samples: list = field(default_factory=list)
    fitted_exponents: dict = field(default_factory=dict)

    def add(self, params: dict, lhs: float, rhs: float):
        self.samples.append({"params": dict(params), "lhs": float(lhs),
                             "rhs": float(rhs), "ratio": _ratio(lhs, rhs)})

    @property
    def fitted_constant(self) -> float:
        return max((s["ratio"] for s in self.samples), default=0.0)

    def constant_for(self, **match) -> float:
        return max((s["ratio"] for s in self.select(**match)), default=0.0)

    def select(self, **match):
        return [s for s in self.samples
                if all(s["params"].get(k) == v for k, v in match.items())]

    def all_finite(self) -> bool:
        return all(np.isfinite(s["ratio"]) and s["ratio"] >= 0 for s in self.samples)

    def to_dict(self) -> dict:
        return {"inequality_id": self.inequality_id,
                "fitted_constant": self.fitted_constant,
                "fitted_exponents": self.fitted_exponents,
                "samples": self.samples}

    def write_json(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=1, sort_keys=True))

    def csv_rows(self):
        rows = []
        for s in sorted(self.samples, key=lambda s: _param_key(s["params"])):
            rows.append([self.inequality_id, _param_key(s["params"]),
                         f"{s['lhs']:.12g}", f"{s['rhs']:.12g}", f"{s['ratio']:.12g}"])
        return rows

    def write_csv(self, path):
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["inequality", "param_key", "lhs", "rhs", "ratio"])
            w.writerows(self.csv_rows())


def _residual_p_exponent(report: RatioReport, predicted: float = 0.0, **match) -> float:
    """Slope of ``ln max_f ratio(p)`` against ``ln p`` (ratios already divided
    by the predicted power of ``p``), restricted to positive maxima."""
    by_p = {}
    for s in report.select(**match):
        p = s["params"]["p"]
        by_p[p] = max(by_p.get(p, 0.0), s["ratio"])
    ps = np.array(sorted(p for p, r in by_p.items() if r > 0))
    if ps.size < 2:
        return 0.0
    r = np.array([by_p[p] for p in ps])
    return linear_fit(np.log(ps), np.log(r)).slope - predicted


# ------------------------------------------------------- multiplier blocks

def multiplier_bounds(k: int, lam: float) -> tuple:
    """``(min(2^k/lam, 1), min(2^k/lam, lam/2^k))``."""
    r = 2.0**k / lam
    return min(r, 1.0), min(r, 1.0 / r)


def check_multiplier_norms(J: int = 12, k_range=range(1, 11), lambda_range=None,
                 side_margin: int = 2) -> RatioReport:
    """Operator norms of ``E_k psi(D/lam)`` and ``D_k psi(D/lam)`` against
    their min-bounds. Slopes of ``log2 ||D_k L_lam||`` in ``log2(2^k/lam)``
    use cells at least ``side_margin`` octaves away from the peak.
    """
    if lambda_range is None:
        lambda_range = [2.0**e for e in range(3, 11)]
    lambda_range = [float(l) for l in lambda_range]
    N = 2**J
    for lam in lambda_range:
        if lam > N / 4:
            raise ValueError(f"lambda={lam:g} violates the aliasing guard N/4={N // 4}")
    for k in k_range:
        if not 0 <= k <= J:
            raise ValueError(f"k={k} out of range 0..{J}")
    psi = make_auxiliary("psi")
    report = RatioReport("multiplier_norms")

    def cell(lam):
        L = MultiplierOperator(psi.scaled(lam), J)
        out = []
        for k in k_range:
            bE, bD = multiplier_bounds(k, lam)
            out.append((k, lam, "E", infty_operator_norm([Expectation(k), L], J), bE))
            if k >= 1:
                out.append((k, lam, "D", infty_operator_norm([Difference(k), L], J), bD))
        return out

    for rows in pmap(cell, lambda_range):
        for k, lam, var, norm, bound in rows:
            report.add({"k": int(k), "lambda": lam, "variant": var}, norm, bound)

    d = report.select(variant="D")
    x = np.array([s["params"]["k"] - math.log2(s["params"]["lambda"]) for s in d])
    y = np.log2([max(s["lhs"], EPS) for s in d])
    lo, hi = x <= -side_margin, x >= side_margin
    if lo.sum() >= 2:
        report.fitted_exponents["slope_below"] = linear_fit(x[lo], y[lo]).as_dict()
    if hi.sum() >= 2:
        report.fitted_exponents["slope_above"] = linear_fit(x[hi], y[hi]).as_dict()
    return report


def write_multiplier_csv(report: RatioReport, path, variant: str = "D"):
    """Sweep table ``k,lambda,norm,bound``."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "lambda", "norm", "bound"])
        rows = sorted(report.select(variant=variant),
                      key=lambda s: (s["params"]["k"], s["params"]["lambda"]))
        for s in rows:
            w.writerow([s["params"]["k"], f"{s['params']['lambda']:.12g}",
                        f"{s['lhs']:.12g}", f"{s['rhs']:.12g}"])


# --------------------------------------------------------- dyadic vs Besov

def check_dyadic_vs_besov(corpus, q: float, J_kernel: int = 12, max_gap: int = 6) -> RatioReport:
    """Ratios ``dyadic_besov / besov`` over a band-limited corpus, plus the
    kernel decay ``||D_k Psi_n(D)|| <= C 2^-|k-n|``."""
    report = RatioReport("dyadic_vs_besov")

    def one(item):
        i, f = item
        return i, dyadic_besov_norm(f, q), besov_norm(f, q)

    for i, lhs, rhs in pmap(one, enumerate(corpus)):
        report.add({"variant": "norm", "function": i, "q": float(q)}, lhs, rhs)

    cells = [(k, n) for n in range(0, J_kernel - 3) for k in range(0, J_kernel + 1)
             if abs(k - n) <= max_gap]

    def kern(cell):
        k, n = cell
        op = MultiplierOperator(make_Psi_n(n), J_kernel)
        return k, n, infty_operator_norm([Difference(k), op], J_kernel)

    for k, n, norm in pmap(kern, cells):
        report.add({"variant": "kernel", "k": k, "n": n}, norm, 2.0 ** (-abs(k - n)))
    return report


# ----------------------------------------------------- Luxemburg embedding

def check_luxemburg_embedding(corpus, q: float) -> RatioReport:
    """``luxemburg_norm(f, q')`` against the Besov and dyadic Besov norms."""
    qp = conjugate_exponent(q)
    report = RatioReport("luxemburg_embedding")

    def one(item):
        i, f = item
        return i, luxemburg_norm(f, qp), besov_norm(f, q), dyadic_besov_norm(f, q)

    for i, lux, bes, dy in pmap(one, enumerate(corpus)):
        report.add({"variant": "lux_vs_besov", "function": i, "q": float(q)}, lux, bes)
        report.add({"variant": "lux_vs_dyadic", "function": i, "q": float(q)}, lux, dy)
    return report


# --------------------------------------------------------- square function

def check_square_function_growth(corpus, p_list) -> RatioReport:
    """``||f||_p / (sqrt(p) ||S f||_p)`` over ``corpus x p_list``."""
    for p in p_list:
        if not 2 <= p <= 64:
            raise ValueError(f"p={p} outside [2, 64]")
    report = RatioReport("square_function_growth")

    def one(item):
        i, f = item
        S = square_function(decompose(f))
        return [(i, p, lp_norm(f, p), math.sqrt(p) * lp_norm(S, p)) for p in p_list]

    for rows in pmap(one, enumerate(corpus)):
        for i, p, lhs, rhs in rows:
            report.add({"function": i, "p": float(p)}, lhs, rhs)
    report.fitted_exponents["residual_p_exponent"] = _residual_p_exponent(report)
    return report


# ----------------------------------------------------------- interpolation

def interpolation_sides(family, p: float, s: float) -> tuple:
    """``(||sum_k D_k f_k||_p, p^(1/s') (sum_k ||f_k||_p^s)^(1/s))``."""
    family = list(family)
    J = next(fk for fk in family if fk is not None).J
    total = np.zeros(2**J)
    norms = []
    for k, fk in enumerate(family):
        if fk is None:
            continue
        if k > J:
            raise ValueError("family index exceeds J")
        total += block_difference(fk.samples, k)
        norms.append(lp_norm(fk, p))
    lhs = lp_norm(GridFunction(J, total), p)
    sp = conjugate_exponent(s)
    norms = np.array(norms)
    agg = norms.sum() if s == 1 else float(np.sum(norms**s) ** (1.0 / s))
    rhs = (1.0 if np.isinf(sp) else p ** (1.0 / sp)) * agg
    return lhs, rhs


def adversarial_families(J: int, seed: int, random_count: int = 24) -> list:
    """Families ``{f_k}`` stressing the interpolation bound.

    Deterministic: ``m`` equal-height packets on levels ``0..m-1`` for every
    ``m`` (all-equal profiles); single packets. Random: packets with heights
    ``(1+k)^-gamma`` and random signs, and smooth non-packet members whose
    ``D_k`` images are not themselves.
    """
    rng = np.random.default_rng(seed)
    fams = []
    for m in range(1, J + 2):
        fams.append([GridFunction(J, packet(k, J)) for k in range(m)])
    for k in range(0, J + 1, 3):
        fams.append([None] * k + [GridFunction(J, packet(k, J))])
    for _ in range(random_count):
        gamma = rng.choice([0.6, 1.0, 1.5])
        h = lg_heights(gamma, J) * rng.choice([-1.0, 1.0], size=J + 1)
        fams.append([GridFunction(J, a * packet(k, J, rng)) for k, a in enumerate(h)])
    x = np.arange(2**J) / 2**J
    for _ in range(random_count // 3):
        fams.append([GridFunction(J, np.cos(2 * np.pi * (2**k * x + rng.random()))
                                  + 0.1 * rng.normal(size=2**J))
                     for k in range(J + 1)])
    return fams


def check_interpolation(families, p_list, s: float) -> RatioReport:
    if not 1 <= s <= 2:
        raise ValueError("s must lie in [1, 2]")
    for p in p_list:
        if p < 2:
            raise ValueError("p must be >= 2")
    report = RatioReport(f"interpolation_s{float(s):.6g}")

    def one(item):
        i, fam = item
        return [(i, p) + interpolation_sides(fam, p, s) for p in p_list]

    for rows in pmap(one, enumerate(families)):
        for i, p, lhs, rhs in rows:
            report.add({"family": i, "p": float(p), "s": float(s)}, lhs, rhs)
    report.fitted_exponents["residual_p_exponent"] = _residual_p_exponent(report)
    return report


# --------------------------------------------------------- head/tail split

def n_from_p(p: float) -> int:
    """The integer ``N`` with ``p <= N < p + 1``."""
    c = math.ceil(p)
    return c if c < p + 1 else math.floor(p)


def _head_tail_cells(f: GridFunction, q: float, p_list):
    d = decompose(f)
    b = d.piece_sup_norms()
    order = np.argsort(-b, kind="stable")
    pieces = np.array([pc.samples for pc in d.pieces])
    qp = conjugate_exponent(q)
    lq = dyadic_besov_norm(f, q)
    lq2 = lorentz_sequence_norm(b, q)
    for p in p_list:
        if p < 2:
            raise ValueError("p must be >= 2")
        N = n_from_p(p)
        head = pieces[order[: N + 1]].sum(axis=0)
        head_f = GridFunction(f.J, head)
        tail_f = f - head_f
        yield (p, head_f, tail_f,
               (lp_norm(head_f, p), p ** (1.0 / qp) * lq),
               (p ** (-1.0 / qp) * lp_norm(tail_f, p), lq2))


def head_tail_split(f: GridFunction, q: float, p: float):
    """Split ``f`` into its ``N+1`` largest dyadic pieces (``p <= N < p+1``)
    and the remainder.

    Returns ``(head, tail, report)`` where the report holds the head bound
    ``||head||_p <= C p^(1/q') ||f||_{l^q}`` and the tail bound
    ``p^(-1/q') ||tail||_p <= C ||f||_{l^{q,2}}``.
    """
    if not 1 < q <= 2:
        raise ValueError("q must lie in (1, 2]")
    (p, head, tail, h, t), = _head_tail_cells(f, q, [p])
    report = RatioReport("head_tail")
    report.add({"variant": "head", "p": float(p), "q": float(q)}, *h)
    report.add({"variant": "tail", "p": float(p), "q": float(q)}, *t)
    return head, tail, report


def check_head_tail(corpus, q: float, p_list) -> RatioReport:
    if not 1 < q <= 2:
        raise ValueError("q must lie in (1, 2]")
    report = RatioReport("head_tail")

    def one(item):
        i, f = item
        return [(i, p, h, t) for p, _, _, h, t in _head_tail_cells(f, q, p_list)]

    for rows in pmap(one, enumerate(corpus)):
        for i, p, h, t in rows:
            base = {"function": i, "p": float(p), "q": float(q)}
            report.add({**base, "variant": "head"}, *h)
            report.add({**base, "variant": "tail"}, *t)
    for var in ("head", "tail"):
        report.fitted_exponents[f"{var}_residual_p_exponent"] = \
            _residual_p_exponent(report, variant=var)
    return report


# ------------------------------------------------------------- LG flavours

def check_lg_flavours(corpus, gamma: float) -> RatioReport:
    if not gamma > 0.5:
        raise ValueError("gamma must exceed 1/2")
    report = RatioReport("lg_flavours")

    def one(item):
        i, f = item
        return i, lg_norm(f, gamma, "dyadic"), lg_norm(f, gamma, "fourier")

    for i, lhs, rhs in pmap(one, enumerate(corpus)):
        report.add({"function": i, "gamma": float(gamma)}, lhs, rhs)
    return report
