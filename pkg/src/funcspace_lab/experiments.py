"""One function per experiment. Each returns an :class:`Outcome` holding
named threshold checks, a JSON-ready summary, CSV tables and gnuplot
scripts; nothing is written until :meth:`Outcome.write` is called."""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import envelope_corpus, generate_corpus
from .entropy import (_mask_distances, approx_error, class_profile, entropy_upper_curve,
                      fit_exponent, packing_lower_bound, predicted_exponent,
                      quantization_curve)
from .inequalities import (RatioReport, adversarial_families, check_dyadic_vs_besov,
                           check_head_tail, check_interpolation, check_lg_flavours,
                           check_luxemburg_embedding, check_multiplier_norms,
                           check_square_function_growth)
from .norms import (conjugate_exponent, envelope_functional, growth_envelope_estimate,
                    luxemburg_norm)
from .parallel import pmap
from .stats import loglog_fit

MULTIPLIER_MAX_C = 50.0
SLOPE_TOL = 0.15
RESIDUAL_MAX = 0.05
STABILITY = 0.20
SPREAD_MAX = 10.0
ENTROPY_TOL = 0.25


@dataclass
class Check:
    name: str
    passed: bool
    value: object
    threshold: str

    def as_dict(self):
        return {"name": self.name, "passed": bool(self.passed),
                "value": self.value, "threshold": self.threshold}


@dataclass
class Outcome:
    experiment: str
    checks: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)  # filename -> (header, rows)
    plots: dict = field(default_factory=dict)  # filename -> gnuplot text

    def check(self, name, passed, value, threshold):
        self.checks.append(Check(name, bool(passed), value, threshold))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c.name for c in self.checks if not c.passed]

    def table(self, name, header, rows, plot_cols=(1, 2), logscale="xy"):
        self.tables[name] = (list(header), [list(r) for r in rows])
        stem = Path(name).stem
        self.plots[f"{stem}.gp"] = _gnuplot(name, header, plot_cols, logscale)

    def to_dict(self) -> dict:
        return {"experiment": self.experiment, "passed": self.passed,
                "checks": [c.as_dict() for c in self.checks],
                "summary": self.summary}

    def write(self, out_dir):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, (header, rows) in self.tables.items():
            with (out / name).open("w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(header)
                w.writerows([[fmt(v) for v in r] for r in rows])
        for name, text in self.plots.items():
            (out / name).write_text(text)


def fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def round12(obj):
    """Recursively round floats to 12 significant digits (non-finite to strings)."""
    if isinstance(obj, dict):
        return {str(k): round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round12(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return float(f"{v:.12g}") if math.isfinite(v) else str(v)
    return obj


def write_report(outcomes, config: dict, out_dir) -> dict:
    report = {"config": config, "passed": all(o.passed for o in outcomes),
              "experiments": [o.to_dict() for o in outcomes]}
    report = round12(report)
    Path(out_dir).mkdir(parents=True, exist_ok=True)
    (Path(out_dir) / "report.json").write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")
    return report


def _gnuplot(csv_name, header, cols, logscale) -> str:
    x, y = cols
    lines = ["set datafile separator ','", "set key autotitle columnhead"]
    if logscale:
        lines.append(f"set logscale {logscale}")
    lines += [f"set xlabel '{header[x - 1]}'", f"set ylabel '{header[y - 1]}'",
              f"plot '{csv_name}' using {x}:{y} with linespoints"]
    return "\n".join(lines) + "\n"


def _report_table(out: Outcome, name: str, report: RatioReport):
    rows = report.csv_rows()
    out.table(name, ["inequality", "param_key", "lhs", "rhs", "ratio"], rows,
              plot_cols=(4, 5), logscale="")


# ---------------------------------------------------------------- sweeps

def run_multiplier_norms(J=12, k_range=range(1, 11), lambda_range=None, **_) -> Outcome:
    out = Outcome("verify-lemma3")
    rep = check_multiplier_norms(J, k_range, lambda_range)
    C = rep.fitted_constant
    out.check("multiplier constant", C <= MULTIPLIER_MAX_C, C, f"<= {MULTIPLIER_MAX_C:g}")
    for side, target in (("slope_below", 1.0), ("slope_above", -1.0)):
        fit = rep.fitted_exponents.get(side)
        slope = fit["slope"] if fit else float("nan")
        out.check(f"multiplier {side}", abs(slope - target) <= SLOPE_TOL, slope,
                  f"{target:+g} +- {SLOPE_TOL:g}")
    out.summary = {"fitted_constant": C, "constant_E": rep.constant_for(variant="E"),
                   "constant_D": rep.constant_for(variant="D"),
                   "fits": rep.fitted_exponents}
    for var in ("D", "E"):
        rows = sorted(rep.select(variant=var), key=lambda s: (s["params"]["k"], s["params"]["lambda"]))
        out.table(f"multiplier_norms_{var}.csv", ["k", "lambda", "norm", "bound"],
                  [[s["params"]["k"], s["params"]["lambda"], s["lhs"], s["rhs"]] for s in rows],
                  plot_cols=(2, 3))
    return out


def _chain_corpus(q, size, seed, J):
    per = max(1, size // 3)
    corpus = []
    for j, kind in enumerate(("besov_profile", "lacunary", "mixture")):
        corpus += generate_corpus(kind, per, seed + j, J, {"q": q})
    return corpus + envelope_corpus(q, J)[::7]


def run_dyadic_chain(J=12, q_list=(4 / 3, 2.0), corpus_size=60, seed=0, **_) -> Outcome:
    """Dyadic-Besov and Luxemburg bounds over unit-Besov corpora; constants
    must agree within 20% when the corpus is doubled."""
    out = Outcome("verify-prop-dy")
    rows = []
    for q in q_list:
        consts = {}
        for mult in (1, 2):
            # the doubled corpus is drawn independently, not as a superset
            corpus = _chain_corpus(q, mult * corpus_size, seed + 1000 * (mult - 1), J)
            dy = check_dyadic_vs_besov(corpus, q, J_kernel=J)
            th = check_luxemburg_embedding(corpus, q)
            consts[mult] = {"C1": dy.constant_for(variant="norm"),
                            "C2": th.constant_for(variant="lux_vs_besov"),
                            "C2_dyadic": th.constant_for(variant="lux_vs_dyadic"),
                            "kernel": dy.constant_for(variant="kernel")}
            if mult == 1:
                _report_table(out, f"dyadic_vs_besov_q{q:.4g}.csv", dy)
                _report_table(out, f"luxemburg_embedding_q{q:.4g}.csv", th)
        for name in ("C1", "C2"):
            a, b = consts[1][name], consts[2][name]
            rel = abs(b - a) / a if a > 0 else math.inf
            out.check(f"chain {name} stable q={q:.4g}", np.isfinite(b) and rel <= STABILITY,
                      rel, f"relative change <= {STABILITY:g} on doubling")
        out.summary[f"q={q:.4g}"] = consts
        rows.append([q, consts[1]["C1"], consts[2]["C1"], consts[1]["C2"], consts[2]["C2"]])
    out.table("chain_constants.csv", ["q", "C1", "C1_doubled", "C2", "C2_doubled"], rows,
              logscale="")
    return out


def run_square_function(J=12, p_list=(2, 4, 8, 16, 32, 64), corpus_size=200, seed=0, **_) -> Outcome:
    out = Outcome("verify-cww")
    corpus = generate_corpus("dyadic_packets", corpus_size, seed, J,
                             {"heights": np.ones(J + 1), "gamma": 1.0})
    rep = check_square_function_growth(corpus, p_list)
    r = rep.fitted_exponents["residual_p_exponent"]
    out.check("square-function ratio finite", rep.all_finite(), rep.fitted_constant, "finite")
    out.check("square-function residual exponent", r <= RESIDUAL_MAX, r, f"<= {RESIDUAL_MAX:g}")
    out.summary = {"fitted_constant": rep.fitted_constant, "residual_p_exponent": r}
    out.table("square_function_max.csv", ["p", "max_ratio"],
              [[float(p), rep.constant_for(p=float(p))] for p in p_list])
    return out


def run_interpolation(J=12, p_list=(2, 4, 8, 16, 32, 64), s_list=(1.0, 4 / 3, 2.0), seed=0,
                    **_) -> Outcome:
    out = Outcome("verify-interpol")
    fams = adversarial_families(J, seed)
    rows = []
    for s in s_list:
        rep = check_interpolation(fams, p_list, s)
        r = rep.fitted_exponents["residual_p_exponent"]
        out.check(f"interpolation residual exponent s={s:.4g}",
                  rep.all_finite() and r <= RESIDUAL_MAX, r, f"<= {RESIDUAL_MAX:g}")
        out.summary[f"s={s:.4g}"] = {"fitted_constant": rep.fitted_constant,
                                     "residual_p_exponent": r}
        rows += [[s, float(p), rep.constant_for(p=float(p))] for p in p_list]
    out.table("interpolation_max.csv", ["s", "p", "max_ratio"], rows, plot_cols=(2, 3))
    return out


def run_head_tail(J=12, q_list=(4 / 3, 2.0), p_list=(2, 4, 8, 16, 32, 64), corpus_size=60,
                  seed=0, **_) -> Outcome:
    out = Outcome("verify-expimb")
    rows = []
    for q in q_list:
        rep = check_head_tail(_chain_corpus(q, corpus_size, seed, J), q, p_list)
        for var in ("head", "tail"):
            r = rep.fitted_exponents[f"{var}_residual_p_exponent"]
            out.check(f"split {var} residual exponent q={q:.4g}",
                      rep.all_finite() and r <= RESIDUAL_MAX, r, f"<= {RESIDUAL_MAX:g}")
            out.summary[f"q={q:.4g} {var}"] = {"fitted_constant": rep.constant_for(variant=var),
                                              "residual_p_exponent": r}
            rows += [[q, var, float(p), rep.constant_for(variant=var, p=float(p))]
                     for p in p_list]
    out.table("head_tail_max.csv", ["q", "variant", "p", "max_ratio"], rows,
              plot_cols=(3, 4), logscale="x")
    return out


def run_lg_flavours(J=14, gamma=1.0, corpus_size=32, seed=0, M_list=None, nu=2.0,
                      **_) -> Outcome:
    """Dyadic LG norm against the Fourier one, and the Fourier-flavour
    approximation errors against the dyadic-flavour ones, level by level."""
    out = Outcome("verify-lemma-star")
    fourier = generate_corpus("lg_profile", corpus_size, seed, J, {"gamma": gamma})
    rep = check_lg_flavours(fourier, gamma)
    out.check("lg flavour constant finite", rep.all_finite(), rep.fitted_constant, "finite")
    dyadic = generate_corpus("dyadic_packets", corpus_size, seed, J, {"gamma": gamma})
    M_list = list(range(1, J - 2)) if M_list is None else list(M_list)

    def level(M):
        a = max(approx_error(f, M, nu) for f in fourier)
        b = max(approx_error(f, M, nu) for f in dyadic)
        return M, a, b

    rows = pmap(level, M_list)
    ratio = max(a / b for _, a, b in rows)
    out.check("fourier/dyadic approximation ratio finite", np.isfinite(ratio), ratio, "finite")
    out.summary = {"lg_flavour_constant": rep.fitted_constant, "approx_ratio_constant": ratio}
    _report_table(out, "lg_flavours.csv", rep)
    out.table("approx_compare.csv", ["M", "fourier_error", "dyadic_error"], rows)
    return out


# ------------------------------------------------------ approximation/entropy

APPR_PAIRS = ((1.0, 2.0), (0.75, 2.0), (1.0, 4.0))
ENTROPY_PAIRS = ((1.0, 2.0), (1.0, 4.0))


def run_approx_decay(J=16, pairs=APPR_PAIRS, M_list=range(2, 15), corpus_size=64, seed=0,
               **_) -> Outcome:
    """Corpus-max ``||f - E_M f||_{exp L^nu}`` over random-sign packet sums;
    the slope in ``ln M`` must match the predicted rate. The column with the
    analytic bound for levels above ``J`` is reported, not checked."""
    out = Outcome("appr-decay")
    M_list = list(M_list)
    for gamma, nu in pairs:
        grid = class_profile(gamma, nu, J, M_list, corpus_size, seed, safety=1.0,
                             include_tail=False)
        tail = class_profile(gamma, nu, J, M_list, corpus_size, seed, safety=1.0)
        errs, errs_t = grid.deltas[1:], tail.deltas[1:]
        fit = loglog_fit(M_list, errs)
        fit_t = loglog_fit(M_list, errs_t)
        target = -predicted_exponent(gamma, nu)
        out.check(f"appr slope gamma={gamma:g} nu={nu:g}", abs(fit.slope - target) <= SLOPE_TOL,
                  fit.slope, f"{target:+.4g} +- {SLOPE_TOL:g}")
        out.summary[f"gamma={gamma:g} nu={nu:g}"] = {
            "target_slope": target, "fit": fit.as_dict(), "fit_with_tail_bound": fit_t.as_dict()}
        out.table(f"approx_decay_g{gamma:g}_nu{nu:g}.csv", ["M", "error", "error_with_tail_bound"],
                  [[M, e, t] for M, e, t in zip(M_list, errs, errs_t)])
    return out


def run_envelope(J=14, q_list=(4 / 3, 2.0), corpus_size=40, seed=0, **_) -> Outcome:
    """Corpus envelope of ``f*(t)`` against ``|log t|^(1/q')`` and the
    spread of ``sup_t f*(t) log(e/t)^(-1/q') / ||f||_{exp L^q'}``."""
    out = Outcome("envelope")
    t = 2.0 ** -np.arange(4, 13)
    for q in q_list:
        qp = conjugate_exponent(q)
        witnesses = envelope_corpus(q, J)
        est = np.array([e for _, e in growth_envelope_estimate(q, t, witnesses)])
        fit = loglog_fit(np.abs(np.log(t)), est)
        out.check(f"envelope slope q={q:.4g}", abs(fit.slope - 1.0 / qp) <= SLOPE_TOL,
                  fit.slope, f"{1.0 / qp:.4g} +- {SLOPE_TOL:g}")
        chain = _chain_corpus(q, corpus_size, seed, J - 2) + witnesses[::5]
        ratios = np.array(pmap(lambda f: envelope_functional(f, q) / luxemburg_norm(f, qp), chain))
        spread = float(ratios.max() / ratios.min())
        out.check(f"envelope equivalence spread q={q:.4g}", spread <= SPREAD_MAX, spread,
                  f"<= {SPREAD_MAX:g}")
        out.summary[f"q={q:.4g}"] = {"fit": fit.as_dict(), "spread": spread,
                                     "ratio_min": float(ratios.min()),
                                     "ratio_max": float(ratios.max())}
        out.table(f"envelope_q{q:.4g}.csv", ["t", "estimate", "reference"],
                  [[ti, e, abs(math.log(ti)) ** (1.0 / qp)] for ti, e in zip(t, est)])
    return out


def _packings(gamma, nu, n_list, budget, seed, J_pack):
    dist = _mask_distances(gamma, nu, J_pack)
    return {n: packing_lower_bound(gamma, nu, n, budget, seed, J_pack, _dist=dist)
            for n in n_list}


def run_entropy_curve(J=16, pairs=ENTROPY_PAIRS, corpus_size=64, seed=0, n_list=None,
                  budget=512, J_pack=10, **_) -> Outcome:
    out = Outcome("entropy-curve")
    for gamma, nu in pairs:
        profile = class_profile(gamma, nu, J, corpus_size=corpus_size, seed=seed)
        curve = entropy_upper_curve(gamma, nu, n_list, J, profile=profile)
        target = -predicted_exponent(gamma, nu)
        tag = f"gamma={gamma:g} nu={nu:g}"
        # second route: explicit quantization nets must not beat the covering bound by
        # more than the radius inflation, and must decay as well
        quant = quantization_curve(profile, gamma, range(1, J))
        qfit = fit_exponent([(m, r) for m, r in quant if m >= 3])
        out.check(f"entropy exponent {tag}", abs(curve.fitted_exponent - target) <= ENTROPY_TOL,
                  curve.fitted_exponent, f"{target:+.4g} +- {ENTROPY_TOL:g}")
        lows = _packings(gamma, nu, [n for n, _, _ in curve.entries], budget, seed, J_pack)
        curve.entries = [(n, u, lows[n]) for n, u, _ in curve.entries]
        bad = [n for n, u, lo in curve.entries if lo > u]
        out.check(f"packing below upper bound {tag}", not bad, bad, "no probed n")
        out.check(f"quantization route decays {tag}", qfit.slope < 0, qfit.slope, "< 0")
        out.summary[tag] = {"target_exponent": target, "fit": curve.fit.as_dict(),
                            "breakpoints": curve.breakpoints, "quantization": quant,
                            "quantization_fit": qfit.as_dict()}
        out.table(f"profile_g{gamma:g}_nu{nu:g}.csv", ["n", "delta"],
                  [[int(n), d] for n, d in zip(profile.dims, profile.deltas)], logscale="x")
        out.table(f"entropy_curve_g{gamma:g}_nu{nu:g}.csv", ["n", "upper", "lower", "reference"],
                  [[n, u, lo, math.log(n) ** target if n > 1 else float("nan")]
                   for n, u, lo in curve.entries], logscale="x")
    return out


def run_packing(J=16, gamma=1.0, nu=2.0, corpus_size=64, seed=0, n_list=range(1, 10),
            budget=512, J_pack=10, **_) -> Outcome:
    out = Outcome("packing")
    curve = entropy_upper_curve(gamma, nu, None, J, corpus_size, seed)
    n_list = list(n_list)
    lows = _packings(gamma, nu, n_list, budget, seed, J_pack)
    rows = [[n, lows[n], curve.upper_at(n)] for n in n_list]
    bad = [n for n, lo, up in rows if lo > up]
    out.check("packing below upper bound", not bad, bad, "no probed n")
    out.summary = {"certified": {str(n): lo for n, lo, _ in rows}}
    out.table("packing.csv", ["n", "lower", "upper"], rows, logscale="")
    return out


EXPERIMENTS = {
    "verify-lemma3": run_multiplier_norms,
    "verify-prop-dy": run_dyadic_chain,
    "verify-cww": run_square_function,
    "verify-interpol": run_interpolation,
    "verify-expimb": run_head_tail,
    "verify-lemma-star": run_lg_flavours,
    "appr-decay": run_approx_decay,
    "envelope": run_envelope,
    "entropy-curve": run_entropy_curve,
    "packing": run_packing,
}
