"""Experiment runner.

    funcspace-lab <experiment> --config <file> [--J n] [--seed n] [--out dir]

Exit status: 0 when every threshold passes, 1 on a threshold failure
(failing checks are named on stderr), 2 on an invalid configuration (the
offending field is named).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .entropy import in_region
from .experiments import EXPERIMENTS, write_report
from .grid import MAX_J

COMMANDS = tuple(EXPERIMENTS) + ("all",)
PARAM_FIELDS = ("q", "nu", "gamma", "p_list", "k_range", "lambda_range", "M_list", "n_list",
                "corpus_size", "budget", "s_list")


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"invalid config field '{field_name}': {message}")
        self.field = field_name


@dataclass
class ExperimentConfig:
    experiment: str
    J: int | None = None
    seed: int = 0
    params: dict = field(default_factory=dict)
    output_dir: str = "out"

    def validate(self) -> "ExperimentConfig":
        if self.experiment not in COMMANDS:
            raise ConfigError("experiment", f"{self.experiment!r} not in {COMMANDS}")
        if self.J is not None:
            if not isinstance(self.J, int) or isinstance(self.J, bool) or not 4 <= self.J <= MAX_J:
                raise ConfigError("J", f"must be an integer in 4..{MAX_J}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed < 2**64:
            raise ConfigError("seed", "must be a 64-bit nonnegative integer")
        if not isinstance(self.params, dict):
            raise ConfigError("params", "must be a mapping")
        for key in self.params:
            if key not in PARAM_FIELDS:
                raise ConfigError(f"params.{key}", f"unknown parameter; expected one of {PARAM_FIELDS}")
        self.params = {k: _parse_value(k, v) for k, v in self.params.items()}
        p = self.params
        J = self.J
        if "q" in p and not 1 < p["q"] <= 2:
            raise ConfigError("params.q", "must lie in (1, 2]")
        if "nu" in p and not p["nu"] > 0:
            raise ConfigError("params.nu", "must be positive")
        if "gamma" in p and not p["gamma"] > 0.5:
            raise ConfigError("params.gamma", "must exceed 1/2")
        if "gamma" in p or "nu" in p:
            g, nu = p.get("gamma", 1.0), p.get("nu", 2.0)
            if self.experiment in ("entropy-curve", "packing") and not in_region(g, nu):
                raise ConfigError("params.gamma", f"(gamma={g}, nu={nu}) outside the compactness region")
        for name in ("p_list",):
            if name in p and any(not 2 <= x <= 64 for x in p[name]):
                raise ConfigError(f"params.{name}", "entries must lie in [2, 64]")
        if "s_list" in p and any(not 1 <= x <= 2 for x in p["s_list"]):
            raise ConfigError("params.s_list", "entries must lie in [1, 2]")
        Jk = J if J is not None else 12
        if "k_range" in p and any(not 1 <= k <= Jk for k in p["k_range"]):
            raise ConfigError("params.k_range", f"entries must lie in 1..{Jk}")
        if "lambda_range" in p and any(not 1 <= x <= 2**Jk / 4 for x in p["lambda_range"]):
            raise ConfigError("params.lambda_range", f"entries must lie in [1, N/4 = {2**Jk // 4}]")
        Jm = J if J is not None else 16
        if "M_list" in p and (len(p["M_list"]) < 2 or any(not 0 <= M < Jm for M in p["M_list"])):
            raise ConfigError("params.M_list", f"needs >= 2 entries in 0..{Jm - 1}")
        if "n_list" in p and any(n < 1 for n in p["n_list"]):
            raise ConfigError("params.n_list", "entries must be >= 1")
        if "corpus_size" in p and not p["corpus_size"] >= 1:
            raise ConfigError("params.corpus_size", "must be >= 1")
        if "budget" in p and not p["budget"] >= 2:
            raise ConfigError("params.budget", "must be >= 2")
        return self

    def kwargs(self) -> dict:
        """Keyword arguments for the experiment functions."""
        p = dict(self.params)
        kw = {"seed": self.seed}
        if self.J is not None:
            kw["J"] = self.J
        for name in ("p_list", "k_range", "lambda_range", "M_list", "n_list", "corpus_size",
                     "budget", "s_list"):
            if name in p:
                kw[name] = p[name]
        if "q" in p:
            kw["q_list"] = (p["q"],)
        if "gamma" in p or "nu" in p:
            g, nu = p.get("gamma", 1.0), p.get("nu", 2.0)
            kw.update(gamma=g, nu=nu, pairs=((g, nu),))
        return kw


def _parse_value(key, v):
    """Numbers stay numbers; lists and ``"a..b"`` ranges (inclusive) become lists."""
    ints = key in ("k_range", "M_list", "n_list", "corpus_size", "budget")
    try:
        if isinstance(v, str) and ".." in v:
            a, b = v.split("..")
            a, b = int(a), int(b)
            if key == "lambda_range":  # powers of two between a and b
                out, x = [], 1
                while x <= b:
                    if x >= a:
                        out.append(float(x))
                    x *= 2
                return out
            return list(range(a, b + 1))
        if isinstance(v, list):
            if not v:
                raise ValueError("empty list")
            return [int(x) if ints else float(x) for x in v]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ValueError(f"expected a number, got {v!r}")
        if key.endswith(("_list", "_range")):
            raise ValueError("expected a list or an 'a..b' range")
        if ints and int(v) != v:
            raise ValueError("expected an integer")
        return int(v) if ints else float(v)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"params.{key}", str(exc)) from None


def load_config(experiment: str, path, J=None, seed=None, out=None) -> ExperimentConfig:
    data = {}
    if path is not None:
        try:
            data = json.loads(Path(path).read_text())
        except FileNotFoundError:
            raise ConfigError("config", f"file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"not valid JSON ({exc})") from None
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be an object")
    unknown = set(data) - {"experiment", "J", "seed", "params", "output_dir"}
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown top-level field")
    if data.get("experiment", experiment) != experiment:
        raise ConfigError("experiment", f"config names {data['experiment']!r}, command is {experiment!r}")
    cfg = ExperimentConfig(experiment=experiment, J=data.get("J"), seed=data.get("seed", 0),
                           params=data.get("params", {}),
                           output_dir=data.get("output_dir", "out"))
    if J is not None:
        cfg.J = J
    if seed is not None:
        cfg.seed = seed
    if out is not None:
        cfg.output_dir = out
    return cfg.validate()


def run(cfg: ExperimentConfig) -> int:
    names = list(EXPERIMENTS) if cfg.experiment == "all" else [cfg.experiment]
    out_dir = Path(cfg.output_dir)
    outcomes = []
    for name in names:
        outcome = EXPERIMENTS[name](**cfg.kwargs())
        outcome.write(out_dir / name if len(names) > 1 else out_dir)
        outcomes.append(outcome)
        status = "pass" if outcome.passed else "FAIL"
        print(f"{name}: {status}")
        for c in outcome.checks:
            print(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}: {c.value} ({c.threshold})")
    write_report(outcomes, asdict(cfg), out_dir)
    failed = [f"{o.experiment}: {n}" for o in outcomes for n in o.failures]
    if failed:
        print("threshold failure: " + "; ".join(failed), file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="funcspace-lab", description=__doc__.splitlines()[0])
    ap.add_argument("experiment", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="JSON file; '-' for defaults only")
    ap.add_argument("--J", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.experiment, None if args.config == "-" else args.config,
                          args.J, args.seed, args.out)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    try:
        return run(cfg)
    except ValueError as exc:  # guards tripped inside a module
        print(f"invalid config: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
