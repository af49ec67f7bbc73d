import json

import pytest

from funcspace_lab.cli import ConfigError, load_config, main


def write(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def test_multiplier_run_passes(tmp_path, capsys):
    cfg = write(tmp_path, {"J": 10, "params": {"k_range": "1..8", "lambda_range": "8..256"}})
    out = tmp_path / "out"
    assert main(["verify-lemma3", "--config", cfg, "--out", str(out)]) == 0
    assert (out / "multiplier_norms_D.csv").read_text().startswith("k,lambda,norm,bound\n")
    assert (out / "multiplier_norms_D.gp").exists()
    report = json.loads((out / "report.json").read_text())
    assert report["passed"] and report["experiments"][0]["experiment"] == "verify-lemma3"


@pytest.mark.parametrize("data,field", [
    ({"params": {"q": 3}}, "params.q"),
    ({"params": {"p_list": [1, 2]}}, "params.p_list"),
    ({"params": {"bogus": 1}}, "params.bogus"),
    ({"J": 30}, "J"),
    ({"seed": -1}, "seed"),
    ({"params": {"k_range": "a..b"}}, "params.k_range"),
    ({"params": {"gamma": 0.3}}, "params.gamma"),
    ({"experiment": "packing"}, "experiment"),
])
def test_invalid_config_exit_2(tmp_path, capsys, data, field):
    assert main(["verify-cww", "--config", write(tmp_path, data), "--out", str(tmp_path)]) == 2
    assert f"'{field}'" in capsys.readouterr().err


def test_region_check(tmp_path):
    with pytest.raises(ConfigError) as exc:
        load_config("entropy-curve", write(tmp_path, {"params": {"gamma": 0.6, "nu": 4}}))
    assert exc.value.field == "params.gamma"


def test_missing_file_exit_2(tmp_path, capsys):
    assert main(["verify-cww", "--config", str(tmp_path / "none.json")]) == 2
    assert "'config'" in capsys.readouterr().err


def test_threshold_failure_exit_1(tmp_path, capsys):
    # every cell sits below the peak, so the upper-side slope cannot be fitted
    cfg = write(tmp_path, {"J": 10, "params": {"k_range": "1..2", "lambda_range": "32..256"}})
    code = main(["verify-lemma3", "--config", cfg, "--out", str(tmp_path / "o")])
    err = capsys.readouterr().err
    assert code == 1 and "multiplier slope_above" in err
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert not report["passed"]


def test_flag_overrides(tmp_path):
    cfg = load_config("verify-cww", write(tmp_path, {"J": 10, "seed": 3}), J=8, seed=5, out="x")
    assert (cfg.J, cfg.seed, cfg.output_dir) == (8, 5, "x")
    assert cfg.kwargs()["J"] == 8


def test_byte_identical_csv(tmp_path, monkeypatch):
    cfg = write(tmp_path, {"J": 9, "params": {"corpus_size": 12, "p_list": [2, 8, 32]}})
    outs = []
    for i, threads in enumerate(("1", "3", "1")):
        monkeypatch.setenv("FUNCSPACE_LAB_THREADS", threads)
        out = tmp_path / f"o{i}"
        main(["verify-cww", "--config", cfg, "--seed", "11", "--out", str(out)])
        outs.append(out)
    a, b, c = ((o / "square_function_max.csv").read_bytes() for o in outs)
    assert a == b == c
