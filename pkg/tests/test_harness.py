from __future__ import annotations

import dataclasses
import json

import pytest

from activepu.errors import ConfigError, ParseError, ValidationError
from activepu.harness import cli
from activepu.harness.config import ExperimentConfig, parse_config, parse_distribution
from activepu.harness.emit import COLUMNS, csv_body, from_json, read_csv, to_csv, to_json
from activepu.harness.runner import run_experiment, run_trial
from activepu.runtime import Caps, Constants
from activepu.scenario import Gaussian1D, Mixture, Uniform

MINIMAL = "[algorithm]\nname = known_pi\n"

DESK = """\
[scenario]
distribution = uniform(0, 1)
class = threshold
target = 0.5
omega = 0.5

[algorithm]
name = {algo}
eps = 0.05
delta = 0.1

[constants]
k_scale = 0.01

[run]
trials = {trials}
base_seed = 11
"""


def desk(algo="known_pi", trials=6):
    return DESK.format(algo=algo, trials=trials)


def errors_of(text):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    return info.value.errors


class TestConfig:
    def test_minimal_defaults(self):
        cfg = parse_config(MINIMAL)
        assert (cfg.distribution, cfg.hclass, cfg.target, cfg.omega) == ("uniform(0, 1)", "threshold", "0.5", 1.0)
        assert (cfg.eps, cfg.delta, cfg.trials, cfg.base_seed) == (0.05, 0.1, 1, 0)
        assert cfg.constants == Constants() and cfg.caps == Caps()

    @pytest.mark.parametrize("section,key,value", [
        ("algorithm", "eps", "0"), ("scenario", "omega", "1.5"), ("algorithm", "delta", "-1")])
    def test_unit_interval(self, section, key, value):
        errs = errors_of(f"[algorithm]\nname = known_pi\n[{section}]\n{key} = {value}\n"
                         if section != "algorithm" else f"[algorithm]\nname = known_pi\n{key} = {value}\n")
        assert any(isinstance(e, ValidationError) and e.field == key and e.reason == "must be in (0,1]"
                   for e in errs)

    def test_all_errors_reported(self):
        errs = errors_of("[algorithm]\nname = nope\neps = 0\ncolour = red\n[extra]\nx = 1\n")
        fields = {e.field for e in errs if isinstance(e, ValidationError)}
        assert fields == {"extra", "algorithm.colour", "name", "eps"}

    def test_parse_error_has_line(self):
        errs = errors_of("[algorithm]\nname = known_pi\nthis line is broken\n")
        assert isinstance(errs[0], ParseError) and errs[0].line == 3

    def test_theory_mode_needs_constants(self):
        errs = errors_of(MINIMAL + "[constants]\nmode = theory\n")
        assert errs

    def test_theory_mode_accepts_constants(self):
        cfg = parse_config(MINIMAL + "[constants]\nmode = theory\nM1 = 2\nM2 = 3\nM3 = 512\n")
        assert (cfg.constants.M1, cfg.constants.M3) == (2.0, 512.0)

    def test_distribution_grammar(self):
        assert parse_distribution("uniform(0, 2)") == Uniform(0, 2)
        assert parse_distribution("gaussian(0, 1)") == Gaussian1D(0, 1)
        m = parse_distribution("mixture(0.3*uniform(0, 1), 0.7*gaussian(2, 0.5))")
        assert isinstance(m, Mixture)


class TestRunExperiment:
    def test_zero_trials(self):
        cfg = parse_config(desk(trials=0))
        assert run_experiment(cfg) == ([], {})

    def test_identical_csv_bodies(self):
        cfg = parse_config(desk("unknown_pi"))
        a = csv_body(run_experiment(cfg, jobs=1)[0])
        b = csv_body(run_experiment(cfg, jobs=2)[0])
        assert a == b

    def test_seeds_are_base_plus_index(self):
        recs, _ = run_experiment(parse_config(desk()), jobs=1)
        assert [r.seed for r in recs] == [11 + i for i in range(6)]

    def test_records_match_ledger(self):
        cfg = parse_config(desk())
        rec, res = run_trial(cfg, 2)
        assert rec.label_requests == res.ledger.total_queries
        assert rec.positive_responses == res.ledger.positive_responses

    def test_failure_is_a_row(self):
        cfg = dataclasses.replace(parse_config(desk()), caps=Caps(label_requests=1))
        recs, summary = run_experiment(cfg, jobs=1)
        assert len(recs) == 6 and summary["failures"]

    @pytest.mark.parametrize("algo", ["known_pi", "unknown_pi", "estrate", "cal", "passive_pu"])
    def test_every_algorithm_runs(self, algo):
        recs, summary = run_experiment(parse_config(desk(algo, 3)), jobs=1)
        assert summary["trials"] == 3 and all(r.algorithm == algo for r in recs)


class TestEmit:
    @pytest.fixture(scope="class")
    @staticmethod
    def batch():
        cfg = parse_config(desk("unknown_pi", 4))
        return (cfg,) + run_experiment(cfg, jobs=1)

    def test_empty_is_header_only(self):
        assert csv_body([]) == ",".join(COLUMNS) + "\n"

    def test_n_plus_one_lines(self, batch):
        _, recs, _ = batch
        body = csv_body(recs)
        assert body.count("\n") == len(recs) + 1 and "\r" not in body

    def test_header_carries_config_and_schema(self, batch):
        cfg, recs, _ = batch
        text = to_csv(recs, cfg)
        assert text.startswith("# activepu-trials schema_version=1\n")
        assert "# config: name = unknown_pi" in text

    def test_csv_round_trip(self, batch, tmp_path):
        cfg, recs, _ = batch
        p = tmp_path / "t.csv"
        p.write_text(to_csv(recs, cfg))
        cfg2, recs2 = read_csv(p)
        assert cfg2.as_dict() == cfg.as_dict()
        for a, b in zip(recs, recs2):
            assert dataclasses.replace(a, audit={}) == b

    def test_json_round_trip(self, batch):
        cfg, recs, summary = batch
        doc, recs2 = from_json(to_json(recs, summary, cfg))
        assert recs2 == recs and doc["summary"] == json.loads(json.dumps(summary))
        assert set(doc) == {"schema_version", "config", "records", "summary"}


class TestCli:
    def write(self, tmp_path, text, name="c.ini"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    def test_run_and_replay(self, tmp_path, capsys):
        cfg = self.write(tmp_path, desk())
        out = str(tmp_path / "o.csv")
        assert cli.main(["run", cfg, "--out", out, "--jobs", "1", "--quiet"]) == 0
        assert cli.main(["replay", out, "--trial", "3"]) == 0
        assert "replay matches stored row" in capsys.readouterr().out

    def test_json_output(self, tmp_path):
        cfg = self.write(tmp_path, desk())
        out = tmp_path / "o.json"
        assert cli.main(["run", cfg, "--out", str(out), "--quiet"]) == 0
        assert len(json.loads(out.read_text())["records"]) == 6

    def test_seed_override(self, tmp_path):
        cfg = self.write(tmp_path, desk())
        out = tmp_path / "o.csv"
        cli.main(["run", cfg, "--out", str(out), "--seed-override", "100", "--quiet", "--jobs", "1"])
        _, recs = read_csv(out)
        assert recs[0].seed == 100

    def test_config_error_exit(self, tmp_path, capsys):
        cfg = self.write(tmp_path, "[algorithm]\neps = 0\nbogus = 1\n")
        assert cli.main(["validate", cfg]) == 1
        assert capsys.readouterr().err.count("error:") >= 2

    def test_validate_ok(self, tmp_path, capsys):
        assert cli.main(["validate", self.write(tmp_path, MINIMAL)]) == 0
        assert capsys.readouterr().out.startswith("ok:")

    def test_strict_exit(self, tmp_path):
        cfg = self.write(tmp_path, desk() + "\n[caps]\nlabel_requests = 1\n")
        args = ["run", cfg, "--out", str(tmp_path / "o.csv"), "--quiet", "--jobs", "1"]
        assert cli.main(args) == 0
        assert cli.main(args + ["--strict"]) == 2

    def test_theta(self, capsys):
        assert cli.main(["theta", "interval(w_min=0.1)", "uniform(0, 1)"]) == 0
        out = capsys.readouterr().out
        assert "analytic" in out and "grid" in out
