import json

import pytest

from etlab.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_NUMERIC, EXIT_PASS, describe, main
from etlab.config import config_from_dict, parse_config
from etlab.errors import ConfigError
from etlab.report import to_json, to_text
from etlab.suites import IDENTITIES, run

FLAT_INLINE = {
    "coords": ["x1", "x2", "x3", "x4"],
    "metric": ["1", "1", "1", "1"],
    "domain": [[0.1, 1], [0.1, 1], [0.1, 1], [0.1, 1]],
    "f": "x1",
    "h": "0",
    "case_tag": "static_null_lambda",
}


def _write(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def _records(report):
    return {r["identity"]: r for s in report["suites"] for r in s["identities"]}


class TestRun:
    def test_flat_einstein_type_exact(self, tmp_path, capsys):
        cfg = _write(tmp_path, {"structure": FLAT_INLINE, "suites": ["einstein_type"], "report": "json"})
        assert main(["run", cfg]) == EXIT_PASS
        rep = json.loads(capsys.readouterr().out)
        recs = _records(rep)
        for name in ("principal", "trace", "grad_h"):
            assert recs[name]["verdict"] == "pass"
            assert recs[name]["max_relative_residual"] < 1e-12
        assert rep["schema"] == 1
        assert recs["fluid_backsubstitution"]["verdict"] == "skipped"

    def test_failing_identity_exit_one(self, tmp_path, capsys):
        bad = dict(FLAT_INLINE, f="x1^2")
        cfg = _write(tmp_path, {"structure": bad, "suites": ["einstein_type"], "samples": 3})
        assert main(["run", cfg]) == EXIT_FAIL
        assert "FAIL" in capsys.readouterr().out

    def test_tolerance_override(self, tmp_path):
        bad = dict(FLAT_INLINE, f="x1^2", case_tag="generic")
        doc = {"structure": bad, "suites": ["einstein_type"], "samples": 3, "tolerances": {"einstein_type": 10}}
        assert main(["run", _write(tmp_path, doc), "--out", str(tmp_path / "r.txt")]) == EXIT_PASS

    def test_vacuous_pass_fails(self, tmp_path):
        thin = dict(FLAT_INLINE, f="x1 - 0.5", domain=[[0.4999999, 0.5000001]] + FLAT_INLINE["domain"][1:])
        cfg = _write(tmp_path, {"structure": thin, "suites": ["einstein_type"], "samples": 4, "report": "json"})
        out = tmp_path / "r.json"
        assert main(["run", cfg, "--out", str(out)]) == EXIT_FAIL
        rec = _records(json.loads(out.read_text()))["principal"]
        assert rec["verdict"] == "vacuous"
        assert rec["points_skipped"] == 4 and rec["points_evaluated"] == 0

    def test_skipped_only_does_not_fail(self, tmp_path):
        doc = {"structure": {"catalog": "generic_metric"}, "suites": ["lemmas"], "samples": 2, "report": "json"}
        cfg = parse_config(json.dumps(doc))
        rep = run(cfg)
        assert all(r["verdict"] == "skipped" for r in _records(rep).values())
        assert rep["summary"]["verdict"] == "pass"

    def test_domain_error_lists_point(self, tmp_path, capsys):
        doc = dict(FLAT_INLINE, metric=["1 + log(x1)", "1", "1", "1"], domain=[[-1, -0.1]] + FLAT_INLINE["domain"][1:])
        cfg = _write(tmp_path, {"structure": doc, "suites": ["einstein_type"], "samples": 2})
        assert main(["run", cfg]) == EXIT_NUMERIC
        err = capsys.readouterr().err
        assert "log" in err and "point" in err

    def test_order_exhausted_names_suite(self, tmp_path, capsys):
        cfg = _write(tmp_path, {"structure": {"catalog": "sphere_height"}, "suites": ["lemmas"]})
        assert main(["run", cfg, "--jet-order", "4"]) == EXIT_NUMERIC
        err = capsys.readouterr().err
        assert "'lemmas'" in err and "lemma_third_order" in err and ">= 6" in err

    def test_bad_json_position(self, tmp_path, capsys):
        cfg = _write(tmp_path, '{"structure": {"catalog": "sphere_height"},\n  "samples": }')
        assert main(["run", cfg]) == EXIT_CONFIG
        assert "line 2" in capsys.readouterr().err

    def test_bad_expression_position(self, tmp_path, capsys):
        doc = dict(FLAT_INLINE, metric=["1", "1", "1", "1 +* x2"])
        assert main(["run", _write(tmp_path, {"structure": doc})]) == EXIT_CONFIG
        err = capsys.readouterr().err
        assert "structure.metric[3]" in err and "(line 1, column 4)" in err

    def test_missing_file(self, capsys):
        assert main(["run", "/nonexistent/cfg.json"]) == EXIT_CONFIG

    def test_unknown_suite(self, tmp_path):
        cfg = _write(tmp_path, {"structure": {"catalog": "sphere_height"}, "suites": ["bogus"]})
        assert main(["run", cfg]) == EXIT_CONFIG

    def test_deterministic_and_worker_independent(self, tmp_path):
        doc = {"structure": {"catalog": "schwarzschild_slice"}, "suites": ["symmetries", "curvature_identities"], "samples": 3, "seed": 5, "report": "json"}
        cfg = _write(tmp_path, doc)
        outs = []
        for k, extra in enumerate([[], [], ["--workers", "2"]]):
            out = tmp_path / f"r{k}.json"
            assert main(["run", cfg, "--out", str(out)] + extra) == EXIT_PASS
            outs.append(out.read_bytes())
        assert outs[0] == outs[1] == outs[2]

    def test_seed_changes_points(self, tmp_path):
        doc = {"structure": {"catalog": "generic_metric"}, "suites": ["symmetries"], "samples": 2, "report": "json"}
        a = to_json(run(config_from_dict(dict(doc, seed=1))))
        b = to_json(run(config_from_dict(dict(doc, seed=2))))
        assert a != b


class TestReport:
    def test_text_derived_from_json(self):
        rep = run(config_from_dict({"structure": {"catalog": "flat_linear"}, "suites": ["einstein_type"], "samples": 2}))
        text = to_text(rep)
        for rec in _records(rep).values():
            assert rec["identity"] in text
        assert "overall: PASS" in text or "PASS" in text

    def test_record_fields(self):
        rep = run(config_from_dict({"structure": {"catalog": "sphere_height"}, "suites": ["symmetries"], "samples": 2}))
        rec = _records(rep)["first_bianchi"]
        assert set(rec) >= {
            "identity", "anchor", "points_evaluated", "points_skipped", "max_relative_residual",
            "mean_relative_residual", "tolerance", "verdict",
        }
        assert rec["anchor"]

    def test_identity_names_unique(self):
        names = [i.name for i in IDENTITIES]
        assert len(names) == len(set(names))


class TestConfig:
    @pytest.mark.parametrize(
        "doc",
        [
            {"structure": {"catalog": "sphere_height"}, "samples": 0},
            {"structure": {"catalog": "sphere_height"}, "report": "xml"},
            {"structure": {"catalog": "sphere_height"}, "bogus": 1},
            {"structure": {"catalog": "nope"}},
            {"structure": dict(FLAT_INLINE, case_tag="weird")},
            {"structure": dict(FLAT_INLINE, metric=["1", "1"])},
            {"suites": ["symmetries"]},
        ],
    )
    def test_rejected(self, doc):
        with pytest.raises(ConfigError):
            config_from_dict(doc)

    def test_full_matrix_metric(self):
        doc = dict(FLAT_INLINE, metric=[["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]])
        cfg = config_from_dict({"structure": doc, "suites": ["einstein_type"], "samples": 2})
        assert run(cfg)["summary"]["verdict"] == "pass"

    def test_asymmetric_matrix_rejected(self):
        doc = dict(FLAT_INLINE, metric=[["1", "x1", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"], ["0", "0", "0", "1"]])
        with pytest.raises(ConfigError, match="symmetric"):
            config_from_dict({"structure": doc})


class TestListCatalog:
    def test_text(self, capsys):
        assert main(["list-catalog"]) == EXIT_PASS
        out = capsys.readouterr().out
        for name in ("example1", "schwarzschild_slice", "sphere_height", "flat_linear", "miao_tam_ball", "warped_generic"):
            assert name in out

    def test_json_same_inventory(self, capsys):
        main(["list-catalog"])
        text = capsys.readouterr().out
        assert main(["list-catalog", "--json"]) == EXIT_PASS
        inv = json.loads(capsys.readouterr().out)
        assert all(e["name"] in text for e in inv)
        assert {"name", "params", "realizes", "solution"} <= set(inv[0])

    def test_unknown_flag(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["list-catalog", "--yaml"])
        assert info.value.code == 2


class TestDescribe:
    def test_example1_scalar_zero(self, capsys):
        assert main(["describe", "example1", "--param", "n=4", "--point", "2,0,0,0"]) == EXIT_PASS
        out = capsys.readouterr().out
        assert "f = 0.8660254038" in out
        doc = describe("example1", {"n": 4}, [2.0, 0.0, 0.0, 0.0])
        assert abs(doc["blocks"]["R"]) < 1e-12

    def test_sphere_scalar(self):
        doc = describe("sphere_height", {"n": 4}, [0.1, 0.0, -0.1, 0.2])
        assert doc["blocks"]["R"] == pytest.approx(12.0, rel=1e-13)

    def test_flat_all_zero(self, capsys):
        assert main(["describe", "flat_linear", "--point", "0.5,0.5,0.5,0.5", "--json"]) == EXIT_PASS
        doc = json.loads(capsys.readouterr().out)
        for key in ("Ric", "W", "C", "B", "T"):
            flat = json.dumps(doc["blocks"][key])
            assert all(float(v) == 0 for v in flat.replace("[", " ").replace("]", " ").replace(",", " ").split())
        assert doc["blocks"]["R"] == 0

    def test_point_outside_box(self, capsys):
        assert main(["describe", "sphere_height", "--point", "0.9,0,0,0"]) == EXIT_CONFIG

    def test_wrong_point_length(self, capsys):
        assert main(["describe", "sphere_height", "--point", "0.1,0"]) == EXIT_CONFIG

    def test_unknown_entry(self, capsys):
        assert main(["describe", "kerr", "--point", "1,1,1,1"]) == EXIT_CONFIG
