import json
from fractions import Fraction

import pytest

import fqlab.cli as cli
from fqlab import VerificationFailed
from fqlab.cli import (
    SWEEP_FIELDS,
    build_parser,
    config_digest,
    derive_seed,
    emit,
    format_real,
    main,
    normalize_config,
    run_sweep,
)

SMALL_CONFIG = {
    "grid": [{"primes": [3, 7], "dims": [2]}],
    "generators": ["all", "random:1t"],
    "seeds": [1, 2],
    "checks": ["main", "remark", "variance", "mixing", "hinge", "spectrum"],
}


# --- serialization ----------------------------------------------------------


def test_format_real_12_digits():
    assert format_real(1002.8306325798367) == "1002.83063258"
    assert format_real(648.0) == "648"
    assert format_real(-0.0) == "0"
    assert format_real(2.0) == "2"


def test_emit_jsonl_exact_bytes():
    rec = {
        "status": "ok", "f_value": 288, "lower_bound": Fraction(288),
        "upper_exact": 648.0, "holds": True, "error": None,
    }
    fields = ("status", "f_value", "lower_bound", "upper_exact", "holds", "error")
    line = emit([rec], "jsonl", fields)
    assert line == (
        '{"status":"ok","f_value":288,"lower_bound":"288/1",'
        '"upper_exact":648,"holds":true,"error":null}\n'
    )


def test_emit_reduces_rationals():
    out = emit([{"x": Fraction(36, 24)}], "jsonl", ("x",))
    assert out == '{"x":"3/2"}\n'


def test_emit_csv_header_only_when_empty():
    out = emit([], "csv", ("a", "b"))
    assert out == "a,b\n"
    assert emit([], "jsonl", ("a", "b")) == ""


def test_emit_csv_values():
    out = emit([{"a": True, "b": None, "c": Fraction(1, 3)}], "csv", ("a", "b", "c"))
    assert out == "a,b,c\ntrue,,1/3\n"


def test_derive_seed_stable():
    assert derive_seed("x", 3, 2) == derive_seed("x", 3, 2)
    assert derive_seed("x", 3, 2) != derive_seed("x", 2, 3)


def test_config_digest_key_order_invariant():
    a = config_digest({"x": 1, "y": [2]})
    b = config_digest({"y": [2], "x": 1})
    assert a == b


# --- single-instance commands -------------------------------------------------


def test_sphere_command(capsys):
    assert main(["sphere", "--q", "3", "--dim", "2"]) == 0
    out = capsys.readouterr().out
    assert "a=0 size=1" in out and "a=1 size=4" in out and "total=9" in out


def test_sphere_list_points(capsys):
    assert main(["sphere", "--q", "3", "--dim", "2", "--a", "1", "--list"]) == 0
    out = capsys.readouterr().out
    assert "0,1" in out and "2,0" in out


def test_spectrum_command(capsys, tmp_path):
    out_file = tmp_path / "spec.jsonl"
    code = main(["spectrum", "--q", "3", "--dim", "2", "--out", str(out_file)])
    assert code == 0
    txt = capsys.readouterr().out
    assert "second=2" in txt
    recs = [json.loads(l) for l in out_file.read_text().splitlines()]
    assert [r["a"] for r in recs] == [1, 2]
    assert all(r["bound_ok"] for r in recs)
    assert recs[0]["valency"] == 4


def test_spectrum_verification_failure_exits_1(monkeypatch):
    def boom(G, sample_count=4, seed=0, force=False):
        raise VerificationFailed("synthetic")

    monkeypatch.setattr(cli, "verify_spectrum", boom)
    assert main(["spectrum", "--q", "3", "--dim", "2", "--a", "1"]) == 1


def test_fcount_gen(capsys):
    assert main(["fcount", "--q", "3", "--dim", "2", "--gen", "all"]) == 0
    out = capsys.readouterr().out
    assert "f=288" in out and "verdict: ok" in out


def test_fcount_points_file(tmp_path, capsys):
    pf = tmp_path / "pts.txt"
    pf.write_text("# anchor\n0,0\n0,1\n1,0\n")
    out_file = tmp_path / "rec.jsonl"
    code = main(["fcount", "--q", "3", "--points", str(pf), "--out", str(out_file)])
    assert code == 0
    line = out_file.read_text()
    assert '"f_value":8' in line
    assert '"delta_implied":"3/2"' in line


def test_fcount_record_matches_documented_bytes(tmp_path):
    out_file = tmp_path / "rec.jsonl"
    main(["fcount", "--q", "3", "--dim", "2", "--gen", "all", "--out", str(out_file)])
    line = out_file.read_text()
    assert '"f_value":288,"null_pair_count":0' in line
    assert '"lower_bound":"288/1"' in line


def test_fcount_needs_input(capsys):
    assert main(["fcount", "--q", "3", "--dim", "2"]) == 2


def test_fcount_rejects_both_input_sources(tmp_path, capsys):
    pf = tmp_path / "pts.txt"
    pf.write_text("0,0\n0,1\n")
    code = main(["fcount", "--q", "3", "--points", str(pf), "--gen", "all", "--dim", "2"])
    assert code == 2
    assert "mutually exclusive" in capsys.readouterr().err


# --- verify ---------------------------------------------------------------------


def test_verify_spectrum_check(capsys):
    code = main(["verify", "--q", "3", "--dim", "2", "--checks", "spectrum"])
    assert code == 0
    out = capsys.readouterr().out
    assert "3.4641" in out and "ok" in out


def test_verify_rejects_nonprime():
    assert main(["verify", "--q", "4", "--dim", "2"]) == 2


def test_verify_gates_1mod4(capsys):
    assert main(["verify", "--q", "13", "--dim", "2", "--checks", "spectrum"]) == 2
    err = capsys.readouterr().err
    assert "--allow-1mod4" in err


def test_verify_allows_1mod4_with_flag(capsys):
    code = main(["verify", "--q", "13", "--dim", "2", "--checks", "spectrum",
                 "--allow-1mod4"])
    assert code == 0


def test_verify_bad_check_name():
    assert main(["verify", "--q", "3", "--dim", "2", "--checks", "nope"]) == 2


def test_verify_restrict_radius(tmp_path):
    out_file = tmp_path / "v.jsonl"
    code = main(["verify", "--q", "7", "--dim", "2", "--a", "3",
                 "--checks", "variance,mixing", "--trials", "4",
                 "--seed", "9", "--out", str(out_file)])
    assert code == 0
    recs = [json.loads(l) for l in out_file.read_text().splitlines()]
    assert {r["a"] for r in recs} == {3}
    assert {r["check"] for r in recs} == {"variance", "mixing"}
    assert {r["lam_kind"] for r in recs} == {"exact", "ceiling"}
    assert all(r["holds"] for r in recs)


def test_verify_failure_exits_1_with_replay(monkeypatch, capsys):
    # a negative bound is unsatisfiable, forcing every hinge verdict false
    monkeypatch.setattr(cli, "hinge_bound", lambda n, k, lam, m: -1.0)
    code = main(["verify", "--q", "3", "--dim", "2", "--checks", "hinge",
                 "--trials", "3"])
    assert code == 1
    captured = capsys.readouterr()
    assert "replay: fqlab verify" in captured.err


def test_verify_guardrail_exits_2():
    assert main(["verify", "--q", "103", "--dim", "3", "--checks", "spectrum"]) == 2


# --- sweep ------------------------------------------------------------------------


def test_normalize_config_fills_canonical_order():
    cfg = normalize_config(SMALL_CONFIG)
    assert cfg["checks"] == ["spectrum", "variance", "mixing", "hinge", "main", "remark"]
    assert cfg["allow_1mod4"] is False


def test_normalize_config_rejects_unknown_keys():
    from fqlab import BadSpec

    with pytest.raises(BadSpec):
        normalize_config({**SMALL_CONFIG, "bogus": 1})


def test_normalize_config_rejects_empty_generators():
    from fqlab import BadSpec

    with pytest.raises(BadSpec):
        normalize_config({**SMALL_CONFIG, "generators": []})


def test_normalize_config_gates_1mod4():
    from fqlab import BadSpec

    cfg = {**SMALL_CONFIG, "grid": [{"primes": [13], "dims": [2]}]}
    with pytest.raises(BadSpec):
        normalize_config(cfg)
    cfg["allow_1mod4"] = True
    assert normalize_config(cfg)["grid"][0]["primes"] == [13]


def test_run_sweep_all_checks_pass():
    records, digest = run_sweep(SMALL_CONFIG, jobs=1)
    assert len(records) == 2 * 2 * 2  # (p) x (generators) x (seeds)
    assert all(r["status"] == "ok" for r in records)
    assert all(r["holds"] for r in records)
    assert all(r["spectrum_ok"] and r["variance_ok"] for r in records)
    assert all(r["mixing_ok"] and r["hinge_ok"] and r["eq2_ok"] for r in records)
    assert all(r["config_digest"] == digest for r in records)


def test_run_sweep_deterministic_across_jobs():
    r1, _ = run_sweep(SMALL_CONFIG, jobs=1)
    r2, _ = run_sweep(SMALL_CONFIG, jobs=2)
    assert emit(r1, "jsonl", SWEEP_FIELDS) == emit(r2, "jsonl", SWEEP_FIELDS)


def test_sweep_command_writes_sorted_records(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(SMALL_CONFIG))
    out = tmp_path / "records.jsonl"
    code = main(["sweep", "--config", str(cfg), "--out", str(out), "--jobs", "1"])
    assert code == 0
    txt = capsys.readouterr().out
    assert "8 cells, 8 ok" in txt
    recs = [json.loads(l) for l in out.read_text().splitlines()]
    keys = [(r["p"], r["dim"], r["generator"], r["seed"]) for r in recs]
    assert keys == sorted(keys)
    assert list(recs[0].keys()) == list(SWEEP_FIELDS)


def test_sweep_rerun_byte_identical(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(SMALL_CONFIG))
    out1, out2 = tmp_path / "r1.jsonl", tmp_path / "r2.jsonl"
    main(["sweep", "--config", str(cfg), "--out", str(out1), "--jobs", "1"])
    main(["sweep", "--config", str(cfg), "--out", str(out2), "--jobs", "2"])
    assert out1.read_bytes() == out2.read_bytes()


def test_sweep_csv_format(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({**SMALL_CONFIG, "checks": ["main"]}))
    out = tmp_path / "records.csv"
    main(["sweep", "--config", str(cfg), "--out", str(out), "--format", "csv",
          "--jobs", "1"])
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(SWEEP_FIELDS)
    assert len(lines) == 9


def test_sweep_show_config(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(SMALL_CONFIG))
    assert main(["sweep", "--config", str(cfg), "--show-config"]) == 0
    shown = json.loads(capsys.readouterr().out)
    assert shown["seeds"] == [1, 2]


def test_sweep_bad_config_exits_2(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({**SMALL_CONFIG, "generators": []}))
    out = tmp_path / "x.jsonl"
    assert main(["sweep", "--config", str(cfg), "--out", str(out)]) == 2


def test_sweep_fail_verdict_recorded(monkeypatch):
    # an unsatisfiable bound turns every hinge verdict false; cells still emit
    monkeypatch.setattr(cli, "hinge_bound", lambda n, k, lam, m: -1.0)
    cfg = {**SMALL_CONFIG, "checks": ["hinge"],
           "grid": [{"primes": [3], "dims": [2]}], "seeds": [1]}
    records, _ = run_sweep(cfg, jobs=1)
    assert len(records) == 2
    assert all(r["status"] == "fail" for r in records)
    assert all(r["holds"] is False for r in records)


def test_sweep_continues_past_error_cell(tmp_path, capsys):
    # random:100 is infeasible in F_3^2: that cell errors, the rest succeed
    cfg = {"grid": [{"primes": [3], "dims": [2]}],
           "generators": ["all", "random:100"], "seeds": [1], "checks": ["main"]}
    cfgf = tmp_path / "cfg.json"
    cfgf.write_text(json.dumps(cfg))
    out = tmp_path / "r.jsonl"
    code = main(["sweep", "--config", str(cfgf), "--out", str(out), "--jobs", "1"])
    assert code == 1
    recs = [json.loads(l) for l in out.read_text().splitlines()]
    by_gen = {r["generator"]: r for r in recs}
    assert by_gen["all"]["status"] == "ok"
    assert by_gen["random:100"]["status"] == "error"
    assert "100" in by_gen["random:100"]["error"]
    assert "replay:" in capsys.readouterr().err


def test_jobs_env_fallback(monkeypatch):
    monkeypatch.setenv("FQLAB_JOBS", "3")
    parser = build_parser()
    args = parser.parse_args(["sweep", "--default", "--out", "x"])
    assert args.jobs == 3
