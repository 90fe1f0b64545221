"""Command-line harness: dispatch, exit codes, report formats, determinism."""

import json

import pytest

from fglab.cli import RunConfig, build_parser, config_from_args, main, run
from fglab.errors import ConfigError


def run_main(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_geometry_subcommand(capsys, tmp_path):
    out = tmp_path / "geom.json"
    code, stdout, stderr = run_main(
        ["geometry", "--p", "2", "--k", "1", "--n", "2", "--out", str(out)], capsys
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["counts"]["flags"] == 21
    assert report["passed"] is True
    assert "elapsed" not in report
    assert "geometry-sanity: PASS" in stderr


def test_identity_subcommand_stdout(capsys):
    code, stdout, stderr = run_main(
        ["identity", "--p", "2", "--k", "2", "--expr", "1*t{0}+1*t{1}"], capsys
    )
    assert code == 0
    report = json.loads(stdout)
    assert report["witnesses"]["witness"] == [[0, 1]]


def test_identity_requires_expr(capsys):
    with pytest.raises(SystemExit):
        main(["identity", "--p", "2"])  # argparse enforces --expr


def test_config_error_exit_code(capsys):
    code, stdout, stderr = run_main(["geometry", "--p", "6"], capsys)
    assert code == 2
    error = json.loads(stderr.splitlines()[0])
    assert error["error"]["type"] == "NonPrime"


def test_verification_failure_exit_code(capsys):
    # the exhaustive subset scan over GF(2) reports known non-maximal hyperplanes
    code, stdout, stderr = run_main(
        ["hyperscan", "--p", "2", "--k", "1", "--n", "2", "--sample", "10"], capsys
    )
    assert code == 1
    report = json.loads(stdout)
    assert report["passed"] is False
    assert report["counts"]["hyperplanes_found"] == 255


def test_reports_are_byte_identical(tmp_path):
    paths = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        code = main(["main3", "--p", "2", "--k", "2", "--n", "2",
                     "--sample", "10", "--seed", "42", "--out", str(out)])
        assert code == 0
        paths.append(out.read_bytes())
    assert paths[0] == paths[1]


def test_csv_format(capsys):
    code, stdout, stderr = run_main(
        ["geometry", "--p", "3", "--format", "csv"], capsys
    )
    assert code == 0
    header, row = stdout.strip().splitlines()
    assert header.split(",")[:4] == ["theorem", "seed", "checked_count", "passed"]
    assert "count.flags" in header
    assert row.split(",")[0] == "geometry-sanity"


def test_vlemmas_subcommand(capsys):
    code, stdout, stderr = run_main(
        ["vlemmas", "--p", "2", "--k", "2", "--n", "2", "--sample", "1"], capsys
    )
    assert code == 0
    report = json.loads(stdout)
    assert report["counts"]["sigma_0_rho_1_pairs"] == 2
    assert report["counts"]["sigma_1_rho_0_pairs"] == 2


def test_polarized_subcommand(capsys):
    code, stdout, stderr = run_main(
        ["polarized", "--p", "3", "--k", "1", "--n", "2", "--quotient-identity"], capsys
    )
    assert code == 0
    report = json.loads(stdout)
    assert report["counts"]["polarized"] == 1
    assert report["counts"]["ambient_dim"] == 7


def test_config_file_merging(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"field": {"p": 2, "k": 2, "modulus": [1, 1, 1]}, "seed": 9}))
    code, stdout, stderr = run_main(
        ["geometry", "--config", str(cfg)], capsys
    )
    assert code == 0
    report = json.loads(stdout)
    assert report["counts"]["flags"] == 105
    assert report["seed"] == 9
    assert report["parameters"]["config"]["k"] == 2
    # explicit flags win over the file
    plain = tmp_path / "plain.json"
    plain.write_text(json.dumps({"field": {"p": 2, "k": 2}, "seed": 9}))
    code, stdout, stderr = run_main(
        ["geometry", "--config", str(plain), "--k", "1"], capsys
    )
    assert code == 0
    report = json.loads(stdout)
    assert report["counts"]["flags"] == 21
    # a k override clashing with the file's degree-2 modulus is a config error
    assert main(["geometry", "--config", str(cfg), "--k", "1"]) == 2


def test_config_file_errors(tmp_path):
    missing = tmp_path / "nope.json"
    assert main(["geometry", "--config", str(missing)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    assert main(["geometry", "--config", str(bad)]) == 2


def test_run_config_validation():
    with pytest.raises(ConfigError):
        run(RunConfig(subcommand="nope"))
    with pytest.raises(ConfigError):
        run(RunConfig(subcommand="geometry", format="xml"))
    with pytest.raises(ConfigError):
        run(RunConfig(subcommand="geometry", seed=-1))
    with pytest.raises(ConfigError):
        run(RunConfig(subcommand="identity", expr=None))
    with pytest.raises(ConfigError):
        run(RunConfig(subcommand="main1", p=2, k=1))  # no nontrivial automorphism


def test_parser_defaults_round_trip():
    args = build_parser().parse_args(["main1", "--p", "2", "--k", "2"])
    config = config_from_args(args)
    assert config.p == 2 and config.k == 2 and config.n == 2 and config.seed == 0
    assert config.subcommand == "main1"


def test_identity_null_polynomial(capsys):
    code, stdout, stderr = run_main(
        ["identity", "--p", "2", "--k", "1", "--expr", "1*t{0}+1*t{0}"], capsys
    )
    assert code == 0
    report = json.loads(stdout)
    assert report["witnesses"]["witness"] is None
    assert report["counts"]["null_polynomial"] == 1
