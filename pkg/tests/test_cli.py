"""Test the command line front end."""
import json

import pytest
from typer.testing import CliRunner

from uebk import config
from uebk.cli import app

runner = CliRunner()


@pytest.fixture
def prop5_file(tmp_path):
    path = tmp_path / "prop5.json"
    result = runner.invoke(
        app,
        ["construct", "--family", "prop5", "--d", "4", "--dprime", "4", "--k", "2",
         "--q", "1", "--out", str(path)],
    )
    assert result.exit_code == 0, result.output
    return path


def test_enumerate():
    """One line per admissible family with its member count."""
    result = runner.invoke(app, ["enumerate", "--d", "5", "--dprime", "7", "--k", "3"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert "PROP1: 30 members" in lines
    assert "PROP2 q=1: 24 members" in lines


def test_enumerate_eq8():
    """Column moduli are listed for d = sk."""
    result = runner.invoke(app, ["enumerate", "--d", "4", "--dprime", "8", "--k", "2"])
    assert "EQ8 m=7: 28 members" in result.output.splitlines()


def test_construct_then_verify(prop5_file, tmp_path):
    """A valid family passes and its report says so."""
    report = tmp_path / "report.json"
    result = runner.invoke(app, ["verify", str(prop5_file), "--report", str(report)])
    assert result.exit_code == 0, result.output
    assert "PROP5 q=1: PASS" in result.output.splitlines()
    doc = json.loads(report.read_text())
    assert doc["report"]["verdict"] == "PASS"
    assert doc["report"]["complement"]["certificate_bound"] == 1


def test_literal_prop2_fails_verification(tmp_path):
    """The printed modulus fails at orthonormality with exit 1."""
    family = tmp_path / "prop2.json"
    report = tmp_path / "report.json"
    result = runner.invoke(
        app,
        ["construct", "--family", "prop2", "--d", "5", "--dprime", "7", "--k", "3",
         "--q", "1", "--prop2-convention", "literal", "--out", str(family)],
    )
    assert result.exit_code == 0, result.output
    result = runner.invoke(app, ["verify", str(family), "--report", str(report)])
    assert result.exit_code == 1
    assert "failed checks: orthonormal, unextendible" in result.output.splitlines()
    assert json.loads(report.read_text())["report"]["orthonormal"]["ok"] is False


def test_inadmissible_parameters(tmp_path):
    """k = d outside UMEB mode exits 2 without writing anything."""
    out = tmp_path / "bad.json"
    result = runner.invoke(
        app,
        ["construct", "--family", "prop1", "--d", "3", "--dprime", "5", "--k", "3",
         "--out", str(out)],
    )
    assert result.exit_code == 2
    assert not out.exists()


def test_umeb_construct(tmp_path):
    """--umeb admits k = d for prop1."""
    out = tmp_path / "umeb.json"
    result = runner.invoke(
        app,
        ["construct", "--family", "prop1", "--d", "3", "--dprime", "4", "--k", "3",
         "--umeb", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    assert runner.invoke(app, ["verify", str(out)]).exit_code == 0


def test_unknown_flag():
    """Usage errors exit 2."""
    result = runner.invoke(app, ["enumerate", "--d", "5", "--dprime", "7", "--k", "3", "--bogus"])
    assert result.exit_code == 2


def test_missing_family_file(tmp_path):
    """A file that is not there is a parameter error."""
    assert runner.invoke(app, ["verify", str(tmp_path / "nope.json")]).exit_code == 2


def test_seed_from_environment(prop5_file, tmp_path):
    """UEBK_SEED sets the sampling seed unless --seed is given."""
    report = tmp_path / "report.json"
    env = {config.SEED_ENV_VAR: "7"}
    runner.invoke(app, ["verify", str(prop5_file), "--report", str(report)], env=env)
    assert json.loads(report.read_text())["report"]["sampling"]["seed"] == 7

    runner.invoke(
        app, ["verify", str(prop5_file), "--report", str(report), "--seed", "9"], env=env
    )
    assert json.loads(report.read_text())["report"]["sampling"]["seed"] == 9


def test_bad_seed_environment(prop5_file):
    """A non-integer UEBK_SEED is a configuration error."""
    result = runner.invoke(app, ["verify", str(prop5_file)], env={config.SEED_ENV_VAR: "abc"})
    assert result.exit_code == 2


def test_rho_perp(prop5_file, tmp_path):
    """The complementary state is certified and written out."""
    out = tmp_path / "rho.json"
    result = runner.invoke(app, ["rho-perp", str(prop5_file), "--k", "2", "--out", str(out), "--entries"])
    assert result.exit_code == 0, result.output
    doc = json.loads(out.read_text())
    assert doc["state"]["certified"] is True
    assert doc["state"]["rank"] == 4
    assert len(doc["entries"]) == 16


def test_sweep(tmp_path):
    """A small sweep passes and writes one report per family."""
    result = runner.invoke(app, ["sweep", "--max-dprime", "5", "--report-dir", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "prop1-d3-dp5-k2.json").exists()
    assert (tmp_path / "prop1-d3-dp5-k2.rho.json").exists()
    assert (tmp_path / "prop5-d4-dp4-k2-q1.json").exists()


def test_config_from_env(monkeypatch):
    """Explicit seed, then environment, then the default."""
    monkeypatch.delenv(config.SEED_ENV_VAR, raising=False)
    assert config.VerifyConfig.from_env().seed == config.SEED
    monkeypatch.setenv(config.SEED_ENV_VAR, "3")
    assert config.VerifyConfig.from_env().seed == 3
    assert config.VerifyConfig.from_env(seed=4, trials=8).seed == 4
    assert config.VerifyConfig.from_env(trials=8).trials == 8
    monkeypatch.setenv(config.SEED_ENV_VAR, "x")
    with pytest.raises(config.SeedEnvVarConfigError):
        config.get_default_seed()


def test_verify_with_loose_tolerance(prop5_file, tmp_path):
    """A family off by 1e-8 fails at the default tol and passes with --tol-orth 1e-6."""
    doc = json.loads(prop5_file.read_text())
    doc["vectors"][0]["amps"] = [
        [re * (1 + 1e-8), im * (1 + 1e-8)] for re, im in doc["vectors"][0]["amps"]
    ]
    prop5_file.write_text(json.dumps(doc))
    report = tmp_path / "report.json"

    assert runner.invoke(app, ["verify", str(prop5_file)]).exit_code == 1
    result = runner.invoke(
        app, ["verify", str(prop5_file), "--tol-orth", "1e-6", "--report", str(report)]
    )
    assert result.exit_code == 0, result.output
    doc = json.loads(report.read_text())
    assert doc["report"]["verdict"] == "PASS"
    assert doc["report"]["complement"]["certificate_bound"] == 1


@pytest.mark.parametrize(
    "edit",
    [
        lambda doc: doc.update(vectors=[]),
        lambda doc: doc["vectors"][0].update(label="ab"),
        lambda doc: doc["vectors"][0]["amps"][0].__setitem__(0, float("nan")),
    ],
    ids=["empty", "label", "nan"],
)
def test_malformed_family_exits_2(prop5_file, edit):
    """Bad member data is an input error, never a traceback."""
    doc = json.loads(prop5_file.read_text())
    edit(doc)
    prop5_file.write_text(json.dumps(doc))
    for command in (["verify"], ["rho-perp", "--k", "2"]):
        result = runner.invoke(app, command[:1] + [str(prop5_file)] + command[1:])
        assert result.exit_code == 2, result.output
