import argparse
import json
import subprocess
import sys

import pytest

from realforms.cli import (
    InputError,
    fixture_names,
    fixture_text,
    load_fixture,
    main,
    parse_input,
    run_command,
    serialize,
)


@pytest.mark.parametrize("name", fixture_names())
def test_round_trip(name):
    doc = load_fixture(name)
    assert parse_input(json.dumps(serialize(doc))) == doc


def test_forms_compact_rank1(capsys):
    assert main(["forms", "--input", "torus_compact_rank1"]) == 0
    assert "pure: Z/2" in capsys.readouterr().out


def test_forms_with_overlattice():
    report = run_command("forms", load_fixture("torus_compact_rank1_J"))
    assert report["type_J"]["name"] == "Z/4" and report["verdict"] == "pass"


def test_packet_compare_adjoint(capsys):
    assert main(["packet-compare", "--input", "a1_adjoint", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["rows"]) == 2 and report["verdict"] == "pass"


def test_oracle_with_bound(capsys):
    assert main(["oracle", "--input", "a1_sc", "--denominator-bound", "4", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["bound"] == 4


TORUS_FIXTURES = [n for n in fixture_names() if n.startswith("torus")]
PARAMETER_FIXTURES = [n for n in fixture_names() if n not in TORUS_FIXTURES]


@pytest.mark.parametrize("command", ["forms", "pi0", "oracle"])
@pytest.mark.parametrize("name", fixture_names())
def test_torus_commands_pass(command, name):
    assert run_command(command, load_fixture(name))["verdict"] == "pass"


@pytest.mark.parametrize("command", ["cayley", "dl", "packet-compare"])
@pytest.mark.parametrize("name", PARAMETER_FIXTURES)
def test_parameter_commands_pass(command, name):
    assert run_command(command, load_fixture(name))["verdict"] == "pass"


def test_parameter_command_needs_roots(capsys):
    assert main(["dl", "--input", "torus_swap_rank2"]) == 2
    assert "simple_roots" in capsys.readouterr().err


def test_missing_coroots_reported_with_line():
    text = '{\n  "rank": 1,\n  "theta": [[1]],\n  "simple_roots": [[2]],\n  "lambda": {"num": [0], "den": 1}\n}'
    with pytest.raises(InputError, match="line 4"):
        parse_input(text)


def test_malformed_json():
    with pytest.raises(InputError):
        parse_input('{"rank": 1,')


def test_unknown_key():
    doc = json.loads(fixture_text("a1_sc"))
    doc["colour"] = "blue"
    with pytest.raises(InputError, match="colour"):
        parse_input(json.dumps(doc))


def test_bad_input_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("[]")
    assert main(["forms", "--input", str(bad)]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_unknown_command():
    with pytest.raises(SystemExit):
        main(["frobnicate", "--input", "a1_sc"])
    with pytest.raises(InputError):
        run_command("frobnicate", load_fixture("a1_sc"))


def test_seeded_compare_matches_default():
    doc = load_fixture("c2_singular")
    base = run_command("packet-compare", doc)
    args = argparse.Namespace(seed=3, denominator_bound=None)
    seeded = run_command("packet-compare", doc, args)
    assert seeded["seed"] == 3 and seeded["verdict"] == base["verdict"] == "pass"
    assert seeded["group_one"]["quotient"] == base["group_one"]["quotient"]


def test_json_output_is_byte_identical():
    cmd = [sys.executable, "-m", "realforms.cli", "packet-compare", "--input", "a1xa1", "--json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and b"time" not in first
