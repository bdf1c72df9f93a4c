"""Command-line tool: loading, reports, exit codes, determinism."""

import json

import pytest

from dynlab.cli import main, parse_system_file
from dynlab.errors import SchemaError
from dynlab.serialize import canonical_json, modulus_csv
from dynlab.shadowing import modulus_table
from dynlab.symbolic import Sft


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def emit_x32(capsys, tmp_path):
    path = tmp_path / "x32.json"
    code, _, _ = run(capsys, "gallery", "xpq", "--p", "3", "--q", "2",
                     "--emit", str(path))
    assert code == 0
    return str(path)


def emit_random(capsys, tmp_path, seed=5, size=4):
    path = tmp_path / f"r{seed}.json"
    code, _, _ = run(capsys, "gallery", "random", "--seed", str(seed),
                     "--size", str(size), "--emit", str(path))
    assert code == 0
    return str(path)


def test_gallery_emits_loadable_system(capsys, tmp_path):
    path = emit_x32(capsys, tmp_path)
    loaded = parse_system_file(path)
    assert isinstance(loaded, Sft)
    assert len(loaded.alphabet) == 4

    rnd = emit_random(capsys, tmp_path)
    finite = parse_system_file(rnd)
    assert finite.n == 4


def test_check_shadowing_decision_and_modulus(capsys, tmp_path):
    path = emit_x32(capsys, tmp_path)
    code, out, _ = run(capsys, "check", "shadowing", "--system", path,
                       "--window", "1", "--epsilon", "1/4", "--delta", "1/8")
    assert code == 0
    report = json.loads(out)
    assert report["results"]["shadowing"]["holds"]
    assert report["results"]["periodic"]["holds"]
    assert report["results"]["strong_periodic"]["holds"]

    code, out, _ = run(capsys, "check", "shadowing", "--system", path,
                       "--window", "1", "--epsilon", "1/4")
    assert code == 0
    assert json.loads(out)["results"]["modulus_delta"] is not None


def test_check_expansive_failure_exits_one(capsys, tmp_path):
    path = tmp_path / "m.json"
    code, _, _ = run(capsys, "gallery", "myex", "--lattice", "2", "--K", "1",
                     "--emit", str(path))
    assert code == 0
    # the satellite keeps constant offset 1 from its anchor
    code, out, _ = run(capsys, "check", "expansive", "--system", str(path),
                       "--variant", "per", "--delta", "1")
    assert code == 1
    assert json.loads(out)["results"]["holds"] is False

    code, out, _ = run(capsys, "check", "expansive", "--system", str(path),
                       "--variant", "strong-measure", "--delta", "1")
    assert code == 1
    witness = json.loads(out)["results"]["counterexample"]
    assert witness["point"] and witness["measure"]


def test_check_spec_paths(capsys, tmp_path):
    path = emit_random(capsys, tmp_path, seed=6, size=3)
    code, out, _ = run(capsys, "check", "spec", "--system", path,
                       "--variant", "weak", "--epsilon", "2")
    assert code == 0
    assert json.loads(out)["results"]["best_delta"] is not None

    code, out, _ = run(capsys, "check", "spec", "--system", path,
                       "--variant", "lipschitz", "--epsilon", "1")
    assert code == 0
    env = json.loads(out)["results"]["envelope"]
    assert set(env) == {"slope", "delta0"}


def test_spectral_exit_and_checks(capsys, tmp_path):
    path = emit_random(capsys, tmp_path, seed=7, size=5)
    code, out, _ = run(capsys, "spectral", "--system", path)
    assert code == 0
    report = json.loads(out)
    assert all(report["results"]["checks"].values())
    assert report["results"]["decomposition"]["pieces"]


def test_battery_through_cli(capsys, tmp_path):
    path = emit_x32(capsys, tmp_path)
    code, out, _ = run(capsys, "battery", "--system", path, "--window", "1",
                       "--id", "thmC", "--period-bound", "4")
    assert code == 0
    results = json.loads(out)["results"]
    assert results["asserted"] and not results["violations"]


def test_modulus_csv_matches_library(capsys, tmp_path):
    path = emit_random(capsys, tmp_path, seed=8, size=4)
    csv_path = tmp_path / "table.csv"
    code, out, _ = run(capsys, "modulus", "--system", path,
                       "--prop", "shadowing", "--csv", str(csv_path))
    assert code == 0
    table = modulus_table(parse_system_file(path), "shadowing")
    assert csv_path.read_text() == modulus_csv(table)
    assert json.loads(out)["results"]["populated"] is True


def test_input_errors_exit_two(capsys, tmp_path):
    code, _, err = run(capsys, "check", "shadowing",
                       "--system", str(tmp_path / "absent.json"),
                       "--epsilon", "1/4")
    assert code == 2 and "cannot read" in err

    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "finite", "points": ["a"], "dist": [["0"]]}')
    code, _, err = run(capsys, "check", "shadowing", "--system", str(bad),
                       "--epsilon", "1/4")
    assert code == 2 and "/map" in err

    # finite file cannot be windowed
    rnd = emit_random(capsys, tmp_path, seed=9, size=3)
    code, _, err = run(capsys, "check", "shadowing", "--system", rnd,
                       "--window", "1", "--epsilon", "1/4")
    assert code == 2

    # sft file needs a window for finite-system commands
    sft = emit_x32(capsys, tmp_path)
    code, _, err = run(capsys, "check", "shadowing", "--system", sft,
                       "--epsilon", "1/4")
    assert code == 2 and "--window" in err


def test_cap_exit_three(capsys, tmp_path, monkeypatch):
    path = emit_random(capsys, tmp_path, seed=10, size=6)
    monkeypatch.setenv("DYNLAB_SUBSET_CAP", "1")
    code, _, err = run(capsys, "check", "shadowing", "--system", path,
                       "--epsilon", "1/4", "--delta", "1/2")
    assert code == 3 and "cap" in err


def test_reports_deterministic_modulo_wall_time(capsys, tmp_path):
    path = emit_random(capsys, tmp_path, seed=11, size=4)
    outs = []
    for _ in range(2):
        _, out, _ = run(capsys, "battery", "--system", path, "--id",
                        "hierarchy")
        outs.append(json.loads(out))
    for report in outs:
        report.pop("wall_ms")
    assert canonical_json(outs[0]) == canonical_json(outs[1])


def test_emit_writes_stdout_bytes(capsys, tmp_path):
    path = emit_random(capsys, tmp_path, seed=12, size=3)
    emitted = tmp_path / "report.json"
    _, out, _ = run(capsys, "check", "expansive", "--system", path,
                    "--variant", "measure", "--delta", "1/2",
                    "--emit", str(emitted))
    assert emitted.read_text() == out


def test_parse_system_file_pointer(tmp_path):
    f = tmp_path / "x.json"
    f.write_text('{"points": []}')  # kind defaults to "finite"
    with pytest.raises(SchemaError) as e:
        parse_system_file(str(f))
    assert e.value.pointer == "/points"

    f.write_text('{"kind": "mystery"}')
    with pytest.raises(SchemaError) as e:
        parse_system_file(str(f))
    assert e.value.pointer == "/kind"
