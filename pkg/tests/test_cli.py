import json

from latmod import core
from latmod.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_info_reports_rank(capsys):
    code, out = run(capsys, "info", "--lattice", "n5", "--report", "json")
    assert code == 0
    payload = json.loads(out.out)
    assert payload["size"] == 5 and payload["rank"] == 2
    assert payload["modular"] is False

    code, out = run(capsys, "info", "--lattice", "witness7", "--report", "json")
    assert json.loads(out.out)["rank"] == 3


def test_validate_and_input_errors(capsys, tmp_path):
    code, _ = run(capsys, "validate", "--lattice", "b3")
    assert code == 0

    bad = tmp_path / "cycle.json"
    bad.write_text(json.dumps(
        {"elements": ["a", "b", "c"], "covers": [[0, 1], [1, 2], [2, 0]]}))
    code, out = run(capsys, "validate", "--lattice", f"file:{bad}")
    assert code == 3 and "error" in out.err

    code, out = run(capsys, "validate", "--lattice", "file:/no/such.json")
    assert code == 3

    code, out = run(capsys, "validate", "--lattice", "mystery")
    assert code == 3


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "rank")[0] == 2  # missing --lattice
    assert run(capsys, "diverge", "--oracle", "bogus")[0] == 2


def test_rank_report_shape(capsys):
    code, out = run(capsys, "rank", "--lattice", "witness7",
                    "--report", "json", "--jobs", "2")
    assert code == 0
    payload = json.loads(out.out)
    assert payload["rank"] == 3
    assert sum(payload["stabilization_histogram"].values()) \
        == payload["triples_scanned"]
    assert len(payload["extremal_triple"]) == 3


def test_build_writes_lattice(capsys, tmp_path):
    out_path = tmp_path / "m3n5.json"
    code, out = run(capsys, "m3build", "--lattice", "n5", "--stats",
                    "--report", "json", "--out", str(out_path))
    assert code == 0
    payload = json.loads(out.out)
    built = core.parse(out_path.read_text())
    assert payload["elements"] == built.n
    assert payload["modular"] is False  # pentagon base is not distributive


def test_con_and_cpe(capsys):
    code, out = run(capsys, "con", "--lattice", "n5", "--report", "json",
                    "--verify-cpe", "atom")
    assert code == 0
    payload = json.loads(out.out)
    assert payload["cpe_passed"] is True
    assert payload["con_size"] == payload["con_base"] == 5


def test_tensor_command(capsys):
    code, out = run(capsys, "tensor", "--left", "m3", "--right", "c2",
                    "--verify-repr", "--verify-m3-iso", "--report", "json")
    assert code == 0
    payload = json.loads(out.out)
    assert payload["elements"] == 5
    assert payload["repr_iso_passed"] and payload["m3_bridge_passed"]


def test_diverge_command(capsys):
    code, out = run(capsys, "diverge", "--oracle", "dhw", "--steps", "8",
                    "--trace", "json", "--report", "json")
    assert code == 0
    payload = json.loads(out.out)
    assert payload["stabilized"] is False and len(payload["iterates"]) == 9

    code, out = run(capsys, "diverge", "--oracle", "fig2", "--steps", "6")
    assert code == 0


def test_repro_filter(capsys):
    code, out = run(capsys, "repro", "--filter", "minimal-rank-sizes",
                    "--report", "json")
    assert code == 0
    records = json.loads(out.out)
    assert len(records) == 1 and records[0]["pass"] is True
