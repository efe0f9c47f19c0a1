import json
import subprocess
import sys

import pytest

from dpathwidth.cli import main
from dpathwidth.cnf import primal_graph, psi_of_graph, to_dimacs
from dpathwidth.graph import complete_graph, grid_graph, star_graph, to_edge_list
from dpathwidth.nbp import build_kn_smnbp, build_star_mnbp, nbp_to_json


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    grid = tmp_path / "grid.txt"
    grid.write_text(to_edge_list(grid_graph(3, 3)))
    k3 = tmp_path / "k3.cnf"
    k3.write_text(to_dimacs(psi_of_graph(complete_graph(3))))
    prog = tmp_path / "k3.json"
    prog.write_text(json.dumps(nbp_to_json(build_kn_smnbp(3))))
    star = tmp_path / "star.json"
    star.write_text(json.dumps(nbp_to_json(build_star_mnbp(star_graph(3)))))
    return {"grid": grid, "k3": k3, "prog": prog, "star": star, "dir": tmp_path}


def test_gen_formats(capsys, files):
    code, out, _ = run(capsys, "gen", "grid", 2, 3)
    assert code == 0 and len([ln for ln in out.splitlines() if not ln.startswith("#")]) == 7
    code, out, _ = run(capsys, "gen", "random_tree", 8, "--seed", 3, "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["edges"]) == 7
    code, out, _ = run(capsys, "gen", "complete", 3, "--format", "dot")
    assert out.startswith("graph G {")
    psi = files["dir"] / "psi.cnf"
    code, _, _ = run(capsys, "gen", "path", 4, "--psi", psi)
    assert code == 0 and "p cnf 7 3" in psi.read_text()


def test_decompose_variants(capsys, files):
    g = files["grid"]
    for flag in (["--tw"], ["--pw"], ["--tpw"], ["--even-odd"], ["--cover", 2, "--exact"]):
        code, out, _ = run(capsys, "decompose", g, *flag)
        data = json.loads(out)
        assert code == 0 and data["validated"]
    code, out, _ = run(capsys, "decompose", g, "--cover", 2, "--exact")
    assert json.loads(out)["width"] == 1


def test_compile_modes(capsys, files):
    code, out, _ = run(capsys, "compile", files["k3"])
    data = json.loads(out)
    assert code == 0 and data["models"] == 45 and data["represents"] and data["stats"]["within_bound"]
    code, out, _ = run(capsys, "compile", files["k3"], "--two")
    data = json.loads(out)
    assert code == 0 and data["represents"] and len(data["obdds"]) == 2
    pd = files["dir"] / "pd.json"
    # the primal graph of the padded K_3 CNF is the incidence graph
    g = files["dir"] / "h.txt"
    g.write_text(to_edge_list(primal_graph(psi_of_graph(complete_graph(3)))))
    assert run(capsys, "decompose", g, "--pw", "-o", pd)[0] == 0
    code, out, _ = run(capsys, "compile", files["k3"], "--pd", pd)
    assert code == 0 and json.loads(out)["represents"]


def test_nbp_commands(capsys, files):
    code, out, _ = run(capsys, "nbp", "--build", "kn", 4, "--represents", "psi", "--all-checks")
    data = json.loads(out)
    assert code == 0 and data["edges"] == 28 and data["represents"] and data["monotone"]
    assert data["separability"] <= 4
    code, out, _ = run(capsys, "nbp", "--build", "noyard", "--all-checks")
    data = json.loads(out)
    assert data["read_bound"] == 2 and data["separability"] == 2 and not data["yardsticks"]
    code, out, _ = run(capsys, "nbp", "--build", "noyard", "--subdivide", "--check", "yardsticks")
    data = json.loads(out)
    assert data["subdivided_edges"] == 18 and data["same_models"] and data["yardsticks"]
    code, out, _ = run(capsys, "nbp", files["prog"], "--represents", files["k3"])
    assert code == 0 and json.loads(out)["represents"]


def test_certify(capsys, files):
    code, out, _ = run(capsys, "certify", files["k3"], files["prog"], 3)
    data = json.loads(out)
    assert code == 0 and data["chain"]["holds"] and data["beta"]["decimal"].startswith("1.011")


def test_exit_codes(capsys, files):
    assert run(capsys, "decompose", files["dir"] / "missing.txt", "--pw")[0] == 2
    assert run(capsys, "nbp")[0] == 2
    assert run(capsys, "nbp", "--build", "moebius")[0] == 2
    bad = files["dir"] / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "nbp", bad)[0] == 2
    big = files["dir"] / "big.txt"
    big.write_text(to_edge_list(grid_graph(4, 4)))
    code, _, err = run(capsys, "decompose", big, "--tw", "--exact-cap", 8)
    assert code == 3 and "cap" in err
    # a program for one star misses clauses of the triangle CNF
    code, _, err = run(capsys, "certify", files["k3"], files["star"], 1)
    assert code == 4 and "property violation" in err
    with pytest.raises(SystemExit) as exc:
        main(["decompose"])
    assert exc.value.code == 2


def test_output_file_is_written_atomically(capsys, files):
    out = files["dir"] / "out.json"
    assert run(capsys, "gen", "grid", 2, 2, "--format", "json", "-o", out)[0] == 0
    assert json.loads(out.read_text())["vertices"] == [0, 1, 2, 3]
    assert not [p for p in files["dir"].iterdir() if p.name.startswith(".out.json")]


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "dpathwidth", "gen", "path", "3"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.endswith("0 1\n1 2\n")


@pytest.mark.parametrize("argv", [
    ["gen", "random_partial_ktree", 10, 2, "--seed", 5, "--format", "json"],
    ["decompose", "{grid}", "--even-odd"],
    ["compile", "{k3}", "--two"],
    ["nbp", "--build", "zxy", "--all-checks", "--subdivide"],
    ["certify", "{k3}", "{prog}", 3],
])
def test_reruns_are_byte_identical(capsys, files, argv):
    argv = [str(a).format(**files) for a in argv]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == 0 and first == second


def test_nbp_report_feeds_certify(capsys, files):
    report = files["dir"] / "report.json"
    assert run(capsys, "nbp", "--build", "kn", 3, "-o", report)[0] == 0
    code, out, _ = run(capsys, "certify", files["k3"], report, 3)
    assert code == 0 and json.loads(out)["chain"]["holds"]
    odd = files["dir"] / "odd.json"
    odd.write_text(json.dumps({"edges": 3}))
    assert run(capsys, "nbp", odd)[0] == 2
