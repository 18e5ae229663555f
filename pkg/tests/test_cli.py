import json
import subprocess
import sys

import pytest

from threefold.cli import main
from threefold.complex import f_vector, read_tri, write_tri
from threefold.constructions import barycentric_subdivision, simplex_boundary


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_s2xs1(capsys):
    code, out, _ = run(capsys, "build", "S2xS1")
    assert code == 0
    assert "S2xS1: f-vector (12," in out
    assert "homology: Z, Z, Z, Z" in out
    assert "orientable: yes" in out


def test_build_writes_tri(capsys, tmp_path):
    target = tmp_path / "l31.tri"
    code, out, _ = run(capsys, "build", "L(3,1)", "-o", str(target))
    assert code == 0
    assert f_vector(read_tri(target))[0] > 0


def test_build_unknown_name(capsys):
    code, _, err = run(capsys, "build", "Lens")
    assert code == 2
    assert "did you mean" in err


def test_build_bad_lens_parameters(capsys):
    code, _, err = run(capsys, "build", "L(4,2)")
    assert code == 2


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


@pytest.mark.parametrize("text, expected", [
    ("{Oo,0|-1;(2,1),(3,1),(5,1)}", "geometry: S3; name: S3/I* (Poincaré)"),
    ("{NnI,2|0}", "geometry: E3; name: B1 = K×S1"),
    ("{Oo,0|-2;(2,1),(3,1),(6,1)}", "geometry: Nil"),
])
def test_classify_examples(capsys, text, expected):
    code, out, _ = run(capsys, "classify", text)
    assert code == 0
    assert expected in out


def test_classify_details(capsys):
    code, out, _ = run(capsys, "classify", "{Oo,0|-1;(2,1),(3,1),(5,1)}")
    lines = out.splitlines()
    assert lines[0] == "normalized: {Oo,0|-1;(2,1),(3,1),(5,1)}"
    assert "e: -1/30" in lines and "chi: 1/30" in lines and "small: yes" in lines


def test_classify_lens_prints_canonical(capsys):
    _, out, _ = run(capsys, "classify", "{Oo,0|1;(3,2)}")
    assert "name: L(5,3) = L(5,2)" in out


def test_classify_syntax_error_caret(capsys):
    code, _, err = run(capsys, "classify", "{Oo,0|-1;(2,1)")
    assert code == 2
    lines = err.splitlines()
    assert lines[-1] == " " * 14 + "^"


def test_classify_genus_error(capsys):
    code, _, err = run(capsys, "classify", "{NnIII,2|0}")
    assert code == 2 and "NnIII" in err


def test_machine_output(capsys):
    code, out, _ = run(capsys, "--machine", "build", "RP3#RP3")
    assert code == 0
    rec = json.loads(out.strip())
    assert set(rec) == {"kind", "name", "f_vector", "homology", "orientable", "geometry", "notes"}
    assert rec["kind"] == "build"
    assert rec["homology"] == {"betti": [1, 0, 0, 1], "torsion": [[], [2, 2], [], []]}
    assert rec["orientable"] is True


def test_machine_classify(capsys):
    _, out, _ = run(capsys, "--machine", "classify", "{Oo,1|0}")
    rec = json.loads(out)
    assert rec["geometry"] == "E3" and rec["kind"] == "classify"


def test_homology_and_verify(capsys, tmp_path):
    p = tmp_path / "s.tri"
    write_tri(simplex_boundary(4), p)
    code, out, _ = run(capsys, "homology", str(p))
    assert code == 0 and "Z, 0, 0, Z" in out
    code, out, _ = run(capsys, "verify", str(p))
    assert code == 0


def test_verify_non_manifold_exits_3(capsys, tmp_path):
    p = tmp_path / "bad.tri"
    p.write_text("dim 3\n1 2 3 4\n")
    code, _, _ = run(capsys, "verify", str(p))
    assert code == 3
    code, _, _ = run(capsys, "reduce", str(p), "-o", str(tmp_path / "x.tri"))
    assert code == 3


def test_reduce_bary_sphere(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    src = tmp_path / "bary.tri"
    write_tri(barycentric_subdivision(simplex_boundary(4)), src)
    code, out, _ = run(capsys, "reduce", str(src), "--seed", "0")
    assert code == 0
    # default output lands in the working directory
    assert f_vector(read_tri(tmp_path / "bary_reduced.tri"))[0] == 5
    assert (tmp_path / "bary_reduced.tri.log").exists()


def test_reduce_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.tri", tmp_path / "b.tri"
    for target in (a, b):
        code, _, _ = run(capsys, "reduce", "S2xS1", "--seed", "4", "--rounds", "60", "-o", str(target))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.tri.log").read_text() == (tmp_path / "b.tri.log").read_text()
    for line in (tmp_path / "a.tri.log").read_text().splitlines():
        json.loads(line)


def test_reduce_race_keeps_best(capsys, tmp_path):
    target = tmp_path / "race.tri"
    code, out, _ = run(capsys, "reduce", "L(2,1)", "--race", "3", "--rounds", "300", "-o", str(target))
    assert code == 0
    per_seed = {}
    for line in out.splitlines():
        if line.startswith("seed "):
            seed, rest = line[5:].split(":")
            per_seed[int(seed)] = int(rest.split("(")[1].split(",")[0])
    assert sorted(per_seed) == [0, 1, 2]
    best = min(per_seed.values())
    assert f_vector(read_tri(target))[0] == best
    winner = min(s for s, f in per_seed.items() if f == best)
    assert f"(seed {winner}," in out


def test_reduce_bad_heat():
    with pytest.raises(SystemExit) as info:
        main(["reduce", "S3", "--heat", "3/2"])
    assert info.value.code == 2


def test_verify_tables_single_table(capsys):
    code, out, _ = run(capsys, "verify-tables", "--table", "8")
    assert code == 0
    assert out.count("[PASS]") >= 4 and "[FAIL]" not in out


def test_verify_tables_unknown_table(capsys):
    code, _, err = run(capsys, "verify-tables", "--table", "99")
    assert code == 2


@pytest.mark.slow
def test_verify_tables_full(capsys):
    code, out, _ = run(capsys, "verify-tables")
    assert code == 0
    assert "[FAIL]" not in out
    assert "[PASS] table 1" in out


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "threefold.cli", "classify", "{Oo,1|0}"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert "geometry: E3" in r.stdout
