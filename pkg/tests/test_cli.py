import json
import subprocess
import sys

import pytest

from tripletphase.cli import main

N3_ATOMS = "0 0 0\n1/7 2/5 3/11\n5/13 1/3 4/9\n"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_simulate_then_phase(tmp_path, capsys):
    atoms = tmp_path / "cell.txt"
    atoms.write_text(N3_ATOMS)
    refl = tmp_path / "refl.txt"
    code, out, _ = run(capsys, "simulate", str(atoms), "--v1", "1,2,0", "--v2", "0,1,3",
                       "-o", str(refl), "--output", "json")
    assert code == 0
    truth = json.loads(out)
    assert truth["schema"] == "tripletphase.simulate/1"
    code, out, _ = run(capsys, "phase", "--n", "3", str(refl), "--output", "json")
    assert code == 0
    got = json.loads(out)
    assert got["schema"] == "tripletphase.phase/1"
    assert abs(got["cos_phi"] - truth["cos_phi_true"]) < 1e-6
    assert all(p["source"].startswith(str(refl)) for p in got["provenance"])


def test_phase_missing_index(tmp_path, capsys):
    refl = tmp_path / "refl.txt"
    refl.write_text("1 0 1\n0 1 1\n")
    code, _, err = run(capsys, "phase", "--n", "2", str(refl))
    assert code == 2 and "MissingObservable" in err and "q[1,1]" in err


def test_phase_degenerate(tmp_path, capsys):
    atoms = tmp_path / "cell.txt"
    atoms.write_text("0 0 0\n0 0 0\n0 0 0\n")
    refl = tmp_path / "refl.txt"
    run(capsys, "simulate", str(atoms), "--v1", "1,0,0", "--v2", "0,1,0", "-o", str(refl))
    code, _, err = run(capsys, "phase", "--n", "3", str(refl))
    assert code == 2 and "SingularR" in err


def test_bad_atoms_file(tmp_path, capsys):
    atoms = tmp_path / "cell.txt"
    atoms.write_text("0 0 0\n1/2 x 0\n")
    code, _, err = run(capsys, "simulate", str(atoms), "--v1", "1,0,0", "--v2", "0,1,0")
    assert code == 2 and "cell.txt:2" in err


def test_emit(tmp_path, capsys):
    code, out, _ = run(capsys, "emit", "--n", "2", "--out-dir", str(tmp_path), "--check", "10")
    assert code == 0 and "10/10" in out
    data = json.loads((tmp_path / "formula_n2.json").read_text())
    assert data["schema"] == "tripletphase.formula/1"
    assert (tmp_path / "formula_n2.txt").read_text().strip()


def test_subduct(tmp_path, capsys):
    poly = tmp_path / "e1.txt"
    poly.write_text("(x1+x2+x3)^2*(x1^-2+x2^-2+x3^-2) + (x1^-1+x2^-1+x3^-1)^2*(x1^2+x2^2+x3^2)\n")
    code, out, _ = run(capsys, "subduct", "--n", "3", str(poly))
    assert code == 0
    assert out.splitlines()[0] == "2*(c1^2 + c1 - c2)"
    assert "q1^2 - 4*q1 + q2" in out


def test_subduct_budget(tmp_path, capsys):
    poly = tmp_path / "p.txt"
    poly.write_text("x1/x2 + x2/x1 + x1/x3 + x3/x1 + x2/x3 + x3/x2\n")
    code, _, err = run(capsys, "subduct", "--n", "3", "--method", "symmetrize", str(poly))
    assert code == 2 and "BudgetExceeded" in err


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "n2-identity", "relations")
    assert code == 0 and "2/2 suites passed" in out


def test_verify_unknown_suite(capsys):
    code, _, _ = run(capsys, "verify", "nope")
    assert code == 2


def test_usage_error():
    proc = subprocess.run([sys.executable, "-m", "tripletphase", "phase"], capture_output=True, text=True)
    assert proc.returncode == 2
