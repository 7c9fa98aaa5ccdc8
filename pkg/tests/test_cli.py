"""Command-line behavior: stats, verification, estimation, exit codes."""

import json

import numpy as np
import pytest

from planesched.cli import main
from planesched.sim import (
    dense_hamiltonian,
    occupation_to_qubit_state,
    random_occupation_state,
)
from planesched.universe import random_hamiltonian


def run(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def parse_stats(out: str) -> dict:
    stats = {}
    for line in out.splitlines():
        if ": " in line:
            key, value = line.split(": ", 1)
            stats[key] = value
    return stats


def test_schedule_writes_file_and_stats(tmp_path, capsys):
    out_path = tmp_path / "sched.json"
    code, out = run(
        capsys, "schedule", "--orbitals", "6", "--mapping", "jw", "--out", str(out_path)
    )
    assert code == 0
    stats = parse_stats(out)
    assert stats["cliques_total"] == "61"
    assert stats["closed_form_total"] == "61"
    assert stats["cover_lower_bound"] == "15"
    assert "part:1" in stats["families"]
    data = json.loads(out_path.read_text())
    assert data["n_orbitals"] == 6
    assert len(data["cliques"]) == 61


def test_schedule_output_is_byte_identical(tmp_path, capsys):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "schedule", "--orbitals", "4", "--out", str(p1))
    run(capsys, "schedule", "--orbitals", "4", "--out", str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_stats_family_breakdown_n4(capsys):
    code, out = run(capsys, "stats", "--orbitals", "4")
    assert code == 0
    stats = parse_stats(out)
    assert stats["families"] == "part:1 one_body:6 diff_spin:9 same_spin:9"
    assert stats["cliques_total"] == "25"


def test_verify_passes(capsys):
    for n in ("3", "6"):
        code, out = run(capsys, "verify", "--orbitals", n)
        assert code == 0
        assert "verify_result: pass" in out
    code, out = run(capsys, "verify", "--orbitals", "8")
    assert code == 0
    assert "cover_lower_bound: 35" in out


def test_verify_detects_corrupted_schedule(tmp_path, capsys):
    path = tmp_path / "sched.json"
    code, _ = run(capsys, "schedule", "--orbitals", "3", "--out", str(path))
    assert code == 0
    code, out = run(capsys, "verify", "--orbitals", "3", "--out", str(path))
    assert code == 0
    assert "schedule_file_check: pass" in out
    data = json.loads(path.read_text())
    data["cliques"][5]["ops"][0][0] = 99
    path.write_text(json.dumps(data))
    code, out = run(capsys, "verify", "--orbitals", "3", "--out", str(path))
    assert code == 1
    assert "schedule_file_check: fail" in out
    assert "schedule_file_problem" in out


def test_estimate_exact_matches_dense(tmp_path, capsys):
    for n in (2, 3):
        ham = random_hamiltonian(n, seed=n)
        path = tmp_path / f"ham{n}.json"
        ham.save(str(path))
        code, out = run(
            capsys,
            "estimate",
            "--hamiltonian",
            str(path),
            "--state",
            "random:7",
            "--mapping",
            "jw",
        )
        assert code == 0
        energy = float(parse_stats(out)["energy"])
        occ = random_occupation_state(2 * n, seed=7)
        psi = occupation_to_qubit_state(occ, "jw", 2 * n)
        exact = float(np.real(np.vdot(psi, dense_hamiltonian(ham, "jw") @ psi)))
        assert abs(energy - exact) < 1e-9
        families = [k for k in parse_stats(out) if k.startswith("energy_")]
        assert set(families) == {
            "energy_nuclear",
            "energy_part",
            "energy_one_body",
            "energy_diff_spin",
            "energy_same_spin",
        }


def test_estimate_basis_state(tmp_path, capsys):
    ham = random_hamiltonian(2, seed=4)
    path = tmp_path / "ham.json"
    ham.save(str(path))
    code, out = run(
        capsys, "estimate", "--hamiltonian", str(path), "--state", "basis:1100"
    )
    assert code == 0
    assert "energy:" in out


def test_estimate_amplitude_file(tmp_path, capsys):
    ham = random_hamiltonian(2, seed=4)
    hpath = tmp_path / "ham.json"
    ham.save(str(hpath))
    occ = random_occupation_state(4, seed=9)
    spath = tmp_path / "state.json"
    spath.write_text(
        json.dumps({"amplitudes": [[float(a.real), float(a.imag)] for a in occ]})
    )
    code, out = run(capsys, "estimate", "--hamiltonian", str(hpath), "--state", str(spath))
    assert code == 0
    code2, out2 = run(
        capsys, "estimate", "--hamiltonian", str(hpath), "--state", "random:9"
    )
    assert parse_stats(out)["energy"] == parse_stats(out2)["energy"]


def test_estimate_shots_reproducible(tmp_path, capsys):
    ham = random_hamiltonian(2, seed=1)
    path = tmp_path / "ham.json"
    ham.save(str(path))
    args = (
        "estimate", "--hamiltonian", str(path), "--state", "random:3",
        "--shots", "200", "--seed", "12",
    )
    code, out1 = run(capsys, *args)
    assert code == 0
    _, out2 = run(capsys, *args)
    assert out1 == out2
    assert "energy_stderr:" in out1


def test_estimate_too_large_exact(tmp_path, capsys):
    ham = random_hamiltonian(8, seed=0)
    path = tmp_path / "ham8.json"
    ham.save(str(path))
    code = main(["estimate", "--hamiltonian", str(path)])
    capsys.readouterr()
    assert code == 1


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as err:
        main(["stats", "--orbitals", "4", "--mapping", "bogus"])
    assert err.value.code == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as err:
        main(["stats", "--orbitals", "1"])
    assert err.value.code == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2
    capsys.readouterr()


def test_grid_flag(capsys):
    code, out = run(capsys, "stats", "--orbitals", "6", "--grid")
    assert code == 0
    assert "label_grid:" in out
    assert "alpha: S" in out


def test_threads_env_does_not_change_output(tmp_path, capsys, monkeypatch):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "schedule", "--orbitals", "3", "--out", str(p1))
    monkeypatch.setenv("SCHED_THREADS", "4")
    run(capsys, "schedule", "--orbitals", "3", "--out", str(p2))
    assert p1.read_bytes() == p2.read_bytes()
