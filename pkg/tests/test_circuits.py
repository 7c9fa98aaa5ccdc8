"""Gate construction, emission, decode tables, and schedule serialization."""

import json

import numpy as np
import pytest

from planesched.circuits import (
    FSWAP2_MATRIX,
    FSWAP3_MATRIX,
    FSWAP_EDGE_MATRIX,
    DiagonalizationError,
    Gate,
    InvalidSwapError,
    diag_layer,
    emit,
    emit_schedule,
    load_schedule_dict,
    map_fswap,
    qubit_index,
    schedule_json,
    schedule_to_dict,
    verify_schedule_dict,
    write_schedule,
)
from planesched.universe import DOWN, UP, HoppingOp, build_universe


def test_jw_fswap_action():
    m = FSWAP2_MATRIX
    assert np.allclose(m @ m.conj().T, np.eye(4))
    assert np.allclose(m, m.conj().T)
    assert np.allclose(m @ m, np.eye(4))
    # |00> fixed, |01> <-> |10>, |11> picks up the exchange sign
    assert m[0, 0] == 1
    assert m[1, 2] == 1 and m[2, 1] == 1 and m[1, 1] == 0
    assert m[3, 3] == -1


def occupation_swap_oracle(n_bits: int, boundary: bool) -> np.ndarray:
    """Expected parity-basis swap matrix, built from occupation bookkeeping.

    Bits are cumulative parities; swapping the two occupations f_a, f_b of
    the covered modes rewrites the middle bit and applies the exchange sign
    when both modes are occupied.
    """
    dim = 1 << n_bits
    out = np.zeros((dim, dim), dtype=complex)
    for idx in range(dim):
        bits = [(idx >> (n_bits - 1 - i)) & 1 for i in range(n_bits)]
        if boundary:
            prefix, b_mid, b_top = 0, bits[0], bits[1]
        else:
            prefix, b_mid, b_top = bits[0], bits[1], bits[2]
        f_a = prefix ^ b_mid
        f_b = b_mid ^ b_top
        new_mid = prefix ^ f_b
        sign = -1 if f_a and f_b else 1
        new_bits = list(bits)
        new_bits[0 if boundary else 1] = new_mid
        new_idx = 0
        for b in new_bits:
            new_idx = (new_idx << 1) | b
        out[new_idx, idx] = sign
    return out


def test_parity_fswap_matches_occupation_oracle():
    assert np.allclose(FSWAP3_MATRIX, occupation_swap_oracle(3, boundary=False))
    assert np.allclose(FSWAP_EDGE_MATRIX, occupation_swap_oracle(2, boundary=True))
    for m in (FSWAP3_MATRIX, FSWAP_EDGE_MATRIX):
        assert np.allclose(m @ m.conj().T, np.eye(len(m)))


def test_map_fswap_placement():
    g = map_fswap(1, UP, "jw", 4)
    assert g.name == "FSWAP2" and g.qubits == (1, 2)
    g = map_fswap(1, DOWN, "jw", 4)
    assert g.qubits == (5, 6)
    g = map_fswap(1, UP, "parity", 4)
    assert g.name == "FSWAP3" and g.qubits == (0, 1, 2)
    g = map_fswap(0, UP, "parity", 4)
    assert g.name == "FSWAP_EDGE" and g.qubits == (0, 1)
    # the first down-block swap reaches one qubit into the up block
    g = map_fswap(0, DOWN, "parity", 4)
    assert g.name == "FSWAP3" and g.qubits == (3, 4, 5)


def test_map_fswap_rejects_block_crossing():
    with pytest.raises(InvalidSwapError):
        map_fswap(3, UP, "jw", 4)
    with pytest.raises(InvalidSwapError):
        map_fswap(-1, UP, "parity", 4)


def test_diag_layer_shapes():
    gates = diag_layer(1, 0, "jw", 4)
    assert [g.name for g in gates] == ["CNOT", "H"]
    assert gates[0].qubits == (0, 1) and gates[1].qubits == (0,)
    gates = diag_layer(2, 1, "parity", 5)
    assert [g.name for g in gates] == ["H", "H", "H"]
    assert [g.qubits for g in gates] == [(0,), (2,), (5,)]
    assert diag_layer(0, 0, "jw", 4) == []


def test_emit_particle_number_clique_is_identity():
    for n, mapping in [(3, "jw"), (3, "parity")]:
        u = build_universe(n)
        circ = emit(u.cliques[0], mapping, n)
        assert circ.gates == ()
        assert circ.depth == 0
        for p in range(n):
            table = circ.decode[HoppingOp(p, p, UP)]
            if mapping == "jw":
                assert table.qubits == (p,)
                assert table.values == (0, 1)
            elif p == 0:
                assert table.qubits == (0,)
                assert table.values == (0, 1)
            else:
                # occupation is the XOR of adjacent cumulative-parity bits
                assert table.qubits == (p - 1, p)
                assert table.values == (0, 1, 1, 0)


def test_emit_single_pair_is_one_bell_rotation():
    u = build_universe(2)
    clique = next(
        c
        for c in u.cliques
        if c.family == "one_body" and any(op.spin == UP and not op.is_number for op in c.ops)
    )
    circ = emit(clique, "jw", 2)
    names = [g.name for g in circ.gates]
    assert names == ["CNOT", "H"]
    table = circ.decode[HoppingOp(0, 1, UP)]
    assert table.qubits == (0, 1)
    assert set(table.values) <= {-1, 0, 1}


def test_decode_values_in_allowed_range():
    for n, mapping in [(3, "jw"), (3, "parity"), (4, "jw"), (4, "parity")]:
        schedule = emit_schedule(build_universe(n), mapping)
        for mc, circ in zip(schedule.universe.cliques, schedule.circuits):
            for op in mc.ops:
                table = circ.decode[op]
                allowed = {0, 1} if op.is_number else {-1, 0, 1}
                assert set(table.values) <= allowed
                assert len(table.values) == 1 << len(table.qubits)


def test_emit_reference_clique_depth():
    n = 6
    u = build_universe(n)
    from planesched.plane import gamma_point, point_code

    anchor = point_code(gamma_point(4, 3), 5)
    clique = next(c for c in u.cliques if c.source == ("anchor", anchor))
    members = [(op.p, op.q) for op in clique.ops if op.spin == UP]
    assert members == [(0, 2), (1, 3), (4, 5)]
    circ = emit(clique, "jw", n)
    assert circ.depth <= n + 2


def test_gate_qubits_contiguous_and_in_range():
    for n, mapping in [(4, "jw"), (4, "parity"), (6, "jw")]:
        schedule = emit_schedule(build_universe(n), mapping)
        for circ in schedule.circuits:
            for g in circ.gates:
                qs = g.qubits
                assert list(qs) == list(range(qs[0], qs[0] + len(qs)))
                assert 0 <= qs[0] and qs[-1] < 2 * n


def test_schedule_serialization_is_deterministic():
    a = schedule_json(emit_schedule(build_universe(4), "jw"))
    b = schedule_json(emit_schedule(build_universe(4), "jw"))
    assert a == b
    assert a.endswith("\n")


def test_schedule_roundtrip_and_verification(tmp_path):
    schedule = emit_schedule(build_universe(3), "parity")
    path = tmp_path / "sched.json"
    write_schedule(schedule, str(path))
    data = load_schedule_dict(str(path))
    assert verify_schedule_dict(data) == []
    # corrupt one gate qubit: verification localizes the divergence
    for clique in data["cliques"]:
        if clique["gates"]:
            clique["gates"][0]["qubits"][0] += 1
            break
    problems = verify_schedule_dict(data)
    assert problems
    assert any("gates" in p for p in problems)


def test_schedule_matrices_serialized_as_pairs():
    data = schedule_to_dict(emit_schedule(build_universe(3), "parity"))
    seen_fswap3 = False
    for clique in data["cliques"]:
        for gate in clique["gates"]:
            if gate["name"] == "FSWAP3":
                seen_fswap3 = True
                assert len(gate["matrix"]) == 64
                assert all(len(entry) == 2 for entry in gate["matrix"])
            if gate["name"] in ("CNOT", "H"):
                assert "matrix" not in gate
    assert seen_fswap3


def test_qubit_index_convention():
    assert qubit_index(2, UP, 5) == 2
    assert qubit_index(2, DOWN, 5) == 7


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("H", (1, 1))
