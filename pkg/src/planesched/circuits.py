"""Measurement circuits for cliques under the Jordan-Wigner and parity mappings.

Qubit layout is the up-then-down convention: mode p of spin s lives on qubit
p + s*N, for 2N qubits total.  A circuit is a flat gate list executed left to
right; a gate's ``qubits`` are listed explicitly and its matrix is indexed
with the first listed qubit as the most significant bit.

Each circuit has two stages.  A nearest-neighbor fermionic-swap network
first compacts every hopping operator onto adjacent modes (2m, 2m+1) of its
spin block.  A constant-depth layer then rotates those adjacent hopping
terms into the computational basis: a Bell-basis rotation (CNOT then H) per
pair under Jordan-Wigner, a single Hadamard on each pair's lower qubit under
parity.  Number operators are already diagonal in both mappings.

Under Jordan-Wigner an adjacent-mode fermionic swap is the standard 2-qubit
gate (|01> <-> |10>, |11> -> -|11>).  Under parity it touches one extra
qubit below the pair because occupations are stored as cumulative parities;
at the very first qubit the gate reduces to a 2-qubit form.

Decode tables are computed numerically: the operator that the swap network
leaves on the sorted slots is conjugated, on its own support, by the layer
gates that touch it, and the resulting diagonal is read off.  Hopping
operators decode to {-1, 0, +1}, number operators to {0, 1}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .swapnet import SwapNetwork, odd_even_sort, position_vector
from .universe import SPIN_NAMES, UP, DOWN, HoppingOp, MeasurementClique, Universe

DIAG_TOL = 1e-12

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def _kron(*mats: np.ndarray) -> np.ndarray:
    return reduce(np.kron, mats)


# adjacent-mode fermionic swap, Jordan-Wigner: qubits (l, l+1)
FSWAP2_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, -1]], dtype=complex
)

# adjacent-mode fermionic swap, parity mapping, interior: qubits (g-1, g, g+1)
FSWAP3_MATRIX = (
    _kron(_I, _X, _I) - _kron(_Z, _X, _Z) + _kron(_Z, _Z, _I) + _kron(_I, _Z, _Z)
) / 2

# the same gate at the global boundary g = 0: qubits (0, 1)
FSWAP_EDGE_MATRIX = (
    _kron(_X, _I) - _kron(_X, _Z) + _kron(_Z, _I) + _kron(_Z, _Z)
) / 2

STANDARD_MATRICES = {"CNOT": _CNOT, "H": _H}


class InvalidSwapError(ValueError):
    """Fermionic swap requested across the spin-block boundary."""


class DiagonalizationError(RuntimeError):
    """A clique operator failed to conjugate to diagonal form."""


@dataclass(frozen=True, eq=False)
class Gate:
    name: str
    qubits: tuple[int, ...]
    matrix: np.ndarray | None = None

    def __post_init__(self) -> None:
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in gate: {self}")

    def resolved_matrix(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix
        return STANDARD_MATRICES[self.name]


@dataclass(frozen=True)
class DecodeTable:
    """Eigenvalue lookup for one clique operator after its circuit.

    ``values[i]`` is the eigenvalue for the support bits packed with the
    first listed qubit as the most significant bit.
    """

    qubits: tuple[int, ...]
    values: tuple[int, ...]


@dataclass(frozen=True)
class MeasCircuit:
    gates: tuple[Gate, ...]
    depth: int
    decode: dict[HoppingOp, DecodeTable]
    permutations: dict[int, tuple[int, ...]]  # spin -> mode permutation

    @property
    def gate_count(self) -> int:
        return len(self.gates)


def qubit_index(mode: int, spin: int, n: int) -> int:
    """Up-then-down layout: spin-up modes first, spin-down modes after."""
    return mode + spin * n


def map_fswap(l: int, spin: int, mapping: str, n: int) -> Gate:
    """Gate for the fermionic swap of modes (l, l+1) inside one spin block."""
    if not 0 <= l < n - 1:
        raise InvalidSwapError(f"swap ({l}, {l + 1}) leaves the block of {n} modes")
    g = qubit_index(l, spin, n)
    if mapping == "jw":
        return Gate("FSWAP2", (g, g + 1), FSWAP2_MATRIX)
    if mapping == "parity":
        if g == 0:
            return Gate("FSWAP_EDGE", (0, 1), FSWAP_EDGE_MATRIX)
        return Gate("FSWAP3", (g - 1, g, g + 1), FSWAP3_MATRIX)
    raise ValueError(f"unknown mapping: {mapping!r}")


def diag_layer(m_up: int, m_down: int, mapping: str, n: int) -> list[Gate]:
    """Basis-rotation gates for sorted hopping pairs (m_up up pairs, m_down down)."""
    if mapping not in ("jw", "parity"):
        raise ValueError(f"unknown mapping: {mapping!r}")
    gates: list[Gate] = []
    pair_qubits = [
        qubit_index(2 * l, spin, n)
        for spin, m in ((UP, m_up), (DOWN, m_down))
        for l in range(m)
    ]
    if mapping == "jw":
        for q in pair_qubits:
            gates.append(Gate("CNOT", (q, q + 1)))
        for q in pair_qubits:
            gates.append(Gate("H", (q,)))
    else:
        for q in pair_qubits:
            gates.append(Gate("H", (q,)))
    return gates


def _local_sorted_operator(
    slot: int, spin: int, is_number: bool, mapping: str, n: int
) -> tuple[tuple[int, ...], np.ndarray]:
    """Support qubits and local matrix of an operator sitting on sorted slots.

    ``slot`` is the block-local mode: a hopping pair occupies (slot, slot+1),
    a number operator just ``slot``.
    """
    g = qubit_index(slot, spin, n)
    if mapping == "jw":
        if is_number:
            return (g,), (_I - _Z) / 2
        return (g, g + 1), (_kron(_X, _X) + _kron(_Y, _Y)) / 2
    if is_number:
        if g == 0:
            return (0,), (_I - _Z) / 2
        return (g - 1, g), (_kron(_I, _I) - _kron(_Z, _Z)) / 2
    if g == 0:
        return (0, 1), (_kron(_X, _I) - _kron(_X, _Z)) / 2
    return (g - 1, g, g + 1), (_kron(_I, _X, _I) - _kron(_Z, _X, _Z)) / 2

def _conjugate_local(
    support: tuple[int, ...], op: np.ndarray, gates: list[Gate]
) -> np.ndarray:
    """Conjugate a local operator by the circuit gates that touch its support."""
    out = op
    for gate in gates:
        overlap = set(gate.qubits) & set(support)
        if not overlap:
            continue
        if not overlap == set(gate.qubits):
            raise DiagonalizationError(
                f"gate {gate.name} on {gate.qubits} straddles support {support}"
            )
        mat = gate.resolved_matrix()
        full = _embed_in_support(mat, gate.qubits, support)
        out = full @ out @ full.conj().T
    return out


def _embed_in_support(
    mat: np.ndarray, gate_qubits: tuple[int, ...], support: tuple[int, ...]
) -> np.ndarray:
    """Lift a gate matrix onto the full support space (listed msb-first)."""
    m = len(gate_qubits)
    k = len(support)
    positions = [support.index(q) for q in gate_qubits]
    full = np.zeros((1 << k, 1 << k), dtype=complex)
    for row in range(1 << k):
        row_bits = [(row >> (k - 1 - i)) & 1 for i in range(k)]
        r_local = 0
        for b, pos in enumerate(positions):
            r_local = (r_local << 1) | row_bits[pos]
        for c_local in range(1 << m):
            amp = mat[r_local, c_local]
            if amp == 0:
                continue
            col_bits = row_bits[:]
            for b, pos in enumerate(positions):
                col_bits[pos] = (c_local >> (m - 1 - b)) & 1
            col = 0
            for bit in col_bits:
                col = (col << 1) | bit
            full[row, col] += amp
    return full


def _decode_from_diagonal(
    support: tuple[int, ...], conjugated: np.ndarray, is_number: bool, what: str
) -> DecodeTable:
    off = conjugated - np.diag(np.diag(conjugated))
    if np.max(np.abs(off)) > DIAG_TOL:
        raise DiagonalizationError(f"{what}: conjugated operator is not diagonal")
    diag = np.diag(conjugated)
    if np.max(np.abs(diag.imag)) > DIAG_TOL:
        raise DiagonalizationError(f"{what}: complex eigenvalues")
    values = np.rint(diag.real).astype(int)
    if np.max(np.abs(diag.real - values)) > DIAG_TOL:
        raise DiagonalizationError(f"{what}: non-integer eigenvalues")
    allowed = {0, 1} if is_number else {-1, 0, 1}
    if not set(values.tolist()) <= allowed:
        raise DiagonalizationError(f"{what}: eigenvalues {set(values.tolist())}")
    return DecodeTable(support, tuple(int(v) for v in values))


def emit(clique: MeasurementClique, mapping: str, n: int) -> MeasCircuit:
    """Swap network plus basis rotation for one clique, with decode tables."""
    if mapping not in ("jw", "parity"):
        raise ValueError(f"unknown mapping: {mapping!r}")
    nets: dict[int, SwapNetwork] = {}
    hops: dict[int, list[HoppingOp]] = {}
    nums: dict[int, list[HoppingOp]] = {}
    for spin in (UP, DOWN):
        ops_s = clique.ops_for_spin(spin)
        hops[spin] = [op for op in ops_s if not op.is_number]
        nums[spin] = [op for op in ops_s if op.is_number]
        nets[spin] = odd_even_sort(position_vector(ops_s, n))

    gates: list[Gate] = []
    swap_depth = 0
    max_layers = max(len(nets[UP].layers), len(nets[DOWN].layers))
    for layer_idx in range(max_layers):
        emitted = False
        for spin in (UP, DOWN):
            layers = nets[spin].layers
            if layer_idx < len(layers):
                for l in layers[layer_idx].swaps:
                    gates.append(map_fswap(l, spin, mapping, n))
                    emitted = True
        if emitted:
            swap_depth += 1

    m_up, m_down = len(hops[UP]), len(hops[DOWN])
    rotation = diag_layer(m_up, m_down, mapping, n)
    gates.extend(rotation)
    rotation_depth = 0
    if m_up + m_down:
        rotation_depth = 2 if mapping == "jw" else 1

    decode: dict[HoppingOp, DecodeTable] = {}
    for spin in (UP, DOWN):
        perm = nets[spin].permutation
        for m, op in enumerate(hops[spin]):
            slot = 2 * m
            assert perm[op.p] == slot and perm[op.q] == slot + 1
            support, local = _local_sorted_operator(slot, spin, False, mapping, n)
            conjugated = _conjugate_local(support, local, rotation)
            decode[op] = _decode_from_diagonal(support, conjugated, False, f"{op}")
        for j, op in enumerate(nums[spin]):
            slot = 2 * len(hops[spin]) + j
            assert perm[op.p] == slot
            support, local = _local_sorted_operator(slot, spin, True, mapping, n)
            conjugated = _conjugate_local(support, local, rotation)
            decode[op] = _decode_from_diagonal(support, conjugated, True, f"{op}")

    return MeasCircuit(
        gates=tuple(gates),
        depth=swap_depth + rotation_depth,
        decode=decode,
        permutations={UP: nets[UP].permutation, DOWN: nets[DOWN].permutation},
    )

SCHEDULE_VERSION = 1

# only non-standard gate matrices go into the schedule file
_SERIALIZED_MATRICES = {"FSWAP2", "FSWAP3", "FSWAP_EDGE"}


@dataclass
class Schedule:
    """All emitted circuits for one universe and mapping."""

    n: int
    mapping: str
    universe: Universe
    circuits: list[MeasCircuit]

    def stats(self) -> dict:
        depths = [c.depth for c in self.circuits]
        gate_counts = [c.gate_count for c in self.circuits]
        hist: dict[int, int] = {}
        for d in depths:
            hist[d] = hist.get(d, 0) + 1
        n = self.n
        return {
            "orbitals": n,
            "qubits": 2 * n,
            "plane_order": self.universe.pi,
            "mapping": self.mapping,
            "families": self.universe.family_counts(),
            "cliques_total": len(self.circuits),
            "closed_form_total": 2 * n * n - 2 * n + 1,
            "cover_lower_bound": (n - 1) * (n - 3) if n >= 4 else 0,
            "depth_max": max(depths),
            "depth_histogram": dict(sorted(hist.items())),
            "gate_count_total": sum(gate_counts),
            "gate_count_max": max(gate_counts),
        }


def emit_schedule(universe: Universe, mapping: str, threads: int = 1) -> Schedule:
    """Emit every clique's circuit; cliques are independent, so this can fan out."""
    cliques = universe.cliques
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            circuits = list(pool.map(lambda c: emit(c, mapping, universe.n), cliques))
    else:
        circuits = [emit(c, mapping, universe.n) for c in cliques]
    return Schedule(universe.n, mapping, universe, circuits)


def _matrix_to_pairs(matrix: np.ndarray) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in matrix.reshape(-1)]


def _op_to_list(op: HoppingOp) -> list:
    return [op.p, op.q, SPIN_NAMES[op.spin]]


def schedule_to_dict(schedule: Schedule) -> dict:
    cliques = []
    for mc, circ in zip(schedule.universe.cliques, schedule.circuits):
        gates = []
        for gate in circ.gates:
            entry: dict = {"name": gate.name, "qubits": list(gate.qubits)}
            if gate.name in _SERIALIZED_MATRICES:
                entry["matrix"] = _matrix_to_pairs(gate.resolved_matrix())
            gates.append(entry)
        decode = [
            {
                "op": _op_to_list(op),
                "qubits": list(table.qubits),
                "values": list(table.values),
            }
            for op, table in ((op, circ.decode[op]) for op in mc.ops)
        ]
        cliques.append(
            {
                "id": mc.id,
                "family": mc.family,
                "source": list(mc.source) if mc.source is not None else None,
                "ops": [_op_to_list(op) for op in mc.ops],
                "gates": gates,
                "decode": decode,
                "depth": circ.depth,
                "permutation": {
                    "up": list(circ.permutations[UP]),
                    "down": list(circ.permutations[DOWN]),
                },
            }
        )
    return {
        "version": SCHEDULE_VERSION,
        "n_orbitals": schedule.n,
        "mapping": schedule.mapping,
        "plane_order": schedule.universe.pi,
        "families": schedule.universe.family_counts(),
        "cliques": cliques,
    }


def schedule_json(schedule: Schedule) -> str:
    """Deterministic byte-stable serialization."""
    return json.dumps(schedule_to_dict(schedule), sort_keys=True, separators=(",", ":")) + "\n"


def write_schedule(schedule: Schedule, path: str) -> None:
    with open(path, "w") as f:
        f.write(schedule_json(schedule))


def load_schedule_dict(path: str) -> dict:
    with open(path) as f:
        return json.load(f)


def _diff_json(expected, actual, path: str, out: list[str], limit: int = 10) -> None:
    if len(out) >= limit:
        return
    if type(expected) is not type(actual):
        out.append(f"{path}: expected {type(expected).__name__}, got {type(actual).__name__}")
        return
    if isinstance(expected, dict):
        for key in sorted(set(expected) | set(actual)):
            if key not in actual:
                out.append(f"{path}.{key}: missing")
            elif key not in expected:
                out.append(f"{path}.{key}: unexpected")
            else:
                _diff_json(expected[key], actual[key], f"{path}.{key}", out, limit)
        return
    if isinstance(expected, list):
        if len(expected) != len(actual):
            out.append(f"{path}: length {len(actual)}, expected {len(expected)}")
            return
        for i, (e, a) in enumerate(zip(expected, actual)):
            _diff_json(e, a, f"{path}[{i}]", out, limit)
        return
    if expected != actual:
        out.append(f"{path}: {actual!r} != expected {expected!r}")


def verify_schedule_dict(data: dict) -> list[str]:
    """Recompute the schedule from its own header and report every divergence."""
    problems: list[str] = []
    try:
        n = int(data["n_orbitals"])
        mapping = str(data["mapping"])
    except (KeyError, TypeError, ValueError) as exc:
        return [f"header unreadable: {exc}"]
    if data.get("version") != SCHEDULE_VERSION:
        problems.append(f"version: {data.get('version')!r} != {SCHEDULE_VERSION}")
    if mapping not in ("jw", "parity"):
        return problems + [f"mapping: unknown {mapping!r}"]
    from .universe import build_universe

    expected = schedule_to_dict(emit_schedule(build_universe(n), mapping))
    _diff_json(expected, data, "schedule", problems)
    return problems
