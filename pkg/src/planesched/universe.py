"""Measurement groups covering every term of a molecular Hamiltonian.

The Hamiltonian over 2N spin orbitals is written with the symmetric hopping
operators A(p, q, spin) = adag_p a_q + adag_q a_p (per spin sector; p = q
gives twice the number operator).  Four families of mutually commuting
operator groups suffice to estimate every required expectation value:

    part        all 2N number operators, one group
    one_body    per spin, one group per pairing round, plus the opposite
                spin's number operators
    diff_spin   direct products of an up round with a down round
    same_spin   the plane anchor groups, instantiated for both spins at once

With N - 1 prime the family sizes are 1, 2(N-1), (N-1)^2 and (N-1)^2.

``decompose`` expands a coefficient tensor onto this measurable basis,
rewriting index-overlapping same-spin products with exact fermionic algebra.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple

import numpy as np

from .cover import PairClique, build_cover
from .gf import smallest_prime_at_least
from .plane import point_code
from .roundrobin import Round, build_rounds

UP, DOWN = 0, 1
SPIN_NAMES = ("up", "down")

SYMMETRY_TOL = 1e-12


class CoverageError(LookupError):
    """A term has no group that contains all of its factors."""


class HoppingOp(NamedTuple):
    """Canonical operator label: A(p, q, spin) for p < q, the number operator for p == q."""

    p: int
    q: int
    spin: int

    @property
    def is_number(self) -> bool:
        return self.p == self.q

    @property
    def indices(self) -> frozenset[int]:
        return frozenset((self.p, self.q))


TermKey = tuple[HoppingOp, ...]  # one or two commuting factors, canonically sorted


def one_body_key(p: int, q: int, spin: int) -> TermKey:
    return (HoppingOp(min(p, q), max(p, q), spin),)


def two_body_key(a: HoppingOp, b: HoppingOp) -> TermKey:
    return (a, b) if a <= b else (b, a)


def classify_terms(n: int) -> list[TermKey]:
    """Every independent measurable term, exactly once, in canonical form.

    Single factors are all number and hopping operators.  Pair products keep
    any cross-spin combination (those always commute) and the index-disjoint
    same-spin combinations; overlapping same-spin products are not terms of
    their own, they reduce onto this basis.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    comps = [
        HoppingOp(p, q, spin)
        for spin in (UP, DOWN)
        for p in range(n)
        for q in range(p, n)
    ]
    comps.sort()
    terms: list[TermKey] = [(c,) for c in comps]
    for i, a in enumerate(comps):
        for b in comps[i + 1 :]:
            if a.spin != b.spin or a.indices.isdisjoint(b.indices):
                terms.append((a, b))
    return terms


@dataclass(frozen=True)
class MeasurementClique:
    """One simultaneously measurable operator set."""

    id: int
    family: str  # "part" | "one_body" | "diff_spin" | "same_spin"
    ops: tuple[HoppingOp, ...]
    source: tuple | None = None

    def ops_for_spin(self, spin: int) -> tuple[HoppingOp, ...]:
        return tuple(op for op in self.ops if op.spin == spin)


@dataclass
class Universe:
    """All measurement groups for n orbitals, with routing indexes."""

    n: int
    pi: int
    rounds: list[Round]
    anchor_groups: list[PairClique]
    cliques: list[MeasurementClique]
    _op_index: dict[HoppingOp, list[int]] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        for c in self.cliques:
            for op in c.ops:
                self._op_index.setdefault(op, []).append(c.id)

    def __len__(self) -> int:
        return len(self.cliques)

    def __iter__(self):
        return iter(self.cliques)

    def family_counts(self) -> dict[str, int]:
        counts = {"part": 0, "one_body": 0, "diff_spin": 0, "same_spin": 0}
        for c in self.cliques:
            counts[c.family] += 1
        return counts

    def cliques_containing(self, op: HoppingOp) -> list[int]:
        return self._op_index.get(op, [])


def _check_disjoint_within_spin(ops: tuple[HoppingOp, ...]) -> None:
    for spin in (UP, DOWN):
        seen: set[int] = set()
        for op in ops:
            if op.spin != spin:
                continue
            if seen & op.indices:
                raise ValueError(f"non-disjoint indices within spin sector: {ops}")
            seen |= op.indices

def build_universe(n: int) -> Universe:
    """Assemble all four clique families for n orbitals.

    The plane order is the smallest prime >= n - 1; when that exceeds n - 1
    the anchor groups are truncated to in-range labels but all pi^2 of them
    are kept, so the closed-form total 2*n^2 - 2*n + 1 applies exactly when
    n - 1 is prime and n is even.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    pi = int(smallest_prime_at_least(max(2, n - 1)))
    rounds = build_rounds(n)
    anchor_groups = build_cover(pi, n)
    cliques: list[MeasurementClique] = []

    def add(family: str, ops: list[HoppingOp], source: tuple | None) -> None:
        ops_t = tuple(ops)
        _check_disjoint_within_spin(ops_t)
        cliques.append(MeasurementClique(len(cliques), family, ops_t, source))

    add(
        "part",
        [HoppingOp(p, p, spin) for spin in (UP, DOWN) for p in range(n)],
        None,
    )
    for spin in (UP, DOWN):
        for i, rnd in enumerate(rounds):
            ops = [HoppingOp(p, q, spin) for p, q in rnd]
            ops += [HoppingOp(r, r, 1 - spin) for r in range(n)]
            add("one_body", ops, ("round", spin, i))
    for i, ri in enumerate(rounds):
        for j, rj in enumerate(rounds):
            ops = [HoppingOp(p, q, UP) for p, q in ri]
            ops += [HoppingOp(r, s, DOWN) for r, s in rj]
            add("diff_spin", ops, ("rounds", i, j))
    for group in anchor_groups:
        ops = [
            HoppingOp(p, q, spin) for spin in (UP, DOWN) for p, q in group.members
        ]
        add("same_spin", ops, ("anchor", point_code(group.anchor, pi)))
    return Universe(n, pi, rounds, anchor_groups, cliques)


def route_term(term: TermKey, universe: Universe) -> int:
    """Lowest-id clique containing every factor of the term."""
    candidate_lists = [universe.cliques_containing(op) for op in term]
    if any(not lst for lst in candidate_lists):
        raise CoverageError(f"no clique covers {term}")
    if len(candidate_lists) == 1:
        return candidate_lists[0][0]
    common = set(candidate_lists[0]).intersection(*candidate_lists[1:])
    if not common:
        raise CoverageError(f"no clique covers {term}")
    return min(common)

@dataclass
class Hamiltonian:
    """Molecular Hamiltonian data: scalar shift, one- and two-body tensors.

    ``h`` has shape (2, N, N) indexed by (spin, p, q); ``g`` has shape
    (2, 2, N, N, N, N) indexed by (spin1, spin2, p, q, r, s).  The energy is

        e_nuc + 1/2 sum h[s,p,q] A(p,q,s) + 1/8 sum g[s,t,p,q,r,u] A(p,q,s) A(r,u,t)

    with both index pairs of g running over the full range.  Validation
    enforces the real-orbital symmetries (symmetric h, g symmetric under
    p<->q and r<->u) and pair exchange g[s,t,p,q,r,u] = g[t,s,r,u,p,q];
    without the latter the operator sum is not Hermitian and no energy is
    defined.
    """

    n_orbitals: int
    e_nuc: float
    h: np.ndarray
    g: np.ndarray

    def __post_init__(self) -> None:
        n = self.n_orbitals
        self.h = np.asarray(self.h, dtype=float)
        self.g = np.asarray(self.g, dtype=float)
        if self.h.shape != (2, n, n):
            raise ValueError(f"h must have shape (2, {n}, {n}), got {self.h.shape}")
        if self.g.shape != (2, 2, n, n, n, n):
            raise ValueError(f"g must have shape (2, 2, {n}, {n}, {n}, {n})")
        checks = [
            ("h[p,q] == h[q,p]", self.h, self.h.transpose(0, 2, 1)),
            ("g[p,q,r,s] == g[q,p,r,s]", self.g, self.g.transpose(0, 1, 3, 2, 4, 5)),
            ("g[p,q,r,s] == g[p,q,s,r]", self.g, self.g.transpose(0, 1, 2, 3, 5, 4)),
            ("g[s,t,p,q,r,u] == g[t,s,r,u,p,q]", self.g, self.g.transpose(1, 0, 4, 5, 2, 3)),
        ]
        for name, a, b in checks:
            err = float(np.max(np.abs(a - b))) if a.size else 0.0
            if err > SYMMETRY_TOL:
                raise ValueError(f"coefficient symmetry violated: {name} (max error {err:.3e})")

    def to_dict(self) -> dict:
        return {
            "n_orbitals": self.n_orbitals,
            "e_nuc": self.e_nuc,
            "h": self.h.tolist(),
            "g": self.g.tolist(),
        }

    def save(self, path: str) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f)
            f.write("\n")


def load_hamiltonian(path: str) -> Hamiltonian:
    """Read the JSON form: {n_orbitals, e_nuc, h, g} with nested row-major lists."""
    with open(path) as f:
        data = json.load(f)
    return Hamiltonian(
        n_orbitals=int(data["n_orbitals"]),
        e_nuc=float(data["e_nuc"]),
        h=np.asarray(data["h"], dtype=float),
        g=np.asarray(data["g"], dtype=float),
    )


_G_SYMMETRY_AXES = [
    (0, 1, 2, 3, 4, 5),
    (0, 1, 3, 2, 4, 5),
    (0, 1, 2, 3, 5, 4),
    (0, 1, 3, 2, 5, 4),
    (1, 0, 4, 5, 2, 3),
    (1, 0, 5, 4, 2, 3),
    (1, 0, 4, 5, 3, 2),
    (1, 0, 5, 4, 3, 2),
]


def random_hamiltonian(n: int, seed: int) -> Hamiltonian:
    """Random tensors with all required symmetries, for testing and demos."""
    rng = np.random.default_rng(seed)
    h = rng.normal(size=(2, n, n))
    h = (h + h.transpose(0, 2, 1)) / 2
    g = rng.normal(size=(2, 2, n, n, n, n))
    g = sum(g.transpose(axes) for axes in _G_SYMMETRY_AXES) / len(_G_SYMMETRY_AXES)
    return Hamiltonian(n, float(rng.normal()), h, g)

def decompose(ham: Hamiltonian) -> tuple[float, dict[TermKey, float]]:
    """Expand the Hamiltonian onto the measurable term basis.

    Disjoint products map through directly (a diagonal factor A(p,p) is twice
    the number operator, hence the powers of two).  Index-overlapping
    same-spin products are rewritten with the exact identities

        A_pq A_pq = n_p + n_q - 2 n_p n_q
        A_xy A_yz = adag_x a_z - n_y A_xz     (x, y, z distinct)
        A_yy A_yz = 2 adag_y a_z
        A_xy A_yy = 2 adag_x a_y

    The directed adag_x a_z pieces carry equal coefficients in both
    directions once the tensor symmetries hold, and recombine into A_xz.
    """
    n = ham.n_orbitals
    coeff: dict[TermKey, float] = {}
    directed: dict[tuple[int, int, int], float] = {}

    def bump(key: TermKey, c: float) -> None:
        coeff[key] = coeff.get(key, 0.0) + c

    def bump_directed(spin: int, x: int, z: int, c: float) -> None:
        k = (spin, x, z)
        directed[k] = directed.get(k, 0.0) + c

    for spin in (UP, DOWN):
        hmat = ham.h[spin]
        for p in range(n):
            bump(one_body_key(p, p, spin), hmat[p, p])
            for q in range(n):
                if p != q:
                    bump(one_body_key(p, q, spin), hmat[p, q] / 2)

    for s1 in (UP, DOWN):
        for s2 in (UP, DOWN):
            gmat = ham.g[s1, s2]
            for p, q, r, u in product(range(n), repeat=4):
                c = gmat[p, q, r, u] / 8
                if c == 0.0:
                    continue
                if s1 != s2:
                    mult = (2 if p == q else 1) * (2 if r == u else 1)
                    key = two_body_key(
                        HoppingOp(min(p, q), max(p, q), s1),
                        HoppingOp(min(r, u), max(r, u), s2),
                    )
                    bump(key, c * mult)
                    continue
                first = {p, q}
                second = {r, u}
                if first.isdisjoint(second):
                    mult = (2 if p == q else 1) * (2 if r == u else 1)
                    key = two_body_key(
                        HoppingOp(min(p, q), max(p, q), s1),
                        HoppingOp(min(r, u), max(r, u), s1),
                    )
                    bump(key, c * mult)
                elif first == second:
                    if p == q:
                        bump(one_body_key(p, p, s1), 4 * c)
                    else:
                        bump(one_body_key(p, p, s1), c)
                        bump(one_body_key(q, q, s1), c)
                        bump(
                            two_body_key(HoppingOp(p, p, s1), HoppingOp(q, q, s1)),
                            -2 * c,
                        )
                elif p == q:
                    # A_yy A_yz with y = p shared, z the other label of (r, u)
                    z = u if r == p else r
                    bump_directed(s1, p, z, 2 * c)
                elif r == u:
                    # A_xy A_yy with y = r shared, x the other label of (p, q)
                    x = q if p == r else p
                    bump_directed(s1, x, r, 2 * c)
                else:
                    shared = (first & second).pop()
                    x = (first - {shared}).pop()
                    z = (second - {shared}).pop()
                    bump_directed(s1, x, z, c)
                    bump(
                        two_body_key(
                            HoppingOp(shared, shared, s1),
                            HoppingOp(min(x, z), max(x, z), s1),
                        ),
                        -c,
                    )

    done: set[tuple[int, int, int]] = set()
    for (spin, x, z), c in directed.items():
        lo, hi = min(x, z), max(x, z)
        if (spin, lo, hi) in done:
            continue
        done.add((spin, lo, hi))
        total = directed.get((spin, lo, hi), 0.0) + directed.get((spin, hi, lo), 0.0)
        bump(one_body_key(lo, hi, spin), total / 2)

    return ham.e_nuc, {k: v for k, v in coeff.items() if v != 0.0}
