"""Round-robin pairing rounds via the circle method.

Every unordered pair from {0, ..., n-1} is covered exactly once across the
rounds, and within a round no index appears twice.  Even n needs n - 1
rounds; odd n gets a phantom participant and needs n rounds, with the
phantom's partner sitting out.
"""

from __future__ import annotations

Round = tuple[tuple[int, int], ...]


def build_rounds(n: int) -> list[Round]:
    """Partition all pairs (p, q), p < q, into rounds of disjoint pairs.

    Participant 0 stays fixed while the others rotate, which keeps the
    output deterministic.  Pairs are normalized to p < q and sorted within
    each round.
    """
    if n < 2:
        raise ValueError(f"need at least two participants, got {n}")
    m = n if n % 2 == 0 else n + 1
    phantom = m - 1 if n % 2 == 1 else None
    others = list(range(1, m))
    rounds: list[Round] = []
    for _ in range(m - 1):
        raw = [(0, others[0])]
        for i in range(1, m // 2):
            raw.append((others[i], others[m - 1 - i]))
        pairs = sorted(
            (min(a, b), max(a, b)) for a, b in raw if phantom not in (a, b)
        )
        rounds.append(tuple(pairs))
        others = others[1:] + others[:1]
    return rounds
