"""Seeded random instances and baseline matchings.

Determinism contract: one `random.Random(seed)` drives first the edge draw
(pairs in lexicographic order) and then the per-node preference shuffles
(nodes in id order), so equal seeds give byte-identical instance files.
"""

from __future__ import annotations

import random

from .model import Matching, RoommatesInstance


def generate_instance(
    n: int, model: str = "complete", p: float | None = None, seed: int = 0
) -> RoommatesInstance:
    if n < 1:
        raise ValueError(f"need at least one node, got {n}")
    rng = random.Random(seed)
    adj: list[list[int]] = [[] for _ in range(n)]
    if model == "complete":
        for u in range(n):
            for v in range(u + 1, n):
                adj[u].append(v)
                adj[v].append(u)
    elif model == "gnp":
        if p is None or not 0 < p <= 1:
            raise ValueError(f"gnp needs an edge probability in (0, 1], got {p}")
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < p:
                    adj[u].append(v)
                    adj[v].append(u)
    else:
        raise ValueError(f"unknown model {model!r}")
    pref = []
    for row in adj:
        rng.shuffle(row)
        pref.append(tuple(row))
    return RoommatesInstance(tuple(pref))


def greedy_matching(inst: RoommatesInstance) -> Matching:
    """Scan nodes in id order, pairing each free node with its best free neighbor."""
    partner: list = [None] * inst.n
    for u in range(inst.n):
        if partner[u] is not None:
            continue
        for v in inst.pref[u]:
            if partner[v] is None:
                partner[u] = v
                partner[v] = u
                break
    return Matching(tuple(partner))


def random_maximal_matching(inst: RoommatesInstance, seed: int = 0) -> Matching:
    """Add edges in seeded random order while both ends are free."""
    rng = random.Random(seed)
    edges = sorted(inst.edges)
    rng.shuffle(edges)
    partner: list = [None] * inst.n
    for u, v in edges:
        if partner[u] is None and partner[v] is None:
            partner[u] = v
            partner[v] = u
    return Matching(tuple(partner))
