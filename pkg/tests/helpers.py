"""Shared random generators for the tests."""

import random

from popmatch.model import Matching, RoommatesInstance


def random_instance(rng: random.Random, n: int, p: float) -> RoommatesInstance:
    adj = [[] for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                adj[u].append(v)
                adj[v].append(u)
    pref = []
    for row in adj:
        rng.shuffle(row)
        pref.append(tuple(row))
    return RoommatesInstance(tuple(pref))


def partner_first_instance(rng: random.Random, n: int, p: float):
    """Instance plus a matching with no blocking edge.

    Nodes are paired up and every node ranks its partner first, so no
    edge can be preferred by both ends to the matching.
    """
    assert n % 2 == 0
    inst = random_instance(rng, n, p)
    partner = [None] * n
    pairing = list(range(n))
    rng.shuffle(pairing)
    pref = [list(row) for row in inst.pref]
    for k in range(0, n, 2):
        u, v = pairing[k], pairing[k + 1]
        for a, b in ((u, v), (v, u)):
            if b in pref[a]:
                pref[a].remove(b)
            pref[a].insert(0, b)
        partner[u] = v
        partner[v] = u
    inst = RoommatesInstance(tuple(tuple(row) for row in pref))
    return inst, Matching(tuple(partner))


def random_edge_graph(rng: random.Random, n: int, p: float) -> list:
    return [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
