"""Roommates instances, matchings, votes, and half-integral matchings.

An instance is a strict preference list per node over its neighbors;
the lists induce an undirected graph.  A matching M is judged by
majority vote: each node compares its new partner against its old one
and being unmatched is worse than every neighbor.  Edge weights
aggregate the two endpoint votes, so an edge of weight +2 is blocking,
and a half-integral matching generalizes a matching by allowing odd
cycles carried with value one half.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .engine import Graph


def _csr_graph(n: int, us: np.ndarray, vs: np.ndarray) -> Graph:
    """Build an engine graph from distinct undirected edge arrays."""
    a = np.concatenate([us, vs])
    b = np.concatenate([vs, us])
    order = np.lexsort((b, a))
    off = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(a, minlength=n), out=off[1:])
    return Graph(n, off.tolist(), b[order].tolist())


@dataclass(frozen=True)
class RoommatesInstance:
    """Immutable preference profile; pref[v] ranks v's neighbors, best first."""

    pref: tuple

    def __post_init__(self):
        object.__setattr__(self, "pref", tuple(tuple(p) for p in self.pref))
        self._arrays  # validates eagerly

    @property
    def n(self) -> int:
        return len(self.pref)

    @property
    def m(self) -> int:
        return sum(len(p) for p in self.pref) // 2

    @cached_property
    def rank(self) -> tuple:
        return tuple({v: i for i, v in enumerate(p)} for p in self.pref)

    @cached_property
    def edges(self) -> frozenset:
        return frozenset(
            (u, v) if u < v else (v, u) for u in range(self.n) for v in self.pref[u]
        )

    @cached_property
    def _arrays(self) -> dict:
        n = len(self.pref)
        counts = np.fromiter((len(p) for p in self.pref), dtype=np.int64, count=n)
        total = int(counts.sum())
        off = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=off[1:])
        dv = np.fromiter(
            (x for p in self.pref for x in p), dtype=np.int64, count=total
        )
        du = np.repeat(np.arange(n, dtype=np.int64), counts)
        dpos = np.arange(total, dtype=np.int64) - np.repeat(off[:-1], counts)
        if total:
            if dv.min() < 0 or dv.max() >= n:
                bad = int(du[(dv < 0) | (dv >= n)][0])
                raise ValueError(f"node {bad} ranks a vertex outside the instance")
            if bool((du == dv).any()):
                bad = int(du[du == dv][0])
                raise ValueError(f"node {bad} ranks itself")
        lo = np.minimum(du, dv)
        key = lo * n + np.maximum(du, dv)
        order = np.lexsort((du, key))
        ks = key[order]
        if total % 2 or not np.array_equal(ks[0::2], ks[1::2]):
            # some pair (u, v) appears an odd number of times in one
            # direction: either a duplicate entry or a one-sided listing
            seen: dict = {}
            for u in range(n):
                for v in self.pref[u]:
                    if (u, v) in seen:
                        raise ValueError(f"node {u} ranks {v} twice")
                    seen[(u, v)] = True
            for u in range(n):
                for v in self.pref[u]:
                    if (v, u) not in seen:
                        raise ValueError(f"node {u} ranks {v} but not vice versa")
            raise ValueError("preference lists are not symmetric")
        dus = du[order]
        if total and bool((ks[0::2] == np.roll(ks[0::2], 1))[1:].any()):
            dup = int(dus[0::2][1:][(ks[0::2] == np.roll(ks[0::2], 1))[1:]][0])
            raise ValueError(f"node {dup} ranks a neighbor twice")
        dps = dpos[order]
        return {
            "off": off,
            "du": du,
            "dv": dv,
            "dpos": dpos,
            "eu": dus[0::2],
            "ev": dus[1::2],
            "pu": dps[0::2],
            "pv": dps[1::2],
        }


@dataclass(frozen=True)
class Matching:
    """Partner list with None for unmatched nodes; always an involution."""

    partner: tuple

    def __post_init__(self):
        object.__setattr__(self, "partner", tuple(self.partner))
        n = len(self.partner)
        for v, w in enumerate(self.partner):
            if w is None:
                continue
            if not isinstance(w, int) or not 0 <= w < n or w == v:
                raise ValueError(f"partner entry {v} -> {w} is out of range")
            if self.partner[w] != v:
                raise ValueError(f"partner entries {v} and {w} disagree")

    @classmethod
    def empty(cls, n: int) -> "Matching":
        return cls((None,) * n)

    @classmethod
    def from_pairs(cls, inst: RoommatesInstance, pairs) -> "Matching":
        partner: list = [None] * inst.n
        for u, v in pairs:
            if (min(u, v), max(u, v)) not in inst.edges:
                raise ValueError(f"pair ({u}, {v}) is not an edge of the instance")
            if partner[u] is not None or partner[v] is not None:
                raise ValueError(f"pair ({u}, {v}) reuses a matched node")
            partner[u] = v
            partner[v] = u
        return cls(tuple(partner))

    @classmethod
    def from_partner_list(cls, seq) -> "Matching":
        return cls(tuple(None if x is None or x < 0 else x for x in seq))

    @property
    def n(self) -> int:
        return len(self.partner)

    def pairs(self) -> tuple:
        return tuple(
            (v, w) for v, w in enumerate(self.partner) if w is not None and v < w
        )

    def size(self) -> int:
        return sum(1 for w in self.partner if w is not None) // 2

    def unmatched(self) -> tuple:
        return tuple(v for v, w in enumerate(self.partner) if w is None)


def engine_partner_list(m: Matching) -> list:
    return [-1 if w is None else w for w in m.partner]


def _partner_array(m: Matching) -> np.ndarray:
    return np.fromiter(
        (-1 if w is None else w for w in m.partner), dtype=np.int64, count=m.n
    )


def check_matching(inst: RoommatesInstance, m: Matching) -> None:
    """Raise ValueError unless m matches along edges of inst."""
    if m.n != inst.n:
        raise ValueError("matching size does not fit the instance")
    arr = inst._arrays
    pa = _partner_array(m)
    hits = arr["dv"] == pa[arr["du"]]
    per_node = np.bincount(arr["du"][hits], minlength=inst.n)
    bad = (pa >= 0) & (per_node == 0)
    if bool(bad.any()):
        v = int(np.flatnonzero(bad)[0])
        raise ValueError(f"pair ({v}, {m.partner[v]}) is not an edge of the instance")


def _rank_of(inst: RoommatesInstance, u: int, v) -> int:
    """Position of v in u's list; being unmatched ranks below everyone."""
    if v is None:
        return len(inst.pref[u])
    try:
        return inst.pref[u].index(v)
    except ValueError:
        raise ValueError(f"{v} is not a neighbor of {u}") from None


def vote(inst: RoommatesInstance, u: int, a, b) -> int:
    """u's vote comparing partner a against partner b: +1, 0, or -1."""
    ranks = inst.rank[u]
    deg = len(inst.pref[u])
    ra = deg if a is None else ranks[a]
    rb = deg if b is None else ranks[b]
    return (ra < rb) - (rb < ra)


def edge_weight(inst: RoommatesInstance, m: Matching, u: int, v: int) -> int:
    """Combined vote of u and v for the edge uv against their partners."""
    return vote(inst, u, v, m.partner[u]) + vote(inst, v, u, m.partner[v])


def loop_weight(inst: RoommatesInstance, m: Matching, v: int) -> int:
    """Vote mass of leaving v unmatched: 0 when already unmatched, else -1."""
    return 0 if m.partner[v] is None else -1


def _weights(inst: RoommatesInstance, m: Matching) -> np.ndarray:
    """Edge weights aligned with the undirected arrays eu/ev of inst."""
    arr = inst._arrays
    r = (arr["off"][1:] - arr["off"][:-1]).copy()  # partner rank; degree if exposed
    pa = _partner_array(m)
    hit = arr["dv"] == pa[arr["du"]]
    r[arr["du"][hit]] = arr["dpos"][hit]
    return (np.sign(r[arr["eu"]] - arr["pu"]) + np.sign(r[arr["ev"]] - arr["pv"])).astype(
        np.int8
    )


def blocking_edges(inst: RoommatesInstance, m: Matching) -> tuple:
    """All edges both endpoints strictly prefer to their current state."""
    arr = inst._arrays
    w = _weights(inst, m)
    idx = np.flatnonzero(w == 2)
    return tuple(zip(arr["eu"][idx].tolist(), arr["ev"][idx].tolist()))


@dataclass(frozen=True)
class Star:
    """A blocking-edge star: a middle node with its degree-one partners."""

    middle: int
    leaves: tuple


def stars(inst: RoommatesInstance, m: Matching, blocking=None) -> tuple:
    """Stars of the blocking graph: middles with at least two leaves.

    A leaf is a node incident to exactly one blocking edge; a star
    forms around any node with two or more leaf partners.
    """
    if blocking is None:
        blocking = blocking_edges(inst, m)
    bdeg: dict = {}
    for u, v in blocking:
        bdeg[u] = bdeg.get(u, 0) + 1
        bdeg[v] = bdeg.get(v, 0) + 1
    leaves_of: dict = {}
    for u, v in blocking:
        if bdeg[v] == 1:
            leaves_of.setdefault(u, []).append(v)
        if bdeg[u] == 1:
            leaves_of.setdefault(v, []).append(u)
    return tuple(
        Star(middle=z, leaves=tuple(sorted(ls)))
        for z, ls in sorted(leaves_of.items())
        if len(ls) >= 2
    )


def reduced_graph(inst: RoommatesInstance, m: Matching) -> Graph:
    """The instance graph without its weight minus-two edges."""
    arr = inst._arrays
    w = _weights(inst, m)
    keep = w > -2
    return _csr_graph(inst.n, arr["eu"][keep], arr["ev"][keep])


def delta(inst: RoommatesInstance, m1: Matching, m2: Matching) -> int:
    """Vote balance of moving from m1 to m2: positive means m2 wins."""
    if m1.n != inst.n or m2.n != inst.n:
        raise ValueError("matching size does not fit the instance")
    total = 0
    for v in range(inst.n):
        a, b = m2.partner[v], m1.partner[v]
        if a == b:
            continue
        ra = _rank_of(inst, v, a)
        rb = _rank_of(inst, v, b)
        total += (ra < rb) - (rb < ra)
    return total


@dataclass(frozen=True)
class HalfIntegralMatching:
    """Edge values in {0, 1/2, 1} plus loops, covering each node exactly once.

    ones are full edges, loop_ones the nodes parked on their loop, and
    half_cycles odd cycles whose edges all carry one half.  Cycles are
    stored rotated to their smallest node with the smaller neighbor
    second, so equal objects compare equal.
    """

    ones: tuple
    loop_ones: tuple
    half_cycles: tuple

    def __post_init__(self):
        ones = tuple(sorted((min(u, v), max(u, v)) for u, v in self.ones))
        loops = tuple(sorted(self.loop_ones))
        cycles = []
        for cyc in self.half_cycles:
            cyc = tuple(cyc)
            if len(cyc) < 3 or len(cyc) % 2 == 0:
                raise ValueError(f"half cycle {cyc} is not odd of length >= 3")
            if len(set(cyc)) != len(cyc):
                raise ValueError(f"half cycle {cyc} repeats a node")
            i = cyc.index(min(cyc))
            rot = cyc[i:] + cyc[:i]
            if rot[-1] < rot[1]:
                rot = (rot[0],) + tuple(reversed(rot[1:]))
            cycles.append(rot)
        object.__setattr__(self, "ones", ones)
        object.__setattr__(self, "loop_ones", loops)
        object.__setattr__(self, "half_cycles", tuple(sorted(cycles)))

    def validate(self, inst: RoommatesInstance) -> None:
        """Raise ValueError unless this is a perfect half-integral matching."""
        cover = [0] * inst.n
        for u, v in self.ones:
            if (u, v) not in inst.edges:
                raise ValueError(f"edge ({u}, {v}) is not in the instance")
            cover[u] += 2
            cover[v] += 2
        for v in self.loop_ones:
            if not 0 <= v < inst.n:
                raise ValueError(f"loop node {v} is out of range")
            cover[v] += 2
        for cyc in self.half_cycles:
            for i, u in enumerate(cyc):
                v = cyc[(i + 1) % len(cyc)]
                if (min(u, v), max(u, v)) not in inst.edges:
                    raise ValueError(f"cycle edge ({u}, {v}) is not in the instance")
                cover[u] += 1
                cover[v] += 1
        for v, c in enumerate(cover):
            if c != 2:
                raise ValueError(f"node {v} is covered {c}/2 times, expected exactly 1")


def half_from_matching(inst: RoommatesInstance, m: Matching) -> HalfIntegralMatching:
    return HalfIntegralMatching(
        ones=m.pairs(), loop_ones=m.unmatched(), half_cycles=()
    )


def fractional_value_times_two(
    inst: RoommatesInstance, m: Matching, p: HalfIntegralMatching
) -> int:
    """Twice the vote value of p against m, an exact integer."""
    total = 0
    for u, v in p.ones:
        total += 2 * edge_weight(inst, m, u, v)
    for v in p.loop_ones:
        total += 2 * loop_weight(inst, m, v)
    for cyc in p.half_cycles:
        for i, u in enumerate(cyc):
            total += edge_weight(inst, m, u, cyc[(i + 1) % len(cyc)])
    return total


def fractional_value(
    inst: RoommatesInstance, m: Matching, p: HalfIntegralMatching
) -> Fraction:
    return Fraction(fractional_value_times_two(inst, m, p), 2)
