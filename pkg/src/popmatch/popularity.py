"""Popularity test with a certificate either way.

A matching M is popular when no other matching beats it in a head-to-head
vote. The test reduces to maximum-matching: M is popular exactly when the
matching induced in the auxiliary graph is maximum there. A negative answer
comes with a blocking structure (an alternating cycle or path anchored at
blocking edges) whose switch produces a matching that wins the vote; a
positive answer comes with a dual witness that certifies optimality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .auxgraph import (
    KIND_BLOCK,
    KIND_ORIG,
    KIND_STAR,
    KIND_U,
    AuxGraph,
    blocking_partners_of,
    build_aux,
    is_blocking_edge,
    unmatched_zero_neighbors_of,
)
from .engine import (
    GallaiEdmonds,
    ReachSet,
    _check_alternating_path,
    _run_search,
    _trace_even,
    check_reach_properties,
    gallai_edmonds,
    reachable_set,
)
from .model import (
    Matching,
    RoommatesInstance,
    _partner_array,
    _weights,
    delta,
)

CYCLE = "cycle"
PATH_TWO_BLOCKING = "path-two-blocking"
PATH_TO_UNMATCHED = "path-to-unmatched"


class InternalError(RuntimeError):
    """A certificate failed its own validation; indicates a bug, not bad input."""


@dataclass(frozen=True)
class BlockingStructure:
    """Node sequence whose switch beats the tested matching.

    kind "cycle": even cycle, consecutive odd edges matched, the closing
    edge (last, first) blocking.  kind "path-two-blocking": even path,
    odd edges unmatched, both end edges blocking.  kind "path-to-unmatched":
    even path, odd edges unmatched, first edge blocking, last node single.
    """

    kind: str
    nodes: tuple[int, ...]


@dataclass(frozen=True)
class DualWitness:
    """Feasible dual solution of value zero for the vote LP.

    alpha[v] in {-1, 0, 1} per node, two_sets a family of disjoint odd
    node sets each carrying dual value 2.  Feasibility plus zero total
    value pins the best head-to-head outcome against M at zero.
    """

    alpha: tuple[int, ...]
    two_sets: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class Popular:
    witness: DualWitness

    popular = True


@dataclass(frozen=True)
class Unpopular:
    structure: BlockingStructure
    better: Matching
    margin: int

    popular = False


@dataclass(frozen=True)
class _Analysis:
    """Shared output of the auxiliary-graph search, reused by the fractional test."""

    aux: AuxGraph
    match: list
    aug_path: tuple[int, ...] | None
    ge: GallaiEdmonds | None
    reach: ReachSet | None


def _analyze(inst: RoommatesInstance, m: Matching) -> _Analysis:
    aux = build_aux(inst, m)
    g = aux.graph
    match = list(aux.matching)
    roots = [v for v in range(g.n) if match[v] == -1]
    forest = _run_search(g, match, roots, stop_on_augment=True)
    if forest.aug is not None:
        v, w = forest.aug
        left = _trace_even(match, forest.p, v)
        right = _trace_even(match, forest.p, w)
        path = tuple(reversed(left)) + tuple(right)
        _check_alternating_path(g, match, list(path))
        return _Analysis(aux, match, path, None, None)
    ge = gallai_edmonds(g, match, forest)
    reach = reachable_set(g, match, aux.seeds)
    check_reach_properties(g, match, reach, ge, forbidden=aux.u_id)
    return _Analysis(aux, match, None, ge, reach)


def is_popular(inst: RoommatesInstance, m: Matching) -> Popular | Unpopular:
    """Decide popularity of m and return a validated certificate."""
    an = _analyze(inst, m)
    if an.aug_path is None:
        return _finish_popular(inst, m, an)
    return _finish_unpopular(inst, m, an)


def _finish_popular(inst: RoommatesInstance, m: Matching, an: _Analysis) -> Popular:
    witness = build_dual_witness(inst, m, an.aux, an.ge, an.reach)
    msg = witness_violation(inst, m, witness)
    if msg is not None:
        raise InternalError(f"constructed dual witness is invalid: {msg}")
    return Popular(witness=witness)


def _finish_unpopular(inst: RoommatesInstance, m: Matching, an: _Analysis) -> Unpopular:
    s = extract_blocking_structure(inst, m, an.aux, an.aug_path)
    msg = check_blocking_structure(inst, m, s)
    if msg is not None:
        raise InternalError(f"constructed blocking structure is invalid: {msg}")
    better = more_popular_matching(inst, m, s)
    margin = delta(inst, m, better)
    if margin < 1:
        raise InternalError(f"switched matching wins by {margin}, expected at least 1")
    return Unpopular(structure=s, better=better, margin=margin)


def _star_middle_or_lowest_partner(
    inst: RoommatesInstance, m: Matching, aux: AuxGraph, end: int, v: int
) -> int:
    """Blocking partner of v selected by the auxiliary endpoint reached.

    A star endpoint pins v (a leaf) to the star's middle; a plain
    blocking-node endpoint leaves the choice free, take the lowest.
    """
    if aux.kind[end] == KIND_STAR:
        return aux.payload[end]
    return blocking_partners_of(inst, m, v)[0]


def extract_blocking_structure(
    inst: RoommatesInstance, m: Matching, aux: AuxGraph, path: tuple[int, ...]
) -> BlockingStructure:
    """Turn an augmenting path of the auxiliary graph into a blocking structure."""
    if len(path) < 2:
        raise InternalError("augmenting path too short")
    if aux.kind[path[-1]] == KIND_U:
        path = tuple(reversed(path))

    if aux.kind[path[0]] == KIND_U:
        end = path[-1]
        vs = [aux.payload[i] for i in path[1:-1]]
        if not vs:
            # single edge from the unmatched hub to a blocking node
            if aux.kind[end] == KIND_BLOCK:
                o = aux.payload[end]
                y = blocking_partners_of(inst, m, o)[0]
            else:
                leaves = [l for l in aux.star_leaves[aux.payload[end]] if m.partner[l] is None]
                o = min(leaves)
                y = aux.payload[end]
            return BlockingStructure(PATH_TO_UNMATCHED, (y, o))
        x = unmatched_zero_neighbors_of(inst, m, vs[0])[0]
        y = _star_middle_or_lowest_partner(inst, m, aux, end, vs[-1])
        if y == x:
            return BlockingStructure(PATH_TO_UNMATCHED, (vs[-1], x))
        if y in vs:
            i = vs.index(y) + 1
            if i % 2 == 1:
                return BlockingStructure(CYCLE, tuple(vs[i - 1 :]))
            nodes = (vs[-1],) + tuple(reversed(vs[:i])) + (x,)
            return BlockingStructure(PATH_TO_UNMATCHED, nodes)
        nodes = (y,) + tuple(reversed(vs)) + (x,)
        return BlockingStructure(PATH_TO_UNMATCHED, nodes)

    vs = [aux.payload[i] for i in path[1:-1]]
    if len(vs) < 2:
        raise InternalError("augmenting path between blocking nodes has no matched interior")
    if is_blocking_edge(inst, m, vs[0], vs[-1]):
        return BlockingStructure(CYCLE, tuple(vs))
    z1 = _star_middle_or_lowest_partner(inst, m, aux, path[0], vs[0])
    z2 = _star_middle_or_lowest_partner(inst, m, aux, path[-1], vs[-1])
    if z1 == z2:
        # the shared partner can serve only one side; the other endpoint
        # must have a second blocking partner to switch to
        alts2 = [c for c in blocking_partners_of(inst, m, vs[-1]) if c != z2]
        if aux.kind[path[-1]] != KIND_STAR and alts2:
            z2 = alts2[0]
        else:
            alts1 = [c for c in blocking_partners_of(inst, m, vs[0]) if c != z1]
            if aux.kind[path[0]] == KIND_STAR or not alts1:
                raise InternalError("both path endpoints are pinned to one blocking partner")
            z1 = alts1[0]
    in1 = vs.index(z1) + 1 if z1 in vs else 0
    in2 = vs.index(z2) + 1 if z2 in vs else 0
    if in1 == 0 and in2 == 0:
        return BlockingStructure(PATH_TWO_BLOCKING, (z1,) + tuple(vs) + (z2,))
    if in1 and in1 % 2 == 0:
        return BlockingStructure(CYCLE, tuple(vs[:in1]))
    if in2 and in2 % 2 == 1:
        return BlockingStructure(CYCLE, tuple(vs[in2 - 1 :]))
    if in1 and in2 == 0:
        nodes = (vs[0],) + tuple(vs[in1 - 1 :]) + (z2,)
        return BlockingStructure(PATH_TWO_BLOCKING, nodes)
    if in2 and in1 == 0:
        nodes = (z1,) + tuple(vs[:in2]) + (vs[-1],)
        return BlockingStructure(PATH_TWO_BLOCKING, nodes)
    # both partners lie inside the path, z1 at odd position j, z2 at even l
    j, l = in1, in2
    if j < l:
        nodes = (vs[0],) + tuple(vs[j - 1 : l]) + (vs[-1],)
    else:
        nodes = (vs[j - 1],) + tuple(vs[:l]) + (vs[-1],)
    return BlockingStructure(PATH_TWO_BLOCKING, nodes)


def check_blocking_structure(
    inst: RoommatesInstance, m: Matching, s: BlockingStructure
) -> str | None:
    """None if s is a well-formed blocking structure for m, else the defect."""
    seq = s.nodes
    n = inst.n
    if any(not isinstance(v, int) or not 0 <= v < n for v in seq):
        return "node out of range"
    if len(set(seq)) != len(seq):
        return "repeated node"
    if len(seq) % 2 != 0:
        return f"odd node count {len(seq)}"

    if s.kind == CYCLE:
        if len(seq) < 4:
            return "cycle shorter than 4"
        edges = [(seq[i], seq[i + 1]) for i in range(len(seq) - 1)]
        closing = (seq[-1], seq[0])
        for i, (a, b) in enumerate(edges):
            if i % 2 == 0:
                if m.partner[a] != b:
                    return f"cycle edge {a}-{b} should be matched"
            else:
                if (min(a, b), max(a, b)) not in inst.edges:
                    return f"cycle edge {a}-{b} missing"
                if m.partner[a] == b:
                    return f"cycle edge {a}-{b} should be unmatched"
        if not is_blocking_edge(inst, m, *closing):
            return f"closing edge {closing[0]}-{closing[1]} is not blocking"
        return None

    if s.kind not in (PATH_TWO_BLOCKING, PATH_TO_UNMATCHED):
        return f"unknown kind {s.kind!r}"
    if len(seq) < 2 or (s.kind == PATH_TWO_BLOCKING and len(seq) < 4):
        return "path too short"
    for i in range(len(seq) - 1):
        a, b = seq[i], seq[i + 1]
        if i % 2 == 1:
            if m.partner[a] != b:
                return f"path edge {a}-{b} should be matched"
        else:
            if (min(a, b), max(a, b)) not in inst.edges:
                return f"path edge {a}-{b} missing"
            if m.partner[a] == b:
                return f"path edge {a}-{b} should be unmatched"
    if not is_blocking_edge(inst, m, seq[0], seq[1]):
        return f"first edge {seq[0]}-{seq[1]} is not blocking"
    if s.kind == PATH_TWO_BLOCKING:
        if not is_blocking_edge(inst, m, seq[-2], seq[-1]):
            return f"last edge {seq[-2]}-{seq[-1]} is not blocking"
    else:
        if m.partner[seq[-1]] is not None:
            return f"end node {seq[-1]} is matched"
    return None


def more_popular_matching(
    inst: RoommatesInstance, m: Matching, s: BlockingStructure
) -> Matching:
    """Apply the switch encoded by a blocking structure."""
    partner: list = list(m.partner)
    for v in s.nodes:
        w = partner[v]
        if w is not None:
            partner[w] = None
            partner[v] = None
    seq = s.nodes
    if s.kind == CYCLE:
        new = [(seq[i], seq[i + 1]) for i in range(1, len(seq) - 1, 2)]
        new.append((seq[-1], seq[0]))
    else:
        new = [(seq[i], seq[i + 1]) for i in range(0, len(seq), 2)]
    for a, b in new:
        partner[a] = b
        partner[b] = a
    return Matching(tuple(partner))


def build_dual_witness(
    inst: RoommatesInstance,
    m: Matching,
    aux: AuxGraph,
    ge: GallaiEdmonds,
    reach: ReachSet,
) -> DualWitness:
    """Dual witness from the decomposition of the auxiliary graph.

    Reached factor-critical components of size >= 3 become the odd sets
    (a star root is traded for its middle); reached nodes take alpha -1
    in the exposed part and +1 in the separator, everyone else 0.
    """
    members = reach.members
    two_sets = []
    for comp, root in zip(ge.components, ge.roots):
        if len(comp) < 3 or next(iter(comp)) not in members:
            continue
        kind = aux.kind[root]
        if kind == KIND_ORIG:
            group = frozenset(aux.payload[i] for i in comp)
        elif kind == KIND_STAR:
            group = frozenset(aux.payload[i] for i in comp if i != root)
            group |= {aux.payload[root]}
        else:
            raise InternalError(
                f"reached component of size {len(comp)} rooted at {aux.label_of(root)}"
            )
        if len(group) != len(comp) or len(group) % 2 == 0:
            raise InternalError("odd set construction collided")
        two_sets.append(group)
    alpha = [0] * inst.n
    for i in members:
        if aux.kind[i] != KIND_ORIG:
            continue
        v = aux.payload[i]
        if i in ge.d:
            alpha[v] = -1
        elif i in ge.a:
            alpha[v] = 1
        else:
            raise InternalError(f"reached node {i} in the perfectly matched part")
    two_sets.sort(key=min)
    return DualWitness(alpha=tuple(alpha), two_sets=tuple(two_sets))


def witness_violation(
    inst: RoommatesInstance, m: Matching, w: DualWitness
) -> str | None:
    """None if w is a feasible zero-value dual witness for m, else the defect."""
    n = inst.n
    if len(w.alpha) != n:
        return f"alpha has length {len(w.alpha)}, expected {n}"
    alpha = np.asarray(w.alpha, dtype=np.int64)
    if alpha.size and (np.abs(alpha) > 1).any():
        return "alpha value outside {-1, 0, 1}"
    setid = np.full(n, -1, dtype=np.int64)
    for k, group in enumerate(w.two_sets):
        if len(group) < 3 or len(group) % 2 == 0:
            return f"odd set #{k} has size {len(group)}"
        for v in group:
            if not isinstance(v, int) or not 0 <= v < n:
                return f"odd set #{k} contains invalid node {v!r}"
            if setid[v] != -1:
                return f"node {v} lies in two odd sets"
            setid[v] = k
    arr = inst._arrays
    eu, ev = arr["eu"], arr["ev"]
    wts = _weights(inst, m)
    same = (setid[eu] >= 0) & (setid[eu] == setid[ev])
    lhs = alpha[eu] + alpha[ev] + 2 * same
    bad = lhs < wts
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        return (
            f"edge {int(eu[i])}-{int(ev[i])} is undercovered: "
            f"{int(lhs[i])} < {int(wts[i])}"
        )
    exposed = _partner_array(m) < 0
    if (alpha[exposed] < 0).any():
        v = int(np.flatnonzero(exposed & (alpha < 0))[0])
        return f"unmatched node {v} has negative alpha"
    total = int(alpha.sum()) + sum(len(g) - 1 for g in w.two_sets)
    if total != 0:
        return f"dual objective is {total}, expected 0"
    return None
