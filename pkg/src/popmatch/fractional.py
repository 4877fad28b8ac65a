"""Fractional popularity test with certificates.

Half-integral matchings can outvote a matching that no integral matching
beats. The characterization on top of the popularity analysis: a popular
matching stays popular against half-integral competition exactly when the
search in the auxiliary graph reaches no factor-critical component with
three or more nodes. A reached big component yields a defeating structure,
either an odd cycle hung on a star middle or an alternating path feeding
an odd cycle; both convert into an explicit half-integral matching that
wins by exactly half a vote.
"""

from __future__ import annotations

from dataclasses import dataclass

from .auxgraph import (
    KIND_ORIG,
    KIND_STAR,
    AuxGraph,
    blocking_partners_of,
    is_blocking_edge,
)
from .engine import (
    EngineError,
    Graph,
    even_path_from_roots,
    odd_cycle_through_root,
    reachable_set,
    shortest_alt_path_to_root,
)
from .model import (
    HalfIntegralMatching,
    Matching,
    RoommatesInstance,
    edge_weight,
    fractional_value_times_two,
    half_from_matching,
)
from .popularity import (
    DualWitness,
    InternalError,
    Unpopular,
    _analyze,
    _finish_popular,
    _finish_unpopular,
)


@dataclass(frozen=True)
class CycleThroughStar:
    """Odd cycle whose two end edges are the blocking edges at one middle node.

    cycle[0] is the middle; consecutive pairs (1,2), (3,4), ... are matched
    and the remaining edges tie the vote.
    """

    cycle: tuple[int, ...]
    middle: int


@dataclass(frozen=True)
class PathPlusCycle:
    """Alternating path from a blocking edge into the root of an odd cycle.

    path[0]-path[1] is the blocking edge, matched and tied edges alternate
    along the path, and path[-1] == cycle[0] is the only shared node.
    """

    path: tuple[int, ...]
    cycle: tuple[int, ...]
    blocking_edge: tuple[int, int]


@dataclass(frozen=True)
class FractionalPopular:
    witness: DualWitness

    popular = True


@dataclass(frozen=True)
class NotFractionalPopular:
    structure: CycleThroughStar | PathPlusCycle | None
    p: HalfIntegralMatching
    value_times_two: int
    from_unpopular: Unpopular | None

    popular = False


def is_fractional_popular(
    inst: RoommatesInstance, m: Matching
) -> FractionalPopular | NotFractionalPopular:
    """Decide fractional popularity of m and return a validated certificate."""
    an = _analyze(inst, m)
    if an.aug_path is not None:
        unpop = _finish_unpopular(inst, m, an)
        p = half_from_matching(inst, unpop.better)
        vt2 = fractional_value_times_two(inst, m, p)
        if vt2 != 2 * unpop.margin:
            raise InternalError(
                f"lifted matching scores {vt2}, expected {2 * unpop.margin}"
            )
        return NotFractionalPopular(
            structure=None, p=p, value_times_two=vt2, from_unpopular=unpop
        )
    pop = _finish_popular(inst, m, an)
    if not pop.witness.two_sets:
        return FractionalPopular(witness=pop.witness)
    s = extract_fractional_structure(inst, m, an)
    msg = check_fractional_structure(inst, m, s)
    if msg is not None:
        raise InternalError(f"constructed fractional structure is invalid: {msg}")
    p = structure_to_fractional_matching(inst, m, s)
    try:
        p.validate(inst)
    except ValueError as exc:
        raise InternalError(f"constructed half-integral matching is invalid: {exc}")
    vt2 = fractional_value_times_two(inst, m, p)
    if vt2 != 2:
        raise InternalError(f"fractional structure scores {vt2}, expected 2")
    return NotFractionalPopular(
        structure=s, p=p, value_times_two=2, from_unpopular=None
    )


def _graph_without(g: Graph, drop: set) -> Graph:
    kept = [e for e in g.edges() if e[0] not in drop and e[1] not in drop]
    return Graph.from_edges(g.n, kept)


def extract_fractional_structure(
    inst: RoommatesInstance, m: Matching, an
) -> CycleThroughStar | PathPlusCycle:
    """Defeating structure from the lowest reached big component."""
    aux = an.aux
    g = aux.graph
    match = an.match
    members = an.reach.members
    cands = [
        (comp, root)
        for comp, root in zip(an.ge.components, an.ge.roots)
        if len(comp) >= 3 and next(iter(comp)) in members
    ]
    if not cands:
        raise InternalError("no reached component of size 3 or more")
    comp, root = min(cands, key=lambda cr: min(cr[0]))

    if aux.kind[root] == KIND_STAR:
        cyc = odd_cycle_through_root(g, match, comp, root)
        mid = aux.payload[root]
        rest = []
        for i in cyc[1:]:
            if aux.kind[i] != KIND_ORIG:
                raise InternalError("star cycle passes a non-original node")
            rest.append(aux.payload[i])
        if mid in rest:
            raise InternalError("star middle collides with its own cycle")
        return CycleThroughStar(cycle=(mid, *rest), middle=mid)

    if aux.kind[root] != KIND_ORIG:
        raise InternalError(f"big component rooted at {aux.label_of(root)}")
    for i in comp:
        if aux.kind[i] != KIND_ORIG:
            raise InternalError("matched-root component contains a non-original node")
    q_aux = odd_cycle_through_root(g, match, comp, root)
    cycle = tuple(aux.payload[i] for i in q_aux)

    # the feeding path must stay off the rest of the component
    drop = set(comp)
    drop.discard(root)
    for v in list(drop):
        w = match[v]
        if w != -1 and w != root and w not in drop:
            drop.add(w)
    reduced = _graph_without(g, drop)
    match2 = [-1 if v in drop else match[v] for v in range(g.n)]
    p0 = None
    try:
        p0 = shortest_alt_path_to_root(reduced, match2, aux.seeds, root)
    except (ValueError, EngineError):
        p0 = None
    if p0 is None:
        rs = reachable_set(reduced, match2, aux.seeds)
        p0 = even_path_from_roots(reduced, match2, rs, root)
    if p0 is None:
        raise InternalError("cycle root unreachable outside its component")
    p0 = list(p0)

    while True:
        seed = p0[0]
        vs = []
        for i in p0[1:]:
            if aux.kind[i] != KIND_ORIG:
                raise InternalError("alternating path passes a non-original node")
            vs.append(aux.payload[i])
        if aux.kind[seed] == KIND_STAR:
            cand = [aux.payload[seed]]
        else:
            cand = blocking_partners_of(inst, m, vs[0])
        x = next((c for c in cand if c not in vs), None)
        if x is not None:
            break
        # every candidate lies on the path; restart behind the nearest one
        pos = min(vs.index(c) for c in cand) + 1
        if pos % 2 == 0:
            raise InternalError("blocking partner meets the path at an even position")
        vi = vs[pos - 1]
        if vi in aux.leaf_star:
            seed2 = aux.star_of[aux.leaf_star[vi]]
        elif vi in aux.b_of:
            seed2 = aux.b_of[vi]
        else:
            raise InternalError(f"node {vi} has no blocking attachment")
        p0 = [seed2] + p0[pos:]

    path = (x, *vs)
    if set(path) & set(cycle) != {cycle[0]}:
        raise InternalError("feeding path meets the cycle beyond its root")
    mx = m.partner[x]
    if mx is None:
        raise InternalError("path head is unmatched")
    if mx in path or mx in cycle:
        raise InternalError("path head's partner lies on the structure")
    return PathPlusCycle(path=path, cycle=cycle, blocking_edge=(x, vs[0]))


def _bad_node(inst: RoommatesInstance, seq) -> str | None:
    n = inst.n
    if any(not isinstance(v, int) or not 0 <= v < n for v in seq):
        return "node out of range"
    if len(set(seq)) != len(seq):
        return "repeated node"
    return None


def _edge_missing(inst: RoommatesInstance, a: int, b: int) -> bool:
    return (min(a, b), max(a, b)) not in inst.edges


def check_fractional_structure(
    inst: RoommatesInstance, m: Matching, s: CycleThroughStar | PathPlusCycle
) -> str | None:
    """None if s defeats m by construction, else the defect found."""
    if isinstance(s, CycleThroughStar):
        cyc = s.cycle
        msg = _bad_node(inst, cyc)
        if msg:
            return msg
        if len(cyc) < 3 or len(cyc) % 2 == 0:
            return f"cycle length {len(cyc)} is not odd and >= 3"
        if cyc[0] != s.middle:
            return "cycle does not start at the middle"
        for i in range(1, len(cyc) - 1, 2):
            if m.partner[cyc[i]] != cyc[i + 1]:
                return f"cycle nodes {cyc[i]} and {cyc[i + 1]} are not partners"
        if not is_blocking_edge(inst, m, cyc[0], cyc[1]):
            return f"edge {cyc[0]}-{cyc[1]} is not blocking"
        if not is_blocking_edge(inst, m, cyc[0], cyc[-1]):
            return f"edge {cyc[0]}-{cyc[-1]} is not blocking"
        for i in range(2, len(cyc) - 1, 2):
            a, b = cyc[i], cyc[i + 1]
            if _edge_missing(inst, a, b):
                return f"cycle edge {a}-{b} missing"
            if edge_weight(inst, m, a, b) != 0:
                return f"cycle edge {a}-{b} does not tie the vote"
        w = m.partner[s.middle]
        if w is None:
            return "middle is unmatched"
        if w in cyc:
            return "middle's partner lies on the cycle"
        return None

    if not isinstance(s, PathPlusCycle):
        return f"unknown structure {type(s).__name__}"
    path, cyc = s.path, s.cycle
    msg = _bad_node(inst, path) or _bad_node(inst, cyc)
    if msg:
        return msg
    if len(path) < 3 or len(path) % 2 == 0:
        return f"path length {len(path)} is not odd and >= 3"
    if len(cyc) < 3 or len(cyc) % 2 == 0:
        return f"cycle length {len(cyc)} is not odd and >= 3"
    if path[-1] != cyc[0]:
        return "path does not end at the cycle root"
    if set(path) & set(cyc) != {cyc[0]}:
        return "path and cycle share more than the root"
    if tuple(sorted(s.blocking_edge)) != tuple(sorted(path[:2])):
        return "declared blocking edge differs from the first path edge"
    if not is_blocking_edge(inst, m, path[0], path[1]):
        return f"edge {path[0]}-{path[1]} is not blocking"
    for i in range(1, len(path) - 1, 2):
        if m.partner[path[i]] != path[i + 1]:
            return f"path nodes {path[i]} and {path[i + 1]} are not partners"
    for i in range(2, len(path) - 1, 2):
        a, b = path[i], path[i + 1]
        if _edge_missing(inst, a, b):
            return f"path edge {a}-{b} missing"
        if edge_weight(inst, m, a, b) != 0:
            return f"path edge {a}-{b} does not tie the vote"
    for i in range(1, len(cyc) - 1, 2):
        if m.partner[cyc[i]] != cyc[i + 1]:
            return f"cycle nodes {cyc[i]} and {cyc[i + 1]} are not partners"
    loose = [(cyc[0], cyc[1]), (cyc[-1], cyc[0])]
    loose += [(cyc[i], cyc[i + 1]) for i in range(2, len(cyc) - 1, 2)]
    for a, b in loose:
        if _edge_missing(inst, a, b):
            return f"cycle edge {a}-{b} missing"
        if edge_weight(inst, m, a, b) != 0:
            return f"cycle edge {a}-{b} does not tie the vote"
    w = m.partner[path[0]]
    if w is None:
        return "path head is unmatched"
    if w in path or w in cyc:
        return "path head's partner lies on the structure"
    return None


def structure_to_fractional_matching(
    inst: RoommatesInstance, m: Matching, s: CycleThroughStar | PathPlusCycle
) -> HalfIntegralMatching:
    """Half-integral matching encoded by a defeating structure."""
    partner = m.partner
    if isinstance(s, CycleThroughStar):
        body = set(s.cycle)
        anchor = partner[s.middle]
        new_ones: list = []
    else:
        body = set(s.path) | set(s.cycle)
        anchor = partner[s.path[0]]
        new_ones = [
            (s.path[i], s.path[i + 1]) for i in range(0, len(s.path) - 1, 2)
        ]
    if anchor is None or anchor in body:
        raise InternalError("structure anchor is missing its outside partner")
    drop = body | {anchor}
    ones = [pr for pr in m.pairs() if pr[0] not in drop and pr[1] not in drop]
    ones.extend(new_ones)
    loops = [anchor] + list(m.unmatched())
    return HalfIntegralMatching(
        ones=tuple(ones), loop_ones=tuple(loops), half_cycles=(tuple(s.cycle),)
    )
