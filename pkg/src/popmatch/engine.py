"""Blossom-based matching search and the decompositions built on it.

One search routine grows alternating forests from a set of exposed
roots, contracting odd cycles on the fly.  Everything else here is a
thin layer over that search: augmenting paths, maximality tests, the
Gallai-Edmonds decomposition, alternating reachability, and recovery
of odd alternating cycles inside factor-critical components.

Vertices are 0..n-1, matchings are partner lists with -1 for exposed
vertices.  All traversals run in sorted adjacency order, so every
result is deterministic.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field


class EngineError(RuntimeError):
    """An internal invariant of the matching machinery failed."""


_EVEN = 1
_ODD = 2


class Graph:
    """Undirected simple graph in CSR form with sorted adjacency."""

    __slots__ = ("n", "off", "nbr")

    def __init__(self, n, off, nbr):
        self.n = n
        self.off = off
        self.nbr = nbr

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        adj = [[] for _ in range(n)]
        seen = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                continue
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        off = [0] * (n + 1)
        nbr: list[int] = []
        for v in range(n):
            adj[v].sort()
            nbr.extend(adj[v])
            off[v + 1] = len(nbr)
        return cls(n, off, nbr)

    def neighbors(self, v: int) -> list[int]:
        return self.nbr[self.off[v]:self.off[v + 1]]

    def degree(self, v: int) -> int:
        return self.off[v + 1] - self.off[v]

    def has_edge(self, u: int, v: int) -> bool:
        lo, hi = self.off[u], self.off[u + 1]
        i = bisect_left(self.nbr, v, lo, hi)
        return i < hi and self.nbr[i] == v

    def edge_count(self) -> int:
        return len(self.nbr) // 2

    def edges(self):
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    yield u, v


@dataclass
class _Forest:
    """State left behind by one alternating-forest search."""

    label: list
    p: list
    root: list
    aug: tuple | None


def _find(dsu, x):
    while dsu[x] != x:
        dsu[x] = dsu[dsu[x]]
        x = dsu[x]
    return x


def _lca(match, p, dsu, visit, stamp, a, b):
    # climb from both endpoints alternately, one base step at a time
    a = _find(dsu, a)
    b = _find(dsu, b)
    while a != -1 or b != -1:
        if a != -1:
            if visit[a] == stamp:
                return a
            visit[a] = stamp
            if match[a] == -1:
                a = -1
            else:
                a = _find(dsu, p[match[a]])
        a, b = b, a
    raise EngineError("no common blossom base for an in-tree edge")


def _mark_path(match, p, dsu, label, queue, pending, v, ca, child):
    # walk from v up to the blossom base, rewiring parent pointers so
    # later traces can cross the contracted cycle in either direction
    while _find(dsu, v) != ca:
        o = match[v]
        if o == -1:
            raise EngineError("blossom walk passed an exposed vertex")
        pending.append(_find(dsu, v))
        pending.append(_find(dsu, o))
        p[v] = child
        if label[o] != _EVEN:
            label[o] = _EVEN
            queue.append(o)
        child = o
        v = p[o]


def _run_search(g: Graph, match: list, roots, stop_on_augment: bool) -> _Forest:
    """Grow alternating trees from `roots` until exhaustion.

    With stop_on_augment the search returns as soon as two trees meet
    (the meeting edge is reported in the forest), otherwise such a
    meeting means the caller believed a non-maximum matching was
    maximum and a ValueError is raised.  Meeting an exposed vertex
    that is not a root raises ValueError for the same reason, except
    when every exposed vertex is a root, where it cannot happen.
    """
    n = g.n
    off = g.off
    nbr = g.nbr
    label = [0] * n
    p = [-1] * n
    root = [-1] * n
    dsu = list(range(n))
    visit = [-1] * n
    stamp = 0
    queue: list[int] = []
    for r in roots:
        if match[r] != -1:
            raise ValueError(f"root {r} is not exposed")
        if label[r] == _EVEN:
            raise ValueError(f"duplicate root {r}")
        label[r] = _EVEN
        root[r] = r
        queue.append(r)

    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        mv = match[v]
        rv = root[v]
        for w in nbr[off[v]:off[v + 1]]:
            if w == mv:
                continue
            lw = label[w]
            if lw == _ODD:
                continue
            if lw == _EVEN:
                bv = v
                while dsu[bv] != bv:
                    dsu[bv] = dsu[dsu[bv]]
                    bv = dsu[bv]
                bw = w
                while dsu[bw] != bw:
                    dsu[bw] = dsu[dsu[bw]]
                    bw = dsu[bw]
                if bv == bw:
                    continue
                if rv != root[w]:
                    if stop_on_augment:
                        return _Forest(label, p, root, (v, w))
                    raise ValueError("matching is not maximum")
                stamp += 1
                ca = _lca(match, p, dsu, visit, stamp, bv, bw)
                pending: list[int] = []
                _mark_path(match, p, dsu, label, queue, pending, v, ca, w)
                _mark_path(match, p, dsu, label, queue, pending, w, ca, v)
                for x in pending:
                    rx = _find(dsu, x)
                    if rx != ca:
                        dsu[rx] = ca
            else:
                mw = match[w]
                if mw == -1:
                    # w is exposed yet was not given as a root
                    if stop_on_augment:
                        raise EngineError("exposed vertex outside the root set")
                    raise ValueError("matching is not maximum")
                if label[mw] != 0:
                    raise EngineError("partner of a fresh odd vertex is labeled")
                label[w] = _ODD
                p[w] = v
                root[w] = rv
                label[mw] = _EVEN
                root[mw] = rv
                queue.append(mw)
    return _Forest(label, p, root, None)


def _trace_even(match, p, x):
    """Walk from an even vertex to its tree root, listing the vertices."""
    seq = [x]
    limit = len(match) + 1
    while match[x] != -1:
        o = match[x]
        x = p[o]
        seq.append(o)
        seq.append(x)
        if len(seq) > limit:
            raise EngineError("trace does not terminate")
    return seq


def _check_alternating_path(g, match, path):
    if len(path) % 2 != 0:
        raise EngineError("augmenting path has odd vertex count")
    if len(set(path)) != len(path):
        raise EngineError("augmenting path revisits a vertex")
    if match[path[0]] != -1 or match[path[-1]] != -1:
        raise EngineError("augmenting path end is not exposed")
    for i in range(len(path) - 1):
        a, b = path[i], path[i + 1]
        if not g.has_edge(a, b):
            raise EngineError("augmenting path uses a missing edge")
        if i % 2 == 0:
            if match[a] == b:
                raise EngineError("augmenting path misplaces a matched edge")
        elif match[a] != b:
            raise EngineError("augmenting path skips a matched edge")


def _validate_matching(g, match):
    if len(match) != g.n:
        raise ValueError("matching length does not fit the graph")
    for v, w in enumerate(match):
        if w == -1:
            continue
        if not 0 <= w < g.n or w == v or match[w] != v:
            raise ValueError(f"matching entry {v} -> {w} is not an involution")
        if not g.has_edge(v, w):
            raise ValueError(f"matched pair ({v}, {w}) is not an edge")


def find_augmenting_path(g: Graph, match: list) -> list | None:
    """Return an augmenting path as a vertex list, or None if maximum."""
    _validate_matching(g, match)
    roots = [v for v in range(g.n) if match[v] == -1]
    if not roots:
        return None
    forest = _run_search(g, match, roots, stop_on_augment=True)
    if forest.aug is None:
        return None
    v, w = forest.aug
    path = _trace_even(match, forest.p, v)[::-1] + _trace_even(match, forest.p, w)
    _check_alternating_path(g, match, path)
    return path


def augment(match: list, path: list) -> None:
    """Flip a matching along an augmenting path, in place."""
    for i in range(0, len(path), 2):
        a, b = path[i], path[i + 1]
        match[a] = b
        match[b] = a


def is_maximum(g: Graph, match: list) -> bool:
    return find_augmenting_path(g, match) is None


def maximum_matching(g: Graph) -> list:
    """Compute a maximum matching, greedy start plus augmentation."""
    match = [-1] * g.n
    for v in range(g.n):
        if match[v] != -1:
            continue
        for w in g.neighbors(v):
            if match[w] == -1:
                match[v] = w
                match[w] = v
                break
    while True:
        path = find_augmenting_path(g, match)
        if path is None:
            return match
        augment(match, path)


@dataclass(frozen=True)
class GallaiEdmonds:
    """Canonical partition of a graph relative to a maximum matching.

    d collects the vertices missed by some maximum matching, a their
    outside neighbors, c the rest.  components lists the connected
    pieces of the subgraph induced on d, each factor-critical, and
    roots holds the one vertex per component that the given matching
    leaves exposed or matches outside the component.
    """

    d: frozenset
    a: frozenset
    c: frozenset
    components: tuple
    roots: tuple


def gallai_edmonds(g: Graph, match: list, forest: _Forest | None = None) -> GallaiEdmonds:
    """Decompose g relative to a maximum matching.

    Raises ValueError if the matching is not maximum.
    """
    if forest is None:
        _validate_matching(g, match)
        roots = [v for v in range(g.n) if match[v] == -1]
        forest = _run_search(g, match, roots, stop_on_augment=False)
    elif forest.aug is not None:
        raise ValueError("matching is not maximum")
    label = forest.label
    d = frozenset(v for v in range(g.n) if label[v] == _EVEN)
    a = frozenset(v for v in range(g.n) if label[v] == _ODD)
    c = frozenset(v for v in range(g.n) if label[v] == 0)

    for v in a:
        if match[v] == -1 or match[v] not in d:
            raise EngineError(f"vertex {v} separates without a partner in d")
    for v in c:
        if match[v] == -1 or match[v] not in c:
            raise EngineError(f"vertex {v} is unreachable yet not matched within c")

    components = []
    roots_out = []
    seen = set()
    for s in range(g.n):
        if s not in d or s in seen:
            continue
        comp = {s}
        seen.add(s)
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g.neighbors(x):
                if y in d and y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        exits = [v for v in comp if match[v] == -1 or match[v] not in comp]
        if len(exits) != 1:
            raise EngineError("component misses a unique root")
        r = exits[0]
        if match[r] != -1 and match[r] not in a:
            raise EngineError("component root is matched outside a")
        components.append(frozenset(comp))
        roots_out.append(r)
    order = sorted(range(len(components)), key=lambda i: min(components[i]))
    return GallaiEdmonds(
        d=d,
        a=a,
        c=c,
        components=tuple(components[i] for i in order),
        roots=tuple(roots_out[i] for i in order),
    )


@dataclass(frozen=True)
class ReachSet:
    """Vertices touched by alternating paths from a set of exposed roots.

    even is exact: v is in it iff some even-length alternating path
    from a root ends at v.  odd only records vertices whose final
    label stayed odd, a sound subset of the odd-reachable vertices.
    The raw search arrays ride along for later path recovery.
    """

    members: frozenset
    even: frozenset
    odd: frozenset
    label: list = field(compare=False, repr=False)
    p: list = field(compare=False, repr=False)
    root: list = field(compare=False, repr=False)


def reachable_set(g: Graph, match: list, roots) -> ReachSet:
    """Alternating reachability from `roots`, which must all be exposed.

    Raises ValueError if the search stumbles on an augmenting path,
    which can only happen when the matching is not maximum.
    """
    _validate_matching(g, match)
    forest = _run_search(g, match, sorted(roots), stop_on_augment=False)
    label = forest.label
    even = frozenset(v for v in range(g.n) if label[v] == _EVEN)
    odd = frozenset(v for v in range(g.n) if label[v] == _ODD)
    return ReachSet(
        members=even | odd,
        even=even,
        odd=odd,
        label=label,
        p=forest.p,
        root=forest.root,
    )


def even_path_from_roots(g: Graph, match: list, reach: ReachSet, target: int) -> list | None:
    """Recover a simple alternating path root .. target of even length.

    Returns None when target is not even-reachable in the given
    reach structure.  The recovered path ends with the matched edge
    of target unless target itself is a root.
    """
    if reach.label[target] != _EVEN:
        return None
    path = _trace_even(match, reach.p, target)[::-1]
    if len(path) % 2 != 1 or len(set(path)) != len(path):
        raise EngineError("even-path trace is not a simple path")
    if match[path[0]] != -1:
        raise EngineError("even-path trace does not start at a root")
    for i in range(len(path) - 1):
        a, b = path[i], path[i + 1]
        if not g.has_edge(a, b):
            raise EngineError("even-path trace uses a missing edge")
        if i % 2 == 0:
            if match[a] == b:
                raise EngineError("even-path trace misplaces a matched edge")
        elif match[a] != b:
            raise EngineError("even-path trace skips a matched edge")
    return path


def shortest_alt_path_to_root(g: Graph, match: list, seeds, target: int) -> list:
    """Breadth-first alternating walk from `seeds` to `target`.

    The walk starts at exposed seeds with a non-matching edge and must
    arrive at target through its matched edge.  The shortest such walk
    is extracted and returned when it happens to be a simple path.
    Raises ValueError when no walk exists and EngineError when the
    extracted walk revisits a vertex; callers fall back to the exact
    search in that case.
    """
    n = g.n
    prev = [-1] * (2 * n)
    state_dist = [-1] * (2 * n)
    queue = []
    for s in seeds:
        if match[s] != -1:
            raise ValueError(f"seed {s} is not exposed")
        state_dist[2 * s] = 0
        queue.append(2 * s)
    qi = 0
    goal = 2 * target
    while qi < len(queue):
        st = queue[qi]
        qi += 1
        if st == goal:
            break
        v, parity = st >> 1, st & 1
        if parity == 0:
            mv = match[v]
            for w in g.neighbors(v):
                if w == mv:
                    continue
                nxt = 2 * w + 1
                if state_dist[nxt] == -1:
                    state_dist[nxt] = state_dist[st] + 1
                    prev[nxt] = st
                    queue.append(nxt)
        else:
            w = match[v]
            if w != -1:
                nxt = 2 * w
                if state_dist[nxt] == -1:
                    state_dist[nxt] = state_dist[st] + 1
                    prev[nxt] = st
                    queue.append(nxt)
    if state_dist[goal] == -1:
        raise ValueError("target is not alternately reachable from the seeds")
    rev = []
    st = goal
    while st != -1:
        rev.append(st >> 1)
        st = prev[st]
    path = rev[::-1]
    if len(set(path)) != len(path):
        raise EngineError("shortest alternating walk is not a simple path")
    return path


def odd_cycle_through_root(g: Graph, match: list, component, root: int) -> list:
    """An odd alternating cycle through `root` inside one component.

    The component must be factor-critical with the matching covering
    everything but root inside it.  The returned vertex list starts at
    root; consecutive pairs after root are matched edges and the two
    edges at root are non-matching.
    """
    comp = sorted(component)
    if root not in component:
        raise ValueError("root lies outside the component")
    index = {v: i for i, v in enumerate(comp)}
    k = len(comp)
    edges = []
    for v in comp:
        for w in g.neighbors(v):
            if w in index and v < w:
                edges.append((index[v], index[w]))
    sub = Graph.from_edges(k, edges)
    sub_match = [-1] * k
    for v in comp:
        w = match[v]
        if w != -1 and w in index:
            sub_match[index[v]] = index[w]
    for i, v in enumerate(comp):
        if v != root and sub_match[i] == -1:
            raise ValueError(f"vertex {v} is not matched inside the component")
    if sub_match[index[root]] != -1:
        raise ValueError("root is matched inside the component")

    forest = _run_search(sub, sub_match, [index[root]], stop_on_augment=False)
    if any(lb != _EVEN for lb in forest.label):
        raise ValueError("component is not factor-critical from this root")
    r = index[root]
    for a in sub.neighbors(r):
        seq = _trace_even(sub_match, forest.p, a)
        cycle = seq[::-1]
        if cycle[0] != r or len(cycle) < 3 or len(cycle) % 2 == 0:
            continue
        if len(set(cycle)) != len(cycle):
            continue
        ok = all(sub.has_edge(cycle[i], cycle[i + 1]) for i in range(len(cycle) - 1))
        ok = ok and all(
            sub_match[cycle[i]] == cycle[i + 1] for i in range(1, len(cycle) - 1, 2)
        )
        if ok:
            return [comp[i] for i in cycle]
    raise EngineError("no valid odd cycle through the component root")


def check_reach_properties(
    g: Graph, match: list, reach: ReachSet, ge: GallaiEdmonds, forbidden: int = -1
) -> None:
    """Structural facts a reachable set must satisfy at a maximum matching.

    The reached set is closed under matched edges, avoids c entirely,
    contains d-components either fully or not at all, and no edge
    leaves its d-part.  A forbidden vertex (>= 0) must not be reached.
    Violations raise EngineError since they can only come from bugs.
    """
    members = reach.members
    if forbidden >= 0 and forbidden in members:
        raise EngineError(f"forbidden vertex {forbidden} was reached")
    for v in members:
        w = match[v]
        if w != -1 and w not in members:
            raise EngineError(f"reached set is not closed under the matched edge {v}-{w}")
    if members & ge.c:
        raise EngineError("reached set meets the perfectly matched part")
    for comp in ge.components:
        inside = comp & members
        if inside and inside != comp:
            raise EngineError("reached set splits a factor-critical component")
    for v in members & ge.d:
        for w in g.neighbors(v):
            if w not in members:
                raise EngineError(f"edge {v}-{w} leaves the reached set from its d-part")
