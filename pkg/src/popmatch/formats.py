"""File formats and certificate documents.

Instances are plain text: the node count on the first line, then one line
per node with its neighbors in strict preference order. Matchings are one
`i j` pair per line. `#` starts a comment in both. Certificates travel as
JSON documents that re-verify against the instance and matching on load.
"""

from __future__ import annotations

import json

from .fractional import (
    CycleThroughStar,
    FractionalPopular,
    NotFractionalPopular,
    PathPlusCycle,
    check_fractional_structure,
    structure_to_fractional_matching,
)
from .model import (
    HalfIntegralMatching,
    Matching,
    RoommatesInstance,
    check_matching,
    delta,
    fractional_value_times_two,
)
from .popularity import (
    BlockingStructure,
    DualWitness,
    Popular,
    Unpopular,
    check_blocking_structure,
    witness_violation,
)

VERDICTS = ("popular", "unpopular", "fractional-popular", "not-fractional-popular")


class ParseError(ValueError):
    """Malformed instance, matching, or certificate text."""


def _tokens(raw: str) -> list[tuple[int, str]]:
    """(column, token) pairs of a line with any comment stripped."""
    line = raw.split("#", 1)[0]
    out = []
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        out.append((col + 1, tok))
        col += len(tok)
    return out


def _int_token(lineno: int, col: int, tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(
            f"line {lineno}, column {col}: expected an integer, got {tok!r}"
        ) from None


def parse_instance(text: str) -> RoommatesInstance:
    """Read the preference-list format, validating as it goes.

    After the count line, every line that is not a comment is one node's
    row in order; an isolated node's row is empty. Trailing blank lines
    are tolerated.
    """
    n = None
    rows: list[tuple[int, list[int]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.lstrip().startswith("#"):
            continue
        toks = _tokens(raw)
        if n is None:
            if not toks:
                continue
            if len(toks) != 1:
                raise ParseError(f"line {lineno}: expected only the node count")
            n = _int_token(lineno, *toks[0])
            if n < 0:
                raise ParseError(f"line {lineno}: negative node count {n}")
            continue
        rows.append((lineno, [_int_token(lineno, c, t) for c, t in toks]))
    if n is None:
        raise ParseError("missing the node count line")
    while len(rows) > n and not rows[-1][1]:
        rows.pop()
    if len(rows) != n:
        raise ParseError(f"expected {n} preference lines, found {len(rows)}")
    seen_of: list[set] = []
    for i, (lineno, ids) in enumerate(rows):
        seen = set()
        for j in ids:
            if not 0 <= j < n:
                raise ParseError(f"line {lineno}: node {i} lists {j}, out of range")
            if j == i:
                raise ParseError(f"line {lineno}: node {i} lists itself")
            if j in seen:
                raise ParseError(f"line {lineno}: node {i} lists {j} twice")
            seen.add(j)
        seen_of.append(seen)
    for i, (lineno, ids) in enumerate(rows):
        for j in ids:
            if i not in seen_of[j]:
                raise ParseError(
                    f"line {lineno}: node {i} lists {j} but {j} does not list {i} back"
                )
    return RoommatesInstance(tuple(tuple(ids) for _, ids in rows))


def serialize_instance(inst: RoommatesInstance) -> str:
    lines = [str(inst.n)]
    for row in inst.pref:
        lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_matching(text: str, inst: RoommatesInstance) -> Matching:
    """Read `i j` pair lines against an already parsed instance."""
    pairs = []
    used = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        if len(toks) != 2:
            raise ParseError(f"line {lineno}: expected exactly two node ids")
        u = _int_token(lineno, *toks[0])
        v = _int_token(lineno, *toks[1])
        for w in (u, v):
            if not 0 <= w < inst.n:
                raise ParseError(f"line {lineno}: node {w} is out of range")
            if w in used:
                raise ParseError(
                    f"line {lineno}: node {w} already matched on line {used[w]}"
                )
            used[w] = lineno
        if u == v:
            raise ParseError(f"line {lineno}: node {u} paired with itself")
        if (min(u, v), max(u, v)) not in inst.edges:
            raise ParseError(f"line {lineno}: pair {u} {v} is not an instance edge")
        pairs.append((u, v))
    return Matching.from_pairs(inst, pairs)


def serialize_matching(m: Matching) -> str:
    lines = [f"{u} {v}" for u, v in m.pairs()]
    return "\n".join(lines) + ("\n" if lines else "")


def _witness_doc(w: DualWitness) -> dict:
    return {
        "alpha": {str(v): int(a) for v, a in enumerate(w.alpha)},
        "two_sets": [sorted(s) for s in w.two_sets],
    }


def _structure_doc(s: BlockingStructure) -> dict:
    seq = s.nodes
    if s.kind == "cycle":
        blocking = [[seq[-1], seq[0]]]
    elif s.kind == "path-two-blocking":
        blocking = [[seq[0], seq[1]], [seq[-2], seq[-1]]]
    else:
        blocking = [[seq[0], seq[1]]]
    return {"kind": s.kind, "nodes": list(seq), "blocking_edges": blocking}


def _pairs_doc(pairs) -> list:
    return [[u, v] for u, v in pairs]


def result_to_document(res) -> dict:
    """JSON-ready certificate document for any verdict object."""
    if isinstance(res, Popular):
        return {"verdict": "popular", "witness": _witness_doc(res.witness)}
    if isinstance(res, Unpopular):
        return {
            "verdict": "unpopular",
            "blocking_structure": _structure_doc(res.structure),
            "better_matching": _pairs_doc(res.better.pairs()),
            "margin": res.margin,
        }
    if isinstance(res, FractionalPopular):
        return {"verdict": "fractional-popular", "witness": _witness_doc(res.witness)}
    if isinstance(res, NotFractionalPopular):
        doc = {
            "verdict": "not-fractional-popular",
            "p": {
                "ones": _pairs_doc(res.p.ones),
                "loop_ones": list(res.p.loop_ones),
                "half_cycles": [list(c) for c in res.p.half_cycles],
            },
            "value_times_two": res.value_times_two,
        }
        s = res.structure
        if isinstance(s, CycleThroughStar):
            doc["fractional_structure"] = {
                "kind": "cycle-through-star",
                "cycle": list(s.cycle),
                "middle": s.middle,
            }
        elif isinstance(s, PathPlusCycle):
            doc["fractional_structure"] = {
                "kind": "path-plus-cycle",
                "path": list(s.path),
                "cycle": list(s.cycle),
                "blocking_edge": list(s.blocking_edge),
            }
        if res.from_unpopular is not None:
            doc["blocking_structure"] = _structure_doc(res.from_unpopular.structure)
            doc["better_matching"] = _pairs_doc(res.from_unpopular.better.pairs())
            doc["margin"] = res.from_unpopular.margin
        return doc
    raise TypeError(f"not a verdict object: {type(res).__name__}")


def document_to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def parse_certificate(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad certificate JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("certificate must be a JSON object")
    if doc.get("verdict") not in VERDICTS:
        raise ParseError(f"unknown verdict {doc.get('verdict')!r}")
    return doc


def _witness_from(doc, n: int) -> DualWitness | str:
    if not isinstance(doc, dict):
        return "witness is not an object"
    alpha_doc = doc.get("alpha")
    sets_doc = doc.get("two_sets")
    if not isinstance(alpha_doc, dict) or not isinstance(sets_doc, list):
        return "witness needs alpha and two_sets"
    alpha = [0] * n
    try:
        for key, val in alpha_doc.items():
            idx = int(key)
            if not 0 <= idx < n:
                return f"alpha key {key!r} is out of range"
            alpha[idx] = int(val)
        two_sets = tuple(frozenset(int(v) for v in group) for group in sets_doc)
        for group, raw in zip(two_sets, sets_doc):
            if len(group) != len(raw):
                return "odd set repeats a node"
    except (ValueError, TypeError, IndexError):
        return "witness contains a non-node entry"
    return DualWitness(alpha=tuple(alpha), two_sets=two_sets)


def _int_list(seq) -> list | None:
    if not isinstance(seq, list):
        return None
    out = []
    for v in seq:
        if isinstance(v, bool) or not isinstance(v, int):
            return None
        out.append(v)
    return out


def _matching_from(doc, inst: RoommatesInstance) -> Matching | str:
    if not isinstance(doc, list):
        return "better_matching is not a list"
    pairs = []
    for item in doc:
        pair = _int_list(item)
        if pair is None or len(pair) != 2:
            return f"bad matching pair {item!r}"
        pairs.append(tuple(pair))
    try:
        return Matching.from_pairs(inst, pairs)
    except (ValueError, IndexError) as exc:
        return str(exc)


def _verify_popular(inst, m, doc, fractional: bool) -> str | None:
    w = _witness_from(doc.get("witness"), inst.n)
    if isinstance(w, str):
        return w
    msg = witness_violation(inst, m, w)
    if msg is not None:
        return msg
    if fractional and w.two_sets:
        return "a fractional-popularity witness must have no two-valued sets"
    return None


def _verify_unpopular_parts(inst, m, doc) -> str | None:
    sdoc = doc.get("blocking_structure")
    if not isinstance(sdoc, dict):
        return "missing blocking_structure"
    nodes = _int_list(sdoc.get("nodes"))
    if nodes is None or not isinstance(sdoc.get("kind"), str):
        return "blocking_structure needs kind and nodes"
    s = BlockingStructure(kind=sdoc["kind"], nodes=tuple(nodes))
    msg = check_blocking_structure(inst, m, s)
    if msg is not None:
        return msg
    declared = sdoc.get("blocking_edges")
    if declared != _structure_doc(s)["blocking_edges"]:
        return "blocking_edges do not match the structure"
    better = _matching_from(doc.get("better_matching"), inst)
    if isinstance(better, str):
        return better
    margin = doc.get("margin")
    if not isinstance(margin, int) or margin < 1:
        return f"margin {margin!r} does not certify a defeat"
    if delta(inst, m, better) != margin:
        return f"better matching wins by {delta(inst, m, better)}, not {margin}"
    return None


def _half_from(doc, inst: RoommatesInstance) -> HalfIntegralMatching | str:
    if not isinstance(doc, dict):
        return "p is not an object"
    ones_doc = doc.get("ones")
    loops = _int_list(doc.get("loop_ones"))
    cycles_doc = doc.get("half_cycles")
    if not isinstance(ones_doc, list) or loops is None or not isinstance(cycles_doc, list):
        return "p needs ones, loop_ones and half_cycles"
    ones = []
    for item in ones_doc:
        pair = _int_list(item)
        if pair is None or len(pair) != 2:
            return f"bad p edge {item!r}"
        ones.append(tuple(pair))
    cycles = []
    for item in cycles_doc:
        cyc = _int_list(item)
        if cyc is None:
            return f"bad half cycle {item!r}"
        cycles.append(tuple(cyc))
    try:
        p = HalfIntegralMatching(
            ones=tuple(ones), loop_ones=tuple(loops), half_cycles=tuple(cycles)
        )
        p.validate(inst)
    except (ValueError, IndexError) as exc:
        return str(exc)
    return p


def _frac_structure_from(sdoc) -> CycleThroughStar | PathPlusCycle | str:
    if not isinstance(sdoc, dict):
        return "fractional_structure is not an object"
    kind = sdoc.get("kind")
    if kind == "cycle-through-star":
        cyc = _int_list(sdoc.get("cycle"))
        mid = sdoc.get("middle")
        if cyc is None or isinstance(mid, bool) or not isinstance(mid, int):
            return "cycle-through-star needs cycle and middle"
        return CycleThroughStar(cycle=tuple(cyc), middle=mid)
    if kind == "path-plus-cycle":
        path = _int_list(sdoc.get("path"))
        cyc = _int_list(sdoc.get("cycle"))
        be = _int_list(sdoc.get("blocking_edge"))
        if path is None or cyc is None or be is None or len(be) != 2:
            return "path-plus-cycle needs path, cycle and blocking_edge"
        return PathPlusCycle(path=tuple(path), cycle=tuple(cyc), blocking_edge=tuple(be))
    return f"unknown fractional structure kind {kind!r}"


def _verify_not_fractional(inst, m, doc) -> str | None:
    p = _half_from(doc.get("p"), inst)
    if isinstance(p, str):
        return p
    vt2 = doc.get("value_times_two")
    if not isinstance(vt2, int) or vt2 < 1:
        return f"value_times_two {vt2!r} does not certify a defeat"
    actual = fractional_value_times_two(inst, m, p)
    if actual != vt2:
        return f"p scores {actual}, document claims {vt2}"
    if "fractional_structure" in doc:
        s = _frac_structure_from(doc["fractional_structure"])
        if isinstance(s, str):
            return s
        msg = check_fractional_structure(inst, m, s)
        if msg is not None:
            return msg
        if vt2 != 2:
            return f"a structure certificate must score 2, not {vt2}"
        rebuilt = structure_to_fractional_matching(inst, m, s)
        if rebuilt != p:
            return "p does not encode the declared structure"
    elif "blocking_structure" in doc:
        return _verify_unpopular_parts(inst, m, doc)
    return None


def verify_certificate(inst: RoommatesInstance, m: Matching, doc: dict) -> str | None:
    """None if the document certifies its verdict for (inst, m), else the defect."""
    try:
        check_matching(inst, m)
    except ValueError as exc:
        return str(exc)
    verdict = doc.get("verdict")
    if verdict == "popular":
        return _verify_popular(inst, m, doc, fractional=False)
    if verdict == "fractional-popular":
        return _verify_popular(inst, m, doc, fractional=True)
    if verdict == "unpopular":
        return _verify_unpopular_parts(inst, m, doc)
    if verdict == "not-fractional-popular":
        return _verify_not_fractional(inst, m, doc)
    return f"unknown verdict {verdict!r}"
