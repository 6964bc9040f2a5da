"""Structural claim verifiers and the fast 2-token reachability decision.

Everything here double-checks a property by an independent route: sparse
triple systems extracted from shortest walks, the edge-to-intersection
injectivity behind the C(n, k-1) diameter cap, path-shape tests on whole
configuration graphs, edge saturation, and a linear-time 2-token decision
paired with its brute-force oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional

from . import engine
from .constructions import JunctionSpec, circulant_ap_graph, circulant_paths
from .engine import DEFAULT_NODE_CAP, TJ, NodeCapExceeded
from .graph import Graph, GraphError, complement, is_independent

__all__ = [
    "Hypergraph3",
    "is_63_free",
    "extract_63",
    "verify_upper_bound_mapping",
    "is_config_path",
    "saturate_to_path",
    "decide_k2_naive",
    "decide_k2_fast",
    "check_junction_windows",
    "check_circulant_structure",
]


@dataclass(frozen=True)
class Hypergraph3:
    """3-uniform hypergraph: distinct sorted triples over 0..n_vertices-1."""

    n_vertices: int
    edges: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        seen = set()
        for e in self.edges:
            if len(e) != 3 or len(set(e)) != 3:
                raise GraphError(f"hyperedge {e} is not a 3-set")
            if tuple(sorted(e)) != tuple(e):
                raise GraphError(f"hyperedge {e} is not sorted")
            if e[-1] >= self.n_vertices or e[0] < 0:
                raise GraphError(f"hyperedge {e} out of range")
            if e in seen:
                raise GraphError(f"duplicate hyperedge {e}")
            seen.add(e)


def is_63_free(h: Hypergraph3) -> tuple[bool, Optional[tuple[int, ...]]]:
    """True iff no 6 vertices contain 3 or more hyperedges.

    Three distinct triples fit inside 6 vertices exactly when their union
    has size at most 6, so the check scans triples of hyperedges. On
    failure the witness vertex set (the union) is returned.
    """
    es = h.edges
    for i, j, l in itertools.combinations(range(len(es)), 3):
        union = set(es[i]) | set(es[j]) | set(es[l])
        if len(union) <= 6:
            return False, tuple(sorted(union))
    return True, None


def _require_shortest(
    g: Graph, seq: list[tuple[int, ...]], rule: str, node_cap: int
) -> None:
    engine.validate_sequence(g, seq, rule)
    k = len(seq[0])
    d = engine.distance(g, k, seq[0], seq[-1], rule, node_cap)
    if d != len(seq) - 1:
        raise GraphError(
            f"sequence of length {len(seq) - 1} is not shortest "
            f"(distance is {d})"
        )


def extract_63(
    g: Graph,
    seq: list[tuple[int, ...]],
    parity: str,
    rule: str = TJ,
    node_cap: int = DEFAULT_NODE_CAP,
) -> Hypergraph3:
    """Triple system formed by the even- (or odd-) position sets of a
    shortest 3-token walk. Shortestness is re-verified before extraction."""
    if parity not in ("even", "odd"):
        raise GraphError(f"parity must be 'even' or 'odd', got {parity!r}")
    if not seq or len(seq[0]) != 3:
        raise GraphError("extraction needs a sequence of 3-sets")
    _require_shortest(g, seq, rule, node_cap)
    offset = 0 if parity == "even" else 1
    edges = tuple(tuple(sorted(s)) for s in seq[offset::2])
    return Hypergraph3(g.n, edges)


def verify_upper_bound_mapping(
    g: Graph,
    seq: list[tuple[int, ...]],
    rule: str = TJ,
    node_cap: int = DEFAULT_NODE_CAP,
) -> tuple[bool, Optional[tuple[int, int, tuple[int, ...]]]]:
    """Check that consecutive-set intersections along a shortest walk are
    pairwise distinct (each step is determined by the k-1 kept tokens).

    Returns (True, None), or (False, (i, j, intersection)) naming the two
    colliding steps. Non-shortest input is refused. Under the jump rule a
    collision is impossible for genuinely shortest walks (three sets over
    the same k-1 kept tokens are pairwise adjacent, contradicting
    shortestness), so a False here flags an engine bug; under the slide
    rule those three sets need not be adjacent and collisions can be
    legitimate, so the check is diagnostic only.
    """
    _require_shortest(g, seq, rule, node_cap)
    seen: dict[tuple[int, ...], int] = {}
    for i, (s1, s2) in enumerate(zip(seq, seq[1:])):
        inter = tuple(sorted(set(s1) & set(s2)))
        if inter in seen:
            return False, (seen[inter], i, inter)
        seen[inter] = i
    return True, None


def is_config_path(
    g: Graph,
    k: int,
    rule: str = TJ,
    node_cap: int = DEFAULT_NODE_CAP,
) -> tuple[bool, Optional[str]]:
    """True iff the whole k-token configuration graph is one path."""
    comps = engine.enumerate_components(g, k, rule, node_cap)
    if any(c.capped for c in comps):
        raise NodeCapExceeded("node cap reached while enumerating components")
    if not comps:
        return False, "empty"
    if len(comps) > 1:
        return False, f"disconnected ({len(comps)} components)"
    comp = comps[0]
    if comp.size == 1:
        return True, None
    adj = engine.component_adjacency(comp)
    degs = [len(v) for v in adj.values()]
    n_edges = sum(degs) // 2
    if n_edges != comp.size - 1:
        return False, f"{n_edges} edges on {comp.size} nodes"
    if max(degs) > 2:
        return False, "a node has degree > 2"
    if degs.count(1) != 2:
        return False, f"{degs.count(1)} endpoints"
    return True, None


def saturate_to_path(
    g: Graph,
    node_cap: int = DEFAULT_NODE_CAP,
) -> Graph:
    """Add edges greedily (lexicographic sweeps) while the largest component
    diameter of the 3-token configuration graph stays unchanged.

    At the fixpoint no edge can be added without losing diameter, and the
    configuration graph of the result is a single path of that diameter.
    """
    target = engine.max_component_diameter(g, 3, TJ, node_cap).diameter
    changed = True
    while changed:
        changed = False
        for u in range(g.n):
            for v in range(u + 1, g.n):
                if g.adj[u] >> v & 1:
                    continue
                h = g.with_edge(u, v)
                if engine.max_component_diameter(h, 3, TJ, node_cap).diameter == target:
                    g = h
                    changed = True
    return g


# ---------------------------------------------------------------------------
# 2-token reachability


def _check_pair(g: Graph, s: Iterable[int], what: str) -> tuple[int, int]:
    t = tuple(sorted(s))
    if len(t) != 2 or t[0] == t[1]:
        raise GraphError(f"{what} must be two distinct vertices, got {t}")
    if not is_independent(g, t):
        raise GraphError(f"{what} {t} is not independent")
    return t


def decide_k2_naive(
    g: Graph,
    a: Iterable[int],
    b: Iterable[int],
    with_witness: bool = False,
    node_cap: int = DEFAULT_NODE_CAP,
):
    """Oracle decision: the two tokens of a can be walked to b iff a and b
    meet the same connected component of the complement graph.

    With ``with_witness`` returns (bool, shortest sequence or None).
    """
    a = _check_pair(g, a, "endpoint a")
    b = _check_pair(g, b, "endpoint b")
    full = (1 << g.n) - 1
    visited = 1 << a[0]
    frontier = visited
    while frontier:
        nxt = 0
        rest = frontier
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            rest ^= low
            nxt |= full & ~g.adj[u] & ~(1 << u)
        nxt &= ~visited
        visited |= nxt
        frontier = nxt
    ok = bool(visited >> b[0] & 1)
    if not with_witness:
        return ok
    if not ok:
        return False, None
    return True, engine.shortest_sequence(g, 2, a, b, TJ, node_cap)


def decide_k2_fast(g: Graph, a: Iterable[int], b: Iterable[int]) -> bool:
    """Reachability for two tokens in time linear in the adjacency data.

    Vertices of degree below (n-1)/2 pairwise share a non-neighbor, so they
    all lie in one complement component; contract them to a single vertex x.
    The high-degree remainder B has O(m/n) vertices, so only its induced
    subgraph ever gets complemented: the search graph is the complement of
    g[B] plus x joined to the B-vertices that miss at least one contracted
    vertex. One BFS there answers the query.
    """
    a = _check_pair(g, a, "endpoint a")
    b = _check_pair(g, b, "endpoint b")
    n = g.n
    if n <= 2:
        return a == b
    small_mask = 0
    big: list[int] = []
    big_mask = 0
    for v in range(n):
        # deg >= (n-1)/2 goes to B; ties included
        if 2 * g.adj[v].bit_count() >= n - 1:
            big.append(v)
            big_mask |= 1 << v
        else:
            small_mask |= 1 << v

    if small_mask == 0:
        # nothing contracted: BFS the whole complement, rows on the fly
        rep_a, rep_b = a[0], b[0]
        if rep_a == rep_b:
            return True
        full = (1 << n) - 1
        visited = 1 << rep_a
        frontier = visited
        while frontier:
            if visited >> rep_b & 1:
                return True
            nxt = 0
            rest = frontier
            while rest:
                low = rest & -rest
                u = low.bit_length() - 1
                rest ^= low
                nxt |= full & ~g.adj[u] & ~(1 << u)
            nxt &= ~visited
            visited |= nxt
            frontier = nxt
        return bool(visited >> rep_b & 1)

    pos = {v: i for i, v in enumerate(big)}
    x = len(big)
    hn = x + 1
    rows = [0] * hn
    for u in big:
        au = g.adj[u]
        r = 0
        miss = big_mask & ~au & ~(1 << u)  # complement neighbors within B
        while miss:
            low = miss & -miss
            miss ^= low
            r |= 1 << pos[low.bit_length() - 1]
        if au & small_mask != small_mask:  # u misses a contracted vertex
            r |= 1 << x
            rows[x] |= 1 << pos[u]
        rows[pos[u]] = r
    rep_a = pos.get(a[0], x)
    rep_b = pos.get(b[0], x)
    if rep_a == rep_b:
        return True
    visited = 1 << rep_a
    frontier = visited
    while frontier:
        if visited >> rep_b & 1:
            return True
        nxt = 0
        rest = frontier
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            rest ^= low
            nxt |= rows[u]
        nxt &= ~visited
        visited |= nxt
        frontier = nxt
    return bool(visited >> rep_b & 1)


# ---------------------------------------------------------------------------
# construction property suites


def check_junction_windows(
    g: Graph,
    k: int,
    junctions: list[JunctionSpec],
    rule: str = TJ,
) -> tuple[bool, list[str]]:
    """Verify the junction structure of a glued graph.

    Every independent k-set touching a junction's fresh vertices must be a
    window of k consecutive positions of that junction's sequence, and sets
    containing an inner fresh vertex must have exactly two neighbors in the
    configuration graph.
    """
    failures: list[str] = []
    all_sets = engine.independent_sets(g, k)
    for spec in junctions:
        if spec.x_ids is None:
            raise GraphError(f"junction {spec.index} has no fresh vertex ids")
        seq = list(spec.b_order) + list(spec.x_ids) + list(spec.a_order)
        windows = {
            tuple(sorted(seq[i : i + k])) for i in range(len(seq) - k + 1)
        }
        xset = set(spec.x_ids)
        inner = set(spec.x_ids[1:-1])
        for s in all_sets:
            touch = set(s) & xset
            if not touch:
                continue
            if s not in windows:
                failures.append(
                    f"junction {spec.index}: {s} touches fresh vertices but is "
                    "not a window of consecutive positions"
                )
                continue
            if set(s) & inner:
                deg = len(engine.neighbors(g, s, rule))
                if deg != 2:
                    failures.append(
                        f"junction {spec.index}: window {s} has degree {deg}, "
                        "expected 2"
                    )
    return not failures, failures


def check_circulant_structure(
    p: int,
    s: Iterable[int],
    node_cap: int = DEFAULT_NODE_CAP,
) -> tuple[bool, dict]:
    """Exhaustively verify the predicted 3-token structure of a circulant:
    the independent triples are exactly the predicted families, splitting
    into |S| induced paths of p-3 nodes with no cross edges."""
    g, _ = circulant_ap_graph(p, s)
    elems = tuple(sorted(set(s)))
    paths = circulant_paths(p, elems)
    predicted = {t for path in paths.values() for t in path}
    actual = set(engine.independent_sets(g, 3))
    details: dict = {
        "extra_triples": sorted(actual - predicted),
        "missing_triples": sorted(predicted - actual),
        "component_count": None,
        "component_sizes": [],
        "paths_ok": True,
    }
    comps = engine.enumerate_components(g, 3, TJ, node_cap)
    if any(c.capped for c in comps):
        raise NodeCapExceeded("node cap reached while enumerating components")
    details["component_count"] = len(comps)
    details["component_sizes"] = sorted(c.size for c in comps)
    for comp in comps:
        adj = engine.component_adjacency(comp)
        degs = [len(v) for v in adj.values()]
        if (
            sum(degs) // 2 != comp.size - 1
            or (comp.size > 1 and (max(degs) > 2 or degs.count(1) != 2))
        ):
            details["paths_ok"] = False
    ok = (
        not details["extra_triples"]
        and not details["missing_triples"]
        and details["component_count"] == len(elems)
        and all(sz == p - 3 for sz in details["component_sizes"])
        and details["paths_ok"]
    )
    return ok, details
