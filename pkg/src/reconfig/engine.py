"""Implicit exploration of the k-token configuration graph.

Nodes are independent sets of fixed size k; two sets are adjacent when one
token moves: to any vertex under the jump rule ("tj"), or only along an
edge of the host graph under the slide rule ("ts"). Components are explored
by BFS over canonical integer keys without ever materializing the full
configuration graph.

All functions are pure and read-only on the host Graph, so separate
components (or separate BFS sources) can safely be processed by parallel
workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .graph import Graph, GraphError, is_independent

__all__ = [
    "TJ",
    "TS",
    "RULES",
    "DEFAULT_NODE_CAP",
    "NodeCapExceeded",
    "encode_key",
    "decode_key",
    "neighbors",
    "independent_sets",
    "bfs_component",
    "ConfigComponent",
    "distance",
    "shortest_sequence",
    "validate_sequence",
    "component_adjacency",
    "component_diameter",
    "enumerate_components",
    "max_component_diameter",
    "DiameterReport",
]

TJ = "tj"
TS = "ts"
RULES = (TJ, TS)

DEFAULT_NODE_CAP = 5_000_000

# Canonical state key: vertices packed ascending into 16-bit fields.
# Numeric key order is the tie-break order used throughout.
KEY_BITS = 16
_KEY_MASK = (1 << KEY_BITS) - 1


class NodeCapExceeded(RuntimeError):
    """BFS hit the node cap before it could produce an exact answer."""


def _check_rule(rule: str) -> None:
    if rule not in RULES:
        raise GraphError(f"unknown rule {rule!r}, expected one of {RULES}")


def encode_key(vertices: Iterable[int]) -> int:
    key = 0
    prev = -1
    shift = 0
    for v in vertices:
        if v <= prev:
            raise GraphError("key encoding requires strictly increasing vertices")
        if v >= 1 << KEY_BITS:
            raise GraphError(f"vertex {v} exceeds key width")
        key |= v << shift
        shift += KEY_BITS
        prev = v
    return key


def decode_key(key: int, k: int) -> tuple[int, ...]:
    return tuple((key >> (KEY_BITS * i)) & _KEY_MASK for i in range(k))


def _checked_set(g: Graph, vertices: Iterable[int], k: Optional[int] = None) -> tuple[int, ...]:
    vs = tuple(sorted(vertices))
    if len(set(vs)) != len(vs):
        raise GraphError(f"duplicate vertices in {vs}")
    if k is not None and len(vs) != k:
        raise GraphError(f"expected {k} vertices, got {len(vs)}")
    if not is_independent(g, vs):
        raise GraphError(f"{vs} is not an independent set")
    return vs


def neighbors(g: Graph, vertices: Iterable[int], rule: str = TJ) -> list[tuple[int, ...]]:
    """All independent sets reachable in one move, ascending key order."""
    _check_rule(rule)
    vs = _checked_set(g, vertices)
    return sorted(_raw_neighbors(g, vs, rule), key=encode_key)


def _raw_neighbors(g: Graph, vs: tuple[int, ...], rule: str) -> Iterator[tuple[int, ...]]:
    full = (1 << g.n) - 1
    occupied = 0
    for v in vs:
        occupied |= 1 << v
    for i, u in enumerate(vs):
        forb = occupied
        for j, w in enumerate(vs):
            if j != i:
                forb |= g.adj[w]
        cand = full & ~forb
        if rule == TS:
            cand &= g.adj[u]
        rest = vs[:i] + vs[i + 1 :]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            yield tuple(sorted(rest + (v,)))
    return


def independent_sets(g: Graph, k: int) -> list[tuple[int, ...]]:
    """All independent k-sets of g, ascending key order."""
    if k < 0:
        raise GraphError("k must be nonnegative")
    if k == 0:
        return [()]
    out: list[tuple[int, ...]] = []
    full = (1 << g.n) - 1

    def rec(prefix: list[int], allowed: int) -> None:
        if len(prefix) == k:
            out.append(tuple(prefix))
            return
        rest = allowed
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            prefix.append(v)
            higher = full & ~((1 << (v + 1)) - 1)
            rec(prefix, allowed & ~g.adj[v] & higher)
            prefix.pop()

    rec([], full)
    out.sort(key=encode_key)
    return out


@dataclass
class ConfigComponent:
    """One connected component of the configuration graph.

    ``dist`` maps canonical keys to BFS distance from ``start``. When
    ``capped`` is set the exploration was cut off at the node cap and the
    component is only partially known; exact queries refuse such inputs.
    """

    graph: Graph
    k: int
    rule: str
    start: tuple[int, ...]
    dist: dict[int, int]
    capped: bool = False
    _diameter: Optional[tuple[int, tuple[int, ...], tuple[int, ...]]] = field(
        default=None, repr=False
    )

    @property
    def size(self) -> int:
        return len(self.dist)

    def __contains__(self, key: int) -> bool:
        return key in self.dist


def bfs_component(
    g: Graph,
    k: int,
    start: Iterable[int],
    rule: str = TJ,
    node_cap: int = DEFAULT_NODE_CAP,
) -> ConfigComponent:
    """Explore the component of ``start``; aborts cleanly at ``node_cap``.

    A capped result is explicit (``capped=True``), never a silent truncation.
    """
    _check_rule(rule)
    vs = _checked_set(g, start, k)
    dist = {encode_key(vs): 0}
    queue = [vs]
    capped = False
    head = 0
    while head < len(queue):
        cur = queue[head]
        head += 1
        d = dist[encode_key(cur)]
        for nxt in _raw_neighbors(g, cur, rule):
            key = encode_key(nxt)
            if key not in dist:
                if len(dist) >= node_cap:
                    capped = True
                    queue.clear()
                    break
                dist[key] = d + 1
                queue.append(nxt)
        if capped:
            break
    return ConfigComponent(g, k, rule, vs, dist, capped)


def distance(
    g: Graph,
    k: int,
    frm: Iterable[int],
    to: Iterable[int],
    rule: str = TJ,
    node_cap: int = DEFAULT_NODE_CAP,
) -> Optional[int]:
    """Exact shortest-path length in the configuration graph, or None if
    the endpoints lie in different components."""
    _check_rule(rule)
    a = _checked_set(g, frm, k)
    b = _checked_set(g, to, k)
    target = encode_key(b)
    dist = {encode_key(a): 0}
    if target in dist:
        return 0
    queue = [a]
    head = 0
    while head < len(queue):
        cur = queue[head]
        head += 1
        d = dist[encode_key(cur)]
        for nxt in _raw_neighbors(g, cur, rule):
            key = encode_key(nxt)
            if key in dist:
                continue
            if key == target:
                return d + 1
            if len(dist) >= node_cap:
                raise NodeCapExceeded(
                    f"node cap {node_cap} reached before {b} was found"
                )
            dist[key] = d + 1
            queue.append(nxt)
    return None


def shortest_sequence(
    g: Graph,
    k: int,
    frm: Iterable[int],
    to: Iterable[int],
    rule: str = TJ,
    node_cap: int = DEFAULT_NODE_CAP,
) -> Optional[list[tuple[int, ...]]]:
    """A shortest reconfiguration sequence from ``frm`` to ``to``.

    Length always equals ``distance(...) + 1`` in sets; ties are broken by
    stepping to the smallest successor key. None if unreachable.
    """
    _check_rule(rule)
    a = _checked_set(g, frm, k)
    b = _checked_set(g, to, k)
    akey, bkey = encode_key(a), encode_key(b)
    # BFS from the target, then walk downhill from the source.
    dist = {bkey: 0}
    queue = [b]
    head = 0
    found = akey == bkey
    while head < len(queue) and not found:
        cur = queue[head]
        head += 1
        d = dist[encode_key(cur)]
        for nxt in _raw_neighbors(g, cur, rule):
            key = encode_key(nxt)
            if key in dist:
                continue
            if len(dist) >= node_cap:
                raise NodeCapExceeded(
                    f"node cap {node_cap} reached before {a} was found"
                )
            dist[key] = d + 1
            queue.append(nxt)
            if key == akey:
                found = True
    if not found:
        return None
    seq = [a]
    cur = a
    d = dist[akey]
    while d > 0:
        step = min(
            (
                (encode_key(nxt), nxt)
                for nxt in _raw_neighbors(g, cur, rule)
                if dist.get(encode_key(nxt)) == d - 1
            ),
        )
        cur = step[1]
        seq.append(cur)
        d -= 1
    return seq


def validate_sequence(g: Graph, seq: list[tuple[int, ...]], rule: str = TJ) -> None:
    """Raise GraphError unless seq is a valid reconfiguration sequence."""
    _check_rule(rule)
    if not seq:
        raise GraphError("empty sequence")
    k = len(seq[0])
    for s in seq:
        _checked_set(g, s, k)
    for prev, cur in zip(seq, seq[1:]):
        gone = set(prev) - set(cur)
        came = set(cur) - set(prev)
        if len(gone) != 1 or len(came) != 1:
            raise GraphError(f"step {prev} -> {cur} is not a single token move")
        if rule == TS:
            u, v = gone.pop(), came.pop()
            if not g.adj[u] >> v & 1:
                raise GraphError(f"slide {u} -> {v} is not along an edge")


def component_adjacency(comp: ConfigComponent) -> dict[int, list[int]]:
    """Materialized adjacency (key -> sorted neighbor keys) of a component."""
    adj: dict[int, list[int]] = {}
    for key in comp.dist:
        vs = decode_key(key, comp.k)
        nbrs = []
        for nxt in _raw_neighbors(comp.graph, vs, comp.rule):
            nkey = encode_key(nxt)
            if nkey in comp.dist:
                nbrs.append(nkey)
        nbrs.sort()
        adj[key] = nbrs
    return adj


def component_diameter(
    comp: ConfigComponent,
) -> tuple[int, tuple[tuple[int, ...], tuple[int, ...]]]:
    """Exact diameter via BFS from every node, with a deterministic witness
    pair (lexicographically first by key). Refuses capped components."""
    if comp.capped:
        raise NodeCapExceeded("cannot compute an exact diameter of a capped component")
    if comp._diameter is not None:
        d, u, v = comp._diameter
        return d, (u, v)
    adj = component_adjacency(comp)
    keys = sorted(comp.dist)
    best = -1
    best_pair = (keys[0], keys[0])
    for src in keys:
        seen = {src: 0}
        queue = [src]
        head = 0
        far_key, far_d = src, 0
        while head < len(queue):
            cur = queue[head]
            head += 1
            d = seen[cur]
            for nxt in adj[cur]:
                if nxt not in seen:
                    seen[nxt] = d + 1
                    queue.append(nxt)
                    if d + 1 > far_d or (d + 1 == far_d and nxt < far_key):
                        far_d, far_key = d + 1, nxt
        if far_d > best:
            best = far_d
            best_pair = (src, far_key)
    u = decode_key(best_pair[0], comp.k)
    v = decode_key(best_pair[1], comp.k)
    comp._diameter = (best, u, v)
    return best, (u, v)


def enumerate_components(
    g: Graph,
    k: int,
    rule: str = TJ,
    node_cap: int = DEFAULT_NODE_CAP,
) -> list[ConfigComponent]:
    """Partition all independent k-sets into components, smallest-key order.

    The cap bounds the total number of explored nodes; on overflow the
    in-progress component carries ``capped=True`` and enumeration stops, so
    a partial result is always flagged.
    """
    _check_rule(rule)
    comps: list[ConfigComponent] = []
    assigned: set[int] = set()
    budget = node_cap
    for vs in independent_sets(g, k):
        key = encode_key(vs)
        if key in assigned:
            continue
        comp = bfs_component(g, k, vs, rule, node_cap=max(budget, 0))
        comps.append(comp)
        assigned.update(comp.dist)
        budget -= comp.size
        if comp.capped:
            break
    return comps


@dataclass
class DiameterReport:
    """Maximum component diameter of the configuration graph."""

    n: int
    k: int
    rule: str
    component_size: Optional[int]
    diameter: Optional[int]
    witness_from: Optional[tuple[int, ...]]
    witness_to: Optional[tuple[int, ...]]
    capped: bool
    reason: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "k": self.k,
            "rule": self.rule,
            "component_size": self.component_size,
            "diameter": self.diameter,
            "witness_from": list(self.witness_from) if self.witness_from is not None else None,
            "witness_to": list(self.witness_to) if self.witness_to is not None else None,
            "capped": self.capped,
        }
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def max_component_diameter(
    g: Graph,
    k: int,
    rule: str = TJ,
    node_cap: int = DEFAULT_NODE_CAP,
) -> DiameterReport:
    """Maximum, over all components, of the exact component diameter."""
    comps = enumerate_components(g, k, rule, node_cap)
    if not comps:
        return DiameterReport(
            g.n, k, rule, None, None, None, None, False, reason="no independent set"
        )
    capped = any(c.capped for c in comps)
    best = None
    for comp in comps:
        if comp.capped:
            continue
        d, (u, v) = component_diameter(comp)
        if best is None or d > best[0]:
            best = (d, u, v, comp.size)
    if best is None:
        return DiameterReport(g.n, k, rule, None, None, None, None, True,
                              reason="all components capped")
    d, u, v, size = best
    return DiameterReport(g.n, k, rule, size, d, u, v, capped)
