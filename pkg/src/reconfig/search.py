"""Search over n-vertex graphs for the largest configuration-graph diameter.

Exhaustive mode enumerates one representative per isomorphism class (n <= 7)
by orbit-marking edge bitmasks under the full permutation action, using
per-byte permutation tables; no external canonicalizer is involved, and the
representative is the minimum mask of its orbit. Random mode samples
Erdos-Renyi graphs at several densities plus perturbations of the
complement-of-path construction, with recorded seeds.
"""

from __future__ import annotations

import itertools
import json
import os
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import engine
from .constructions import complement_path
from .engine import DEFAULT_NODE_CAP, TJ
from .graph import Graph, GraphError

__all__ = [
    "EXHAUSTIVE_LIMIT",
    "SearchResult",
    "edge_pairs",
    "mask_to_graph",
    "graph_to_mask",
    "nonisomorphic_masks",
    "exhaustive_search",
    "random_search",
]

EXHAUSTIVE_LIMIT = 7


@dataclass
class SearchResult:
    n: int
    k: int
    rule: str
    best_diameter: Optional[int]
    witness_edges: Optional[list[tuple[int, int]]]
    exhaustive: bool
    classes_examined: Optional[int] = None
    best_masks: Optional[list[int]] = None
    trials: Optional[int] = None
    seed: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "rule": self.rule,
            "best_diameter": self.best_diameter,
            "witness_edges": [list(e) for e in self.witness_edges]
            if self.witness_edges is not None
            else None,
            "exhaustive": self.exhaustive,
            "classes_examined": self.classes_examined,
            "best_masks": self.best_masks,
            "trials": self.trials,
            "seed": self.seed,
        }


def edge_pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def mask_to_graph(n: int, mask: int) -> Graph:
    pairs = edge_pairs(n)
    return Graph.from_edges(
        n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
    )


def graph_to_mask(g: Graph) -> int:
    mask = 0
    for i, (u, v) in enumerate(edge_pairs(g.n)):
        if g.adj[u] >> v & 1:
            mask |= 1 << i
    return mask


def _perm_byte_tables(n: int):
    """Per-permutation lookup tables mapping each byte of an edge mask to its
    permuted image, so one orbit element costs a few indexed ORs."""
    pairs = edge_pairs(n)
    nbits = len(pairs)
    pos = {p: i for i, p in enumerate(pairs)}
    perms = list(itertools.permutations(range(n)))
    nbytes = (nbits + 7) // 8
    tabs = np.zeros((len(perms), nbytes, 256), dtype=np.uint32)
    for pi, perm in enumerate(perms):
        bitmap = [0] * nbits
        for i, (u, v) in enumerate(pairs):
            a, b = perm[u], perm[v]
            bitmap[i] = 1 << pos[(a, b) if a < b else (b, a)]
        for byi in range(nbytes):
            t = tabs[pi, byi]
            base = byi * 8
            for val in range(1, 256):
                low = val & -val
                bit = base + low.bit_length() - 1
                t[val] = t[val & (val - 1)] | (bitmap[bit] if bit < nbits else 0)
    return tabs, nbits, nbytes


def nonisomorphic_masks(n: int) -> list[int]:
    """One edge bitmask per isomorphism class of n-vertex graphs, each the
    minimum of its orbit, ascending."""
    if n > EXHAUSTIVE_LIMIT:
        raise GraphError(
            f"exhaustive enumeration supports n <= {EXHAUSTIVE_LIMIT}, got {n}"
        )
    if n <= 1:
        return [0]
    tabs, nbits, nbytes = _perm_byte_tables(n)
    byte_tabs = [tabs[:, i, :] for i in range(nbytes)]
    total = 1 << nbits
    visited = np.zeros(total, dtype=bool)
    reps = []
    m = 0
    while m < total:
        if visited[m]:
            m += 1
            continue
        reps.append(m)
        orbit = byte_tabs[0][:, m & 0xFF].copy()
        for i in range(1, nbytes):
            orbit |= byte_tabs[i][:, (m >> (8 * i)) & 0xFF]
        visited[orbit] = True
        m += 1
    return reps


def _cache_path(cache_dir: str, n: int, k: int, rule: str) -> str:
    return os.path.join(cache_dir, f"exhaustive_n{n}_k{k}_{rule}.json")


def exhaustive_search(
    n: int,
    k: int,
    rule: str = TJ,
    node_cap: int = DEFAULT_NODE_CAP,
    cache_dir: Optional[str] = None,
) -> SearchResult:
    """Best configuration-graph diameter over all n-vertex graphs (n <= 7),
    deduplicated by canonical form; every class is examined exactly once.

    ``best_masks`` lists the representatives achieving the optimum, so
    uniqueness up to isomorphism is checkable. Results are memoized in
    ``cache_dir`` when given.
    """
    if cache_dir:
        path = _cache_path(cache_dir, n, k, rule)
        if os.path.exists(path):
            with open(path) as fh:
                data = json.load(fh)
            return SearchResult(
                n, k, rule,
                data["best_diameter"],
                [tuple(e) for e in data["witness_edges"]]
                if data["witness_edges"] is not None else None,
                True,
                classes_examined=data["classes_examined"],
                best_masks=data["best_masks"],
            )
    reps = nonisomorphic_masks(n)
    best: Optional[int] = None
    best_masks: list[int] = []
    for mask in reps:
        g = mask_to_graph(n, mask)
        rep = engine.max_component_diameter(g, k, rule, node_cap)
        if rep.diameter is None:
            continue
        if best is None or rep.diameter > best:
            best = rep.diameter
            best_masks = [mask]
        elif rep.diameter == best:
            best_masks.append(mask)
    witness = None
    if best is not None:
        wg = mask_to_graph(n, best_masks[0])
        # re-verify the witness before emitting it
        check = engine.max_component_diameter(wg, k, rule, node_cap)
        if check.diameter != best:
            raise AssertionError("witness failed re-verification")
        witness = list(wg.edges())
    result = SearchResult(
        n, k, rule, best, witness, True,
        classes_examined=len(reps), best_masks=best_masks,
    )
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        with open(_cache_path(cache_dir, n, k, rule), "w") as fh:
            json.dump(result.to_json(), fh)
    return result


def _random_graph(rng: random.Random, n: int) -> Graph:
    style = rng.random()
    if style < 0.75 or n < 3:
        p = rng.choice((0.2, 0.35, 0.5, 0.65, 0.8))
        edges = [e for e in edge_pairs(n) if rng.random() < p]
        return Graph.from_edges(n, edges)
    # perturbed extremal construction: flip a few pairs of the complement
    # of a path
    g, _ = complement_path(n)
    mask = graph_to_mask(g)
    nbits = n * (n - 1) // 2
    for _ in range(rng.randint(1, 3)):
        mask ^= 1 << rng.randrange(nbits)
    return mask_to_graph(n, mask)


def random_search(
    n: int,
    k: int,
    rule: str = TJ,
    trials: int = 100,
    seed: int = 0,
    node_cap: int = DEFAULT_NODE_CAP,
) -> SearchResult:
    """Sampled lower bound on the best diameter; deterministic per seed."""
    rng = random.Random(seed)
    best: Optional[int] = None
    witness = None
    for _ in range(trials):
        g = _random_graph(rng, n)
        rep = engine.max_component_diameter(g, k, rule, node_cap)
        if rep.diameter is None:
            continue
        if best is None or rep.diameter > best:
            best = rep.diameter
            witness = list(g.edges())
    return SearchResult(
        n, k, rule, best, witness, False, trials=trials, seed=seed
    )
