"""Sets of positive integers with no 3-term arithmetic progression.

Provides the exact small-n maximizer, a Behrend-style sphere-digit
construction for large n (with a deterministic greedy floor), and the
affine images (4S+1, 8S+1) used to pin elements to residue classes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

__all__ = [
    "APSet",
    "APSetError",
    "is_3ap_free",
    "max_3ap_free",
    "greedy_3ap_free",
    "behrend_set",
    "behrend_info",
    "affine_transform",
    "odd_3ap_free",
    "MAX_EXACT_N",
]

MAX_EXACT_N = 40


class APSetError(ValueError):
    pass


@dataclass(frozen=True)
class APSet:
    """Strictly increasing positive integers, 3-AP-free, within [1, bound]."""

    elements: tuple[int, ...]
    universe_bound: int

    def __post_init__(self):
        es = self.elements
        if any(e < 1 for e in es):
            raise APSetError("elements must be positive")
        if any(a >= b for a, b in zip(es, es[1:])):
            raise APSetError("elements must be strictly increasing")
        if es and es[-1] > self.universe_bound:
            raise APSetError(
                f"element {es[-1]} exceeds universe bound {self.universe_bound}"
            )
        if not is_3ap_free(es):
            raise APSetError("set contains a 3-term arithmetic progression")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def is_3ap_free(values: Iterable[int]) -> bool:
    """True iff no s1 < s2 < s3 with s2 - s1 == s3 - s2."""
    vs = sorted(set(values))
    members = set(vs)
    for i, s1 in enumerate(vs):
        for s2 in vs[i + 1 :]:
            if 2 * s2 - s1 in members:
                return False
    return True


def max_3ap_free(n: int, limit: int = MAX_EXACT_N) -> APSet:
    """Lexicographically smallest maximum-cardinality 3-AP-free subset of [1, n].

    Branch-and-bound over candidates in increasing order, include-before-skip,
    with midpoint-completion pruning: choosing x after s forbids 2x - s. The
    first optimum met in this order is the lexicographically smallest one.
    """
    if n > limit:
        raise APSetError(f"max_3ap_free refused: n={n} exceeds limit {limit}")
    if n <= 0:
        return APSet((), max(n, 0))
    # forbid[t] counts how many chosen pairs would be completed by t
    forbid = [0] * (2 * n + 2)
    chosen: list[int] = []
    best: list[int] = []

    def rec(x: int) -> None:
        nonlocal best
        if x > n:
            if len(chosen) > len(best):
                best = chosen.copy()
            return
        # remaining candidates still allowed, for the bound
        room = sum(1 for t in range(x, n + 1) if not forbid[t])
        if len(chosen) + room <= len(best):
            return
        if not forbid[x]:
            for s in chosen:
                forbid[2 * x - s] += 1
            chosen.append(x)
            rec(x + 1)
            chosen.pop()
            for s in chosen:
                forbid[2 * x - s] -= 1
        rec(x + 1)

    rec(1)
    return APSet(tuple(best), n)


def greedy_3ap_free(n: int) -> APSet:
    """Szekeres-style greedy: scan 1..n, keep x unless it completes an AP."""
    if n <= 0:
        return APSet((), max(n, 0))
    forbidden = bytearray(n + 1)
    chosen: list[int] = []
    for x in range(1, n + 1):
        if forbidden[x]:
            continue
        for s in chosen:
            t = 2 * x - s
            if t <= n:
                forbidden[t] = 1
        chosen.append(x)
    return APSet(tuple(chosen), n)


def _sphere_shell_counts(m: int, h: int) -> list[int]:
    # counts[r2] = number of vectors in [0,h]^m with sum of squares r2
    counts = [1] + [0] * (m * h * h)
    for _ in range(m):
        nxt = [0] * len(counts)
        for r2, c in enumerate(counts):
            if not c:
                continue
            for a in range(h + 1):
                nxt[r2 + a * a] += c
        counts = nxt
    return counts


def _sphere_vectors(m: int, h: int, r2: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    vec = [0] * m

    def rec(i: int, left: int) -> None:
        if i == m:
            if left == 0:
                out.append(tuple(vec))
            return
        if left > (m - i) * h * h:
            return
        for a in range(h + 1):
            if a * a > left:
                break
            vec[i] = a
            rec(i + 1, left - a * a)
        vec[i] = 0

    rec(0, r2)
    return out


def _best_sphere_params(n: int) -> Optional[tuple[int, int, int, int]]:
    # returns (count, m, d, r2) maximizing the shell size, or None
    best = None
    for m in range(2, 13):
        d = max(3, round(n ** (1.0 / m)))
        for dd in (d + 1, d, d - 1):
            if dd < 3 or dd**m > n:
                continue
            h = (dd - 1) // 2
            counts = _sphere_shell_counts(m, h)
            # skip r2=0 (the all-zero vector alone)
            r2 = max(range(1, len(counts)), key=lambda r: counts[r], default=None)
            if r2 is None or counts[r2] == 0:
                continue
            cand = (counts[r2], m, dd, r2)
            if best is None or cand > best:
                best = cand
            break  # largest feasible d for this m
    return best


def behrend_info(n: int) -> tuple[APSet, dict]:
    """Large 3-AP-free subset of [1, n] plus the parameters that produced it.

    Digit vectors in base d restricted to a sphere shell; digit sums stay
    carry-free, so x + z = 2y forces equal vectors and hence no nontrivial
    progression. The (dimension, base, shell) grid is swept and the greedy
    set is kept as a deterministic floor, since the sphere shells only win
    for universes far beyond desk scale.
    """
    if n < 1:
        return APSet((), max(n, 0)), {"method": "greedy", "params": None}
    params = _best_sphere_params(n)
    sphere: tuple[int, ...] = ()
    if params is not None:
        _, m, d, r2 = params
        h = (d - 1) // 2
        powers = [d**i for i in range(m)]
        vals = sorted(
            sum(a * p for a, p in zip(vec, powers)) + 1
            for vec in _sphere_vectors(m, h, r2)
        )
        sphere = tuple(vals)
    greedy = greedy_3ap_free(n)
    if params is not None and len(sphere) >= len(greedy.elements):
        info = {"method": "behrend", "params": {"dim": params[1], "base": params[2], "shell": params[3]}}
        return APSet(sphere, n), info
    return greedy, {"method": "greedy", "params": None}


def behrend_set(n: int) -> APSet:
    return behrend_info(n)[0]


def affine_transform(s: APSet, a: int, b: int) -> APSet:
    """The set {a*x + b : x in s}; preserves 3-AP-freeness when a >= 1."""
    if a < 1:
        raise APSetError(f"scale factor must be positive, got {a}")
    return APSet(
        tuple(a * x + b for x in s.elements),
        a * s.universe_bound + b,
    )


def odd_3ap_free(n: int, residue_mod: int) -> APSet:
    """Largest available 3-AP-free subset of [1, n] with all elements
    congruent to 1 mod ``residue_mod`` (4 or 8).

    Built as ``residue_mod * S + 1`` for a 3-AP-free S in [0, (n-1)/mod];
    the affine image keeps 3-AP-freeness and pins the residues.
    """
    if residue_mod not in (4, 8):
        raise APSetError(f"residue_mod must be 4 or 8, got {residue_mod}")
    if n < 1:
        return APSet((), max(n, 0))
    m = (n - 1) // residue_mod  # base values 0..m give mod*s+1 <= n
    if m + 1 <= MAX_EXACT_N:
        base = max_3ap_free(m + 1)
    else:
        base = behrend_set(m + 1)
    elems = tuple(residue_mod * (s - 1) + 1 for s in base.elements)
    return APSet(elems, n)
