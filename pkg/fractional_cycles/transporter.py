"""Transporters: closed walks that move cycle weight from one edge to another.

With P = L + 1 and h = floor(P/2), a transporter for (s, t) is a closed walk on the
cyclic vertex sequence x_0 ... x_{kP-1} with the rotation s<i> at positions iP..iP+k-1
and t<i> at iP+h..iP+h+k-1. The remaining positions hold distinct vertices outside
s and t. Sending cycle i is the cyclic window [(i-1)P+h+1, iP+h-1] of the sequence
and receiving cycle i the window [iP+1, (i+1)P-1]; both have length L.
"""

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from fractional_cycles.config import DEFAULTS
from fractional_cycles.exceptions import NotAWalkError, TransporterValidationError, ValidationError
from fractional_cycles.hypergraph import min_codegree
from fractional_cycles.logger import get_logger
from fractional_cycles.walks import TightCycle, Walk, walk_from_vertices

logger = get_logger("transporter")


def rotate(e, i):
    e = tuple(e)
    i %= len(e)
    return e[i:] + e[:i]


def _layout(k, L):
    P = L + 1
    return P, P // 2, k * P


def _window(x, start, length):
    size = len(x)
    return tuple(x[(start + q) % size] for q in range(length))


@dataclass(frozen=True)
class Transporter:
    L: int
    s: tuple
    t: tuple
    walk: tuple  # cyclic vertex sequence x_0 ... x_{kP-1}
    sending: tuple
    receiving: tuple

    @property
    def k(self):
        return len(self.s)

    @property
    def closed_walk(self):
        return self.walk + self.walk[: self.k]

    @property
    def edges(self):
        k, x = self.k, self.walk
        return [_window(x, j, k) for j in range(len(x) + 1)]

    def to_dict(self):
        return {
            "L": self.L,
            "s": list(self.s),
            "t": list(self.t),
            "walk": list(self.closed_walk),
            "sending": [list(c.vertices) for c in self.sending],
            "receiving": [list(c.vertices) for c in self.receiving],
        }


def sending_cycles(k, L, x):
    P, h, _ = _layout(k, L)
    return tuple(TightCycle.from_vertices(k, _window(x, (i - 1) * P + h + 1, L)) for i in range(k))


def receiving_cycles(k, L, x):
    P, _, _ = _layout(k, L)
    return tuple(TightCycle.from_vertices(k, _window(x, i * P + 1, L)) for i in range(k))


def membership_census(T):
    """(sending count, receiving count) per underlying edge over all 2k cycles."""
    sending, receiving = Counter(), Counter()
    for c in T.sending:
        sending.update(c.edges)
    for c in T.receiving:
        receiving.update(c.edges)
    return sending, receiving


def validate_transporter(H, walk, s, t, L):
    k = H.k
    s, t = tuple(s), tuple(t)
    if set(s) & set(t):
        raise ValidationError(f"Source {list(s)} and target {list(t)} must be disjoint")
    if L < 3:
        raise ValidationError(f"Transporter order must be at least 3, got {L}")
    P, h, size = _layout(k, L)
    vs = tuple(walk.vertex_sequence if isinstance(walk, Walk) else walk)
    if len(vs) != size + k:
        raise TransporterValidationError(
            f"A closed walk of {size + 1} edges has {size + k} vertices, got {len(vs)}", prop="length"
        )
    if vs[size:] != vs[:k]:
        raise TransporterValidationError("The walk is not closed", prop="closed", index=size)
    try:
        walk_from_vertices(H, vs)
    except NotAWalkError as e:
        raise TransporterValidationError(str(e), prop="walk", index=e.index)
    x = vs[:size]

    for i in range(k):
        if _window(x, i * P, k) != rotate(s, i):
            raise TransporterValidationError(f"e_{i * P} is not s<{i}>", prop="i", index=i * P)
        if _window(x, i * P + h, k) != rotate(t, i):
            raise TransporterValidationError(f"e_{i * P + h} is not t<{i}>", prop="i", index=i * P + h)

    segments = [x[i * P : (i + 1) * P] for i in range(k)]
    for i, seg in enumerate(segments):
        if len(set(seg)) != len(seg):
            raise TransporterValidationError(f"Segment {i} repeats a vertex", prop="ii", index=i)
    core = set(s) | set(t)
    for i in range(k):
        for j in range(i + 1, k):
            if (set(segments[i]) & set(segments[j])) - core:
                raise TransporterValidationError(
                    f"Segments {i} and {j} share vertices outside s and t", prop="iii", index=j
                )

    sending = sending_cycles(k, L, x)
    receiving = receiving_cycles(k, L, x)
    for c in (*sending, *receiving):
        if not all(e in H.edges for e in c.edges):
            raise TransporterValidationError(f"{list(c.vertices)} is not a cycle of H", prop="cycles")

    T = Transporter(L=L, s=s, t=t, walk=x, sending=sending, receiving=receiving)
    send_count, recv_count = membership_census(T)
    s_set, t_set = tuple(sorted(s)), tuple(sorted(t))
    walk_edges = {tuple(sorted(e)) for e in T.edges}
    for e in walk_edges | set(send_count) | set(recv_count):
        expected = (k, 0) if e == s_set else (0, k) if e == t_set else (1, 1)
        if (send_count[e], recv_count[e]) != expected:
            raise TransporterValidationError(
                f"Edge {list(e)} lies in {send_count[e]} sending and {recv_count[e]} receiving cycles",
                prop="census",
            )
    return T


class _Exhausted(Exception):
    pass


def _plan(H, system, s, t, L):
    """Fixed positions, free positions in assignment order, and the checks each free position completes."""
    k = H.k
    P, h, size = _layout(k, L)
    fixed = {}
    for i in range(k):
        for q in range(k):
            fixed[(i * P + q) % size] = s[(i + q) % k]
            fixed[(i * P + h + q) % size] = t[(i + q) % k]
    free = [p for p in range(size) if p not in fixed]
    rank = {p: n for n, p in enumerate(free)}

    def last_free(positions):
        ranks = [rank[p % size] for p in positions if p % size in rank]
        return free[max(ranks)] if ranks else None

    checks = {p: [] for p in free}
    upfront = []
    for j in range(size):
        spot = last_free(range(j, j + k))
        (checks[spot] if spot is not None else upfront).append(("edge", j))
    if not system.full:
        for i in range(k):
            a, b = (i - 1) * P + h + 1, i * P + h - 1
            steps = [(j % size, (j + 1) % size) for j in range(a, b)] + [(b % size, a % size)]
            for j1, j2 in steps:
                spot = last_free([*range(j1, j1 + k), *range(j2, j2 + k)])
                (checks[spot] if spot is not None else upfront).append(("step", j1, j2))
    return fixed, free, checks, upfront


def _passes(H, system, x, check, k):
    if check[0] == "edge":
        return H.is_ordered_edge(_window(x, check[1], k))
    return system.allows(_window(x, check[1], k), _window(x, check[2], k))


def _search(H, system, fixed, free, checks, rng, node_budget):
    """Randomised DFS over the free positions, yielding complete cyclic sequences."""
    k = H.k
    size = len(fixed) + len(free)
    x = [None] * size
    for p, v in fixed.items():
        x[p] = v
    blocked = set(fixed.values())
    used = set()
    nodes = 0

    def dfs(idx):
        nonlocal nodes
        if idx == len(free):
            yield tuple(x)
            return
        p = free[idx]
        prev = tuple(sorted(x[(p - q) % size] for q in range(1, k)))
        cands = sorted(H.neighbors.get(prev, frozenset()) - blocked - used)
        for pos in rng.permutation(len(cands)):
            nodes += 1
            if nodes > node_budget:
                raise _Exhausted
            v = cands[pos]
            x[p] = v
            used.add(v)
            if all(_passes(H, system, x, c, k) for c in checks[p]):
                yield from dfs(idx + 1)
            used.discard(v)
            x[p] = None

    yield from dfs(0)


def find_transporters(H, system, s, t, L, m_max, seed, node_budget=None):
    """Up to m_max distinct transporters for (s, t) whose sending cycles are compatible."""
    k = H.k
    s, t = tuple(s), tuple(t)
    if set(s) & set(t):
        raise ValidationError(f"Source {list(s)} and target {list(t)} must be disjoint")
    node_budget = node_budget or DEFAULTS["dfs_node_budget"]
    P, h, size = _layout(k, L)
    if h < k or P - h < k:
        logger.debug("no %s-transporters for k=%s: s<i> and t<i> would overlap", L, k)
        return []
    if 2 * k + k * (P - 2 * k) > H.n:
        logger.debug("no %s-transporters: n=%s cannot host %s segments", L, H.n, k)
        return []

    fixed, free, checks, upfront = _plan(H, system, s, t, L)
    partial = [fixed.get(p) for p in range(size)]
    if not all(_passes(H, system, partial, c, k) for c in upfront):
        return []

    rng = np.random.default_rng(seed)
    found, seen = [], set()
    for _ in range(m_max):
        fresh = None
        try:
            for x in _search(H, system, fixed, free, checks, rng, node_budget):
                if x not in seen:
                    fresh = x
                    break
        except _Exhausted:
            pass
        if fresh is None:
            break
        seen.add(fresh)
        found.append(validate_transporter(H, fresh + fresh[:k], s, t, L))
    return found


def shift_deltas(T, w):
    """Per-cycle change of using T with weight w: -w/k on sending, +w/k on receiving cycles."""
    w = Fraction(w)
    share = w / T.k
    deltas = {}
    for c in T.sending:
        deltas[c] = deltas.get(c, 0) - share
    for c in T.receiving:
        deltas[c] = deltas.get(c, 0) + share
    return deltas


def apply_transporter(omega, T, w):
    return omega.plus(shift_deltas(T, w))


def transporter_count_bounds(H, r, ell, zeta):
    """The abundance estimate m and the per-cycle ceiling m' for ell-transporters (floats, diagnostics only)."""
    k, n = H.k, H.n
    e_ord = H.ordered_count
    delta = min_codegree(H) / n
    up, down = math.ceil((ell + 1) / 2), (ell + 1) // 2
    x1 = (1 - float(zeta) / 2) ** up
    x2 = (1 - float(zeta) / 2) ** (down + 1)
    lower = (
        (delta * n - k * ell) * (1 - x1) * r ** (up - 1) / e_ord * (1 - x2) * r**down / e_ord
    ) ** k
    upper = 2 * k * ell * n * (n * (1 + x1) * r ** (up - 1) / e_ord * (1 + x2) * r**down / e_ord) ** (k - 1)
    return {"m_lower": lower, "m_upper": upper, "delta": delta, "zeta": float(zeta)}
