"""Walks, tight cycles and walk counting.

A walk is stored by its vertex sequence; its ordered edges are the consecutive
k-windows. Counting goes through the one-step operator on ordered edges (a sparse
0/1 matrix indexed by ``Hypergraph.ordered_edges``) raised to the (ell-1)-st power;
``count_walks_bruteforce`` enumerates vertex sequences and serves as the oracle.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy as sp

from fractional_cycles.config import DEFAULTS
from fractional_cycles.exceptions import NotAWalkError, ValidationError
from fractional_cycles.hypergraph import intersecting_parameter, link
from fractional_cycles.logger import get_logger
from fractional_cycles.utils import frac_str

logger = get_logger("walks")

INT64_HEADROOM = 2**62


@dataclass(frozen=True)
class Walk:
    k: int
    vertex_sequence: tuple

    @property
    def length(self):
        return len(self.vertex_sequence) - self.k + 1

    @property
    def edges(self):
        vs, k = self.vertex_sequence, self.k
        return tuple(vs[i : i + k] for i in range(self.length))

    @property
    def first(self):
        return self.vertex_sequence[: self.k]

    @property
    def last(self):
        return self.vertex_sequence[-self.k :]

    def to_dict(self):
        return {"k": self.k, "vertices": list(self.vertex_sequence)}


def walk_from_vertices(H, vs):
    vs = tuple(int(v) for v in vs)
    if len(vs) < H.k:
        raise ValidationError(f"A walk needs at least k={H.k} vertices, got {len(vs)}")
    for i in range(len(vs) - H.k + 1):
        window = vs[i : i + H.k]
        if not H.is_ordered_edge(window):
            raise NotAWalkError(f"Window {i} {list(window)} is not an edge", index=i)
    return Walk(k=H.k, vertex_sequence=vs)


def walk_from_edges(H, edges):
    """Walk from its ordered edges; consecutive edges must overlap in k-1 positions."""
    edges = [tuple(e) for e in edges]
    if not edges:
        raise ValidationError("A walk has at least one edge")
    for i in range(1, len(edges)):
        if edges[i][:-1] != edges[i - 1][1:]:
            raise NotAWalkError(f"Edges {i - 1} and {i} do not overlap in k-1 positions", index=i)
    return walk_from_vertices(H, edges[0] + tuple(e[-1] for e in edges[1:]))


def is_self_avoiding(W):
    return len(set(W.vertex_sequence)) == len(W.vertex_sequence)


def is_internally_self_avoiding(W):
    # sub-walks e_1..e_{l-k} and e_{k+1}..e_l; empty sub-walks are self-avoiding
    ell, k, vs = W.length, W.k, W.vertex_sequence
    if ell - k <= 0:
        return True
    head = vs[: ell - 1]
    tail = vs[k:]
    return len(set(head)) == len(head) and len(set(tail)) == len(tail)


# Tight cycles
# ------------


def canonical_cycle(vertices):
    """Lexicographically least of the 2l rotations and reflections."""
    vs = tuple(vertices)
    ell = len(vs)
    reps = []
    for seq in (vs, vs[::-1]):
        reps.extend(seq[i:] + seq[:i] for i in range(ell))
    return min(reps)


@dataclass(frozen=True, order=True)
class TightCycle:
    k: int
    vertices: tuple

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValidationError(f"Cycle vertices must be distinct: {list(self.vertices)}")
        if len(self.vertices) < self.k + 1:
            raise ValidationError(f"A tight cycle needs at least k+1={self.k + 1} vertices")

    @classmethod
    def from_vertices(cls, k, vertices):
        return cls(k=k, vertices=canonical_cycle(int(v) for v in vertices))

    @property
    def length(self):
        return len(self.vertices)

    @property
    def ordered_edges(self):
        vs, k, ell = self.vertices, self.k, len(self.vertices)
        return tuple(tuple(vs[(i + j) % ell] for j in range(k)) for i in range(ell))

    @property
    def edges(self):
        return tuple(tuple(sorted(e)) for e in self.ordered_edges)

    def to_dict(self):
        return list(self.vertices)


def cycle_edges(C):
    return list(C.edges)


def closed_walk_representations(C):
    """The 2l closed (l+1)-walks tracing C, one per starting point and direction."""
    vs, ell = C.vertices, C.length
    out = []
    for seq in (vs, vs[::-1]):
        for i in range(ell):
            rep = seq[i:] + seq[:i]
            out.append(Walk(k=C.k, vertex_sequence=rep + rep[: C.k]))
    return out


def is_cycle_of(H, C):
    return all(e in H.edges for e in C.edges)


def enumerate_cycles(H, ell, allowed=None):
    """All ell-cycles of H, each once in canonical form.

    DFS over vertex sequences rooted at the least vertex with the tie-break v2 < v_ell.
    ``allowed(e, f)`` optionally restricts the ell cyclic one-step transitions.
    """
    k = H.k
    if ell < k + 1:
        raise ValidationError(f"Cycles need length >= k+1={k + 1}, got {ell}")
    found = []
    seq = []
    used = set()

    def window(i):
        return tuple(seq[(i + j) % ell] for j in range(k))

    def closes():
        if seq[1] > seq[-1]:
            return False
        for i in range(ell - k + 1, ell):
            if not H.has_edge(window(i)):
                return False
        if allowed is not None:
            for i in range(ell - k, ell):
                if not allowed(window(i), window(i + 1)):
                    return False
        return True

    def extend():
        if len(seq) == ell:
            if closes():
                found.append(TightCycle(k=k, vertices=tuple(seq)))
            return
        root = seq[0]
        if len(seq) >= k - 1:
            candidates = sorted(H.neighbors.get(tuple(sorted(seq[len(seq) - k + 1 :])), ()))
        else:
            candidates = range(root + 1, H.n + 1)
        for v in candidates:
            if v <= root or v in used:
                continue
            seq.append(v)
            used.add(v)
            ok = True
            if allowed is not None and len(seq) >= k + 1:
                i = len(seq) - k - 1
                ok = allowed(tuple(seq[i : i + k]), tuple(seq[i + 1 : i + k + 1]))
            if ok:
                extend()
            seq.pop()
            used.discard(v)

    for root in H.vertices:
        seq.append(root)
        used.add(root)
        extend()
        seq.pop()
        used.discard(root)
    return found


# Walk counting
# -------------


def step_arcs(H):
    """Unrestricted one-step transitions e -> (e_2, ..., e_k, u) as index pairs."""
    index = H.index
    for e in H.ordered_edges:
        i = index[e]
        tail = e[1:]
        for u in H.neighbors.get(tuple(sorted(tail)), ()):
            yield i, index[(*tail, u)]


def operator_from_arcs(size, arcs):
    arcs = list(arcs)
    rows = np.fromiter((a for a, _ in arcs), dtype=np.int64, count=len(arcs))
    cols = np.fromiter((b for _, b in arcs), dtype=np.int64, count=len(arcs))
    data = np.ones(len(arcs), dtype=np.int64)
    return sp.sparse.csr_array((data, (rows, cols)), shape=(size, size), dtype=np.int64)


def step_operator(H):
    return operator_from_arcs(len(H.ordered_edges), step_arcs(H))


def operator_power(A, steps):
    """A**steps as a dense integer matrix, exact for any size of entry."""
    size = A.shape[0]
    if steps == 0:
        return np.eye(size, dtype=np.int64)
    max_out = int(A.sum(axis=1).max()) if size else 0
    if max_out**steps < INT64_HEADROOM:
        return sp.sparse.linalg.matrix_power(A, steps).toarray()
    # object dtype keeps python ints once int64 could overflow
    logger.debug("operator power %s exceeds int64 headroom; using python integers", steps)
    base = A.toarray().astype(object)
    result = base
    for _ in range(steps - 1):
        result = result.dot(base)
    return result


def walk_count_matrix(H, ell):
    """All-pairs ell-walk counts, indexed by ``H.ordered_edges``."""
    if ell < 1:
        raise ValidationError(f"Walk length must be at least 1, got {ell}")
    return operator_power(step_operator(H), ell - 1)


def iter_walks(H, s, ell, t=None):
    """Vertex sequences of the ell-walks starting at ordered edge s (ending at t if given)."""
    k = H.k
    seq = list(s)
    target_len = ell + k - 1

    def extend():
        if len(seq) == target_len:
            if t is None or tuple(seq[-k:]) == t:
                yield tuple(seq)
            return
        for u in sorted(H.neighbors.get(tuple(sorted(seq[len(seq) - k + 1 :])), ())):
            seq.append(u)
            yield from extend()
            seq.pop()

    yield from extend()


def count_walks_bruteforce(H, s, t, ell):
    s, t = tuple(s), tuple(t)
    if ell < 1:
        return 0
    return sum(1 for _ in iter_walks(H, s, ell, t))


def count_walks(H, s, t, ell, method="operator"):
    s, t = tuple(s), tuple(t)
    for e in (s, t):
        if not H.is_ordered_edge(e):
            raise ValidationError(f"{list(e)} is not an ordered edge")
    if ell < 1:
        return 0
    if method == "dfs":
        return count_walks_bruteforce(H, s, t, ell)
    if method != "operator":
        raise ValidationError(f"Unknown counting method '{method}'")
    if ell == 1:
        return int(s == t)
    counts = walk_count_matrix(H, ell)
    return int(counts[H.index[s], H.index[t]])


@dataclass(frozen=True)
class ConnectivityCertificate:
    ell: int
    alpha: Fraction
    per_pair_min: int
    scaling: Fraction
    witness: tuple = ()

    def to_dict(self):
        return {
            "ell": self.ell,
            "alpha": frac_str(self.alpha),
            "per_pair_min": self.per_pair_min,
            "scaling": frac_str(self.scaling),
            "witness": [list(e) for e in self.witness],
        }


def connectivity(H, ell):
    if ell < 1:
        raise ValidationError(f"Walk length must be at least 1, got {ell}")
    if H.e == 0:
        raise ValidationError("Connectivity needs at least one edge")
    counts = walk_count_matrix(H, ell)
    flat = int(np.argmin(counts))
    i, j = divmod(flat, counts.shape[1])
    per_pair_min = int(counts[i, j])
    ordered = H.ordered_count
    scaling = Fraction(H.n ** (ell - 1), ordered)
    return ConnectivityCertificate(
        ell=ell,
        alpha=per_pair_min / scaling,
        per_pair_min=per_pair_min,
        scaling=scaling,
        witness=(H.ordered_edges[i], H.ordered_edges[j]),
    )


# Connecting lemma
# ----------------


def lk_constants(k):
    """(l_k, a_k) with l_k = k^2 - k + 2 and a_k = (k-1)! * sum_{i<=k-2} (i+1)/i!."""
    if k < 2:
        raise ValidationError(f"k must be at least 2, got {k}")
    a = math.factorial(k - 1) * sum(Fraction(i + 1, math.factorial(i)) for i in range(k - 1))
    return k * k - k + 2, int(a)


@dataclass(frozen=True)
class InsertionCensus:
    count: int
    complete: bool
    nodes: int
    alpha: Fraction
    lower_bound: Fraction

    @property
    def passes(self):
        return self.count >= self.lower_bound

    def to_dict(self):
        return {
            "count": self.count,
            "complete": self.complete,
            "nodes": self.nodes,
            "alpha": frac_str(self.alpha),
            "lower_bound": frac_str(self.lower_bound),
            "passes": self.passes,
        }


def insertion_walks(H, s, t, budget=None):
    """Count the l_k-walks from s to t produced by the insertion construction.

    For each z in N = N(s_2..s_k) & N(t_1..t_{k-1}), the sequences x with
    s_2..s_k x t_1..t_{k-1} a walk in the link of z are enumerated. Each x is then
    completed by choosing z_1..z_{k-1} among the z admitting it and placing z_i at
    every k-th position of y. Walks are deduplicated by vertex sequence.
    """
    k = H.k
    if k < 3:
        raise ValidationError("The insertion construction needs k >= 3")
    s, t = tuple(s), tuple(t)
    for e in (s, t):
        if not H.is_ordered_edge(e):
            raise ValidationError(f"{list(e)} is not an ordered edge")
    budget = budget or DEFAULTS["insertion_budget"]
    ell_k, a_k = lk_constants(k)
    alpha = intersecting_parameter(H)
    lower_bound = alpha**a_k * Fraction(H.n) ** (ell_k - k - 1)

    N = H.neighbors.get(tuple(sorted(s[1:])), frozenset()) & H.neighbors.get(tuple(sorted(t[:-1])), frozenset())
    x_len = (k - 1) * (k - 2)
    link_len = (k - 1) ** 2 + 1
    admitting = {}
    nodes = 0
    complete = True

    for z in sorted(N):
        L = link(H, z)
        start, end = L.from_original(s[1:]), L.from_original(t[:-1])
        for seq in iter_walks(L.graph, start, link_len, end):
            nodes += 1
            x = L.to_original(seq[k - 1 : k - 1 + x_len])
            admitting.setdefault(x, set()).add(z)
            if nodes >= budget:
                complete = False
                break
        if not complete:
            break

    walks = set()
    for x, zs in admitting.items():
        for choice in itertools.product(sorted(zs), repeat=k - 1):
            nodes += 1
            y = []
            rest = iter(x)
            for pos in range((k - 1) ** 2):
                y.append(choice[pos // k] if pos % k == 0 else next(rest))
            vs = s + tuple(y) + t
            if all(H.is_ordered_edge(vs[i : i + k]) for i in range(len(vs) - k + 1)):
                walks.add(vs)
            if nodes >= budget:
                complete = False
                break
        if not complete:
            break

    if not complete:
        logger.info("insertion census for %s -> %s stopped at budget %s", s, t, budget)
    return InsertionCensus(count=len(walks), complete=complete, nodes=nodes, alpha=alpha, lower_bound=lower_bound)


def connecting_report(H):
    """Measured intersecting parameter and l_k-connectivity next to the connecting-lemma target."""
    k = H.k
    ell_k, a_k = lk_constants(k)
    alpha = intersecting_parameter(H)
    target = alpha ** (3 * math.factorial(k))
    cert = connectivity(H, ell_k)
    return {
        "k": k,
        "ell": ell_k,
        "a_k": a_k,
        "intersecting_parameter": frac_str(alpha),
        "target_alpha": frac_str(target),
        "measured": cert.to_dict(),
        "meets_target": cert.alpha >= target,
    }
