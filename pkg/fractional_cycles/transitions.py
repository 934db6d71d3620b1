"""Transition systems and T-compatible walks.

A transition system assigns to every (k-1)-set x of positive codegree a graph T_x on
the edges containing x. A walk step e -> f with pivot x = {e_2, ..., e_k} is
compatible when the underlying sets of e and f are adjacent in T_x.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from fractional_cycles.config import DEFAULTS
from fractional_cycles.exceptions import CertificationError, SamplingError, ValidationError
from fractional_cycles.hypergraph import min_codegree
from fractional_cycles.logger import get_logger
from fractional_cycles.utils import frac_str
from fractional_cycles.walks import enumerate_cycles, operator_from_arcs, operator_power, step_arcs

logger = get_logger("transitions")


def _key(x):
    return ",".join(str(v) for v in x)


def _unkey(text):
    return tuple(int(v) for v in text.split(",")) if text else ()


@dataclass(frozen=True)
class TransitionSystem:
    H: object
    adjacency: dict = field(default_factory=dict)  # x -> {edge: frozenset(neighbour edges)}
    r: int | None = None
    full: bool = False

    def graph(self, x):
        """T_x as a list of undirected pairs of sorted edges."""
        x = tuple(sorted(x))
        if self.full:
            edges = [tuple(sorted((*x, v))) for v in sorted(self.H.neighbors.get(x, ()))]
            return list(itertools.combinations(edges, 2))
        adj = self.adjacency.get(x, {})
        return sorted({tuple(sorted((e, f))) for e, nbrs in adj.items() for f in nbrs})

    def allows(self, e, f):
        """Whether the step e -> f (ordered edges, f[:-1] == e[1:]) is compatible."""
        if tuple(f[:-1]) != tuple(e[1:]):
            return False
        if self.full:
            return self.H.has_edge(e) and self.H.has_edge(f)
        x = tuple(sorted(e[1:]))
        return tuple(sorted(f)) in self.adjacency.get(x, {}).get(tuple(sorted(e)), ())

    def degrees(self):
        return {x: sorted({len(nbrs) for nbrs in adj.values()}) for x, adj in self.adjacency.items()}

    def is_regular(self, r):
        return all(len(nbrs) == r for adj in self.adjacency.values() for nbrs in adj.values())

    def to_dict(self):
        graphs = {}
        if not self.full:
            for x in sorted(self.adjacency):
                graphs[_key(x)] = {
                    _key(e): [list(f) for f in sorted(nbrs)] for e, nbrs in sorted(self.adjacency[x].items())
                }
        return {"n": self.H.n, "k": self.H.k, "r": self.r, "full": self.full, "graphs": graphs}

    @classmethod
    def from_dict(cls, H, data):
        if data.get("full"):
            return full_transition_system(H)
        adjacency = {}
        for xs, adj in data.get("graphs", {}).items():
            x = _unkey(xs)
            adjacency[x] = {_unkey(es): frozenset(tuple(sorted(f)) for f in nbrs) for es, nbrs in adj.items()}
            for e, nbrs in adjacency[x].items():
                for f in (e, *nbrs):
                    if not (set(x) <= set(f) and H.has_edge(f)):
                        raise ValidationError(f"T_{list(x)} mentions {list(f)}, which is not an edge containing x")
                for f in nbrs:
                    if e not in adjacency[x].get(f, ()):
                        raise ValidationError(f"T_{list(x)} is not symmetric at {list(e)} - {list(f)}")
        return cls(H=H, adjacency=adjacency, r=data.get("r"))


# Sampling
# --------


@lru_cache(maxsize=64)
def regular_graphs(d, r):
    """All r-regular simple graphs on {0, ..., d-1}, each as a tuple of pairs."""
    out = []
    need = [r] * d
    chosen = []

    def fill(v, start):
        if v == d:
            out.append(tuple(chosen))
            return
        if need[v] == 0:
            fill(v + 1, v + 2)
            return
        for u in range(max(start, v + 1), d):
            if need[u] == 0:
                continue
            need[u] -= 1
            need[v] -= 1
            chosen.append((v, u))
            fill(v, u + 1)
            chosen.pop()
            need[v] += 1
            need[u] += 1

    fill(0, 1)
    return tuple(out)


def _pairing(d, r, rng, max_tries):
    stubs = np.repeat(np.arange(d), r)
    for _ in range(max_tries):
        rng.shuffle(stubs)
        pairs = stubs.reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        edges = {tuple(sorted((int(a), int(b)))) for a, b in pairs}
        if len(edges) == len(pairs):
            return tuple(sorted(edges))
    raise SamplingError(
        f"No simple {r}-regular graph on {d} vertices after {max_tries} pairings",
        diagnostics={"d": d, "r": r, "tries": max_tries},
    )


def sample_regular_graph(vertices, r, rng, method="auto", max_tries=None):
    """Uniform simple r-regular graph on ``vertices``, returned as a list of pairs."""
    vertices = list(vertices)
    d = len(vertices)
    if r < 0 or (d and r > d - 1) or (r * d) % 2:
        raise ValidationError(f"No {r}-regular graph on {d} vertices")
    if method not in ("auto", "pairing", "enumerate"):
        raise ValidationError(f"Unknown sampling method '{method}'")
    if r == 0 or d == 0:
        return []
    complement = 2 * r > d - 1
    rr = d - 1 - r if complement else r
    if rr == 0:
        picked = ()
    elif method == "enumerate" or (method == "auto" and d <= DEFAULTS["enumerate_max_degree"]):
        graphs = regular_graphs(d, rr)
        picked = graphs[int(rng.integers(len(graphs)))]
    else:
        picked = _pairing(d, rr, rng, max_tries or DEFAULTS["sampler_retries"])
    if complement:
        taken = set(picked)
        picked = tuple(p for p in itertools.combinations(range(d), 2) if p not in taken)
    return [(vertices[a], vertices[b]) for a, b in picked]


def _edges_at(H, x):
    return [tuple(sorted((*x, v))) for v in sorted(H.neighbors.get(x, ()))]


# (k-1)-sets without neighbours have no transitions to sample
def _positive_min_codegree(H):
    return min((len(vs) for vs in H.neighbors.values()), default=0)


def sample_transition_system(H, r, seed, method="auto", max_tries=None):
    if not isinstance(r, int) or r < 0 or r % 2:
        raise ValidationError(f"r must be a non-negative even integer, got {r!r}")
    delta = _positive_min_codegree(H)
    if r > delta - 1:
        raise ValidationError(f"r={r} exceeds the minimum positive codegree minus one ({delta - 1})")
    rng = np.random.default_rng(seed)
    adjacency = {}
    for x in sorted(H.neighbors):
        edges = _edges_at(H, x)
        adj = {e: set() for e in edges}
        for a, b in sample_regular_graph(edges, r, rng, method=method, max_tries=max_tries):
            adj[a].add(b)
            adj[b].add(a)
        adjacency[x] = {e: frozenset(nbrs) for e, nbrs in adj.items()}
    return TransitionSystem(H=H, adjacency=adjacency, r=r)


def full_transition_system(H):
    """The maximal system: every walk step is allowed, same-edge steps included."""
    return TransitionSystem(H=H, adjacency={}, r=None, full=True)


# Compatibility
# -------------


def is_compatible_walk(W, T):
    edges = W.edges
    return all(T.allows(edges[i], edges[i + 1]) for i in range(len(edges) - 1))


def is_compatible_cycle(C, T):
    edges = C.ordered_edges
    ell = len(edges)
    return all(T.allows(edges[i], edges[(i + 1) % ell]) for i in range(ell))


@dataclass(frozen=True)
class CompatibilityDigraph:
    H: object
    system: TransitionSystem
    arcs: tuple

    @property
    def vertices(self):
        return self.H.ordered_edges

    @property
    def r(self):
        return self.system.r

    @cached_property
    def operator(self):
        return operator_from_arcs(len(self.H.ordered_edges), self.arcs)

    def out_degrees(self):
        return np.asarray(self.operator.sum(axis=1)).ravel()

    def in_degrees(self):
        return np.asarray(self.operator.sum(axis=0)).ravel()

    def has_arc(self, e, f):
        index = self.H.index
        return (index[tuple(e)], index[tuple(f)]) in self._arc_set

    @cached_property
    def _arc_set(self):
        return frozenset(self.arcs)

    def to_arc_list(self):
        """One arc per line: the two ordered edges, vertices space-separated, joined by ' -> '."""
        edges = self.H.ordered_edges
        lines = [
            f"{' '.join(map(str, edges[i]))} -> {' '.join(map(str, edges[j]))}" for i, j in sorted(self.arcs)
        ]
        return "\n".join(lines) + ("\n" if lines else "")


def build_compatibility_digraph(H, T):
    edges = H.ordered_edges
    arcs = tuple(sorted((i, j) for i, j in step_arcs(H) if T.allows(edges[i], edges[j])))
    Dg = CompatibilityDigraph(H=H, system=T, arcs=arcs)
    if T.r is not None:
        out, inn = Dg.out_degrees(), Dg.in_degrees()
        if len(out) and not (np.all(out == T.r) and np.all(inn == T.r)):
            raise ValidationError(f"Compatibility digraph is not {T.r}-regular; the system is not {T.r}-regular")
    return Dg


def compatible_count_matrix(Dg, ell):
    if ell < 1:
        raise ValidationError(f"Walk length must be at least 1, got {ell}")
    return operator_power(Dg.operator, ell - 1)


def count_compatible_walks(Dg, s, t, ell):
    index = Dg.H.index
    s, t = tuple(s), tuple(t)
    if ell == 1:
        return int(s == t)
    return int(compatible_count_matrix(Dg, ell)[index[s], index[t]])


def _base(Dg):
    # the full system is not regular; it is normalised like unrestricted walks, by n
    return Dg.r if Dg.r is not None else Dg.H.n


def compatible_connectivity(Dg, ell):
    """(alpha_compat, zeta): min pair count and worst relative deviation, both scaled by e/r^(ell-1)."""
    base = _base(Dg)
    if base < 1:
        raise ValidationError("Compatible connectivity needs r >= 1")
    counts = compatible_count_matrix(Dg, ell)
    scale = Fraction(Dg.H.ordered_count, base ** (ell - 1))
    lo, hi = int(counts.min()), int(counts.max())
    alpha = lo * scale
    zeta = max(abs(lo * scale - 1), abs(hi * scale - 1))
    return alpha, zeta


def enumerate_compatible_cycles(H, T, ell):
    return enumerate_cycles(H, ell, allowed=T.allows)


def compatible_cycle_count(H, T, ell):
    return len(enumerate_compatible_cycles(H, T, ell))


def compatible_closed_walk_census(H, T, ell):
    """Closed (ell+1)-walks e -> e, summed over e, with ell distinct leading vertices
    and every step compatible. Equals 2*ell times the number of compatible ell-cycles."""
    k = H.k
    if ell < k + 1:
        raise ValidationError(f"Cycles need length >= k+1={k + 1}, got {ell}")
    total = 0
    for e in H.ordered_edges:
        seq = list(e)

        def extend():
            if len(seq) == ell:
                closed = seq + seq[:k]
                for i in range(ell - k + 1, ell + 1):
                    if not H.has_edge(closed[i : i + k]) or not T.allows(
                        tuple(closed[i - 1 : i - 1 + k]), tuple(closed[i : i + k])
                    ):
                        return 0
                return 1
            found = 0
            for u in sorted(H.neighbors.get(tuple(sorted(seq[len(seq) - k + 1 :])), ())):
                if u in seq or not T.allows(tuple(seq[-k:]), (*seq[len(seq) - k + 1 :], u)):
                    continue
                seq.append(u)
                found += extend()
                seq.pop()
            return found

        total += extend()
    return total


# Certification
# -------------


@dataclass
class CertificationReport:
    seed: int | None
    r: int | None
    base_ell: int
    per_ell: dict
    accepted: bool

    def to_dict(self):
        return {
            "seed": self.seed,
            "r": self.r,
            "base_ell": self.base_ell,
            "accepted": self.accepted,
            "per_ell": {
                str(ell): {key: (frac_str(v) if v is not None else None) for key, v in vals.items()}
                for ell, vals in sorted(self.per_ell.items())
            },
        }


def certify_system(H, T, ell_list, base_ell=None, seed=None):
    ell_list = sorted(set(ell_list))
    if not ell_list or ell_list[0] < 1:
        raise ValidationError("Certification needs at least one walk length >= 1")
    base_ell = base_ell or ell_list[0]
    if base_ell not in ell_list:
        ell_list = sorted({*ell_list, base_ell})
    Dg = build_compatibility_digraph(H, T)
    per_ell = {}
    for ell in ell_list:
        if _base(Dg) == 0:
            # r = 0: only the trivial 1-walks exist
            alpha = Fraction(1 if len(Dg.vertices) == 1 else 0) if ell == 1 else Fraction(0)
            per_ell[ell] = {"alpha": alpha, "zeta": None}
            continue
        alpha, zeta = compatible_connectivity(Dg, ell)
        per_ell[ell] = {"alpha": alpha, "zeta": zeta}
    accepted = per_ell[base_ell]["alpha"] > 0
    return CertificationReport(seed=seed, r=T.r, base_ell=base_ell, per_ell=per_ell, accepted=accepted)


def derive_seed(seed, *path):
    """Child seed for attempt/run indices below a user seed."""
    return int(np.random.SeedSequence([seed, *path]).generate_state(1, dtype=np.uint64)[0])


def certify_and_resample(H, r, base_ell, ell_list=None, seed=0, budget=None):
    """Sample r-systems with derived seeds until one is accepted at ``base_ell``."""
    budget = budget or DEFAULTS["certify_budget"]
    ell_list = sorted({base_ell, *(ell_list or [])})
    diagnostics = []
    for attempt in range(budget):
        child = derive_seed(seed, attempt)
        try:
            T = sample_transition_system(H, r, child)
        except SamplingError as e:
            diagnostics.append({"seed": child, "error": str(e)})
            continue
        report = certify_system(H, T, ell_list, base_ell=base_ell, seed=child)
        if report.accepted:
            logger.debug("system accepted on attempt %s (seed %s)", attempt + 1, child)
            return T, report
        diagnostics.append(report.to_dict())
        logger.debug("system rejected on attempt %s (seed %s)", attempt + 1, child)
    raise CertificationError(
        f"No accepted {r}-transition system within {budget} seeds",
        diagnostics={"attempts": diagnostics},
    )
