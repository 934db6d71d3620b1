"""Explicit flow balancing on symmetric digraphs.

Every vertex u sends xi(u)/n towards every other vertex v, split evenly over all
directed l-paths from u to v. Opposite arcs are then cancelled so that the flow is
supported on one direction per arc pair. The result balances xi exactly.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction

import networkx as nx

from fractional_cycles.exceptions import TransportError, ValidationError
from fractional_cycles.logger import get_logger
from fractional_cycles.utils import frac_str

logger = get_logger("transport")


@dataclass(frozen=True)
class WeightedDigraph:
    graph: nx.DiGraph
    xi: dict = field(default_factory=dict)

    def __post_init__(self):
        for u, v in self.graph.edges:
            if not self.graph.has_edge(v, u):
                raise ValidationError(f"Arc {u} -> {v} has no reverse arc")
        if sum(self.xi.get(v, 0) for v in self.graph.nodes) != 0:
            raise ValidationError("Vertex weights must sum to zero")
        extra = set(self.xi) - set(self.graph.nodes)
        if extra:
            raise ValidationError(f"Weights given for unknown vertices: {sorted(extra)[:3]}")

    @classmethod
    def from_arcs(cls, vertices, arcs, xi=None):
        G = nx.DiGraph()
        G.add_nodes_from(vertices)
        G.add_edges_from(arcs)
        return cls(graph=G, xi={v: Fraction(w) for v, w in (xi or {}).items()})

    @property
    def vertices(self):
        return list(self.graph.nodes)

    @property
    def arcs(self):
        return list(self.graph.edges)

    @property
    def n(self):
        return self.graph.number_of_nodes()

    @property
    def beta(self):
        return max((abs(w) for w in self.xi.values()), default=Fraction(0))

    def weight(self, v):
        return self.xi.get(v, Fraction(0))

    def with_xi(self, xi):
        return replace(self, xi={v: Fraction(w) for v, w in xi.items()})


def _as_graph(Dg):
    return Dg.graph if isinstance(Dg, WeightedDigraph) else Dg


def iter_family(G, u, v, ell):
    """Directed l-paths (l arcs, distinct vertices) from u to v, as vertex tuples."""
    if ell == 1:
        if G.has_edge(u, v):
            yield (u, v)
        return
    if ell == 2:
        middles = set(G.successors(u)) & set(G.predecessors(v))
        middles.discard(u)
        middles.discard(v)
        for w in sorted(middles, key=repr):
            yield (u, w, v)
        return
    for path in nx.all_simple_paths(G, u, v, cutoff=ell):
        if len(path) == ell + 1:
            yield tuple(path)


def path_families(Dg, ell):
    if ell < 1:
        raise ValidationError(f"Path length must be at least 1, got {ell}")
    G = _as_graph(Dg)
    return {(u, v): list(iter_family(G, u, v, ell)) for u in G.nodes for v in G.nodes if u != v}


def _family_sizes(G, ell):
    return {(u, v): sum(1 for _ in iter_family(G, u, v, ell)) for u in G.nodes for v in G.nodes if u != v}


def alpha_paths(Dg, ell):
    """Largest alpha with every family of size >= alpha * n^(l-1)."""
    if ell < 1:
        raise ValidationError(f"Path length must be at least 1, got {ell}")
    G = _as_graph(Dg)
    n = G.number_of_nodes()
    sizes = _family_sizes(G, ell)
    if not sizes:
        return Fraction(0)
    return Fraction(min(sizes.values()), n ** (ell - 1))


@dataclass(frozen=True)
class BalancedFlow:
    eta: dict  # arc -> positive rational; arcs absent from the map carry 0
    bound: Fraction
    alpha: Fraction
    beta: Fraction
    ell: int

    def value(self, arc):
        return self.eta.get(arc, Fraction(0))

    @property
    def max_value(self):
        return max(self.eta.values(), default=Fraction(0))

    def to_dict(self):
        return {
            "ell": self.ell,
            "alpha": frac_str(self.alpha),
            "beta": frac_str(self.beta),
            "bound": frac_str(self.bound),
            "arcs": [
                [list(u) if isinstance(u, tuple) else u, list(v) if isinstance(v, tuple) else v, frac_str(w)]
                for (u, v), w in sorted(self.eta.items())
            ],
        }


def balance_flow(WDg, ell=2):
    G = WDg.graph
    n = WDg.n
    nodes = list(G.nodes)
    raw = {}
    smallest = None
    for u in nodes:
        send = WDg.weight(u)
        for v in nodes:
            if u == v:
                continue
            family = list(iter_family(G, u, v, ell))
            if not family:
                raise TransportError(f"No directed {ell}-path from {u} to {v}", pair=(u, v))
            smallest = len(family) if smallest is None else min(smallest, len(family))
            if send == 0:
                continue
            amount = send / (n * len(family))
            for path in family:
                for arc in zip(path, path[1:]):
                    raw[arc] = raw.get(arc, 0) + amount

    # raw amounts are signed, so each arc pair is settled from both sides
    eta = {}
    for x, y in set(raw) | {(y, x) for x, y in raw}:
        net = raw.get((x, y), 0) - raw.get((y, x), 0)
        if net > 0:
            eta[(x, y)] = net

    alpha = Fraction(smallest or 0, n ** (ell - 1)) if n else Fraction(0)
    beta = WDg.beta
    bound = 2 * beta * ell / (alpha * n) if alpha else Fraction(0)
    logger.debug("balanced %s vertices: %s arcs carry flow, max %s", n, len(eta), max(eta.values(), default=0))
    return BalancedFlow(eta=eta, bound=bound, alpha=alpha, beta=beta, ell=ell)


def flow_divergence(WDg, flow):
    """xi(v) + inflow(v) - outflow(v) for every vertex; all zero iff balanced."""
    residual = {v: WDg.weight(v) for v in WDg.graph.nodes}
    for (x, y), w in flow.eta.items():
        residual[x] -= w
        residual[y] += w
    return residual


def verify_balance(WDg, flow):
    for arc, w in flow.eta.items():
        if not WDg.graph.has_edge(*arc) or w < 0 or w > flow.bound:
            return False
    return all(r == 0 for r in flow_divergence(WDg, flow).values())


def disjointness_digraph(H, xi=None):
    """Vertices are the edges of H; arcs join disjoint edges in both directions."""
    edges = H.sorted_edges
    arcs = []
    for i, e in enumerate(edges):
        es = set(e)
        for f in edges[i + 1 :]:
            if es.isdisjoint(f):
                arcs.append((e, f))
                arcs.append((f, e))
    return WeightedDigraph.from_arcs(edges, arcs, xi)
