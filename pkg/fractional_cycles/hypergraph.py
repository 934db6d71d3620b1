"""k-uniform hypergraphs on the vertex set {1, ..., n}.

Edges are stored as sorted k-tuples, ordered edges as raw k-tuples of distinct
vertices. Everything here is immutable; derived tables (codegrees, neighbourhoods,
the ordered-edge index) are computed once per instance and cached.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from fractional_cycles.config import DEFAULTS
from fractional_cycles.exceptions import GenerationError, ValidationError
from fractional_cycles.logger import get_logger
from fractional_cycles.utils import frac_str, parse_frac

logger = get_logger("hypergraph")


def _as_set(x, k):
    x = tuple(sorted(x))
    if len(x) != k - 1 or len(set(x)) != len(x):
        raise ValidationError(f"Expected a ({k}-1)-set of distinct vertices, got {list(x)}")
    return x


@dataclass(frozen=True)
class Hypergraph:
    n: int
    k: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 2:
            raise ValidationError(f"Uniformity k must be an integer >= 2, got {self.k!r}")
        if not isinstance(self.n, int) or self.n < 0:
            raise ValidationError(f"Vertex count n must be a non-negative integer, got {self.n!r}")
        for e in self.edges:
            if len(e) != self.k or len(set(e)) != self.k:
                raise ValidationError(f"Edge {list(e)} does not have {self.k} distinct vertices")
            if tuple(sorted(e)) != tuple(e):
                raise ValidationError(f"Edge {list(e)} is not stored in sorted form")
            if e[0] < 1 or e[-1] > self.n:
                raise ValidationError(f"Edge {list(e)} leaves the vertex set [1, {self.n}]")

    @classmethod
    def from_edges(cls, n, k, edges):
        normalized = [tuple(sorted(int(v) for v in e)) for e in edges]
        if len(set(normalized)) != len(normalized):
            raise ValidationError("Edges must be pairwise distinct as sets")
        return cls(n=n, k=k, edges=frozenset(normalized))

    @classmethod
    def from_dict(cls, data):
        try:
            return cls.from_edges(int(data["n"]), int(data["k"]), data["edges"])
        except (TypeError, ValueError) as e:
            raise ValidationError(f"Malformed instance: {e}")

    def to_dict(self):
        return {"n": self.n, "k": self.k, "edges": [list(e) for e in self.sorted_edges]}

    @property
    def vertices(self):
        return range(1, self.n + 1)

    @property
    def e(self):
        return len(self.edges)

    @property
    def ordered_count(self):
        return math.factorial(self.k) * len(self.edges)

    @cached_property
    def sorted_edges(self):
        return tuple(sorted(self.edges))

    def has_edge(self, vertices):
        return tuple(sorted(vertices)) in self.edges

    def is_ordered_edge(self, tup):
        return len(tup) == self.k and len(set(tup)) == self.k and self.has_edge(tup)

    @cached_property
    def neighbors(self):
        table = {}
        for e in self.edges:
            for v in e:
                x = tuple(u for u in e if u != v)
                table.setdefault(x, set()).add(v)
        return {x: frozenset(vs) for x, vs in table.items()}

    @cached_property
    def ordered_edges(self):
        out = []
        for e in self.sorted_edges:
            out.extend(itertools.permutations(e))
        return tuple(sorted(out))

    @cached_property
    def index(self):
        return {t: i for i, t in enumerate(self.ordered_edges)}

    def index_of(self, ordered_edge):
        try:
            return self.index[tuple(ordered_edge)]
        except KeyError:
            raise ValidationError(f"{list(ordered_edge)} is not an ordered edge of the hypergraph")

    def __repr__(self):
        return f"Hypergraph(n={self.n}, k={self.k}, e={self.e})"


def codegree(H, x):
    return len(H.neighbors.get(_as_set(x, H.k), ()))


def neighborhood(H, x):
    return H.neighbors.get(_as_set(x, H.k), frozenset())


def _all_codegrees(H):
    for x in itertools.combinations(H.vertices, H.k - 1):
        yield len(H.neighbors.get(x, ()))


def min_codegree(H):
    return min(_all_codegrees(H), default=0)


def max_codegree(H):
    return max(_all_codegrees(H), default=0)


def intersecting_parameter(H):
    """Largest alpha such that every pair of (k-1)-sets has >= alpha*n common neighbours."""
    if H.n == 0:
        return Fraction(0)
    sets = list(itertools.combinations(H.vertices, H.k - 1))
    nbrs = [H.neighbors.get(x, frozenset()) for x in sets]
    worst = H.n
    for i, a in enumerate(nbrs):
        for b in nbrs[i:]:
            worst = min(worst, len(a & b))
            if worst == 0:
                return Fraction(0)
    return Fraction(worst, H.n)


def is_alpha_intersecting(H, alpha):
    alpha = parse_frac(alpha)
    if not 0 < alpha <= 1:
        raise ValidationError(f"alpha must lie in (0, 1], got {alpha}")
    return intersecting_parameter(H) >= alpha


@dataclass(frozen=True)
class Link:
    graph: Hypergraph
    labels: tuple  # labels[i - 1] is the original vertex behind link vertex i
    z: int

    def to_original(self, seq):
        return tuple(self.labels[v - 1] for v in seq)

    def from_original(self, seq):
        if self.z in seq:
            raise ValidationError(f"Vertex {self.z} is the link centre and has no link label")
        return tuple(v if v < self.z else v - 1 for v in seq)


def link(H, z):
    if H.k < 3:
        raise ValidationError("Links of 2-graphs would be 1-uniform; unsupported")
    if not 1 <= z <= H.n:
        raise ValidationError(f"Vertex {z} is not in [1, {H.n}]")
    labels = tuple(v for v in H.vertices if v != z)
    relabel = {v: i + 1 for i, v in enumerate(labels)}
    edges = [tuple(relabel[u] for u in e if u != z) for e in H.edges if z in e]
    return Link(graph=Hypergraph.from_edges(H.n - 1, H.k - 1, edges), labels=labels, z=z)


# Generators
# ----------


def gen_complete(n, k):
    return Hypergraph(n=n, k=k, edges=frozenset(itertools.combinations(range(1, n + 1), k)))


def gen_random_min_codegree(n, k, delta_target, seed, p=None, max_retries=None):
    """Sample k-sets independently with probability p, raising p until min codegree >= target."""
    if delta_target > n - k + 1:
        raise GenerationError(
            f"Minimum codegree {delta_target} is impossible on n={n}, k={k}",
            diagnostics={"max_possible": n - k + 1},
        )
    max_retries = max_retries or DEFAULTS["generator_retries"]
    rng = np.random.default_rng(seed)
    candidates = list(itertools.combinations(range(1, n + 1), k))
    p = float(p) if p is not None else max(delta_target, 1) / max(n - k + 1, 1)
    measured = None
    for attempt in range(1, max_retries + 1):
        keep = rng.random(len(candidates)) < p
        H = Hypergraph(n=n, k=k, edges=frozenset(e for e, flag in zip(candidates, keep) if flag))
        measured = min_codegree(H)
        if measured >= delta_target:
            logger.debug("random instance n=%s k=%s accepted after %s attempt(s), p=%.4f", n, k, attempt, p)
            return H
        p = p + (1 - p) / 2
    raise GenerationError(
        f"No instance with minimum codegree >= {delta_target} after {max_retries} attempts",
        diagnostics={"attempts": max_retries, "last_min_codegree": measured, "last_p": p},
    )


@dataclass(frozen=True)
class LabeledExample:
    base: Hypergraph
    A: frozenset
    B: frozenset
    classes: dict  # i -> frozenset of edges of the complete k-graph with |e & A| = i
    h02: frozenset
    eps: Fraction = Fraction(0)
    zeta: Fraction = Fraction(0)

    @property
    def selection_probability(self):
        return 2 * (1 + self.zeta) * self.eps

    def check_invariants(self):
        n, k = self.base.n, self.base.k
        if len(self.A) * 2 != n or self.A | self.B != frozenset(range(1, n + 1)) or self.A & self.B:
            raise ValidationError("A and B must split [n] into halves")
        for i, edges in self.classes.items():
            for e in edges:
                if len(self.A.intersection(e)) != i:
                    raise ValidationError(f"Edge {list(e)} filed under class {i}")
        if not self.h02 <= self.classes[0] | self.classes.get(2, frozenset()):
            raise ValidationError("h02 must be drawn from E_0 and E_2")
        expected = set(self.h02)
        for i in range(1, k + 1):
            if i != 2:
                expected |= self.classes[i]
        if expected != set(self.base.edges):
            raise ValidationError("Base edges must equal h02 together with E_1, E_3, ..., E_k")
        return True

    def codegree_report(self):
        """Measured min codegree over (k-1)-sets meeting A in at most 2 vertices, vs eps*n + k."""
        H = self.base
        measured = min(
            (
                len(H.neighbors.get(x, ()))
                for x in itertools.combinations(H.vertices, H.k - 1)
                if len(self.A.intersection(x)) <= 2
            ),
            default=0,
        )
        target = self.eps * H.n + H.k
        return {"measured_min": measured, "target": target, "meets_target": measured >= target}

    def to_dict(self):
        data = self.base.to_dict()
        data["A"] = sorted(self.A)
        data["classes"] = {str(i): [list(e) for e in sorted(es)] for i, es in sorted(self.classes.items())}
        data["h02"] = [list(e) for e in sorted(self.h02)]
        data["eps"] = frac_str(self.eps)
        data["zeta"] = frac_str(self.zeta)
        return data

    @classmethod
    def from_dict(cls, data):
        base = Hypergraph.from_dict(data)
        A = frozenset(int(v) for v in data["A"])
        B = frozenset(base.vertices) - A
        classes = {
            int(i): frozenset(tuple(sorted(e)) for e in edges) for i, edges in data.get("classes", {}).items()
        }
        if not classes:
            classes = _classify(base.n, base.k, A)
        example = cls(
            base=base,
            A=A,
            B=B,
            classes=classes,
            h02=frozenset(tuple(sorted(e)) for e in data.get("h02", [])),
            eps=parse_frac(data.get("eps", 0)),
            zeta=parse_frac(data.get("zeta", 0)),
        )
        example.check_invariants()
        return example


def _classify(n, k, A):
    classes = {i: set() for i in range(k + 1)}
    for e in itertools.combinations(range(1, n + 1), k):
        classes[len(A.intersection(e))].add(e)
    return {i: frozenset(es) for i, es in classes.items()}


def gen_lowerbound_example_default_eps(k, ell, delta):
    """The example's own choice eps = 1/((k - 1 + 2/k)(ell - 1)) - delta."""
    return 1 / ((k - 1 + Fraction(2, k)) * (ell - 1)) - parse_frac(delta)


def gen_lowerbound_example(n, k, eps, zeta, seed):
    eps, zeta = parse_frac(eps), parse_frac(zeta)
    if n % 2 or n < 2 * k:
        raise ValidationError(f"n must be even and at least 2k, got n={n}")
    if not (0 <= eps < 1 and 0 <= zeta < 1):
        raise ValidationError("eps and zeta must lie in [0, 1)")
    p = 2 * (1 + zeta) * eps
    if p > 1:
        raise ValidationError(f"Selection probability 2(1+zeta)eps = {p} exceeds 1")

    A = frozenset(range(1, n // 2 + 1))
    B = frozenset(range(n // 2 + 1, n + 1))
    classes = _classify(n, k, A)

    rng = np.random.default_rng(seed)
    pool = sorted(classes[0] | classes.get(2, frozenset()))
    draws = rng.random(len(pool))
    h02 = frozenset(e for e, u in zip(pool, draws) if u < float(p))

    edges = set(h02)
    for i in range(1, k + 1):
        if i != 2:
            edges |= classes[i]
    example = LabeledExample(
        base=Hypergraph(n=n, k=k, edges=frozenset(edges)),
        A=A,
        B=B,
        classes=classes,
        h02=h02,
        eps=eps,
        zeta=zeta,
    )
    logger.debug("lower-bound example n=%s k=%s: |h02|=%s of %s candidates", n, k, len(h02), len(pool))
    return example
