"""Exact feasibility oracle for fractional cycle decompositions.

Phase-1 simplex over the variables omega(C) >= 0, one equality row
sum_{C containing e} omega(C) = 1 per edge, with one artificial column per row.
Pivoting follows Bland's rule on Fractions, so it terminates. When the artificial
objective stays positive, the phase-1 duals give a Farkas certificate.
"""

import time
from dataclasses import dataclass, field
from fractions import Fraction

from fractional_cycles.config import DEFAULTS
from fractional_cycles.exceptions import ValidationError
from fractional_cycles.logger import get_logger
from fractional_cycles.utils import frac_str, parse_frac
from fractional_cycles.walks import enumerate_cycles
from fractional_cycles.weights import WeightFunction

logger = get_logger("lp_oracle")

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
BUDGET_EXCEEDED = "budget_exceeded"


@dataclass
class OracleResult:
    status: str
    weights: WeightFunction | None = None
    dual: dict = field(default_factory=dict)
    pivots: int = 0

    @property
    def feasible(self):
        return self.status == FEASIBLE

    def to_dict(self):
        data = {"status": self.status, "pivots": self.pivots}
        if self.weights is not None:
            data.update(self.weights.to_dict())
        if self.dual:
            data["dual"] = {",".join(map(str, e)): frac_str(y) for e, y in sorted(self.dual.items())}
        return data


class _Tableau:
    """Dense phase-1 tableau: columns are the cycle variables followed by one artificial per row."""

    def __init__(self, rows, n_vars):
        m = len(rows)
        self.m, self.n_vars = m, n_vars
        width = n_vars + m
        self.A = []
        for i, cols in enumerate(rows):
            row = [Fraction(0)] * width
            for j in cols:
                row[j] += 1
            row[n_vars + i] = Fraction(1)
            self.A.append(row)
        self.b = [Fraction(1)] * m
        self.basis = [n_vars + i for i in range(m)]
        # reduced costs of min sum(artificials)
        self.d = [-sum(self.A[i][j] for i in range(m)) for j in range(n_vars)] + [Fraction(0)] * m
        self.objective = Fraction(m)

    def entering(self):
        return next((j for j, dj in enumerate(self.d) if dj < 0), None)

    def leaving(self, j):
        candidates = [(self.b[i] / self.A[i][j], self.basis[i], i) for i in range(self.m) if self.A[i][j] > 0]
        return min(candidates)[2] if candidates else None

    def pivot(self, i, j):
        row = self.A[i]
        piv = row[j]
        if piv != 1:
            self.A[i] = row = [v / piv for v in row]
            self.b[i] /= piv
        for r in range(self.m):
            if r == i:
                continue
            f = self.A[r][j]
            if f:
                self.A[r] = [a - f * c for a, c in zip(self.A[r], row)]
                self.b[r] -= f * self.b[i]
        f = self.d[j]
        if f:
            self.d = [a - f * c for a, c in zip(self.d, row)]
            self.objective += f * self.b[i]
        self.basis[i] = j

    def artificial_sum(self):
        return sum((self.b[i] for i, col in enumerate(self.basis) if col >= self.n_vars), Fraction(0))

    def duals(self):
        # column of artificial i has cost 1 and unit vector e_i: d = 1 - u_i
        return [1 - self.d[self.n_vars + i] for i in range(self.m)]


def lp_oracle(H, ell, time_budget=None, cycles=None):
    """Decide whether H has a fractional decomposition into tight ell-cycles."""
    if ell < H.k + 1:
        raise ValidationError(f"Cycles need length >= k+1={H.k + 1}, got {ell}")
    time_budget = DEFAULTS["lp_time_budget"] if time_budget is None else float(time_budget)
    started = time.monotonic()

    edges = H.sorted_edges
    if cycles is None:
        cycles = enumerate_cycles(H, ell)
    if time.monotonic() - started > time_budget:
        return OracleResult(status=BUDGET_EXCEEDED)

    row_of = {e: i for i, e in enumerate(edges)}
    rows = [[] for _ in edges]
    for j, C in enumerate(cycles):
        for e in C.edges:
            rows[row_of[e]].append(j)

    tab = _Tableau(rows, len(cycles))
    pivots = 0
    while True:
        j = tab.entering()
        if j is None:
            break
        i = tab.leaving(j)
        if i is None:
            # the phase-1 objective is bounded below by 0
            raise AssertionError("phase-1 simplex reported an unbounded direction")
        tab.pivot(i, j)
        pivots += 1
        if time.monotonic() - started > time_budget:
            logger.info("oracle stopped after %s pivots: time budget %ss", pivots, time_budget)
            return OracleResult(status=BUDGET_EXCEEDED, pivots=pivots)

    assert tab.objective == tab.artificial_sum()
    if tab.objective > 0:
        dual = {e: -u for e, u in zip(edges, tab.duals())}
        logger.debug("infeasible after %s pivots; residual %s", pivots, tab.objective)
        return OracleResult(status=INFEASIBLE, dual=dual, pivots=pivots)

    weights = {}
    for i, col in enumerate(tab.basis):
        if col < len(cycles) and tab.b[i]:
            weights[cycles[col]] = tab.b[i]
    logger.debug("feasible after %s pivots; %s cycles carry weight", pivots, len(weights))
    return OracleResult(status=FEASIBLE, weights=WeightFunction(H=H, ell=ell, weights=weights), pivots=pivots)


def verify_certificate(H, ell, dual, cycles=None):
    """y certifies infeasibility iff sum(y) < 0 and every ell-cycle has sum_{e in C} y_e >= 0."""
    y = {tuple(e): parse_frac(v) for e, v in dual.items()}
    unknown = set(y) - set(H.edges)
    if unknown:
        raise ValidationError(f"Certificate names non-edges: {sorted(unknown)[:3]}")
    if sum(y.values(), Fraction(0)) >= 0:
        return False
    if cycles is None:
        cycles = enumerate_cycles(H, ell)
    return all(sum((y.get(e, Fraction(0)) for e in C.edges), Fraction(0)) >= 0 for C in cycles)


def certificate_from_json(data):
    """{"dual": {"u,v": "p/q"}} -> {edge tuple: Fraction}."""
    return {tuple(int(v) for v in key.split(",")): parse_frac(val) for key, val in data.get("dual", {}).items()}
