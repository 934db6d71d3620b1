"""Fractional cycle decompositions: initial weights, adjustment by transporters,
averaging over transition systems, and exact verification."""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from fractional_cycles.config import DEFAULTS
from fractional_cycles.exceptions import (
    PipelineAbort,
    TransportError,
    ValidationError,
)
from fractional_cycles.hypergraph import max_codegree, min_codegree
from fractional_cycles.logger import get_logger
from fractional_cycles.transitions import (
    build_compatibility_digraph,
    certify_and_resample,
    compatible_connectivity,
    derive_seed,
    enumerate_compatible_cycles,
    full_transition_system,
)
from fractional_cycles.transport import balance_flow, disjointness_digraph
from fractional_cycles.transporter import find_transporters, shift_deltas, transporter_count_bounds
from fractional_cycles.utils import frac_str, parse_frac
from fractional_cycles.walks import enumerate_cycles
from fractional_cycles.weights import WeightFunction

logger = get_logger("decomposer")


def initial_weights(H, T, ell, cycles=None):
    """omega_0 = e(H)/(ell * c) on the compatible ell-cycles, 0 elsewhere."""
    if cycles is None:
        cycles = enumerate_cycles(H, ell) if T.full else enumerate_compatible_cycles(H, T, ell)
    if not cycles:
        raise PipelineAbort(f"No compatible {ell}-cycles; nothing to start from")
    w = Fraction(H.e, ell * len(cycles))
    return WeightFunction(H=H, ell=ell, weights=dict.fromkeys(cycles, w))


def edge_deviation(omega):
    return {e: s - 1 for e, s in omega.edge_sums().items()}


@dataclass
class DecompositionReport:
    edge_sums: dict
    is_exact_cover: bool
    offending_edges: list
    is_nonnegative: bool
    min_weight: Fraction
    max_weight: Fraction
    bounds_check: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "is_exact_cover": self.is_exact_cover,
            "is_nonnegative": self.is_nonnegative,
            "offending_edges": [list(e) for e in self.offending_edges],
            "min_weight": frac_str(self.min_weight),
            "max_weight": frac_str(self.max_weight),
            "edge_sums": {",".join(map(str, e)): frac_str(s) for e, s in sorted(self.edge_sums.items())},
            "bounds_check": self.bounds_check,
            "diagnostics": self.diagnostics,
        }


def _envelope(values, low, high):
    values = list(values)
    within = sum(1 for v in values if (low is None or v >= low) and (high is None or v <= high))
    return {
        "low": frac_str(low) if low is not None else None,
        "high": frac_str(high) if high is not None else None,
        "checked": len(values),
        "within": within,
        "passes": within == len(values),
    }


def verify(H, omega, ell, mu, r=None, system=None, cycles=None):
    """Recompute edge sums from scratch and compare weights with both envelopes."""
    mu = parse_frac(mu)
    sums = omega.edge_sums()
    offending = sorted(e for e, s in sums.items() if s != 1)
    values = list(omega.weights.values())
    bounds = {}

    if r:
        target = Fraction(2 * H.e, r**ell)
        low, high = (1 - mu) * target, (1 + mu) * target
        if system is not None and not system.full:
            compatible = enumerate_compatible_cycles(H, system, ell)
            compat_set = set(compatible)
            other = [w for C, w in omega.weights.items() if C not in compat_set]
            bounds["r_envelope"] = {
                "target": frac_str(target),
                "compatible": _envelope((omega.get(C) for C in compatible), low, high),
                "noncompatible": _envelope(other, None, mu * target),
            }
            bounds["r_envelope"]["passes"] = (
                bounds["r_envelope"]["compatible"]["passes"] and bounds["r_envelope"]["noncompatible"]["passes"]
            )
        else:
            bounds["r_envelope"] = {"target": frac_str(target), **_envelope(values, low, high)}

    delta, Delta = min_codegree(H), max_codegree(H)
    if Delta:
        if cycles is None:
            cycles = enumerate_cycles(H, ell) if ell >= H.k + 1 else []
        low = (1 - mu) * Fraction(2 * H.e, Delta**ell)
        high = (1 + mu) * Fraction(2 * H.e, delta**ell) if delta else None
        bounds["codegree_envelope"] = _envelope((omega.get(C) for C in cycles), low, high)

    return DecompositionReport(
        edge_sums=sums,
        is_exact_cover=not offending,
        offending_edges=offending,
        is_nonnegative=all(w >= 0 for w in values),
        min_weight=omega.min_weight(),
        max_weight=omega.max_weight(),
        bounds_check=bounds,
        diagnostics={"cycles_with_weight": len(omega.weights), "mu": frac_str(mu)},
    )


def hypothesis_flags(H, ell, mu, zeta=None, alpha=None, ell0=None):
    """Whether the asymptotic hypotheses hold at this scale (floats; reported, never enforced)."""
    mu = float(parse_frac(mu))
    k = H.k
    flags = {"theorem": None, "adjustments": None}
    if alpha and ell0 and 0 < mu < 1:
        ratio = ell0 / float(alpha)
        needed = 180 * k * ratio * math.log(ratio) * math.log(1 / mu)
        flags["theorem"] = {"needed_ell": needed, "met": ell >= needed}
    if zeta is not None and H.n:
        delta = min_codegree(H) / H.n
        lhs = ell * (1 - float(zeta) / 2) ** (ell + 1)
        rhs = delta ** (k + 1) * mu / (400 * k)
        flags["adjustments"] = {"lhs": lhs, "rhs": rhs, "met": lhs <= rhs}
    return flags


def _transport_deltas(H, T, ell, xi, m_cap, seed, node_budget, detour_limit=None):
    """Per-cycle deltas moving the deviation xi along a balanced flow.

    A transporter for any orientation of (s, t) moves weight between the underlying
    edges, so the flow on an arc is split over the orientations that have transporters.
    An arc with none is routed through an intermediate edge u as s -> u -> t.
    """
    k = H.k
    detour_limit = detour_limit or DEFAULTS["detour_limit"]
    P = ell + 1
    if P // 2 < k or P - P // 2 < k:
        # the edges with the largest surplus and deficit
        surplus = max(sorted(xi), key=xi.get)
        deficit = min(sorted(xi), key=xi.get)
        raise PipelineAbort(
            f"{ell}-transporters need ell + 1 >= 2k = {2 * k}",
            pair=(surplus, deficit),
            diagnostics={"ell": ell, "k": k, "xi_max": frac_str(xi[surplus])},
        )

    D = disjointness_digraph(H, xi)
    try:
        flow = balance_flow(D, ell=2)
    except TransportError as e:
        raise PipelineAbort(str(e), pair=e.pair)

    groups_of = {}

    def orientations(s, t):
        if (s, t) not in groups_of:
            lookup = len(groups_of)
            groups = []
            pairs = itertools.product(itertools.permutations(s), itertools.permutations(t))
            for idx, (s_vec, t_vec) in enumerate(pairs):
                found = find_transporters(H, T, s_vec, t_vec, ell, m_cap, derive_seed(seed, lookup, idx), node_budget)
                if found:
                    groups.append(found)
            groups_of[(s, t)] = groups
        return groups_of[(s, t)]

    def route(s, t):
        if orientations(s, t):
            return [(s, t)]
        used = set(s) | set(t)
        middles = (u for u in H.sorted_edges if used.isdisjoint(u))
        for u in itertools.islice(middles, detour_limit):
            if orientations(s, u) and orientations(u, t):
                return [(s, u), (u, t)]
        return None

    deltas = {}
    stats = {
        "arcs_with_flow": len(flow.eta),
        "flow_bound": frac_str(flow.bound),
        "transporters": 0,
        "pairs": 0,
        "detours": 0,
    }
    for (s, t), eta in sorted(flow.eta.items()):
        hops = route(s, t)
        if hops is None:
            raise PipelineAbort(
                f"No transporter found for {list(s)} -> {list(t)} or through {detour_limit} intermediate edges",
                pair=(s, t),
                diagnostics={"arcs_with_flow": len(flow.eta), "pairs_done": stats["pairs"]},
            )
        stats["detours"] += len(hops) - 1
        for a, b in hops:
            groups = orientations(a, b)
            for found in groups:
                w = eta / (len(groups) * len(found))
                for tr in found:
                    for C, d in shift_deltas(tr, w).items():
                        deltas[C] = deltas.get(C, 0) + d
                stats["transporters"] += len(found)
        stats["pairs"] += 1
    logger.debug("transported %s arcs, %s through a detour", stats["pairs"], stats["detours"])
    return deltas, stats


def adjust(H, T, ell, m_cap=None, seed=0, mu=None, xi_hook=None, node_budget=None):
    """Turn omega_0 into an exact fractional decomposition by transporting deviations."""
    m_cap = m_cap or DEFAULTS["m_cap"]
    mu = DEFAULTS["mu"] if mu is None else parse_frac(mu)
    if ell < 4:
        raise ValidationError(f"Adjustment needs ell >= 4, got {ell}")

    full = T.full
    cycles = enumerate_cycles(H, ell) if full else enumerate_compatible_cycles(H, T, ell)
    omega0 = initial_weights(H, T, ell, cycles=cycles)
    start = xi_hook(omega0) if xi_hook else omega0
    xi = edge_deviation(start)

    stats = {}
    if any(xi.values()):
        if sum(xi.values()) != 0:
            raise PipelineAbort("Edge deviations do not sum to zero; they cannot be transported")
        deltas, stats = _transport_deltas(H, T, ell, xi, m_cap, seed, node_budget)
        omega = start.plus(deltas)
    else:
        omega = start

    zeta = None
    if T.r:
        _, zeta = compatible_connectivity(build_compatibility_digraph(H, T), ell)

    report = verify(H, omega, ell, mu, r=T.r, system=None if full else T, cycles=cycles if full else None)
    report.diagnostics.update(
        {
            "seed": seed,
            "r": T.r,
            "compatible_cycles": len(cycles),
            "omega0": frac_str(Fraction(H.e, ell * len(cycles))),
            "xi_max": frac_str(max((abs(v) for v in xi.values()), default=Fraction(0))),
            "transport": stats,
            "zeta": frac_str(zeta) if zeta is not None else None,
            "hypotheses": hypothesis_flags(H, ell, mu, zeta=zeta),
            "transporter_bounds": transporter_count_bounds(H, T.r, ell, zeta) if zeta is not None else None,
        }
    )
    logger.info(
        "adjust ell=%s seed=%s: %s compatible cycles, exact=%s, min weight %s",
        ell,
        seed,
        len(cycles),
        report.is_exact_cover,
        report.min_weight,
    )
    return omega, report


def average_decompositions(
    H, ell, r, N, m_cap=None, seed=0, mu=None, system="sampled", resample_budget=None, node_budget=None
):
    """Uniform average of N adjusted decompositions over independent transition systems."""
    if N < 1:
        raise ValidationError(f"N must be at least 1, got {N}")
    resample_budget = resample_budget or DEFAULTS["resample_budget"]
    mu = DEFAULTS["mu"] if mu is None else parse_frac(mu)
    cycles = enumerate_cycles(H, ell)
    runs, rows = [], []
    for i in range(N):
        failures = []
        for attempt in range(resample_budget):
            child = derive_seed(seed, i, attempt)
            try:
                if system == "full":
                    T, alpha_compat = full_transition_system(H), None
                else:
                    T, cert = certify_and_resample(H, r, base_ell=ell, seed=child)
                    alpha_compat = cert.per_ell[ell]["alpha"]
                omega, report = adjust(H, T, ell, m_cap, child, mu=mu, node_budget=node_budget)
            except PipelineAbort as e:
                failures.append({"seed": child, "error": str(e)})
                logger.info("run %s attempt %s aborted: %s", i, attempt + 1, e)
                continue
            runs.append(omega)
            rows.append(
                {
                    "run": i,
                    "seed": child,
                    "zeta": report.diagnostics.get("zeta"),
                    "alpha_compat": frac_str(alpha_compat) if alpha_compat is not None else None,
                    "min_weight": frac_str(report.min_weight),
                    "min_cycle_weight": frac_str(min((omega.get(C) for C in cycles), default=Fraction(0))),
                    "exact_cover": report.is_exact_cover,
                    "nonnegative": report.is_nonnegative,
                    "adjustments_hypothesis": (report.diagnostics["hypotheses"]["adjustments"] or {}).get("met"),
                }
            )
            break
        else:
            raise PipelineAbort(
                f"Run {i} aborted on all {resample_budget} resampled systems",
                diagnostics={"failures": failures},
            )

    omega = WeightFunction.average(runs)
    report = verify(H, omega, ell, mu, r=r if system != "full" else None, cycles=cycles)
    # minimum over every ell-cycle, zero weights included
    report.diagnostics.update(
        {
            "runs": rows,
            "min_weight_by_run": [row["min_weight"] for row in rows],
            "min_cycle_weight": frac_str(min((omega.get(C) for C in cycles), default=Fraction(0))),
        }
    )
    return omega, report


def example_structure_check(LE, ell):
    """Structural argument of the lower-bound example, checked exhaustively at this scale."""
    H = LE.base
    k = H.k
    if ell % k == 0:
        raise ValidationError(f"ell must not be divisible by k={k}, got {ell}")
    if ell < k + 1:
        raise ValidationError(f"Cycles need length >= k+1={k + 1}, got {ell}")
    E1 = LE.classes[1]
    A = LE.A

    # (a) on (V, E_1) the side met once by every edge recurs exactly every k positions
    checked = violations = 0
    neighbors = {}
    for e in E1:
        for v in e:
            neighbors.setdefault(tuple(u for u in e if u != v), set()).add(v)
    for e in sorted(E1):
        for vec in itertools.permutations(e):
            for u in sorted(neighbors.get(tuple(sorted(vec[1:])), ())):
                seq = (*vec, u)
                checked += 1
                if seq[0] in A and (any(v in A for v in seq[1:k]) or seq[k] not in A):
                    violations += 1

    # (b) every ell-cycle through an E_1 edge uses an h02 edge
    meeting = without = 0
    for C in enumerate_cycles(H, ell):
        edges = set(C.edges)
        if edges & E1:
            meeting += 1
            if not edges & LE.h02:
                without += 1

    # (c) the weight budget: E_1 needs |E_1|, h02 can carry at most (ell-1) e(h02)
    budget = (ell - 1) * len(LE.h02)
    return {
        "ell": ell,
        "spacing": {"side": "A", "two_walks_checked": checked, "violations": violations, "holds": violations == 0},
        "cycles": {"meeting_E1": meeting, "without_h02": without, "holds": without == 0},
        "budget": {"h02_capacity": budget, "E1": len(E1), "witnesses_no_decomposition": budget < len(E1)},
        "codegree": {k_: (frac_str(v) if isinstance(v, Fraction) else v) for k_, v in LE.codegree_report().items()},
    }


def decomposition_to_json(omega, report):
    return {"cycles": omega.to_dict()["cycles"], "ell": omega.ell, "report": report.to_dict()}


def decomposition_from_json(H, data, ell=None):
    return WeightFunction.from_dict(H, data, ell=ell)
