"""Finite Markov chains with exact rational transition matrices.

A chain keeps an integer weight matrix ``W`` (numpy object dtype, python ints) and a
common denominator ``scale`` so that P = W / scale and P^m = W^m / scale^m stay exact.
"""

import math
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, Decimal, localcontext
from fractions import Fraction

import numpy as np

from fractional_cycles.exceptions import ValidationError
from fractional_cycles.logger import get_logger
from fractional_cycles.utils import frac_str, parse_frac

logger = get_logger("markov")


def _object_matrix(rows):
    m = len(rows)
    W = np.empty((m, m), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            W[i, j] = int(v)
    return W


@dataclass(frozen=True)
class FiniteChain:
    states: tuple
    W: np.ndarray = field(repr=False)
    scale: int
    sigma: tuple

    def __post_init__(self):
        m = len(self.states)
        if self.W.shape != (m, m):
            raise ValidationError(f"Transition matrix must be {m}x{m}")
        for i in range(m):
            if sum(self.W[i]) != self.scale:
                raise ValidationError(f"Row {i} does not sum to 1")
            if any(w < 0 for w in self.W[i]):
                raise ValidationError(f"Row {i} has a negative entry")
        if len(self.sigma) != m or sum(self.sigma) != 1:
            raise ValidationError("Stationary distribution must have one entry per state and sum to 1")
        if not self.is_stationary(self.sigma):
            raise ValidationError("sigma is not stationary for P")

    @property
    def size(self):
        return len(self.states)

    def p(self, i, j):
        return Fraction(int(self.W[i, j]), self.scale)

    @property
    def P(self):
        return [[self.p(i, j) for j in range(self.size)] for i in range(self.size)]

    def is_stationary(self, sigma):
        m = self.size
        for j in range(m):
            if sum(sigma[i] * self.W[i, j] for i in range(m)) != sigma[j] * self.scale:
                return False
        return True

    def power(self, step):
        if step < 1:
            raise ValidationError(f"Block step must be at least 1, got {step}")
        result = self.W
        for _ in range(step - 1):
            result = result.dot(self.W)
        return result, self.scale**step

    def to_dict(self):
        return {
            "states": [list(s) if isinstance(s, tuple) else s for s in self.states],
            "P": [[frac_str(v) for v in row] for row in self.P],
            "sigma": [frac_str(v) for v in self.sigma],
        }


def stationary_distribution(P):
    """Exact solution of sigma P = sigma, sum(sigma) = 1 by elimination over fractions."""
    m = len(P)
    # rows of (P^T - I) with the last equation replaced by the normalisation
    A = [[Fraction(P[j][i]) - (1 if i == j else 0) for j in range(m)] + [Fraction(0)] for i in range(m)]
    A[-1] = [Fraction(1)] * m + [Fraction(1)]
    for col in range(m):
        pivot = next((r for r in range(col, m) if A[r][col] != 0), None)
        if pivot is None:
            raise ValidationError("The chain has no unique stationary distribution")
        A[col], A[pivot] = A[pivot], A[col]
        lead = A[col][col]
        A[col] = [v / lead for v in A[col]]
        for r in range(m):
            if r != col and A[r][col] != 0:
                factor = A[r][col]
                A[r] = [a - factor * b for a, b in zip(A[r], A[col])]
    return tuple(A[i][m] for i in range(m))


def chain_from_matrix(P, states=None):
    P = [[parse_frac(v) for v in row] for row in P]
    m = len(P)
    scale = math.lcm(*(v.denominator for row in P for v in row)) if m else 1
    W = _object_matrix([[v.numerator * (scale // v.denominator) for v in row] for row in P])
    return FiniteChain(
        states=tuple(states) if states is not None else tuple(range(m)),
        W=W,
        scale=scale,
        sigma=stationary_distribution(P),
    )


def chain_from_digraph(Dg):
    """Simple random walk on an out-regular compatibility digraph."""
    out, inn = Dg.out_degrees(), Dg.in_degrees()
    m = len(Dg.vertices)
    if m == 0 or int(out.max()) == 0:
        raise ValidationError("No chain: the digraph has no arcs (r = 0)")
    r = int(out[0])
    if not np.all(out == r):
        raise ValidationError("No chain: the digraph is not out-regular")
    W = np.zeros((m, m), dtype=object)
    for i, j in Dg.arcs:
        W[i, j] += 1
    if np.all(inn == r):
        sigma = tuple(Fraction(1, m) for _ in range(m))
    else:
        sigma = stationary_distribution([[Fraction(int(W[i, j]), r) for j in range(m)] for i in range(m)])
    return FiniteChain(states=tuple(Dg.vertices), W=W, scale=r, sigma=sigma)


def block_chain(chain, step):
    W, scale = chain.power(step)
    return FiniteChain(states=chain.states, W=W, scale=scale, sigma=chain.sigma)


def random_positive_chain(m, seed, max_weight=9):
    """Strictly positive chain with integer weights in [1, max_weight] normalised by row."""
    if m < 1:
        raise ValidationError("A chain needs at least one state")
    rng = np.random.default_rng(seed)
    raw = rng.integers(1, max_weight + 1, size=(m, m))
    P = [[Fraction(int(w), int(row.sum())) for w in row] for row in raw]
    return chain_from_matrix(P)


@dataclass(frozen=True)
class MixingParams:
    alpha: Fraction | None
    beta: Fraction | None
    applicable: bool
    reason: str = ""

    def __iter__(self):
        return iter((self.alpha, self.beta))

    def to_dict(self):
        return {
            "alpha": frac_str(self.alpha) if self.alpha is not None else None,
            "beta": frac_str(self.beta) if self.beta is not None else None,
            "applicable": self.applicable,
            "reason": self.reason,
        }


def mixing_params(chain):
    entries = chain.W.ravel()
    if any(w == 0 for w in entries):
        return MixingParams(None, None, False, "P has a zero entry")
    if any(s == 0 for s in chain.sigma):
        return MixingParams(None, None, False, "sigma has a zero entry")
    p_min = Fraction(int(min(entries)), chain.scale)
    p_max = Fraction(int(max(entries)), chain.scale)
    alpha = p_min / max(chain.sigma)
    beta = p_max / min(chain.sigma)
    return MixingParams(alpha, beta, True)


def mixing_threshold(alpha, beta):
    """t_min = ceil(2 + 2 ln(beta) / alpha), rounded upward."""
    alpha, beta = parse_frac(alpha), parse_frac(beta)
    if alpha <= 0:
        raise ValidationError("mixing threshold needs alpha > 0")
    if beta < 1:
        raise ValidationError("beta is always at least 1")
    if beta == 1:
        return 2
    with localcontext() as ctx:
        ctx.prec = 60
        log_beta = Decimal(beta.numerator).ln() - Decimal(beta.denominator).ln()
        value = 2 + 2 * Decimal(alpha.denominator) / Decimal(alpha.numerator) * log_beta
        return int(value.to_integral_value(rounding=ROUND_CEILING))


@dataclass
class MixingReport:
    params: MixingParams
    t: int
    t_min: int | None
    worst_ratio_by_t: list
    bound_by_t: list

    @property
    def guaranteed(self):
        return self.t_min is not None and self.t >= self.t_min

    @property
    def holds(self):
        """Whether the bound holds at every checked t >= t_min (None when inapplicable)."""
        if self.t_min is None:
            return None
        return all(
            ratio <= bound
            for t, (ratio, bound) in enumerate(zip(self.worst_ratio_by_t, self.bound_by_t), start=1)
            if t >= self.t_min
        )

    def to_dict(self):
        return {
            "alpha": frac_str(self.params.alpha) if self.params.applicable else None,
            "beta": frac_str(self.params.beta) if self.params.applicable else None,
            "applicable": self.params.applicable,
            "t": self.t,
            "t_min": self.t_min,
            "guaranteed": self.guaranteed,
            "holds": self.holds,
            "worst_ratio_by_t": [frac_str(v) for v in self.worst_ratio_by_t],
            "bound_by_t": [frac_str(v) for v in self.bound_by_t],
        }


def verify_mixing(chain, t):
    """Exact check of |P^t'[s, i] - sigma_i| <= (1 - alpha/2)^t' sigma_i for t' = 1..t."""
    if t < 1:
        raise ValidationError(f"t must be at least 1, got {t}")
    params = mixing_params(chain)
    t_min = mixing_threshold(params.alpha, params.beta) if params.applicable else None
    if t_min is not None and t < t_min:
        logger.info("t=%s is below t_min=%s; the bound is not guaranteed", t, t_min)
    m = chain.size
    sigma = chain.sigma
    worst, bounds = [], []
    current, scale = chain.W, chain.scale
    for step in range(1, t + 1):
        if step > 1:
            current = current.dot(chain.W)
            scale *= chain.scale
        ratio = max(
            abs(Fraction(int(current[s, i]), scale) - sigma[i]) / sigma[i]
            for s in range(m)
            for i in range(m)
            if sigma[i] != 0
        )
        worst.append(ratio)
        if params.applicable:
            bounds.append((1 - params.alpha / 2) ** step)
    return MixingReport(params=params, t=t, t_min=t_min, worst_ratio_by_t=worst, bound_by_t=bounds)


def predicted_exactness(alpha, ell0, ell):
    """(1 - alpha/(3 l_0))^l, the exactness the counting-walks estimate promises."""
    alpha = parse_frac(alpha)
    if not 0 < alpha <= 1:
        raise ValidationError(f"alpha must lie in (0, 1], got {alpha}")
    if not ell >= ell0 >= 2:
        raise ValidationError(f"need ell >= ell0 >= 2, got ell={ell}, ell0={ell0}")
    return (1 - alpha / (3 * ell0)) ** ell


def counting_walks_report(alpha, ell0, ell, measured_zeta, eps, k):
    predicted = predicted_exactness(alpha, ell0, ell)
    eps = parse_frac(eps)
    needed = 3 * k * ell0 * math.log(2 / float(eps)) / float(alpha)
    measured = parse_frac(measured_zeta)
    return {
        "ell0": ell0,
        "ell": ell,
        "alpha": frac_str(alpha),
        "predicted": frac_str(predicted),
        "measured_zeta": frac_str(measured),
        "measured_within_prediction": measured <= predicted,
        "hypothesis_ell_needed": needed,
        "hypothesis_met": ell >= needed,
    }


def report(chain, t=None):
    params = mixing_params(chain)
    if t is None:
        t = mixing_threshold(params.alpha, params.beta) if params.applicable else 1
    return verify_mixing(chain, t).to_dict()
