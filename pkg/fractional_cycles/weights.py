from dataclasses import dataclass, field
from fractions import Fraction

from fractional_cycles.exceptions import ValidationError
from fractional_cycles.utils import frac_str, parse_frac
from fractional_cycles.walks import TightCycle


@dataclass(frozen=True)
class WeightFunction:
    """Sparse exact weights on the ell-cycles of H; absent cycles weigh 0."""

    H: object
    ell: int
    weights: dict = field(default_factory=dict)

    def get(self, C):
        return self.weights.get(C, Fraction(0))

    def support(self):
        return sorted(C for C, w in self.weights.items() if w != 0)

    def total(self):
        return sum(self.weights.values(), Fraction(0))

    def edge_sums(self):
        sums = {e: Fraction(0) for e in self.H.sorted_edges}
        for C, w in self.weights.items():
            for e in C.edges:
                sums[e] += w
        return sums

    def min_weight(self):
        return min(self.weights.values(), default=Fraction(0))

    def max_weight(self):
        return max(self.weights.values(), default=Fraction(0))

    def plus(self, deltas):
        merged = dict(self.weights)
        for C, d in deltas.items():
            value = merged.get(C, Fraction(0)) + d
            if value:
                merged[C] = value
            else:
                merged.pop(C, None)
        return WeightFunction(H=self.H, ell=self.ell, weights=merged)

    def scaled(self, c):
        c = parse_frac(c)
        return WeightFunction(H=self.H, ell=self.ell, weights={C: c * w for C, w in self.weights.items() if c * w})

    @classmethod
    def average(cls, functions):
        functions = list(functions)
        if not functions:
            raise ValidationError("Nothing to average")
        first = functions[0]
        acc = {}
        for f in functions:
            if f.ell != first.ell or f.H != first.H:
                raise ValidationError("Averaged weight functions must share H and ell")
            for C, w in f.weights.items():
                acc[C] = acc.get(C, Fraction(0)) + w
        n = len(functions)
        return cls(H=first.H, ell=first.ell, weights={C: w / n for C, w in acc.items() if w})

    def validate(self):
        for C in self.weights:
            if C.length != self.ell or C.k != self.H.k:
                raise ValidationError(f"{list(C.vertices)} is not an {self.ell}-cycle")
            if not all(e in self.H.edges for e in C.edges):
                raise ValidationError(f"{list(C.vertices)} is not a cycle of H")
        return self

    def to_dict(self):
        return {
            "ell": self.ell,
            "cycles": [{"vertices": list(C.vertices), "weight": frac_str(w)} for C, w in sorted(self.weights.items())],
        }

    @classmethod
    def from_dict(cls, H, data, ell=None):
        ell = ell or data.get("ell")
        weights = {}
        for item in data.get("cycles", []):
            C = TightCycle.from_vertices(H.k, item["vertices"])
            weights[C] = weights.get(C, Fraction(0)) + parse_frac(item["weight"])
        if ell is None:
            ell = next(iter(weights)).length if weights else H.k + 1
        return cls(H=H, ell=int(ell), weights={C: w for C, w in weights.items() if w}).validate()
