from dataclasses import asdict, dataclass, field
from fractions import Fraction

from fractional_cycles.exceptions import ValidationError

# Budgets used whenever a caller does not pass its own.
DEFAULTS = {
    "generator_retries": 50,
    "sampler_retries": 2000,
    "enumerate_max_degree": 8,
    "certify_budget": 20,
    "dfs_node_budget": 100_000,
    "detour_limit": 12,
    "insertion_budget": 1_000_000,
    "lp_time_budget": 120.0,
    "resample_budget": 10,
    "m_cap": 3,
    "mu": Fraction(1, 2),
    "seed": 0,
}

COMMANDS = ("gen", "certify", "decompose", "verify", "oracle", "example")
KINDS = ("complete", "random", "lowerbound")
SYSTEMS = ("sampled", "full")
FORMATS = ("json", "csv")

MAX_SEED = 2**64 - 1


@dataclass
class RunConfig:
    command: str = ""
    n: int | None = None
    k: int | None = None
    ell: int | None = None
    r: int | None = None
    runs: int = 1
    m_cap: int = DEFAULTS["m_cap"]
    mu: Fraction = field(default_factory=lambda: DEFAULTS["mu"])
    seed: int = DEFAULTS["seed"]
    budget: float | None = None
    inp: str | None = None
    out: str | None = None
    format: str = "json"
    kind: str = "complete"
    delta: int | None = None
    eps: Fraction | None = None
    zeta: Fraction = Fraction(0)
    system: str = "sampled"
    weights: str | None = None

    def to_dict(self):
        data = asdict(self)
        for key, value in data.items():
            if isinstance(value, Fraction):
                data[key] = f"{value.numerator}/{value.denominator}"
        return data

    def _require(self, *names):
        missing = [name for name in names if getattr(self, name) is None]
        if missing:
            flags = ", ".join("--" + name.replace("_", "-").replace("inp", "in") for name in missing)
            raise ValidationError(f"Missing required flag(s) for '{self.command}': {flags}")

    def _check(self, condition, flag, message):
        if not condition:
            raise ValidationError(f"--{flag}: {message}")

    def validate(self, command=None):
        command = command or self.command
        self.command = command
        if command not in COMMANDS:
            raise ValidationError(f"Unknown command '{command}'")
        self._check(isinstance(self.seed, int) and 0 <= self.seed <= MAX_SEED, "seed", "must be a 64-bit unsigned integer")
        self._check(self.format in FORMATS, "format", f"must be one of {', '.join(FORMATS)}")
        self._check(self.system in SYSTEMS, "system", f"must be one of {', '.join(SYSTEMS)}")
        if self.budget is not None:
            self._check(self.budget > 0, "budget", "must be positive")

        if command == "gen":
            self._require("n", "k")
            self._check(self.kind in KINDS, "kind", f"must be one of {', '.join(KINDS)}")
            self._check(self.k >= 2, "k", "uniformity must be at least 2")
            self._check(self.n >= self.k, "n", "must be at least k")
            if self.kind == "random":
                self._require("delta")
                self._check(0 <= self.delta <= self.n - self.k + 1, "delta", "must lie in [0, n-k+1]")
            if self.kind == "lowerbound":
                self._require("eps")
                self._check(self.n % 2 == 0, "n", "must be even for the lower-bound example")
                self._check(0 <= self.eps < 1, "eps", "must lie in [0, 1)")
                self._check(0 <= self.zeta < 1, "zeta", "must lie in [0, 1)")
            return self

        self._require("inp", "ell")
        self._check(self.ell >= 1, "ell", "must be at least 1")

        if command == "certify":
            self._require("r")
        if command in ("certify", "decompose") and self.system == "sampled":
            self._require("r")
            self._check(self.r >= 0 and self.r % 2 == 0, "r", "must be a non-negative even integer")
        if command == "decompose":
            self._check(self.runs >= 1, "runs", "must be at least 1")
            self._check(self.m_cap >= 1, "m-cap", "must be at least 1")
        if command == "verify":
            self._require("weights")
            self._check(self.mu >= 0, "mu", "must be non-negative")
        return self
