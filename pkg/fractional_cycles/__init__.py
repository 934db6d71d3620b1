__version__ = "0.1.0"

from fractional_cycles.decomposer import (
    adjust,
    average_decompositions,
    edge_deviation,
    example_structure_check,
    initial_weights,
    verify,
)
from fractional_cycles.hypergraph import (
    Hypergraph,
    LabeledExample,
    gen_complete,
    gen_lowerbound_example,
    gen_random_min_codegree,
)
from fractional_cycles.lp_oracle import lp_oracle, verify_certificate
from fractional_cycles.transitions import (
    TransitionSystem,
    certify_and_resample,
    full_transition_system,
    sample_transition_system,
)
from fractional_cycles.walks import TightCycle, Walk, count_walks, enumerate_cycles
from fractional_cycles.weights import WeightFunction
