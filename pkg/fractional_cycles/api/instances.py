from fractional_cycles.api.responses import error, success
from fractional_cycles.hypergraph import (
    gen_complete,
    gen_lowerbound_example,
    gen_random_min_codegree,
    intersecting_parameter,
    max_codegree,
    min_codegree,
)
from fractional_cycles.utils import frac_str


def generate(config):
    """Create an instance: the complete k-graph, a random one with a codegree floor,
    or the labelled lower-bound example."""
    try:
        config.validate("gen")
        if config.kind == "complete":
            instance = gen_complete(config.n, config.k)
            H = instance
        elif config.kind == "random":
            instance = gen_random_min_codegree(config.n, config.k, config.delta, config.seed)
            H = instance
        else:
            instance = gen_lowerbound_example(config.n, config.k, config.eps, config.zeta, config.seed)
            H = instance.base

        data = instance.to_dict()
        summary = {
            "n": H.n,
            "k": H.k,
            "edges": H.e,
            "min_codegree": min_codegree(H),
            "max_codegree": max_codegree(H),
            "intersecting": frac_str(intersecting_parameter(H)),
        }
        return success(
            config,
            {"instance": data, "summary": [summary]},
            f"Generated {config.kind} {H.k}-graph on {H.n} vertices with {H.e} edges.",
            code=201,
        )
    except Exception as e:
        return error(config, e, "Instance generation failed.", "Generate Instance Failed")
