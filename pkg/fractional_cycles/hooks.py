app_name = "fractional_cycles"
app_title = "Fractional Cycles"
app_description = "Exact fractional decompositions of k-graphs into tight cycles"
app_license = "agpl-3.0"

# Commands
# --------
# command name -> dotted path of its handler; handlers take a RunConfig and
# return a response envelope

commands = {
    "gen": "fractional_cycles.api.instances.generate",
    "certify": "fractional_cycles.api.certification.certify",
    "decompose": "fractional_cycles.api.decomposition.decompose",
    "verify": "fractional_cycles.api.decomposition.verify_weights",
    "oracle": "fractional_cycles.api.oracle.oracle",
    "example": "fractional_cycles.api.example.example",
}

# Fixtures
# --------
# bundled instances, resolved through utils.fixture_path

fixtures = [
    {"name": "k5.json", "description": "complete 2-graph on 5 vertices"},
    {"name": "zero_cycle.json", "description": "a tight 5-cycle plus an edge in no 5-cycle"},
]
