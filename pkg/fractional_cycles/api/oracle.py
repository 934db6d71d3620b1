from fractional_cycles.api.certification import base_graph
from fractional_cycles.api.responses import error, success
from fractional_cycles.decomposer import verify
from fractional_cycles.exceptions import InfeasibleError
from fractional_cycles.lp_oracle import BUDGET_EXCEEDED, INFEASIBLE, lp_oracle, verify_certificate


def oracle(config):
    """Decide fractional decomposability exactly; infeasibility comes with a checked certificate."""
    try:
        config.validate("oracle")
        H = base_graph(config)
        result = lp_oracle(H, config.ell, time_budget=config.budget)

        if result.status == INFEASIBLE:
            certificate = result.to_dict()
            raise InfeasibleError(
                f"No fractional decomposition into {config.ell}-cycles "
                f"(certificate verified: {verify_certificate(H, config.ell, result.dual)}).",
                certificate={"dual": certificate["dual"]},
            )
        if result.status == BUDGET_EXCEEDED:
            return success(
                config,
                result.to_dict(),
                f"Inconclusive: time budget exhausted after {result.pivots} pivots.",
                code=202,
            )

        report = verify(H, result.weights, config.ell, config.mu)
        data = result.to_dict()
        data["report"] = report.to_dict()
        data["summary"] = [
            {"vertices": " ".join(map(str, item["vertices"])), "weight": item["weight"]} for item in data["cycles"]
        ]
        return success(config, data, f"Feasible: {len(result.weights.weights)} cycles carry weight.")
    except Exception as e:
        return error(config, e, "Oracle query failed.", "Oracle Failed")
