from fractional_cycles.api.certification import base_graph
from fractional_cycles.api.responses import error, success
from fractional_cycles.decomposer import (
    average_decompositions,
    decomposition_from_json,
    decomposition_to_json,
    verify,
)
from fractional_cycles.exceptions import ValidationError
from fractional_cycles.utils import read_json


def _unwrap(raw):
    """Accept a bare decomposition or a command envelope around one."""
    if isinstance(raw, dict) and "cycles" not in raw and isinstance(raw.get("data"), dict):
        raw = raw["data"]
    if not isinstance(raw, dict) or "cycles" not in raw:
        raise ValidationError("Weights file has no 'cycles' list")
    return raw


def decompose(config):
    """Run the pipeline --runs times and average the exact decompositions."""
    try:
        config.validate("decompose")
        H = base_graph(config)
        omega, report = average_decompositions(
            H,
            config.ell,
            config.r,
            config.runs,
            m_cap=config.m_cap,
            seed=config.seed,
            mu=config.mu,
            system=config.system,
            resample_budget=int(config.budget) if config.budget else None,
        )
        data = decomposition_to_json(omega, report)
        data["summary"] = report.diagnostics["runs"]
        return success(
            config,
            data,
            f"Averaged {config.runs} run(s): {len(omega.weights)} weighted cycles, exact cover {report.is_exact_cover}.",
        )
    except Exception as e:
        return error(config, e, "Decomposition failed.", "Decompose Failed")


def verify_weights(config):
    """Check a stored decomposition against the instance from scratch."""
    try:
        config.validate("verify")
        H = base_graph(config)
        omega = decomposition_from_json(H, _unwrap(read_json(config.weights)), ell=config.ell)
        report = verify(H, omega, config.ell, config.mu, r=config.r)
        data = report.to_dict()
        data["summary"] = [{"edge": edge, "sum": value} for edge, value in data["edge_sums"].items()]
        verdict = "is" if report.is_exact_cover and report.is_nonnegative else "is not"
        return success(config, data, f"The weighting {verdict} a fractional decomposition.")
    except Exception as e:
        return error(config, e, "Verification failed.", "Verify Decomposition Failed")
