from fractional_cycles.api.responses import error, success
from fractional_cycles.exceptions import CertificationError
from fractional_cycles.hypergraph import LabeledExample
from fractional_cycles.transitions import (
    certify_and_resample,
    certify_system,
    compatible_cycle_count,
    full_transition_system,
)
from fractional_cycles.transporter import transporter_count_bounds
from fractional_cycles.utils import frac_str, load_instance


def base_graph(config):
    instance = load_instance(config.inp)
    return instance.base if isinstance(instance, LabeledExample) else instance


def certify(config):
    """Sample (or take the full) transition system and certify it at --ell."""
    try:
        config.validate("certify")
        H = base_graph(config)
        if config.system == "full":
            T = full_transition_system(H)
            report = certify_system(H, T, [config.ell], seed=config.seed)
            if not report.accepted:
                raise CertificationError(f"The full system is not compatibly {config.ell}-connected on this instance")
        else:
            budget = int(config.budget) if config.budget else None
            T, report = certify_and_resample(H, config.r, base_ell=config.ell, seed=config.seed, budget=budget)

        data = {
            "certification": report.to_dict(),
            "system": T.to_dict(),
            "compatible_cycles": compatible_cycle_count(H, T, config.ell) if config.ell >= H.k + 1 else 0,
        }
        zeta = report.per_ell[config.ell]["zeta"]
        if T.r and zeta is not None:
            data["transporter_bounds"] = transporter_count_bounds(H, T.r, config.ell, zeta)
        data["summary"] = [
            {
                "ell": ell,
                "alpha": frac_str(values["alpha"]),
                "zeta": frac_str(values["zeta"]) if values["zeta"] is not None else None,
                "seed": report.seed,
                "accepted": report.accepted,
            }
            for ell, values in sorted(report.per_ell.items())
        ]
        return success(config, data, f"Certified transition system at ell={config.ell}.")
    except Exception as e:
        return error(config, e, "Certification failed.", "Certify System Failed")
