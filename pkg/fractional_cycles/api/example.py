from fractional_cycles.api.responses import error, success
from fractional_cycles.decomposer import example_structure_check
from fractional_cycles.exceptions import ValidationError
from fractional_cycles.hypergraph import LabeledExample
from fractional_cycles.utils import load_instance


def example(config):
    """Structural report for a labelled lower-bound instance."""
    try:
        config.validate("example")
        instance = load_instance(config.inp)
        if not isinstance(instance, LabeledExample):
            raise ValidationError("--in: expected a lower-bound instance (generate one with --kind lowerbound)")

        data = example_structure_check(instance, config.ell)
        data["summary"] = [
            {
                "ell": config.ell,
                "spacing_holds": data["spacing"]["holds"],
                "cycles_meeting_E1": data["cycles"]["meeting_E1"],
                "without_h02": data["cycles"]["without_h02"],
                "h02_capacity": data["budget"]["h02_capacity"],
                "E1": data["budget"]["E1"],
                "witnesses_no_decomposition": data["budget"]["witnesses_no_decomposition"],
            }
        ]
        verdict = "witnesses" if data["budget"]["witnesses_no_decomposition"] else "does not witness"
        return success(config, data, f"The instance {verdict} non-decomposability at ell={config.ell}.")
    except Exception as e:
        return error(config, e, "Example check failed.", "Example Check Failed")
