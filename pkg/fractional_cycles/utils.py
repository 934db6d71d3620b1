import json
import os
from fractions import Fraction

from fractional_cycles import hooks
from fractional_cycles.exceptions import DoesNotExistError, ValidationError


def frac_str(value):
    """Rationals travel as "p/q" strings, integers included ("3/1")."""
    q = Fraction(value)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, float):
        # decimal reading of the literal, so 0.15 means 3/20
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"Not a rational: {value!r}")
    raise ValidationError(f"Not a rational: {value!r}")


def safe_value(val):
    if isinstance(val, Fraction):
        return frac_str(val)
    if isinstance(val, (set, frozenset)):
        return sorted(safe_value(v) for v in val)
    if isinstance(val, tuple):
        return [safe_value(v) for v in val]
    if hasattr(val, "to_dict"):
        return val.to_dict()
    if hasattr(val, "item"):
        # numpy scalars
        return val.item()
    raise TypeError(f"Object of type {type(val).__name__} is not JSON serializable")


def dumps(payload, pretty=False):
    # sorted keys and fixed separators keep outputs byte-identical across runs
    if pretty:
        return json.dumps(payload, sort_keys=True, indent=2, default=safe_value)
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), default=safe_value)


def read_json(path):
    if not path or not os.path.exists(path):
        raise DoesNotExistError(f"Input file not found: {path}")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise ValidationError(f"Malformed JSON in {path}: {e.msg} (line {e.lineno})")


def write_text(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")


def dump_instance(instance):
    return instance.to_dict()


def load_instance(source):
    """Load a Hypergraph or LabeledExample from a path or an already parsed dict."""
    from fractional_cycles.hypergraph import Hypergraph, LabeledExample

    data = read_json(source) if isinstance(source, (str, os.PathLike)) else source
    if isinstance(data, dict) and isinstance(data.get("data"), dict) and "instance" in data["data"]:
        # output of the gen command
        data = data["data"]["instance"]
    if not isinstance(data, dict):
        raise ValidationError("Instance must be a JSON object")
    missing = [key for key in ("n", "k", "edges") if key not in data]
    if missing:
        raise ValidationError(f"Missing required field(s): {', '.join(missing)}")
    if "A" in data:
        return LabeledExample.from_dict(data)
    return Hypergraph.from_dict(data)


def fixture_path(name):
    """Path of a bundled instance listed in hooks.fixtures."""
    if name not in {item["name"] for item in hooks.fixtures}:
        raise DoesNotExistError(f"No bundled fixture named {name!r}")
    here = os.path.dirname(os.path.abspath(__file__))
    return os.path.join(here, "fixtures", name)
