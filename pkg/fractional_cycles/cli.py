"""Command line front end.

    fractional-cycles gen --n 12 --k 2 --kind lowerbound --eps 3/20 --zeta 1/20 --seed 7 --out inst.json
    fractional-cycles decompose --in inst.json --ell 5 --r 6 --runs 5
    fractional-cycles oracle --in inst.json --ell 5

Every command prints one response envelope (or a CSV summary with --format csv).
Exit codes: 0 success, 2 domain refusal, 1 input error.
"""

import argparse
import importlib
import sys

import pandas as pd

from fractional_cycles import hooks
from fractional_cycles.api.responses import error, exit_code
from fractional_cycles.config import COMMANDS, FORMATS, KINDS, SYSTEMS, RunConfig
from fractional_cycles.exceptions import ValidationError
from fractional_cycles.logger import configure
from fractional_cycles.utils import dumps, parse_frac, write_text


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser():
    parser = _Parser(prog="fractional-cycles", description="Fractional tight-cycle decompositions of k-graphs")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--n", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--ell", type=int)
    parser.add_argument("--r", type=int)
    parser.add_argument("--runs", type=int, default=1)
    parser.add_argument("--m-cap", dest="m_cap", type=int, default=RunConfig.m_cap)
    parser.add_argument("--mu", type=parse_frac, default=None)
    parser.add_argument("--seed", type=int, default=RunConfig.seed)
    parser.add_argument(
        "--budget", type=float, help="seed budget (certify), resample budget (decompose), seconds (oracle)"
    )
    parser.add_argument("--in", dest="inp", help="instance JSON")
    parser.add_argument("--out", help="write the output here instead of stdout")
    parser.add_argument("--format", choices=FORMATS, default="json")
    parser.add_argument("--kind", choices=KINDS, default="complete")
    parser.add_argument("--delta", type=int)
    parser.add_argument("--eps", type=parse_frac)
    parser.add_argument("--zeta", type=parse_frac, default=parse_frac(0))
    parser.add_argument("--system", choices=SYSTEMS, default="sampled")
    parser.add_argument("--weights", help="decomposition JSON to verify")
    parser.add_argument("--log-level", default="WARNING")
    return parser


def parse_config(argv):
    args = vars(build_parser().parse_args(argv))
    args.pop("log_level")
    if args["mu"] is None:
        args.pop("mu")
    return RunConfig(**args)


def get_handler(command):
    module, _, name = hooks.commands[command].rpartition(".")
    return getattr(importlib.import_module(module), name)


def render(response, fmt):
    if fmt == "csv" and response["status"] == "success":
        rows = (response["data"] or {}).get("summary")
        if rows is None:
            raise ValidationError(f"--format: csv is not available for '{response['meta']['command']}'")
        return pd.DataFrame(rows).to_csv(index=False)
    return dumps(response, pretty=True) + "\n"


def emit(response, config):
    try:
        text = render(response, config.format)
    except ValidationError as e:
        response = error(config, e, "Output failed.")
        text = dumps(response, pretty=True) + "\n"
    if config.out:
        write_text(config.out, text)
    else:
        sys.stdout.write(text)
    if response["status"] == "error":
        sys.stderr.write(dumps(response) + "\n")
    return response


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    log_level = "WARNING"
    if "--log-level" in argv[:-1]:
        log_level = argv[argv.index("--log-level") + 1]
    configure(log_level)

    try:
        config = parse_config(argv)
    except ValidationError as e:
        command = argv[0] if argv and argv[0] in COMMANDS else ""
        response = emit(error(RunConfig(command=command), e, "Invalid arguments."), RunConfig(command=command))
        return exit_code(response)

    response = get_handler(config.command)(config)
    response = emit(response, config)
    return exit_code(response)


if __name__ == "__main__":
    sys.exit(main())
