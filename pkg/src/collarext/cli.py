"""Command line front end.

Subcommands: ``run <config>`` executes a scenario, ``check <config>``
validates one without running, ``list-models`` prints the catalog.
Exit codes: 0 success, 1 verification failure (a bound violated or a
search failed), 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import CollarExtError, ConfigError, SearchFailureError
from .models import list_models
from .runner import check_scenario, run_scenario
from .scenario import load_scenario


def _cmd_run(args) -> int:
    config = load_scenario(args.config)
    report = run_scenario(config)
    for line in config.echo:
        print(f"# {line}")
    for verdict in report.verdicts:
        print(verdict.render())
    for path in report.csv_paths:
        print(f"wrote {path}")
    print(f"duration {report.duration:.3f} s")
    return 1 if report.failed else 0


def _cmd_check(args) -> int:
    config = load_scenario(args.config)
    check_scenario(config)
    for line in config.echo:
        print(line)
    print("config ok")
    return 0


def _cmd_list_models(_args) -> int:
    for entry in list_models():
        print(f"{entry.identifier:<20} {entry.kind:<8} {entry.description}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="collarext",
        description=(
            "Construct and verify Riemannian boundary extensions at desk scale."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario config")
    p_run.add_argument("config", help="path to a scenario config file")
    p_run.set_defaults(fn=_cmd_run)

    p_check = sub.add_parser(
        "check", help="validate a scenario config without running it"
    )
    p_check.add_argument("config", help="path to a scenario config file")
    p_check.set_defaults(fn=_cmd_check)

    p_list = sub.add_parser("list-models", help="print the built-in catalog")
    p_list.set_defaults(fn=_cmd_list_models)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SearchFailureError as exc:
        print(f"search failed: {exc}", file=sys.stderr)
        return 1
    except CollarExtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
