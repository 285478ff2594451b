"""Command-line entry point: ``spinc-bergman <subcommand> [flags]``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import CONFIG_ENV, ConfigError, load_config

SUBCOMMANDS = ("symbolic-b1", "check-identities", "model-spectrum", "model-kernels",
               "oracle", "torus-gap", "report")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="complex dimension")
    common.add_argument("--cutoff", type=int, help="Fock truncation (max total occupation)")
    common.add_argument("--a", help="comma list of model eigenvalues a_j, e.g. '2pi,-6pi'")
    common.add_argument("--flux", help="torus flux p, or a comma list")
    common.add_argument("--grid", type=int, help="torus grid points per axis")
    common.add_argument("--tol", type=float, help="closed-form vs oracle tolerance")
    common.add_argument("--jets", type=int, help="random jets per identity rule")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--rules", help="identity rule file (defaults to the packaged one)")
    common.add_argument("--flat", action="store_true", default=None,
                        help="also check that b1 vanishes for flat data")
    common.add_argument("--config", help=f"key = value config file (default ${CONFIG_ENV})")
    common.add_argument("--json-out", help="write the JSON report here")
    common.add_argument("--csv-out", help="write the CSV table here")
    common.add_argument("--ledger-out", help="symbolic-b1/report: write the step ledger here")
    common.add_argument("--quiet", action="store_true", help="only print the overall status")

    p = argparse.ArgumentParser(prog="spinc-bergman", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def _overrides(args) -> dict:
    keys = ("n", "cutoff", "a", "flux", "grid", "tol", "jets", "seed", "rules", "flat",
            "json_out", "csv_out")
    return {k: getattr(args, k) for k in keys}


def _join_signed_values(argv: list) -> list:
    """``--a -2pi`` would be read as an option by argparse; rewrite it as ``--a=-2pi``."""
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--a":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--a={nxt}")
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_signed_values(argv))
    try:
        config = load_config(args.config, _overrides(args))
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    from . import commands
    ledger: list = []
    dispatch = {
        "symbolic-b1": lambda: commands.cmd_symbolic_b1(config, ledger),
        "check-identities": lambda: commands.cmd_check_identities(config),
        "model-spectrum": lambda: commands.cmd_model_spectrum(config),
        "model-kernels": lambda: commands.cmd_model_kernels(config),
        "oracle": lambda: commands.cmd_oracle(config),
        "torus-gap": lambda: commands.cmd_torus_gap(config),
        "report": lambda: commands.cmd_report(config, ledger),
    }
    try:
        doc = dispatch[args.command]()
    except Exception as exc:  # surfaced as a failed run, not a traceback
        print(f"{args.command}: FAIL ({type(exc).__name__}: {exc})", file=sys.stderr)
        return 1

    if config.json_out:
        Path(config.json_out).write_text(doc.to_json())
    if config.csv_out:
        Path(config.csv_out).write_text(doc.to_csv())
    if args.ledger_out and ledger:
        Path(args.ledger_out).write_text("\n".join(ledger) + "\n")
    if args.quiet:
        print(f"{doc.command}: {doc.status}")
    else:
        print(doc.summary())
    for c in doc.checks:
        if c.status == "FAIL" and isinstance(c.expected, str) and isinstance(c.actual, str):
            print(f"\nfirst failing step: {c.name}\n--- expected (canonical)\n{c.expected}"
                  f"\n--- computed (canonical)\n{c.actual}", file=sys.stderr)
            break
    return doc.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
