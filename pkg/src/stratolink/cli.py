"""Command-line entry point.

Subcommands::

    stratolink analyze        closed-form outage over the average-SNR grid
    stratolink simulate       Monte-Carlo outage over the same grid
    stratolink altitude-sweep closed-form outage versus HAPS altitude
    stratolink fit            EW parameters for a scintillation index or a hop

Exit codes: 0 ok, 1 parse error, 2 domain/validation error, 3 numerical
non-convergence. ``STRATOLINK_THREADS`` caps Monte-Carlo worker threads
(0 = all cores).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .analytics import Method
from .atmosphere import VolcanicRegime
from .errors import ConvergenceError, DomainError, ScenarioParseError
from .fading import fit_from_scintillation
from .io import ResultRow, dumps_scenario, format_table, load_scenario
from .montecarlo import sweep as mc_sweep
from .scenario import Scenario, closed_form_sweep, hop_from_geometry
from .scheduling import Strategy

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _float_list(text: str):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _strategies(choice: str):
    return [Strategy.SS1, Strategy.SS2] if choice == "both" else [Strategy.parse(choice)]


def _common(p):
    p.add_argument("--scenario", metavar="PATH", help="scenario JSON (default: built-in reference setup)")
    p.add_argument("--strategy", choices=["ss1", "ss2", "both"], default="both")
    p.add_argument("--format", choices=["csv", "json", "gnuplot"], default="csv")
    p.add_argument("--out", metavar="PATH", help="write the table here instead of stdout")
    p.add_argument("--regime", choices=[r.name.lower() for r in VolcanicRegime],
                   help="override the scenario's volcanic regime")
    p.add_argument("--gamma-bar-db", type=_float_list, metavar="LIST",
                   help="comma-separated average SNR grid in dB (overrides the scenario)")
    p.add_argument("--gamma-th-db", type=float, metavar="DB", help="override the SNR threshold")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stratolink", description=__doc__.split("\n\n")[0])
    parser.add_argument("--dump-defaults", action="store_true",
                        help="print the built-in scenario as JSON and exit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("analyze", help="closed-form outage probabilities")
    _common(p)
    p.add_argument("--method", choices=["closed-form", "series", "both"], default="closed-form")

    p = sub.add_parser("simulate", help="Monte-Carlo outage probabilities")
    _common(p)
    p.add_argument("--trials", type=int, metavar="N")
    p.add_argument("--seed", type=int, metavar="S")

    p = sub.add_parser("altitude-sweep", help="closed-form outage versus HAPS altitude")
    _common(p)
    p.add_argument("--altitudes-km", type=_float_list, required=True, metavar="LIST")

    p = sub.add_parser("fit", help="EW fit for a scintillation index or a hop geometry")
    p.add_argument("--scenario", metavar="PATH")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", metavar="PATH")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--sigma2", type=float, help="scintillation index to fit")
    group.add_argument("--zenith-deg", type=float, help="compute the index for this hop zenith first")
    p.add_argument("--hop", choices=["up", "down"], default="down")
    return parser


def _scenario(args) -> Scenario:
    s = load_scenario(args.scenario) if args.scenario else Scenario()
    changes = {}
    if getattr(args, "regime", None):
        s = s.with_regime(args.regime)
    if getattr(args, "gamma_bar_db", None):
        changes["gamma_bar_db"] = args.gamma_bar_db
    if getattr(args, "gamma_th_db", None) is not None:
        changes["gamma_th_db"] = args.gamma_th_db
    if getattr(args, "trials", None) is not None:
        changes["trials"] = args.trials
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    return replace(s, **changes) if changes else s


def run_analyze(scenario: Scenario, strategies, methods=(Method.CLOSED_FORM,)):
    rows = []
    for strategy in strategies:
        for method in methods:
            for g, est in closed_form_sweep(scenario, strategy, method=method):
                rows.append(ResultRow(g, strategy.label, est))
    return rows


def run_simulate(scenario: Scenario, strategies, workers=None):
    rows = []
    for strategy in strategies:
        for g, est in mc_sweep(scenario, strategy, workers=workers):
            rows.append(ResultRow(g, strategy.label, est))
    return rows


def run_altitude_sweep(scenario: Scenario, strategies, altitudes_km, gamma_bar_db: float):
    rows = []
    for h in altitudes_km:
        if not (0 < h < scenario.h_sat_km):
            raise DomainError(f"altitude {h} km outside (0, h_sat_km={scenario.h_sat_km})")
        at_h = replace(scenario, h_haps_km=float(h))
        for strategy in strategies:
            (g, est), = closed_form_sweep(at_h, strategy, grid=[gamma_bar_db])
            rows.append(ResultRow(g, strategy.label, est, h_haps_km=float(h)))
    return rows


def run_fit(scenario: Scenario, sigma2=None, zenith_deg=None, hop="down"):
    if sigma2 is None:
        sigma2, _, ew = hop_from_geometry(scenario, zenith_deg, hop)
    else:
        ew = fit_from_scintillation(sigma2)
    return {"sigma2": sigma2, "alpha": ew.alpha, "beta": ew.beta, "eta": ew.eta}


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dispatch(args) -> int:
    if args.dump_defaults:
        sys.stdout.write(dumps_scenario(Scenario()))
        return EXIT_OK
    if args.command is None:
        build_parser().print_usage(sys.stderr)
        return EXIT_PARSE
    scenario = _scenario(args)
    if args.command == "fit":
        values = run_fit(scenario, args.sigma2, args.zenith_deg, args.hop)
        if args.format == "json":
            text = json.dumps(values, indent=2) + "\n"
        else:
            keys = list(values)
            text = ",".join(keys) + "\n" + ",".join(f"{values[k]:.10g}" for k in keys) + "\n"
        _emit(text, args.out)
        return EXIT_OK
    strategies = _strategies(args.strategy)
    if args.command == "analyze":
        methods = {
            "closed-form": (Method.CLOSED_FORM,),
            "series": (Method.SERIES,),
            "both": (Method.CLOSED_FORM, Method.SERIES),
        }[args.method]
        rows = run_analyze(scenario, strategies, methods)
    elif args.command == "simulate":
        rows = run_simulate(scenario, strategies)
    else:
        grid = args.gamma_bar_db or (10.0,)
        if len(grid) != 1:
            raise DomainError("altitude-sweep takes a single --gamma-bar-db value")
        rows = run_altitude_sweep(scenario, strategies, args.altitudes_km, grid[0])
    _emit(format_table(rows, args.format), args.out)
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # --help exits 0; usage errors already map to EXIT_PARSE
        return exc.code if isinstance(exc.code, int) else EXIT_PARSE
    try:
        return _dispatch(args)
    except ScenarioParseError as exc:
        print(f"stratolink: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"stratolink: invalid input: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"stratolink: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
