"""
Argument parsing for the `pandemic-growth` command line.
"""

import argparse
from typing import Any, Dict, List, Optional

from .. import __version__

COMMANDS = ("ingest", "learn", "predict", "eval", "stability", "train-beta")


def horizon_list(text: str) -> List[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"Horizons must be comma-separated integers, got '{text}'") from exc
    if not values:
        raise argparse.ArgumentTypeError("At least one horizon is required")
    return values


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file; flags override its values")
    common.add_argument("--data", help="input CSV of cumulative totals")
    common.add_argument("--out", help="output directory")
    common.add_argument("--n-tau", type=int, dest="n_tau", help="lag depth (default 14)")
    common.add_argument("--fit-days", type=int, dest="fit_days", help="trailing fit window (default n_tau)")
    common.add_argument("--mode", choices=["quarantined", "interstate", "blended"], help="gain learning mode")
    common.add_argument("--beta", help="fixed:<value>, network or network:<checkpoint>")
    common.add_argument("--horizons", type=horizon_list, help="comma-separated forecast horizons, e.g. 1,4,5")
    common.add_argument("--from", dest="from_day", help="first day (index or YYYY-MM-DD)")
    common.add_argument("--to", dest="to_day", help="last day (index or YYYY-MM-DD)")
    common.add_argument("--scope", help="national code (e.g. US), 'all', or a region code")
    common.add_argument("--jobs", type=int, help="worker threads for per-day work")
    common.add_argument("--seed", type=int, help="beta network seed")
    common.add_argument("--force", action="store_true", default=None, help="ignore cached gains")
    common.add_argument("--threshold", action="store_true", default=None, help="snap network beta to 0 or 1")
    common.add_argument("--checkpoint", help="beta network checkpoint path")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_arguments()
    parser = argparse.ArgumentParser(
        prog="pandemic-growth",
        description="Learn epidemic spread gains, forecast totals and test growth stability.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    commands.add_parser("ingest", parents=[common], help="validate and normalize the input CSV")
    commands.add_parser("learn", parents=[common], help="learn gains for every day in the range")

    predict = commands.add_parser("predict", parents=[common], help="forecast from every anchor day")
    predict.add_argument("--train-beta", action="store_true", dest="train_beta",
                         help="train the beta network first and forecast with it")

    evaluate = commands.add_parser("eval", parents=[common], help="rolling forecast errors against actual data")
    evaluate.add_argument("--train-beta", action="store_true", dest="train_beta",
                          help="train the beta network first and evaluate with it")
    evaluate.add_argument("--relearn-each-step", action="store_true", default=None, dest="relearn_each_step",
                          help="relearn gains after every forecast step")

    stability = commands.add_parser("stability", parents=[common], help="spectral radius timeline")
    stability.add_argument("--tol-margin", type=float, dest="tol_margin", help="stable iff radius < 1 - margin")

    train_beta = commands.add_parser("train-beta", parents=[common], help="train the beta network on labeled days")
    train_beta.add_argument("--epochs", type=int, help="training epochs")
    train_beta.add_argument("--lr", type=float, help="learning rate")
    return parser


def config_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Dotted configuration keys set on the command line; unset flags map to None"""

    def flag(name: str) -> Optional[Any]:
        return getattr(args, name, None)

    return {
        "data.path": flag("data"),
        "run.out": flag("out"),
        "learning.n_tau": flag("n_tau"),
        "learning.fit_days": flag("fit_days"),
        "learning.mode": flag("mode"),
        "forecast.beta": flag("beta"),
        "forecast.horizons": flag("horizons"),
        "forecast.from": flag("from_day"),
        "forecast.to": flag("to_day"),
        "forecast.scope": flag("scope"),
        "forecast.relearn_each_step": flag("relearn_each_step"),
        "run.jobs": flag("jobs"),
        "run.force": flag("force"),
        "network.seed": flag("seed"),
        "network.threshold": flag("threshold"),
        "network.checkpoint": flag("checkpoint"),
        "network.epochs": flag("epochs"),
        "network.lr": flag("lr"),
        "stability.tol_margin": flag("tol_margin"),
    }
