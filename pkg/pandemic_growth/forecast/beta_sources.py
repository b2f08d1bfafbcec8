"""
Where the blending weight of a forecast comes from.
"""

import logging
from pathlib import Path
from typing import Optional

from ..betanet.checkpoint import load_checkpoint
from ..betanet.network import BetaNet, forward, snap, window_features
from ..core.errors import ConfigurationError, OutOfRange
from ..core.interfaces import IBetaSource

logger = logging.getLogger(__name__)


class FixedBetaSource(IBetaSource):
    """Constant beta for every anchor day"""

    def __init__(self, value: float):
        value = float(value)
        if not 0.0 <= value <= 1.0:
            raise OutOfRange(f"Fixed beta must lie in [0, 1], got {value}")
        self.value = value

    def beta_for(self, series, k: int) -> float:
        return self.value

    def describe(self) -> str:
        return f"fixed:{self.value:g}"


class NetworkBetaSource(IBetaSource):
    """beta from the network applied to the window ending at the anchor day"""

    def __init__(self, net: BetaNet, n_tau: int, threshold: bool = False, label: str = "network"):
        self.net = net
        self.n_tau = n_tau
        self.threshold = threshold
        self.label = label

    def beta_for(self, series, k: int) -> float:
        beta = forward(self.net, window_features(series, k, self.n_tau))
        return snap(beta) if self.threshold else beta

    def describe(self) -> str:
        return self.label


def parse_beta_spec(spec: str) -> tuple:
    """Split `fixed:<v>`, `network` or `network:<path>` into (kind, argument)"""
    text = str(spec).strip()
    kind, _, argument = text.partition(":")
    if kind == "fixed":
        try:
            return "fixed", float(argument)
        except ValueError as exc:
            raise ConfigurationError(f"Invalid fixed beta '{spec}'") from exc
    if kind == "network":
        return "network", (Path(argument) if argument else None)
    raise ConfigurationError(f"Beta must be 'fixed:<value>', 'network' or 'network:<path>', got '{spec}'")


def beta_source_from_spec(spec: str, n_tau: int, threshold: bool = False,
                          default_checkpoint: Optional[Path] = None) -> IBetaSource:
    kind, argument = parse_beta_spec(spec)
    if kind == "fixed":
        return FixedBetaSource(argument)

    path = argument or default_checkpoint
    if path is None:
        raise ConfigurationError("Network beta needs a checkpoint path (network:<path> or network.checkpoint)")
    net = load_checkpoint(path)
    if net.n_inputs % (3 * n_tau) != 0:
        raise ConfigurationError(f"Checkpoint input size {net.n_inputs} is incompatible with n_tau={n_tau}")
    logger.info(f"Loaded beta network from {path}")
    return NetworkBetaSource(net, n_tau, threshold, label=f"network:{Path(path).name}")
