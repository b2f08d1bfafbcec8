"""
Seeded mini-batch gradient descent for the beta network.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import torch

from ..core.errors import Divergence, DimensionMismatch
from .labels import LabeledDataset
from .network import DTYPE, BetaNet, binary_cross_entropy

logger = logging.getLogger(__name__)


@dataclass
class TrainingOptions:
    hidden: int = 51
    lr: float = 0.01
    epochs: int = 200
    batch: int = 16
    seed: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {"hidden": self.hidden, "lr": self.lr, "epochs": self.epochs, "batch": self.batch, "seed": self.seed}


@dataclass
class TrainingResult:
    net: BetaNet
    loss_curve: List[float] = field(default_factory=list)

    @property
    def initial_loss(self) -> float:
        return self.loss_curve[0]

    @property
    def final_loss(self) -> float:
        return self.loss_curve[-1]


def _full_loss(net: BetaNet, features: torch.Tensor, labels: torch.Tensor) -> float:
    with torch.no_grad():
        return float(binary_cross_entropy(net(features), labels))


def train(dataset: LabeledDataset, hyper: Optional[TrainingOptions] = None) -> TrainingResult:
    """Train from scratch; loss_curve[0] is the loss before the first epoch.

    The generator seeded with `hyper.seed` draws the initial weights and then
    one permutation per epoch, so a seed fixes the whole trajectory.
    """
    hyper = hyper or TrainingOptions()
    if len(dataset) == 0:
        raise DimensionMismatch("Training needs a non-empty dataset")
    if not dataset.has_both_labels:
        logger.warning("Training set contains a single label; the fit is degenerate")

    generator = torch.Generator().manual_seed(int(hyper.seed))
    features = torch.as_tensor(dataset.features, dtype=DTYPE)
    labels = torch.as_tensor(dataset.labels, dtype=DTYPE)

    net = BetaNet(features.shape[1], hyper.hidden, generator=generator)
    net.fit_scaler(features)
    optimizer = torch.optim.SGD(net.parameters(), lr=hyper.lr)

    curve = [_full_loss(net, features, labels)]
    n_samples = features.shape[0]
    for epoch in range(1, hyper.epochs + 1):
        order = torch.randperm(n_samples, generator=generator)
        for start in range(0, n_samples, hyper.batch):
            rows = order[start:start + hyper.batch]
            optimizer.zero_grad()
            loss = binary_cross_entropy(net(features[rows]), labels[rows])
            loss.backward()
            optimizer.step()

        epoch_loss = _full_loss(net, features, labels)
        curve.append(epoch_loss)
        if not math.isfinite(epoch_loss):
            raise Divergence(epoch, curve)
        if epoch % 50 == 0 or epoch == hyper.epochs:
            logger.debug(f"Epoch {epoch}/{hyper.epochs}: loss {epoch_loss:.6g}")

    logger.info(f"Trained beta network on {n_samples} windows: loss {curve[0]:.4g} -> {curve[-1]:.4g}")
    return TrainingResult(net=net, loss_curve=curve)


def accuracy(net: BetaNet, dataset: LabeledDataset) -> float:
    with torch.no_grad():
        beta = net(torch.as_tensor(dataset.features, dtype=DTYPE)).numpy()
    return float(np.mean((beta >= 0.5) == (dataset.labels >= 0.5)))
