"""
Single-hidden-layer network mapping a trailing window of all regions'
totals to the blending weight beta in (0, 1).

Everything runs on CPU in float64 so that seeded runs are bit-identical.
"""

import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np
import torch
from torch import nn

from ..core.errors import DimensionMismatch
from ..dynamics.gains import GainTensor
from ..dynamics.propagation import propagate_one_step
from ..timeseries.series import PandemicSeries, lagged_actives, window

logger = logging.getLogger(__name__)

DTYPE = torch.float64

# Bound on the reported beta once the sigmoid saturates; training sees the raw sigmoid
BETA_EPS = 1e-15

# Clamp applied inside the logarithms of the loss only
LOG_CLAMP = 1e-12


class BetaNet(nn.Module):
    """beta = sigmoid(W2 relu(W1 scale(x) + b1) + b2)"""

    def __init__(self, n_inputs: int, hidden: int = 51, generator: Optional[torch.Generator] = None):
        super().__init__()
        if n_inputs < 1 or hidden < 1:
            raise DimensionMismatch(f"Network needs positive dimensions, got input={n_inputs} hidden={hidden}")
        self.n_inputs = n_inputs
        self.hidden = hidden
        self.hidden_layer = nn.Linear(n_inputs, hidden, dtype=DTYPE)
        self.output_layer = nn.Linear(hidden, 1, dtype=DTYPE)
        self.register_buffer("scale", torch.ones(n_inputs, dtype=DTYPE))
        self.reset_parameters(generator)

    def reset_parameters(self, generator: Optional[torch.Generator] = None):
        """Uniform in [-s, s] with s = sqrt(6 / (fan_in + fan_out)); zero biases"""
        with torch.no_grad():
            for layer in (self.hidden_layer, self.output_layer):
                fan_out, fan_in = layer.weight.shape
                bound = math.sqrt(6.0 / (fan_in + fan_out))
                sample = torch.rand(layer.weight.shape, generator=generator, dtype=DTYPE)
                layer.weight.copy_(sample * 2.0 * bound - bound)
                layer.bias.zero_()

    def fit_scaler(self, features: torch.Tensor):
        """Per-feature max-abs over the training set"""
        with torch.no_grad():
            self.scale.copy_(features.abs().max(dim=0).values)

    def scaled(self, features: torch.Tensor) -> torch.Tensor:
        inverse = torch.where(self.scale > 0, 1.0 / torch.where(self.scale > 0, self.scale, 1.0), 0.0)
        return features * inverse

    def logits(self, features: torch.Tensor) -> torch.Tensor:
        hidden = torch.relu(self.hidden_layer(self.scaled(features)))
        return self.output_layer(hidden).squeeze(-1)

    def forward(self, features: torch.Tensor) -> torch.Tensor:
        return torch.sigmoid(self.logits(features))


def as_features(net: BetaNet, features) -> torch.Tensor:
    tensor = torch.as_tensor(np.asarray(features, dtype=np.float64), dtype=DTYPE)
    if tensor.shape[-1] != net.n_inputs:
        raise DimensionMismatch(f"Network expects {net.n_inputs} features, got {tensor.shape[-1]}")
    return tensor


def forward(net: BetaNet, features) -> float:
    """beta for one flattened window"""
    with torch.no_grad():
        beta = float(net(as_features(net, features).reshape(1, -1))[0])
    return min(max(beta, BETA_EPS), 1.0 - BETA_EPS)


def binary_cross_entropy(beta: torch.Tensor, labels: torch.Tensor) -> torch.Tensor:
    positive = torch.log(beta.clamp_min(LOG_CLAMP))
    negative = torch.log((1.0 - beta).clamp_min(LOG_CLAMP))
    return -(labels * positive + (1.0 - labels) * negative).mean()


def loss_and_gradient(net: BetaNet, features, labels) -> Tuple[float, Dict[str, np.ndarray]]:
    """Mean BCE over the batch and its gradient for every trainable parameter"""
    batch = as_features(net, features)
    if batch.ndim == 1:
        batch = batch.reshape(1, -1)
    if batch.shape[0] == 0:
        raise DimensionMismatch("Loss needs a non-empty batch")
    targets = torch.as_tensor(np.asarray(labels, dtype=np.float64), dtype=DTYPE).reshape(-1)

    net.zero_grad()
    loss = binary_cross_entropy(net(batch), targets)
    loss.backward()
    gradient = {name: param.grad.detach().numpy().copy() for name, param in net.named_parameters()}
    net.zero_grad()
    return float(loss.detach()), gradient


def window_features(series: PandemicSeries, k: int, n_tau: int) -> np.ndarray:
    """Flattened (R, n_tau, 3) oldest-first window ending at day k"""
    return window(series, k, n_tau).reshape(-1)


def snap(beta: float) -> float:
    return 1.0 if beta >= 0.5 else 0.0


def predict_with_beta(
    series: PandemicSeries,
    k: int,
    g_diag: GainTensor,
    g_full: GainTensor,
    net: BetaNet,
    threshold: bool = False,
) -> Tuple[np.ndarray, float]:
    """(R, 3) states of day k+1 and the beta used to blend the gains"""
    n_tau = g_full.n_tau
    beta = forward(net, window_features(series, k, n_tau))
    if threshold:
        beta = snap(beta)
    history = lagged_actives(window(series, k, n_tau))
    return propagate_one_step(series.states(k), history, g_full, beta, g_diag=g_diag), beta
