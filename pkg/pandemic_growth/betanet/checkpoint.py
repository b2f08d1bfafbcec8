"""
Versioned JSON checkpoints for the beta network.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import torch

from ..core.errors import ConfigurationError
from .network import DTYPE, BetaNet

SCHEMA = "pandemic-growth/betanet@1"


def _rows(tensor: torch.Tensor):
    return tensor.detach().numpy().tolist()


def checkpoint_dict(net: BetaNet, meta: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    return {
        "schema": SCHEMA,
        "n_inputs": net.n_inputs,
        "hidden": net.hidden,
        "scale": _rows(net.scale),
        "W1": _rows(net.hidden_layer.weight),
        "b1": _rows(net.hidden_layer.bias),
        "W2": _rows(net.output_layer.weight),
        "b2": float(net.output_layer.bias.detach()[0]),
        "meta": meta or {},
    }


def save_checkpoint(net: BetaNet, path: Union[str, Path], meta: Optional[Dict[str, Any]] = None) -> Path:
    """Weights are row-major lists; float repr round-trips exactly"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(checkpoint_dict(net, meta), sort_keys=True), encoding="utf-8")
    return path


def load_checkpoint(path: Union[str, Path]) -> BetaNet:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"Cannot read network checkpoint {path}: {exc}") from exc
    if data.get("schema") != SCHEMA:
        raise ConfigurationError(f"Unsupported checkpoint schema {data.get('schema')!r}, expected {SCHEMA}")

    net = BetaNet(int(data["n_inputs"]), int(data["hidden"]))
    with torch.no_grad():
        net.scale.copy_(torch.tensor(data["scale"], dtype=DTYPE))
        net.hidden_layer.weight.copy_(torch.tensor(data["W1"], dtype=DTYPE))
        net.hidden_layer.bias.copy_(torch.tensor(data["b1"], dtype=DTYPE))
        net.output_layer.weight.copy_(torch.tensor(data["W2"], dtype=DTYPE))
        net.output_layer.bias.copy_(torch.tensor(np.array([data["b2"]]), dtype=DTYPE))
    return net


def checkpoint_meta(path: Union[str, Path]) -> Dict[str, Any]:
    return json.loads(Path(path).read_text(encoding="utf-8")).get("meta", {})
