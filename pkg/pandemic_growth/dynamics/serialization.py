"""
Gain tensor files: flat CSV `i,j,h,omega,lambda,theta` plus a JSON sidecar.
"""

import json
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd

from ..core.errors import DimensionMismatch
from .gains import GainTensor

GAIN_COLUMNS = ["i", "j", "h", "omega", "lambda", "theta"]


def sidecar_path(path: Union[str, Path]) -> Path:
    return Path(path).with_suffix(".json")


def gains_frame(g: GainTensor) -> pd.DataFrame:
    n_regions, n_tau = g.n_regions, g.n_tau
    i, j, h = np.meshgrid(
        np.arange(1, n_regions + 1), np.arange(1, n_regions + 1), np.arange(1, n_tau + 1), indexing="ij"
    )
    flat = g.values.reshape(-1, 3)
    return pd.DataFrame({
        "i": i.reshape(-1),
        "j": j.reshape(-1),
        "h": h.reshape(-1),
        "omega": flat[:, 0],
        "lambda": flat[:, 1],
        "theta": flat[:, 2],
    })


def write_gains(g: GainTensor, path: Union[str, Path], beta_mode: Optional[str] = None) -> Tuple[Path, Path]:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    gains_frame(g).to_csv(path, index=False, float_format="%.17g")
    meta = {"R": g.n_regions, "n_tau": g.n_tau, "day": g.day, "beta_mode": beta_mode or g.mode}
    sidecar = sidecar_path(path)
    sidecar.write_text(json.dumps(meta, indent=2, sort_keys=True), encoding="utf-8")
    return path, sidecar


def read_gains(path: Union[str, Path]) -> GainTensor:
    path = Path(path)
    meta = json.loads(sidecar_path(path).read_text(encoding="utf-8"))
    n_regions, n_tau = int(meta["R"]), int(meta["n_tau"])

    frame = pd.read_csv(path, float_precision="round_trip",
                        dtype={"i": np.int64, "j": np.int64, "h": np.int64,
                               "omega": np.float64, "lambda": np.float64, "theta": np.float64})
    if list(frame.columns) != GAIN_COLUMNS or len(frame) != n_regions * n_regions * n_tau:
        raise DimensionMismatch(f"Gain file {path.name} does not match its sidecar dimensions")

    values = np.zeros((n_regions, n_regions, n_tau, 3))
    values[frame["i"] - 1, frame["j"] - 1, frame["h"] - 1] = frame[["omega", "lambda", "theta"]].to_numpy()
    return GainTensor(values, meta.get("day"), meta.get("beta_mode", "quarantined"))
