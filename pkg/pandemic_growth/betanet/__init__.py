"""
Beta network domain - handles the small feed-forward network that predicts
the blending weight, its labeled training data, training and checkpoints.
"""

from .network import (
    BetaNet, binary_cross_entropy, forward, loss_and_gradient, predict_with_beta, snap, window_features,
)
from .labels import LabelRule, LabeledDataset, build_dataset, held_out_days, parse_rules
from .training import TrainingOptions, TrainingResult, accuracy, train
from .checkpoint import SCHEMA, checkpoint_meta, load_checkpoint, save_checkpoint

__all__ = [
    "BetaNet", "binary_cross_entropy", "forward", "loss_and_gradient", "predict_with_beta", "snap",
    "window_features",
    "LabelRule", "LabeledDataset", "build_dataset", "held_out_days", "parse_rules",
    "TrainingOptions", "TrainingResult", "accuracy", "train",
    "SCHEMA", "checkpoint_meta", "load_checkpoint", "save_checkpoint",
]
