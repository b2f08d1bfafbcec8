"""
Learning domain - handles the non-negative least-squares fits that turn a
trailing window of actual data into gain tensors.
"""

from .nnls import NnlsProblem, NnlsSolution, kkt_violation, solve_nnls
from .problems import build_interstate_problems, build_quarantined_problems, first_learnable_day
from .learner import GainSet, LearningDiagnostics, LearningMode, LearningOptions, learn_gain_set, learn_gains

__all__ = [
    "NnlsProblem", "NnlsSolution", "kkt_violation", "solve_nnls",
    "build_interstate_problems", "build_quarantined_problems", "first_learnable_day",
    "GainSet", "LearningDiagnostics", "LearningMode", "LearningOptions", "learn_gain_set", "learn_gains",
]
