"""
One-step propagation (summation form) and the block companion propagator
(matrix form). Both read the same lag convention: history column h-1 holds
the actives of lag h, lag 1 being the newest day of the window.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.errors import DimensionMismatch, OutOfRange
from .gains import GainTensor, gain_blocks
from .state import StackedState

logger = logging.getLogger(__name__)


def _check_beta(beta: float) -> float:
    beta = float(beta)
    if not 0.0 <= beta <= 1.0:
        raise OutOfRange(f"Blending weight beta must lie in [0, 1], got {beta}")
    return beta


def _check_history(g: GainTensor, history: np.ndarray) -> np.ndarray:
    history = np.asarray(history, dtype=np.float64)
    if history.shape != (g.n_regions, g.n_tau):
        raise DimensionMismatch(
            f"Lagged actives must be (R={g.n_regions}, n_tau={g.n_tau}), got {history.shape}"
        )
    return history


def blended_inputs(
    g_diag: GainTensor, g_full: GainTensor, beta: float, history: np.ndarray
) -> np.ndarray:
    """(R, 3) new counts u for every region.

    u_i = beta * sum_h K^diag_{i,i,h} a_i[h] + (1 - beta) * sum_j sum_h K^full_{i,j,h} a_j[h]
    """
    beta = _check_beta(beta)
    if not g_diag.same_shape(g_full):
        raise DimensionMismatch("Quarantined and interstate gains must share R and n_tau")
    history = _check_history(g_full, history)

    own = np.einsum("iihc,ih->ic", g_diag.values, history)
    coupled = np.einsum("ijhc,jh->ic", g_full.values, history)
    return beta * own + (1.0 - beta) * coupled


def new_input(g: GainTensor, beta: float, i: int, history: np.ndarray) -> np.ndarray:
    """(u_t, u_d, u_r) for region i (1-based); the coupled sum includes j = i"""
    if not 1 <= int(i) <= g.n_regions:
        raise OutOfRange(f"Region {i} outside 1..{g.n_regions}")
    return blended_inputs(g, g, beta, history)[int(i) - 1]


def propagate_one_step(
    state: np.ndarray,
    history: np.ndarray,
    g: GainTensor,
    beta: float,
    g_diag: Optional[GainTensor] = None,
) -> np.ndarray:
    """x[k+1] = x[k] + u[k] for all regions; `state` is (R, 3)"""
    state = np.asarray(state, dtype=np.float64)
    if state.shape != (g.n_regions, 3):
        raise DimensionMismatch(f"State must be (R={g.n_regions}, 3), got {state.shape}")
    return state + blended_inputs(g_diag if g_diag is not None else g, g, beta, history)


@dataclass(frozen=True)
class BlockPropagator:
    """Dense L = beta * Lambda_1 + (1 - beta) * Lambda_0 over the stacked state"""
    matrix: np.ndarray
    beta: float
    n_regions: int
    n_tau: int

    @property
    def provenance(self) -> str:
        if self.beta == 1.0:
            return "lambda1"
        if self.beta == 0.0:
            return "lambda0"
        return "blended"

    def region_block(self, i: int, j: int) -> np.ndarray:
        """L_{i,j} for 0-based region offsets"""
        size = 3 * self.n_tau
        return self.matrix[i * size:(i + 1) * size, j * size:(j + 1) * size].copy()

    def apply(self, state: StackedState, steps: int = 1) -> StackedState:
        """Advance the stacked state `steps` days by repeated multiplication"""
        if state.n_regions != self.n_regions or state.n_tau != self.n_tau:
            raise DimensionMismatch("Stacked state does not match propagator dimensions")
        y = state.y
        for _ in range(steps):
            y = self.matrix @ y
        day = state.day + steps if state.day is not None else None
        return StackedState(y, self.n_regions, self.n_tau, day)

    def power(self, steps: int) -> np.ndarray:
        return np.linalg.matrix_power(self.matrix, steps)


def assemble_propagator(g_diag: GainTensor, g_full: GainTensor, beta: float) -> BlockPropagator:
    """Build L from quarantined (diagonal) and interstate gains.

    Diagonal region blocks carry identity shift blocks on the super-diagonal
    and an identity on the newest position of the last block row; those are
    never scaled by beta. Off-diagonal blocks only have a last block row.
    """
    beta = _check_beta(beta)
    if not g_diag.same_shape(g_full):
        raise DimensionMismatch("Quarantined and interstate gains must share R and n_tau")

    n_regions, n_tau = g_full.n_regions, g_full.n_tau
    size = 3 * n_tau
    dim = size * n_regions

    own = gain_blocks(g_diag.restricted_to_diagonal())
    coupled = gain_blocks(g_full)
    blocks = beta * own + (1.0 - beta) * coupled
    # lag h sits at lag offset m = n_tau - h in the oldest-first stack
    blocks = blocks[:, :, ::-1]

    matrix = np.zeros((dim, dim))
    eye = np.eye(3)
    for i in range(n_regions):
        base = i * size
        last = base + 3 * (n_tau - 1)
        matrix[last:last + 3, :] = blocks[i].transpose(2, 0, 1, 3).reshape(3, dim)
        for m in range(n_tau - 1):
            matrix[base + 3 * m:base + 3 * m + 3, base + 3 * (m + 1):base + 3 * (m + 2)] = eye
        matrix[last:last + 3, last:last + 3] += eye

    logger.debug(f"Assembled {dim}x{dim} propagator (beta={beta})")
    return BlockPropagator(matrix=matrix, beta=beta, n_regions=n_regions, n_tau=n_tau)
