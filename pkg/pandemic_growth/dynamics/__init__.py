"""
Dynamics domain - handles model state, gain tensors, one-step propagation
and assembly of the block companion propagator.
"""

from .state import StackedState, StateVector, stack, unstack
from .gains import GAIN_NAMES, GainTensor, gain_block, gain_blocks
from .propagation import (
    BlockPropagator, assemble_propagator, blended_inputs, new_input, propagate_one_step,
)
from .serialization import read_gains, write_gains
from .simulation import simulate_series

__all__ = [
    "StackedState", "StateVector", "stack", "unstack",
    "GAIN_NAMES", "GainTensor", "gain_block", "gain_blocks",
    "BlockPropagator", "assemble_propagator", "blended_inputs", "new_input", "propagate_one_step",
    "read_gains", "write_gains",
    "simulate_series",
]
