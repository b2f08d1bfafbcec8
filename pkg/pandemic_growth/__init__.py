"""
Pandemic growth estimator.

Learns the gains of a conservation-law epidemic model from per-region
cumulative totals, forecasts a few days ahead and checks whether active
cases are bound to grow.
"""

__version__ = "1.0.0"

from .core.errors import PandemicGrowthError
from .factory import PipelineFactory, create_pipeline

__all__ = ["__version__", "PandemicGrowthError", "PipelineFactory", "create_pipeline"]
