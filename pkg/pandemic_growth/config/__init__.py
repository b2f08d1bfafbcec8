"""
Configuration domain - handles run settings and the default region registry.
"""

from .regions import US_REGIONS, VERMONT_LABEL_RULES
from .settings import (
    ConfigurationManager, DataConfig, ForecastConfig, LearningConfig, NetworkConfig, OutputConfig,
    StabilityConfig,
)

__all__ = [
    "US_REGIONS", "VERMONT_LABEL_RULES",
    "ConfigurationManager", "DataConfig", "ForecastConfig", "LearningConfig", "NetworkConfig", "OutputConfig",
    "StabilityConfig",
]
