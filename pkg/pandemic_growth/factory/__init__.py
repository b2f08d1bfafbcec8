"""
Factory domain - handles component creation and dependency injection.
"""

from .component_factory import PipelineFactory, create_pipeline

__all__ = ["PipelineFactory", "create_pipeline"]
