from .config import STAGES, PipelineConfig
from .errors import ConfigError, PipelineError, StageInputMissing
from .pipeline import PipelineResult, run_pipeline
from .version import VERSION

__version__ = VERSION
__all__ = [
    "STAGES",
    "PipelineConfig",
    "ConfigError",
    "PipelineError",
    "StageInputMissing",
    "PipelineResult",
    "run_pipeline",
]
