from pathlib import Path


class PipelineError(Exception):
    pass


class ConfigError(PipelineError):
    pass


class StageInputMissing(PipelineError):
    def __init__(self, stage: str, path: Path):
        super().__init__(f"Stage {stage} needs {path}, which does not exist")
        self.stage = stage
        self.path = path


class PlotInputError(PipelineError):
    pass
