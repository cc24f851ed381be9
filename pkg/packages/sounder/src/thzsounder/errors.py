class SounderError(Exception):
    pass


class ScenarioError(SounderError):
    pass


class ScenarioParseError(ScenarioError):
    pass


class ScenarioValidationError(ScenarioError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message

    def with_prefix(self, prefix: str) -> "ScenarioValidationError":
        return ScenarioValidationError(f"{prefix}.{self.field}", self.message)


class GridError(ScenarioValidationError):
    def __init__(self, message: str, field: str = "scan"):
        super().__init__(field, message)

    def with_prefix(self, prefix: str) -> "GridError":
        return GridError(self.message, f"{prefix}.{self.field}")


class WaveformError(SounderError):
    pass


class SynthesisError(SounderError):
    pass


class DriftModelError(SounderError):
    pass


class CharacterizationError(SounderError):
    pass


class UnitMismatchError(SounderError):
    def __init__(self, characteristic: str, expected: str, actual: str):
        super().__init__(
            f"Unit mismatch for {characteristic}: expected {expected}, got {actual}"
        )
        self.characteristic = characteristic
        self.expected = expected
        self.actual = actual


class NumericError(SounderError):
    pass
