from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import fields, replace
from typing import Any


def to_db(power: float) -> float:
    return 10 * math.log10(power) if power > 0 else -math.inf


def from_db(value_db: float) -> float:
    return 10 ** (value_db / 10)


def apply_overrides[T](config: T, overrides: Mapping[str, float]) -> T:
    """Replace the dataclass fields named in ``overrides``; other keys are ignored."""
    types = {field.name: field.type for field in fields(config)}  # type: ignore[arg-type]
    changes: dict[str, Any] = {
        key: int(value) if types[key] in ("int", int) else float(value)
        for key, value in overrides.items()
        if key in types
    }
    return replace(config, **changes)  # type: ignore[type-var]
