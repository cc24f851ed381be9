from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, TypedDict

import numpy as np
import numpy.typing as npt

from thzsounder.errors import CharacterizationError
from thzsounder.serializer import Model

type FitDomain = Literal["linear", "db"]


class LogNormalFitJson(TypedDict):
    mu: float
    sigma: float
    sample_mean: float
    count: int
    domain: FitDomain


@dataclass(frozen=True, slots=True)
class LogNormalFit(Model[LogNormalFitJson]):
    mu: float
    sigma: float
    sample_mean: float
    count: int
    domain: FitDomain = "linear"

    def to_json(self) -> LogNormalFitJson:
        return {
            "mu": self.mu,
            "sigma": self.sigma,
            "sample_mean": self.sample_mean,
            "count": self.count,
            "domain": self.domain,
        }

    @classmethod
    def from_json(cls, json: LogNormalFitJson) -> LogNormalFit:
        return cls(
            mu=float(json["mu"]),
            sigma=float(json["sigma"]),
            sample_mean=float(json["sample_mean"]),
            count=int(json["count"]),
            domain=json["domain"],
        )


def fit_lognormal(samples: npt.ArrayLike, *, domain: FitDomain = "linear") -> LogNormalFit:
    """Normal fit of log10 of linear samples, or of dB samples taken as they are."""
    values = np.asarray(samples, dtype=np.float64).ravel()
    if values.size == 0:
        raise CharacterizationError("Log-normal fit needs at least one sample")
    if not np.all(np.isfinite(values)):
        raise CharacterizationError("Log-normal fit needs finite samples")
    if domain == "linear":
        if np.any(values <= 0):
            raise CharacterizationError("Linear-domain samples must be positive")
        variate = np.log10(values)
    else:
        variate = values
    return LogNormalFit(
        mu=float(np.mean(variate)),
        sigma=float(np.std(variate)),
        sample_mean=math.fsum(values.tolist()) / values.size,
        count=int(values.size),
        domain=domain,
    )
