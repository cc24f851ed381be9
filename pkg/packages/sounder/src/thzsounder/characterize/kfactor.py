from __future__ import annotations

import math
from collections.abc import Sequence

from thzsounder.errors import CharacterizationError


def k_factor_from_powers(powers: Sequence[float]) -> float:
    if not powers:
        raise CharacterizationError("K-factor of an empty cluster set is undefined")
    ordered = sorted(powers, reverse=True)
    rest = math.fsum(ordered[1:])
    if rest <= 0:
        # LoS-only: reported as +inf and left out of the log-normal fit
        return math.inf
    return 10 * math.log10(ordered[0] / rest)


def k_factor(clusters: Sequence) -> float:
    return k_factor_from_powers([cluster.power_linear for cluster in clusters])
