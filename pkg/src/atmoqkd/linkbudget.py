"""dB loss budget and QKD security classification."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from atmoqkd.errors import ValidationError

DEFAULT_DIFFRACTION_DB = 15.0
DEFAULT_SYSTEM_DB = 6.5


class Verdict(str, Enum):
    SECURE_ALL_MODELS = "secure_all_models"
    SECURE_STANDARD_EVE = "secure_standard_eve"
    SECURE_EXTENDED_ONLY = "secure_extended_only"
    INSECURE = "insecure"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SecurityThresholds:
    """Maximum tolerable total loss [dB] for each eavesdropper model."""

    pns_eve_db: float = 10.0
    standard_eve_db: float = 40.0
    extended_limit_db: float = 60.0

    def __post_init__(self):
        if not self.pns_eve_db <= self.standard_eve_db <= self.extended_limit_db:
            raise ValidationError("thresholds must satisfy pns <= standard <= extended")


@dataclass(frozen=True)
class LossBudget:
    atmospheric_db: float
    diffraction_db: float = DEFAULT_DIFFRACTION_DB
    system_db: float = DEFAULT_SYSTEM_DB

    def __post_init__(self):
        for name in ("atmospheric_db", "diffraction_db", "system_db"):
            if not getattr(self, name) >= 0:
                raise ValidationError(f"{name} must be >= 0")

    @property
    def total_db(self) -> float:
        return self.atmospheric_db + self.diffraction_db + self.system_db

    @property
    def total_extinction(self) -> bool:
        """True when the atmosphere passes nothing (infinite loss)."""
        return math.isinf(self.atmospheric_db)


def loss_db(transmittance: float) -> float:
    """``-10 log10(T)``; returns ``inf`` for ``T <= 0`` instead of raising."""
    if transmittance <= 0:
        return math.inf
    if transmittance > 1:
        raise ValidationError(f"transmittance must be <= 1, got {transmittance}")
    return -10.0 * math.log10(transmittance)


def classify(budget: LossBudget, thresholds: SecurityThresholds = SecurityThresholds()) -> Verdict:
    total = budget.total_db
    if total <= thresholds.pns_eve_db:
        return Verdict.SECURE_ALL_MODELS
    if total <= thresholds.standard_eve_db:
        return Verdict.SECURE_STANDARD_EVE
    if total <= thresholds.extended_limit_db:
        return Verdict.SECURE_EXTENDED_ONLY
    return Verdict.INSECURE
