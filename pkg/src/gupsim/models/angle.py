import math
from typing import Any

import mpmath
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator


def decimal_digits(precision_bits: int) -> int:
    """Number of decimal digits carried by a binary precision."""
    return int(precision_bits * math.log10(2))


class BigAngle(BaseModel):
    """Angle in radians held at extended binary precision."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: mpmath.mpf = Field(..., description="Angle, rad")
    precision_bits: int = Field(256, ge=128, description="Working precision the value is held at")

    @model_validator(mode="before")
    @classmethod
    def _coerce_value(cls, data: Any) -> Any:
        if isinstance(data, dict) and "value" in data and not isinstance(data["value"], mpmath.mpf):
            with mpmath.workprec(int(data.get("precision_bits", 256))):
                data = {**data, "value": mpmath.mpf(data["value"])}
        return data

    @field_validator("value")
    @classmethod
    def _finite(cls, v: mpmath.mpf) -> mpmath.mpf:
        if not mpmath.isfinite(v):
            raise ValueError("angle must be finite")
        return v

    @field_serializer("value")
    def _serialize_value(self, v: mpmath.mpf) -> str:
        return mpmath.nstr(v, decimal_digits(self.precision_bits), strip_zeros=False)


class WrappedPhase(BaseModel):
    """Phase reduced to (-pi, pi] with its reduction error bound."""

    model_config = ConfigDict(frozen=True)

    wrapped: float = Field(..., description="Reduced angle in (-pi, pi], rad")
    error_bound: float = Field(..., ge=0, description="Absolute bound on the reduction error, rad")
    precision_bits: int = Field(..., description="Precision the reduction ran at")
