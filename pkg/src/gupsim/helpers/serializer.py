import json
import math
from pathlib import Path
from typing import Any

import mpmath
import numpy as np

MPF_DIGITS: int = 50


class JSONSerializer:
    """Simple helper to convert report objects to JSON-serializable format."""

    @staticmethod
    def to_jsonable(obj: Any) -> Any:
        """Convert object to JSON-serializable format."""
        # Handle Pydantic models
        if hasattr(obj, "model_dump"):
            try:
                return JSONSerializer.to_jsonable(obj.model_dump(mode="json"))
            except Exception:
                pass
            try:
                return JSONSerializer.to_jsonable(obj.model_dump())
            except Exception:
                pass

        # Handle collections recursively
        if isinstance(obj, dict):
            return {str(k): JSONSerializer.to_jsonable(v) for k, v in obj.items()}

        if isinstance(obj, (list, tuple)):
            return [JSONSerializer.to_jsonable(item) for item in obj]

        if isinstance(obj, np.ndarray):
            return JSONSerializer.to_jsonable(obj.tolist())

        # Extended precision scalars become exact decimal strings
        if isinstance(obj, mpmath.mpf):
            return mpmath.nstr(obj, MPF_DIGITS, strip_zeros=False)

        if isinstance(obj, (complex, np.complexfloating, mpmath.mpc)):
            return {"re": JSONSerializer.to_jsonable(obj.real), "im": JSONSerializer.to_jsonable(obj.imag)}

        if isinstance(obj, np.generic):
            return JSONSerializer.to_jsonable(obj.item())

        if isinstance(obj, float) and not math.isfinite(obj):
            return str(obj)

        if isinstance(obj, Path):
            return str(obj)

        # Return as-is for primitives
        return obj


def dump_json(obj: Any) -> str:
    """Render a report deterministically: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(JSONSerializer.to_jsonable(obj), sort_keys=True, indent=2) + "\n"
