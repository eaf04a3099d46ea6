"""
Tuning parameters of the evaluation pipeline.

Defaults mirror data/config/settings.json; see modules.config.settings for
loading them from disk.
"""

import math
from dataclasses import asdict, dataclass, replace
from typing import Any, Dict, Optional

from modules.engine.errors import InputError

TYPE2_RULES = ("laguerre", "legendre")


@dataclass(frozen=True)
class Parameters:
    n_points: int
    c_ball: float = 2.0 * math.pi
    n_ball: int = 16
    delta_ball: Optional[float] = None
    delta_ode: float = 0.1
    delta_coarse: float = 1e-2
    delta_fine: float = 1e-13
    delta_quad: float = 1e-16
    type2_rule: str = "laguerre"
    max_trace_steps: int = 100_000
    max_newton_iterations: int = 50

    def delta_ball_for(self, degree: int) -> float:
        """Amalgamation threshold; the automatic value is 1e-3 / (2 max(J - 2, 1))."""
        if self.delta_ball is not None:
            return self.delta_ball
        return 1e-3 / (2 * max(degree - 2, 1))

    def with_overrides(self, **overrides: Any) -> "Parameters":
        """Copy with every non-None override applied."""
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **changes) if changes else self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def validate(self) -> "Parameters":
        def open_unit(name: str, value: float) -> None:
            if not (0.0 < value < 1.0):
                raise InputError(f"{name} must lie in (0, 1), got {value}")

        if not isinstance(self.n_points, int) or self.n_points < 1:
            raise InputError(f"N must be a positive integer, got {self.n_points}")
        if not (self.c_ball > 0 and math.isfinite(self.c_ball)):
            raise InputError(f"c_ball must be positive, got {self.c_ball}")
        if self.n_ball < 4:
            raise InputError(f"n_ball must be at least 4, got {self.n_ball}")
        if self.delta_ball is not None:
            open_unit("delta_ball", self.delta_ball)
        open_unit("delta_ode", self.delta_ode)
        open_unit("delta_coarse", self.delta_coarse)
        open_unit("delta_fine", self.delta_fine)
        if not (0.0 <= self.delta_quad < 1.0):
            raise InputError(f"delta_quad must lie in [0, 1), got {self.delta_quad}")
        if self.delta_fine >= self.delta_coarse:
            raise InputError("delta_fine must be smaller than delta_coarse")
        if self.type2_rule not in TYPE2_RULES:
            raise InputError(f"type2_rule must be one of {TYPE2_RULES}, got {self.type2_rule!r}")
        if self.max_trace_steps < 1 or self.max_newton_iterations < 1:
            raise InputError("iteration caps must be positive")
        return self
