from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from ..errors import ValidationError

MODES = ("colored", "white")
MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class SimConfig:
    """Integrator settings; ``seed`` fixes every random draw of a run.

    ``record_every`` is the path/snapshot stride in steps. In colored mode the
    step must resolve the noise: ``dt <= tau / 20`` (checked against the model
    when a simulation starts).
    """

    dt: float = 0.01
    t_total: float = 1000.0
    t_burnin: float = 100.0
    seed: int = 0
    mode: str = "white"
    n_paths: int = 16
    record_every: int = 100

    def __post_init__(self):
        for name in ("dt", "t_total", "t_burnin"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValidationError(name, f"expected a finite number, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.dt <= 0:
            raise ValidationError("dt", "must be > 0")
        if self.t_total <= 0:
            raise ValidationError("t_total", "must be > 0")
        if not 0 <= self.t_burnin < self.t_total:
            raise ValidationError("t_burnin", "must satisfy 0 <= t_burnin < t_total")
        if self.mode not in MODES:
            raise ValidationError("mode", f"expected one of {MODES}, got {self.mode!r}")
        for name in ("seed", "n_paths", "record_every"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise ValidationError(name, f"expected an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if not 0 <= self.seed <= MAX_SEED:
            raise ValidationError("seed", "must be an unsigned 64-bit integer")
        if self.n_paths < 1:
            raise ValidationError("n_paths", "must be >= 1")
        if self.record_every < 1:
            raise ValidationError("record_every", "must be >= 1")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_total / self.dt))

    @property
    def burnin_steps(self) -> int:
        return int(round(self.t_burnin / self.dt))

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)

    def check_against(self, tau: float):
        if self.mode == "colored" and self.dt > tau / 20.0 * (1 + 1e-12):
            raise ValidationError("dt", f"colored mode needs dt <= tau/20 = {tau / 20.0!r}, got {self.dt!r}")
