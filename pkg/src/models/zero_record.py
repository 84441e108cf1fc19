from dataclasses import dataclass, field
from typing import List, Optional, Tuple


@dataclass(frozen=True)
class ZeroRecord:
    """Ноль Z(t), зажатый в скобку [t_low, t_high] при постоянном N."""
    t_low: float
    t_high: float
    t_star: float
    residual: float
    N_used: int
    iterations: int = 0

    @property
    def width(self) -> float:
        return self.t_high - self.t_low


@dataclass(frozen=True)
class ScanReport:
    """Результат сканирования окна по знакам Z."""
    window: Tuple[float, float]
    zeros: List[ZeroRecord] = field(default_factory=list)
    n_boundary_events: int = 0
    source: str = "main"


@dataclass(frozen=True)
class ReferenceMatch:
    """Сопоставление найденного нуля с ближайшим эталонным."""
    t_star: float
    nearest_ref: Optional[float]
    delta_t: Optional[float]
    matched: bool
