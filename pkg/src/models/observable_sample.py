from dataclasses import dataclass, field
from typing import Dict


@dataclass(frozen=True)
class ObservableSample:
    """Одно вычисление наблюдаемой L или G в точке (beta, t)."""
    beta: float
    t: float
    N_used: int
    value: complex
    aux: Dict[str, float] = field(default_factory=dict)

    def __repr__(self):
        return f"<ObservableSample(beta={self.beta}, t={self.t}, N={self.N_used}, value={self.value})>"
