from typing import Dict

from pydantic import BaseModel, Field


class ComplexityEstimate(BaseModel):
    """Оценки числа измерений и итоговая асимптотика (константы O(.) условно равны 1)."""
    beta: float
    t: float
    delta: float
    estimation: str = "amplitude"
    sample_complexity_1: float = Field(..., ge=0)
    sample_complexity_2: float = Field(..., ge=0)
    circuit_cost_1: float = Field(1.0, ge=0)
    circuit_cost_2: float = Field(1.0, ge=0)
    circuit_poly_inputs: Dict[str, float] = Field(default_factory=dict)
    total_scaling: float = Field(..., ge=0)
    total_cost: float = Field(..., ge=0)
    constants: str = "conventional"
