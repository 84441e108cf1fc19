from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Tuple, Union

import numpy as np

from src.core.errors import ContractError, FixedPointOverflowError


class Rounding(str, Enum):
    TOWARD_ZERO = "toward_zero"
    NEAREST_EVEN = "nearest_even"


def round_fraction(value: Fraction, rounding: "Rounding") -> int:
    """Округляет рациональное число до целого по выбранному правилу."""
    if rounding == Rounding.TOWARD_ZERO:
        return int(value)
    # round() у Fraction - банковское округление
    return round(value)


@dataclass(frozen=True)
class FixedPointValue:
    """
    Знаковое число с фиксированной точкой: r1 целых бит, r2 дробных, raw / 2^r2.

    raw обязано помещаться в r1 + r2 + 1 бит (дополнительный код).
    """
    int_bits: int
    frac_bits: int
    raw: int
    rounding: Rounding = Rounding.NEAREST_EVEN

    def __post_init__(self):
        if self.int_bits < 1 or self.frac_bits < 0:
            raise ContractError(
                f"некорректная ширина регистра r1={self.int_bits}, r2={self.frac_bits}", stage="fixed_point"
            )
        limit = 1 << (self.int_bits + self.frac_bits)
        if not -limit <= self.raw < limit:
            raise FixedPointOverflowError(
                f"значение {self.raw}/2^{self.frac_bits} не помещается в r1={self.int_bits}",
                stage="fixed_point",
            )

    @classmethod
    def encode(
        cls,
        value: Union[float, int, Fraction],
        int_bits: int,
        frac_bits: int,
        rounding: Rounding = Rounding.NEAREST_EVEN,
    ) -> "FixedPointValue":
        raw = round_fraction(Fraction(value) * (1 << frac_bits), rounding)
        return cls(int_bits, frac_bits, raw, rounding)

    def as_fraction(self) -> Fraction:
        return Fraction(self.raw, 1 << self.frac_bits)

    def decode(self) -> float:
        return float(self.as_fraction())

    @property
    def width(self) -> int:
        return self.int_bits + self.frac_bits


@dataclass(frozen=True)
class ResourceCount:
    """Число вентилей и вспомогательных кубитов (единичные константы O(.))."""
    gates: int = 0
    ancillas: int = 0

    def __post_init__(self):
        if self.gates < 0 or self.ancillas < 0:
            raise ContractError(f"отрицательный ресурс: {self}", stage="resources")

    def __add__(self, other: "ResourceCount") -> "ResourceCount":
        return ResourceCount(self.gates + other.gates, self.ancillas + other.ancillas)

    def scaled(self, factor: int) -> "ResourceCount":
        return ResourceCount(self.gates * factor, self.ancillas * factor)

    def to_dict(self) -> Dict[str, int]:
        return {"gates": self.gates, "ancillas": self.ancillas}


@dataclass
class ResourceLedger:
    """Упорядоченный журнал ресурсов по этапам построения схемы."""
    stages: List[Tuple[str, ResourceCount]] = field(default_factory=list)

    def add(self, stage: str, count: ResourceCount) -> "ResourceLedger":
        self.stages.append((stage, count))
        return self

    def extend(self, prefix: str, other: "ResourceLedger") -> "ResourceLedger":
        for stage, count in other.stages:
            self.stages.append((f"{prefix}.{stage}", count))
        return self

    def total(self) -> ResourceCount:
        total = ResourceCount()
        for _, count in self.stages:
            total = total + count
        return total

    def to_dict(self) -> Dict[str, Dict[str, int]]:
        return {stage: count.to_dict() for stage, count in self.stages}


@dataclass(frozen=True)
class StateDistance:
    """Расстояние sqrt(2(1 - |<a|b>|)) между двумя состояниями."""
    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 2.0 + 1e-12:
            raise ContractError(f"расстояние вне [0, 2]: {self.value}", stage="state_distance")

    @classmethod
    def between(cls, a: "AmplitudeState", b: "AmplitudeState") -> "StateDistance":
        if a.n_min != b.n_min or len(a) != len(b):
            raise ContractError("состояния заданы на разных базисах", stage="state_distance")
        # sqrt(2(1 - |<a|b>|)) = ||a - e^{i phi} b|| при выравненной фазе,
        # норма разности не теряет точность при малых расстояниях
        overlap = np.vdot(a.amps, b.amps)
        phase = np.conj(overlap) / abs(overlap) if abs(overlap) > 0.0 else 1.0
        return cls(float(np.linalg.norm(a.amps - phase * b.amps)))


@dataclass(frozen=True, eq=False)
class AmplitudeState:
    """Нормированный вектор амплитуд по базисным индексам n_min .. n_min + len - 1."""
    n_min: int
    amps: np.ndarray

    NORM_TOLERANCE = 1e-12

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=np.complex128)
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)
        if self.n_min < 1:
            raise ContractError(f"n_min должно быть >= 1: {self.n_min}", stage="amplitude_state")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > self.NORM_TOLERANCE:
            raise ContractError(f"состояние не нормировано: |psi|^2 = {norm}", stage="amplitude_state")

    @classmethod
    def from_unnormalized(cls, n_min: int, values: Iterable[complex]) -> "AmplitudeState":
        vector = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=np.complex128)
        return cls(n_min, vector / np.linalg.norm(vector))

    def __len__(self) -> int:
        return len(self.amps)

    @property
    def n_max(self) -> int:
        return self.n_min + len(self.amps) - 1

    def indices(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))
