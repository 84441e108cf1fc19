import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from src.core.errors import DomainError


class NPolicyKind(str, Enum):
    FIXED = "fixed"
    RIEMANN_SIEGEL = "rs"


@dataclass(frozen=True)
class NPolicy:
    """
    Правило выбора числа членов N.

    FIXED - заданное N; RIEMANN_SIEGEL - N(t) = max(1, floor(sqrt(t / 2pi))).
    """
    kind: NPolicyKind
    n: Optional[int] = None

    def __post_init__(self):
        if self.kind == NPolicyKind.FIXED and (self.n is None or self.n < 1):
            raise DomainError(f"фиксированное N должно быть >= 1: {self.n}", stage="n_policy")

    @classmethod
    def fixed(cls, n: int) -> "NPolicy":
        return cls(NPolicyKind.FIXED, n)

    @classmethod
    def riemann_siegel(cls) -> "NPolicy":
        return cls(NPolicyKind.RIEMANN_SIEGEL)

    @classmethod
    def parse(cls, token) -> "NPolicy":
        """Разбирает значение N из конфигурации: целое число или 'rs'."""
        if isinstance(token, str) and token.strip().lower() == "rs":
            return cls.riemann_siegel()
        return cls.fixed(int(token))

    def resolve(self, t: float) -> int:
        if self.kind == NPolicyKind.FIXED:
            return self.n
        return max(1, math.floor(math.sqrt(abs(t) / (2.0 * math.pi))))

    def token(self) -> str:
        return "rs" if self.kind == NPolicyKind.RIEMANN_SIEGEL else str(self.n)
