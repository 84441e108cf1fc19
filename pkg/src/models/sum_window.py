from dataclasses import dataclass

from src.core.errors import DomainError


@dataclass(frozen=True)
class SumWindow:
    """Окно суммы S(a, b, beta) = sum_{n=a}^{b} n^-beta."""
    a: int
    b: int
    beta: float

    def __post_init__(self):
        if self.a < 1 or self.b < self.a:
            raise DomainError(f"некорректное окно [{self.a}, {self.b}]", stage="sum_window")
        if self.beta < 0.0:
            raise DomainError(f"beta должно быть неотрицательным: {self.beta}", stage="sum_window")

    @property
    def length(self) -> int:
        return self.b - self.a + 1

    def __repr__(self):
        return f"<SumWindow(a={self.a}, b={self.b}, beta={self.beta})>"
