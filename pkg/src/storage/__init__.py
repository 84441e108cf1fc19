from src.storage.result_repository import ResultRepository
from src.storage.reference_repository import load_reference_zeros

__all__ = ["ResultRepository", "load_reference_zeros"]
