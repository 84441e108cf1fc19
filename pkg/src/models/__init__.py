from src.models.sum_window import SumWindow
from src.models.observable_sample import ObservableSample
from src.models.n_policy import NPolicy, NPolicyKind
from src.models.zero_record import ZeroRecord, ScanReport, ReferenceMatch
from src.models.circuit import (
    AmplitudeState,
    FixedPointValue,
    ResourceCount,
    ResourceLedger,
    Rounding,
    StateDistance,
)
from src.models.complexity_estimate import ComplexityEstimate
from src.models.run_metadata import RunMetadata

__all__ = [
    "SumWindow",
    "ObservableSample",
    "NPolicy",
    "NPolicyKind",
    "ZeroRecord",
    "ScanReport",
    "ReferenceMatch",
    "AmplitudeState",
    "FixedPointValue",
    "ResourceCount",
    "ResourceLedger",
    "Rounding",
    "StateDistance",
    "ComplexityEstimate",
    "RunMetadata",
]
