import enum


class ObjectiveKind(str, enum.Enum):
    MAX_THROUGHPUT = "throughput"
    MIN_LATENCY = "latency"


class MoveKind(str, enum.Enum):
    """Neighbourhood moves of the annealer."""
    FOLDING = "folding"
    CUT = "cut"
    MODE = "mode"


class ParetoMetric(str, enum.Enum):
    LATENCY = "latency"
    THROUGHPUT = "throughput"


class ResourceAxis(str, enum.Enum):
    DSP = "dsp"
    BRAM = "bram"
    LUT = "lut"
