import enum


class LayerKind(str, enum.Enum):
    """Layer vocabulary understood by the streaming template."""
    CONV = "conv"
    POOL = "pool"
    RELU = "relu"
    FC = "fc"


class PoolKind(str, enum.Enum):
    MAX = "max"
    AVG = "avg"
