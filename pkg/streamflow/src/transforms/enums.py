import enum


class ExecutionMode(str, enum.Enum):
    """How partitions share the device.

    THROUGHPUT reconfigures the device between partitions, each partition
    processing the whole batch. LATENCY keeps one run-time configurable
    architecture and streams in the next partition's weights per input.
    """
    THROUGHPUT = "throughput"
    LATENCY = "latency"
