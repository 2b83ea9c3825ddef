from streamflow.src.exceptions import InfeasibleError, InputError, LineError


class ShareSumExceedsOne(InputError):
    pass


class InvalidShares(InputError):
    pass


class InvalidWorkload(InputError):
    pass


class WorkloadParseError(LineError):
    pass


class BandwidthInfeasible(InfeasibleError):
    def __init__(self, demand_bits: int, capacity_bits: int, detail: str | None = None):
        super().__init__(detail or f"transfers need {demand_bits} bits per period, capacity is {capacity_bits}")
        self.demand_bits = demand_bits
        self.capacity_bits = capacity_bits


class NoFeasibleMapping(InfeasibleError):
    pass
