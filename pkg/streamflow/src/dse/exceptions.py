from streamflow.src.exceptions import InfeasibleError, InputError, LineError


class SpaceTooLarge(InfeasibleError):
    def __init__(self, estimate: int, bound: int):
        super().__init__(f"design space holds {estimate} points, bound is {bound}")
        self.estimate = estimate
        self.bound = bound


class NoFeasibleDesign(InfeasibleError):
    pass


class EmptyInput(InfeasibleError):
    pass


class InvalidObjective(InputError):
    pass


class OptimizerConfigError(LineError):
    pass
