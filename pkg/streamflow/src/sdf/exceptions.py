from streamflow.src.exceptions import InputError


class FoldingOutOfRange(InputError):
    """A folding factor lies outside [1, cap] for its layer."""

    def __init__(self, layer: int, parameter: str, value: int, cap: int):
        super().__init__(f"layer {layer}: {parameter}={value} outside [1, {cap}]")
        self.layer = layer
        self.parameter = parameter
        self.value = value
        self.cap = cap
