from streamflow.src.exceptions import InputError


class InvalidCutPoint(InputError):
    pass


class ModeMismatch(InputError):
    pass


class UnknownLayer(InputError):
    pass
