from streamflow.src.exceptions import FileAccessError, InputError, LineError


class DeviceParseError(LineError):
    pass


class DeviceFileError(FileAccessError):
    pass


class SimulationError(InputError):
    pass
