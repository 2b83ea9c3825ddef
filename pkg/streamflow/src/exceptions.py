"""Error types shared by every feature package.

Each error carries a ``detail`` message and the process ``exit_code`` the command
line driver reports for it, the same way an HTTP error carries its status code.
"""


class StreamflowError(Exception):
    """Root of all toolflow errors."""

    exit_code: int = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    def __str__(self) -> str:
        return f"{type(self).__name__}: {self.detail}"


class InputError(StreamflowError):
    """Malformed user input (network, device, workload or config files)."""

    exit_code = 2


class LineError(InputError):
    """An input error attributable to one line of a text file."""

    def __init__(self, line: int | None, detail: str):
        super().__init__(detail)
        self.line = line

    def __str__(self) -> str:
        if self.line is None:
            return f"{type(self).__name__}: {self.detail}"
        return f"{type(self).__name__} {self.line}: {self.detail}"


class InfeasibleError(StreamflowError):
    """No design or mapping satisfies the constraints."""

    exit_code = 3


class FileAccessError(StreamflowError):
    """Reading an input file or writing an artifact failed."""

    exit_code = 4
