from streamflow.src.exceptions import FileAccessError, LineError


class NetworkParseError(LineError):
    """Base class for errors in a network description."""


class UnknownLayerKind(NetworkParseError):
    pass


class MissingField(NetworkParseError):
    pass


class NonPositiveDimension(NetworkParseError):
    """A declared or inferred dimension is not strictly positive.

    ``layer_index`` is set when the error comes out of shape inference, so the
    parser can map it back to the line that declared the layer.
    """

    def __init__(self, line: int | None, detail: str, layer_index: int | None = None):
        super().__init__(line, detail)
        self.layer_index = layer_index


class DuplicateName(NetworkParseError):
    pass


class MalformedLine(NetworkParseError):
    pass


class InvalidLayerOrder(NetworkParseError):
    pass


class NetworkFileError(FileAccessError):
    pass
