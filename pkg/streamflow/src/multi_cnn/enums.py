import enum


class MultiMoveKind(str, enum.Enum):
    SHARE = "share"
    DESIGN = "design"
