"""Exception types raised by the preprocessing pipeline and the evaluation harness."""


class PawError(Exception):
    """Base class. ``stage`` is filled in by the pipeline when an error escapes a stage."""

    def __init__(self, message="", stage=None):
        super().__init__(message)
        self.stage = stage

    def __str__(self):
        msg = super().__str__()
        if self.stage:
            return f"[{self.stage}] {type(self).__name__}: {msg}"
        return msg


class EmptyMask(PawError):
    pass


class EmptyImage(PawError):
    pass


class DimensionMismatch(PawError):
    pass


class DegenerateLandmarks(PawError):
    pass


class DegenerateRegion(PawError):
    pass


class CollinearInput(PawError):
    pass


class ZeroPerimeter(PawError):
    pass


class DuplicateAnchors(PawError):
    pass


class DegenerateCentroid(PawError):
    pass


class DegenerateTriangle(PawError):
    pass


class CollinearSource(PawError):
    pass


class WrongPatchCount(PawError):
    pass


class WrongPatchSize(PawError):
    pass


class EmptyClass(PawError):
    pass


class ParseError(PawError):
    pass


class ManifestParse(ParseError):
    pass


class ConfigError(PawError):
    pass
