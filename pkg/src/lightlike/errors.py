"""Exception hierarchy shared by all modules."""


class LightlikeError(Exception):
    """Base class for every error raised by the package."""


class DomainError(LightlikeError, ValueError):
    """A function was evaluated outside its domain (ln of a negative, 1/0, ...)."""


class ExprSyntaxError(LightlikeError, ValueError):
    """Malformed expression text.  ``offset`` is the UTF-8 byte offset of the problem."""

    def __init__(self, message, offset=0, text=None):
        self.message = message
        self.offset = offset
        self.text = text
        super().__init__(f"{message} (at byte {offset})")


class UnknownIdentifier(ExprSyntaxError):
    def __init__(self, name, offset=0, text=None):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", offset, text)


class SurfaceFormatError(LightlikeError, ValueError):
    """Structural problem in a surface file."""


class MissingKey(SurfaceFormatError):
    def __init__(self, key):
        self.key = key
        super().__init__(f"missing key {key!r}")


class UnknownKey(SurfaceFormatError):
    def __init__(self, key, line=None):
        self.key = key
        self.line = line
        where = f" on line {line}" if line is not None else ""
        super().__init__(f"unknown key {key!r}{where}")


class BadRange(SurfaceFormatError):
    pass


class DegenerateInput(LightlikeError, ValueError):
    """Vectors handed to the transversal solver do not form valid lightlike data."""


class NotLightlike(LightlikeError):
    """The induced metric is non-degenerate at the requested point."""

    def __init__(self, det, u=None, v=None):
        self.det = det
        self.u = u
        self.v = v
        super().__init__(f"det g = {det:.6g}")


class RankZero(LightlikeError):
    """The induced metric vanishes: no rank-1 radical distribution."""


class SingularDecomposition(LightlikeError):
    """The {xi, w, N} basis is too ill-conditioned to split a vector."""


class GridFailure(LightlikeError):
    """Too many grid samples failed to produce a classification."""

    def __init__(self, message, errors=()):
        self.errors = list(errors)
        super().__init__(message)


class NotApplicable(LightlikeError):
    """A harness was asked to run outside its hypothesis class."""


class UnknownSurface(LightlikeError, KeyError):
    def __str__(self):
        return f"unknown builtin surface {self.args[0]!r}"


class GenerationFailed(LightlikeError):
    pass
