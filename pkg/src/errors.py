"""
Exception hierarchy for mirror-povm

Every error raised on purpose by the library derives from MirrorPovmError,
which is a ValueError so callers validating input the usual way keep working.
"""


class MirrorPovmError(ValueError):
    """Base class for all library errors"""


class DomainError(MirrorPovmError):
    """An input lies outside its documented range (never clamped silently)"""

    def __init__(self, name: str, value, allowed: str):
        self.name = name
        self.value = value
        self.allowed = allowed
        super().__init__(
            f"{name}={value!r} is outside the allowed range\n"
            f"  Allowed: {allowed}"
        )


class PovmError(MirrorPovmError):
    """A measurement is malformed (wrong element count, not complete, not positive)"""


class DegenerateEnsembleError(MirrorPovmError):
    """The three signal states coincide and the ansatz parameter is 0/0"""


class OutOfRegimeError(MirrorPovmError):
    """A three-element quantity was requested where the two-element strategy is optimal"""


class InfeasibleStartError(MirrorPovmError):
    """The dual search found no feasible point on its coarsest grid"""
