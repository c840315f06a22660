"""Exception types shared across the package."""


class IntegrityError(RuntimeError):
    """An internal exact-arithmetic invariant failed.

    Raised when a quantity that is provably rational/integral/divisible turns
    out not to be.  Indicates a bug, never bad user input.
    """


class SynthesisError(Exception):
    """Base class for failures on inputs outside the synthesizable group."""


class NotReducibleError(SynthesisError):
    """Denominator-exponent descent found no unique strictly reducing step."""


class PhaseNotInRingError(SynthesisError):
    """Residual global phase is not a 2n-th root of unity."""


class NoPhaseMatchError(SynthesisError):
    """Unitaries sharing a first column differ by a phase outside the ring."""


class NoReducingKError(IntegrityError):
    """Column reduction found no complexity-reducing phase.

    Impossible for a valid normalized column, hence an integrity failure.
    """
