"""Exception types raised by the scattering library.

Validation errors (bad or unphysical inputs) and numerical errors
(degenerate linear systems) are kept distinct so the CLI can map them
to different exit codes.
"""


class KleinStepError(Exception):
    """Base class for all errors raised by this package."""


class NegativeField(KleinStepError):
    """Magnetic field ratio b must be >= 0."""


class InvalidSpinIndex(KleinStepError):
    """Spin/index combination labels a state that does not exist."""


class ClosedChannel(KleinStepError):
    """The incoming channel is not open: E^2 <= 1 + 2 b n."""


class SingularStep(KleinStepError):
    """V0 is within tolerance of E + mc^2, where the kinematic factor
    diverges and the transmitted-wave normalization degenerates."""


class SingularMatrix(KleinStepError):
    """The 4x4 boundary-condition system could not be solved."""


class EvanescentBranch(KleinStepError):
    """A transmitted-beam quantity was requested where the wave decays."""


class GridTooLarge(KleinStepError):
    """Requested field grid exceeds the resource guard."""


class OscillatorRange(KleinStepError):
    """Oscillator evaluation outside the documented stable range."""
