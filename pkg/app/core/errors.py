"""
Exception hierarchy shared by the library, the CLI and the HTTP routers.
"""


class E8KemError(Exception):
    """Root of every error raised by this package."""


class ParamsError(E8KemError, ValueError):
    """A parameter set violates one of its constraints."""


class LatticeError(E8KemError, ValueError):
    """A point handed to a coset or coordinate map is not in the lattice."""


class HintError(E8KemError, ValueError):
    """Reconciliation hint has the wrong shape or out-of-range labels."""


class CodecError(E8KemError, ValueError):
    """Malformed bytes: wrong length, bad magic or bad KAT text."""


class EntropyError(E8KemError, ValueError):
    """Entropy or seed input of the wrong length."""


class AnalysisBudgetError(E8KemError):
    """Enumeration or support size beyond the configured caps."""


class EstimatorError(E8KemError):
    """No feasible (m, b) pair inside the searched grid."""


class ExchangeError(E8KemError):
    """TCP framing or connection failure during the demo exchange."""
