"""Exception hierarchy.

Every error raised deliberately by the library derives from ``QMarkovError``
so callers (the CLI in particular) can separate input problems from bugs.
"""


class QMarkovError(Exception):
    pass


# numerics
class ZeroSlope(QMarkovError, ZeroDivisionError):
    pass


class EmptyInterval(QMarkovError, ValueError):
    pass


# markov sets
class MarkovSetError(QMarkovError, ValueError):
    pass


class EndpointMissing(MarkovSetError):
    pass


class NotContraction(MarkovSetError):
    pass


class LimitMismatch(MarkovSetError):
    pass


class OverlapError(MarkovSetError):
    pass


class OutOfAmbient(MarkovSetError):
    pass


class MemberPoint(MarkovSetError):
    pass


class NotOrderIsomorphic(QMarkovError, ValueError):
    pass


class CompositionMismatch(QMarkovError, ValueError):
    pass


# functions
class FunctionError(QMarkovError, ValueError):
    pass


class OutOfDomain(FunctionError):
    pass


class BoundarySide(FunctionError):
    pass


class AmbientMismatch(QMarkovError, ValueError):
    pass


class NotFinitelyRepresentable(QMarkovError):
    pass


# sequences, witnesses, conjugacies
class SpecError(QMarkovError, ValueError):
    pass


class WitnessDomainMismatch(QMarkovError, ValueError):
    pass


class PatternFailed(QMarkovError):
    def __init__(self, report):
        super().__init__(f"pattern verification failed with {len(report.violations)} violation(s)")
        self.report = report


class InternalInvariantBreach(QMarkovError, RuntimeError):
    pass


class InvalidThread(QMarkovError, ValueError):
    pass


class SchemaError(QMarkovError, ValueError):
    """Malformed input document; ``path`` locates the offending node."""

    def __init__(self, path, message):
        super().__init__(f"{path or '<root>'}: {message}")
        self.path = path
        self.message = message
