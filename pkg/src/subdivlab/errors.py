"""Exception hierarchy.

Two families matter to callers: ``InputError`` (bad arguments or files, a
usage problem) and ``StructuredFailure`` (the mathematics said no on this
input, e.g. a counting threshold was not met).  The CLI maps them to exit
codes 1 and 2 respectively.
"""

from __future__ import annotations

from typing import Any


class SubdivlabError(Exception):
    """Base class for every error raised by this package."""


class InputError(SubdivlabError, ValueError):
    pass


class InvalidEdge(InputError):
    pass


class DuplicateEdge(InputError):
    pass


class InvalidPair(InputError):
    pass


class InvalidSubset(InputError):
    pass


class InvalidParams(InputError):
    pass


# Name used by the generator contracts; same condition.
InvalidParameter = InvalidParams


class EmptyGraph(InputError):
    pass


class TooLarge(InputError):
    """Requested size exceeds what an exact search mode supports."""


class GraphFormatError(InputError):
    pass


class InvalidBranchSet(InputError):
    """Branch vertices handed to the assembler cannot carry the pattern."""


class StructuredFailure(SubdivlabError):
    """A well-formed input on which a bound or hypothesis does not hold."""

    def to_dict(self) -> dict[str, Any]:
        return {"error": type(self).__name__, "message": str(self)}


class TooSparse(StructuredFailure):
    pass


class DegenerateOutput(StructuredFailure):
    pass


class PreconditionFailed(StructuredFailure):
    """Input does not meet a lemma hypothesis (not a counterexample)."""


class ThresholdFailure(StructuredFailure):
    def __init__(self, step, size, demanded, trace=None, reason: str = ""):
        self.step = step
        self.size = size
        self.demanded = demanded
        self.trace = trace
        self.reason = reason
        msg = f"threshold failure at step {step}: size {size} < demanded {demanded:.6g}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)

    def to_dict(self) -> dict[str, Any]:
        d = super().to_dict()
        d.update(step=self.step, size=self.size, demanded=self.demanded, reason=self.reason)
        if self.trace is not None:
            d["trace"] = self.trace.to_dict()
        return d


class SelectionFailure(StructuredFailure):
    def __init__(self, accepted, needed, rejected_pair, rejected_prior, trace=None):
        self.accepted = list(accepted)
        self.needed = needed
        self.rejected_pair = rejected_pair
        self.rejected_prior = rejected_prior
        self.trace = trace
        super().__init__(
            f"selected {len(self.accepted)} of {needed} vertices; rejected "
            f"{rejected_pair} on u-pair triples, {rejected_prior} on earlier-v triples"
        )

    def to_dict(self) -> dict[str, Any]:
        d = super().to_dict()
        d.update(
            accepted=self.accepted,
            needed=self.needed,
            rejected_pair=self.rejected_pair,
            rejected_prior=self.rejected_prior,
        )
        if self.trace is not None:
            d["trace"] = self.trace.to_dict()
        return d


class InvariantViolation(SubdivlabError, AssertionError):
    """An internal invariant that the mathematics guarantees was broken: a bug."""
