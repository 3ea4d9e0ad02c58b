"""Membership in a computed group description, component by component."""

from __future__ import annotations

from dataclasses import dataclass

from .closure import ClosureContext, GroupDescription, member_connected
from .errors import InvariantViolationError


@dataclass(frozen=True)
class MembershipVerdict:
    member: bool
    component_index: int | None

    def __post_init__(self):
        if self.member != (self.component_index is not None):
            raise InvariantViolationError(
                "membership verdict and component index disagree"
            )


def member(G: GroupDescription, g, ctx=None) -> MembershipVerdict:
    """Test g against every component of G; the match must be unique."""
    ctx = ctx or ClosureContext()
    hits = []
    for idx, b in enumerate(G.components):
        if member_connected(G.lie_algebra, g * b.inverse(), ctx):
            hits.append(idx)
    if len(hits) > 1:
        raise InvariantViolationError(
            "element matched more than one component"
        )
    if hits:
        return MembershipVerdict(member=True, component_index=hits[0])
    return MembershipVerdict(member=False, component_index=None)
