"""Group partition of participants and the resulting access structure.

Participants are split into groups; every member of a group holds the same
basis share. A subset is authorized exactly when it contains at least one
member of every group, so the minimal authorized subsets are the
one-member-per-group selections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from hsss.errors import ConfigurationError, ForeignParticipantError


def participant_name(i: int) -> str:
    return f"P{i}"


@dataclass(frozen=True)
class GroupAssignment:
    """Groups keyed by their basis index ``b`` (1-based, stable after revocation)."""

    groups: Mapping[int, tuple[str, ...]]
    participant_to_group: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        groups = {int(b): tuple(members) for b, members in sorted(self.groups.items())}
        mapping: dict[str, int] = {}
        for b, members in groups.items():
            if b < 1:
                raise ConfigurationError(f"group index must be >= 1, got {b}")
            if not members:
                raise ConfigurationError(f"group {b} has no members")
            for p in members:
                if p in mapping:
                    raise ConfigurationError(f"participant {p} appears in more than one group")
                mapping[p] = b
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "participant_to_group", mapping)

    @classmethod
    def from_sizes(cls, sizes: Iterable[int], first_index: int = 1) -> "GroupAssignment":
        sizes = list(sizes)
        if not sizes:
            raise ConfigurationError("at least one group is required")
        groups = {}
        pid = 1
        for offset, n_b in enumerate(sizes):
            if int(n_b) < 1:
                raise ConfigurationError(f"group sizes must be >= 1, got {n_b}")
            groups[first_index + offset] = tuple(participant_name(pid + k) for k in range(n_b))
            pid += n_b
        return cls(groups)

    @property
    def group_sizes(self) -> list[int]:
        return [len(m) for m in self.groups.values()]

    @property
    def participants(self) -> list[str]:
        return [p for members in self.groups.values() for p in members]

    @property
    def n(self) -> int:
        return len(self.participant_to_group)

    @property
    def t(self) -> int:
        return len(self.groups)

    def group_of(self, participant: str) -> int:
        try:
            return self.participant_to_group[participant]
        except KeyError:
            raise ForeignParticipantError(participant) from None

    def without(self, b: int) -> "GroupAssignment":
        return GroupAssignment({k: v for k, v in self.groups.items() if k != b})

    def with_group(self, b: int, members: Iterable[str]) -> "GroupAssignment":
        groups = dict(self.groups)
        groups[b] = tuple(members)
        return GroupAssignment(groups)


def _covered(subset: Iterable[str], ga: GroupAssignment) -> list[int]:
    return [ga.group_of(p) for p in set(subset)]


def is_authorized(subset: Iterable[str], ga: GroupAssignment) -> bool:
    return set(_covered(subset, ga)) == set(ga.groups)


def is_minimal_authorized(subset: Iterable[str], ga: GroupAssignment) -> bool:
    hit = _covered(subset, ga)
    # one member per group: removing anyone uncovers that member's group
    return set(hit) == set(ga.groups) and len(hit) == len(ga.groups)


def count_minimal_authorized(ga: GroupAssignment) -> int:
    return math.prod(ga.group_sizes)
