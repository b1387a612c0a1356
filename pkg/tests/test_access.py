from itertools import chain, combinations, product

import pytest

from hsss.access import GroupAssignment, count_minimal_authorized, is_authorized, is_minimal_authorized
from hsss.errors import ConfigurationError, ForeignParticipantError


def powerset(items):
    return chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))


def brute_authorized(subset, ga):
    # definition: every group has at least one member in the subset
    return all(any(p in subset for p in members) for members in ga.groups.values())


def brute_minimal(subset, ga):
    if not brute_authorized(subset, ga):
        return False
    return all(not brute_authorized(set(b), ga) for b in powerset(subset) if len(b) < len(subset))


def test_from_sizes_naming():
    ga = GroupAssignment.from_sizes([2, 1])
    assert ga.groups == {1: ("P1", "P2"), 2: ("P3",)}
    assert ga.n == 3 and ga.t == 2
    assert ga.group_of("P3") == 2


@pytest.mark.parametrize("sizes", [[], [0], [2, -1]])
def test_bad_sizes(sizes):
    with pytest.raises(ConfigurationError):
        GroupAssignment.from_sizes(sizes)


def test_duplicate_membership_rejected():
    with pytest.raises(ConfigurationError):
        GroupAssignment({1: ("A",), 2: ("A",)})


def test_examples():
    ga = GroupAssignment.from_sizes([1, 1])
    assert is_authorized({"P1", "P2"}, ga)
    ga = GroupAssignment.from_sizes([2, 2])
    assert not is_authorized({"P1", "P2"}, ga)
    assert is_minimal_authorized({"P1", "P3"}, ga)
    assert not is_minimal_authorized({"P1", "P2", "P3"}, ga)
    assert is_minimal_authorized({"P1"}, GroupAssignment.from_sizes([1]))


def test_foreign_participant():
    ga = GroupAssignment.from_sizes([2])
    with pytest.raises(ForeignParticipantError):
        is_authorized({"P1", "Mallory"}, ga)


@pytest.mark.parametrize("sizes", [[2, 3], [2, 2], [1, 1, 1], [3, 1, 2]])
def test_exhaustive_against_definition(sizes):
    ga = GroupAssignment.from_sizes(sizes)
    for subset in powerset(ga.participants):
        s = set(subset)
        assert is_authorized(s, ga) == brute_authorized(s, ga)
        assert is_minimal_authorized(s, ga) == brute_minimal(s, ga)


@pytest.mark.parametrize("sizes,expected", [([1, 1], 1), ([2, 3], 6), ([2, 2, 3], 12)])
def test_count_minimal(sizes, expected):
    ga = GroupAssignment.from_sizes(sizes)
    brute = sum(brute_minimal(set(s), ga) for s in powerset(ga.participants))
    assert brute == expected
    assert count_minimal_authorized(ga) == expected


def test_count_matches_enumeration_up_to_4096():
    # one-per-group selections enumerate the minimal subsets directly
    for sizes in ([4, 4, 4, 4, 4, 4], [8, 8, 8, 8], [2] * 12, [16, 16, 16], [5, 7, 3]):
        ga = GroupAssignment.from_sizes(sizes)
        picks = {frozenset(c) for c in product(*ga.groups.values())}
        assert all(is_minimal_authorized(p, ga) for p in list(picks)[:200])
        assert len(picks) == count_minimal_authorized(ga) <= 4096


def test_monotone_full_and_empty():
    ga = GroupAssignment.from_sizes([2, 3])
    assert is_authorized(set(ga.participants), ga)
    assert not is_authorized(set(), ga)
    for subset in powerset(ga.participants):
        if is_authorized(set(subset), ga):
            for extra in ga.participants:
                assert is_authorized(set(subset) | {extra}, ga)
