"""Test suite for cyclic shift permutations of the factor graph

:Requirement: Factor-graph permutations

:CaseAutomation: Automated

:CaseLevel: Unit

:CaseComponent: Permute

:TestType: functional

:CaseImportance: High

:Upstream: No
"""
import numpy as np
import pytest

from spdecoder.code import construct_polar
from spdecoder.code import construct_rm
from spdecoder.code import rm_dimensions
from spdecoder.permute import CyclicShift
from spdecoder.permute import PermState
from spdecoder.permute import ShiftLengthMismatchException
from spdecoder.permute import apply_shift
from spdecoder.permute import candidate_shifts
from spdecoder.permute import count_permutations
from spdecoder.permute import enumerate_shift_assignments
from spdecoder.permute import inverse_shift
from spdecoder.permute import is_weight_class_complete
from spdecoder.permute import node_index
from spdecoder.permute import node_layer_offset
from spdecoder.permute import rotation_table
from spdecoder.permute import sp_eligibility
from spdecoder_tests.helpers.common import rotate_left
from spdecoder_tests.helpers.constants import PERMUTATION_COUNTS


def test_positive_two_bit_rotation():
    """Rotating two index bits swaps the middle entries

    :id: spdecoder-b4012d15-5db3-4458-a4f3-39be6a0b6abc

    :expectedresults: (a, b, c, d) becomes (a, c, b, d)
    """
    assert apply_shift(['a', 'b', 'c', 'd'], CyclicShift(2, 1)).tolist() == ['a', 'c', 'b', 'd']
    assert apply_shift(['a', 'b', 'c', 'd'], CyclicShift(2, 0)).tolist() == ['a', 'b', 'c', 'd']


@pytest.mark.parametrize('m', [1, 2, 3, 4, 5])
def test_positive_rotation_tables(m):
    """Rotation tables match the string rotation and invert correctly

    :id: spdecoder-4dbf9ade-b77d-4e6d-9d14-ae9da1ce252a

    :expectedresults: every table is a permutation equal to the oracle and
        composing a shift with its inverse gives the identity
    """
    v = np.arange(1 << m)
    for shift in range(m):
        table = rotation_table(m, shift)
        assert table.tolist() == [rotate_left(i, shift, m) for i in range(1 << m)]
        assert not table.flags.writeable
        forward = CyclicShift(m, shift)
        assert np.array_equal(apply_shift(apply_shift(v, forward), inverse_shift(forward)), v)


def test_negative_shift_length():
    """A shift acts on exactly 2^m entries

    :id: spdecoder-1771dcbd-bfcc-47ce-a9d5-5f9f3e6a562c

    :expectedresults: ShiftLengthMismatchException for a length 6 vector
    """
    with pytest.raises(ShiftLengthMismatchException):
        apply_shift(np.zeros(6), CyclicShift(3, 1))


def test_negative_shift_range():
    """Shift amounts are limited to [0, m)

    :id: spdecoder-6d3d81bc-7aae-4a3f-a761-c86ba6be8c61

    :expectedresults: ValueError for shift 3 on 3 bits
    """
    with pytest.raises(ValueError):
        CyclicShift(3, 3)


def test_positive_candidate_shifts():
    """Candidates start with the identity and honour a restriction

    :id: spdecoder-1fdd471c-f3ee-4e13-a625-73f2facc3baa

    :expectedresults: (0, 1, 2, 3) for m = 4, (0,) when restricted to the identity
    """
    assert candidate_shifts(4) == (0, 1, 2, 3)
    assert candidate_shifts(4, (0,)) == (0,)
    assert candidate_shifts(4, (2, 7)) == (2,)
    assert candidate_shifts(1) == (0,)


@pytest.mark.parametrize('n', [1, 2, 3, 4])
def test_positive_count_matches_enumeration(n):
    """The closed form equals the number of per-node shift assignments

    :id: spdecoder-6c6df21f-17a3-40dc-bf3e-4ba45bbf92e6

    :expectedresults: same count for n <= 4, and every induced leaf map is
        a bijection
    """
    assignments = 0
    for _, leaf_map in enumerate_shift_assignments(n):
        assignments += 1
        assert np.array_equal(np.sort(leaf_map), np.arange(1 << n))
    assert assignments == count_permutations(n) == PERMUTATION_COUNTS[n]


def test_positive_count_n5():
    """n = 5 allows 1,658,880 permutations

    :id: spdecoder-1c0af56e-a1bb-4798-8c77-11e84667635f

    :expectedresults: count_permutations(5) == 1658880
    """
    assert count_permutations(5) == PERMUTATION_COUNTS[5]


def test_positive_weight_class_completeness():
    """A pattern qualifies when each weight class has a single status

    :id: spdecoder-8efa4514-facf-4a09-84d2-af26dd978cf6

    :expectedresults: {0, 1, 2, 3} frozen on length 8 splits the weight one
        class, constant patterns and RM patterns qualify
    """
    pattern = np.zeros(8, dtype=bool)
    pattern[:4] = True
    assert not is_weight_class_complete(pattern)
    assert is_weight_class_complete(np.zeros(8, dtype=bool))
    assert is_weight_class_complete(np.ones(8, dtype=bool))
    assert is_weight_class_complete(construct_rm(3, 4).frozen_mask)


@pytest.mark.parametrize('n', range(1, 9))
def test_positive_rm_always_eligible(n):
    """Every node of every RM code is eligible

    :id: spdecoder-83aaf986-0044-4597-b243-d7eac24ea6b8

    :expectedresults: sp_eligibility(...).all() for every RM dimension
    """
    for K in rm_dimensions(n):
        assert sp_eligibility(construct_rm(n, K)).all()


def test_positive_polar_eligibility_follows_subcodes():
    """Polar codes are eligible exactly on their RM sub-codes

    :id: spdecoder-497dcebe-334f-4321-86ea-55e22b239d8c

    :expectedresults: leaves are always eligible, the flag of every node
        equals the completeness of its local pattern, and P(128,64) is not
        eligible everywhere
    """
    code = construct_polar(7, 64, 6.0)
    eligibility = sp_eligibility(code)
    assert not eligibility.all()
    for node in range(1, 2 * code.N):
        layer, offset = node_layer_offset(node, code.n)
        local = code.frozen_mask[offset:offset + (1 << layer)]
        assert eligibility.at(layer, offset) == is_weight_class_complete(local)
        if layer == 0:
            assert eligibility.at(layer, offset)


def test_positive_node_numbering():
    """Heap numbers and (layer, offset) convert both ways

    :id: spdecoder-10356325-34aa-440c-9bc2-60e4279cf89e

    :expectedresults: the root is node 1 and the conversion is a bijection
    """
    n = 5
    assert node_index(n, 0, n) == 1
    for node in range(1, 1 << (n + 1)):
        layer, offset = node_layer_offset(node, n)
        assert node_index(layer, offset, n) == node


def test_positive_rm_frozen_pattern_invariant():
    """Shift assignments never move information onto frozen positions of RM codes

    :id: spdecoder-0990cb82-07f7-47df-b3bf-57e0fffa09ae

    :expectedresults: frozen status at each decode position equals the
        original pattern for all 576 assignments at n = 4
    """
    mask = construct_rm(4, 11).frozen_mask
    for _, leaf_map in enumerate_shift_assignments(4):
        assert np.array_equal(mask[leaf_map], mask)


def test_positive_perm_state_fork():
    """Path selection clones the state and entering a node composes the leaf map

    :id: spdecoder-9d66aab6-93c4-40a0-95d7-04d516bab9d7

    :expectedresults: duplicated paths diverge independently, leaf maps
        stay bijections and the recorded shifts are reported per path
    """
    state = PermState.identity(3)
    state.select(np.array([0, 0]))
    assert state.paths == 2
    index = state.enter_node(3, 0, 1, np.array([0, 1]))
    assert index.shape == (2, 8)
    assert state.leaf_map[0].tolist() == list(range(8))
    assert state.leaf_map[1].tolist() == rotation_table(3, 1).tolist()
    assert state.is_bijection()
    assert state.chosen_shifts(0) == [(3, 0, 0)]
    assert state.chosen_shifts(1) == [(3, 0, 1)]
    single = state.path(1)
    single.leaf_map[0, 0] = 7
    assert state.leaf_map[1, 0] == 0
    exit_index = state.exit_index(3)
    values = np.tile(np.arange(8), (2, 1))
    entered = np.take_along_axis(values, index, axis=1)
    assert np.array_equal(np.take_along_axis(entered, exit_index, axis=1), values)
