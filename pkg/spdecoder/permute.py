"""Factor-graph permutations as cyclic shifts of sub-code index bits.

A node of the decoding tree at layer m covers 2^m consecutive decode positions.
Rotating the m-bit local index of such a node is an automorphism of its
sub-code whenever the sub-code is an RM code, i.e. whenever its frozen pattern
depends on the local index weight only. Nodes are addressed in heap order: the
root is node 1 and node k has children 2k and 2k + 1.
"""
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from spdecoder.helpers.tools import rotate_bits
from spdecoder.helpers.tools import weight_table


class ShiftLengthMismatchException(ValueError):
    """Raise when a vector does not have the 2^m entries a shift acts on"""


@dataclass(frozen=True)
class CyclicShift:
    """Rotation of the layer_bits-bit local index by shift positions"""
    layer_bits: int
    shift: int = 0

    def __post_init__(self):
        if self.layer_bits < 0:
            raise ValueError(f'layer_bits must be >= 0, got {self.layer_bits}')
        if not 0 <= self.shift < max(self.layer_bits, 1):
            raise ValueError(f'shift {self.shift} out of range for {self.layer_bits} bits')

    @property
    def is_identity(self):
        return self.shift == 0

    @property
    def index_map(self):
        """p with out[i] = v[p[i]]"""
        return rotation_table(self.layer_bits, self.shift)


@lru_cache(maxsize=None)
def rotation_table(m, shift):
    """Index array of the left rotation of m-bit indices by shift

    :param int m: Number of local index bits
    :param int shift: Rotation in [0, m)
    :returns numpy.ndarray: Read-only int64 array of length 2^m
    """
    table = np.array([rotate_bits(i, shift, m) for i in range(1 << m)], dtype=np.int64)
    table.flags.writeable = False
    return table


@lru_cache(maxsize=None)
def shift_tables(m):
    """All rotation tables of a layer, row s realising shift s"""
    tables = np.stack([rotation_table(m, s) for s in range(max(m, 1))])
    tables.flags.writeable = False
    return tables


def candidate_shifts(m, allowed=None):
    """Shifts tried at a node of layer m, identity first

    :param int m: Layer of the node
    :param allowed: Optional collection restricting the candidates
    :returns tuple: Ascending shifts, never empty
    """
    shifts = tuple(range(max(m, 1)))
    if allowed is not None:
        shifts = tuple(s for s in shifts if s in set(allowed))
    return shifts or (0,)


def count_permutations(n):
    """Number of factor-graph permutations reachable with one cyclic shift per node

    A layer l counted from the root holds 2^l sub-codes of 2^(n-l) bits, each
    with n - l rotations.

    :param int n: log2 of the block length
    :returns int: The exact product
    """
    if n < 1:
        raise ValueError(f'n must be >= 1, got {n}')
    return math.prod((n - layer) ** (1 << layer) for layer in range(n))


def apply_shift(v, shift):
    """out_i = v_{p(i)}, p rotating the local index bits

    Acts on the last axis.

    :param v: Array-like with last dimension 2^shift.layer_bits
    :param CyclicShift shift: The rotation
    """
    v = np.asarray(v)
    size = 1 << shift.layer_bits
    if v.shape[-1] != size:
        raise ShiftLengthMismatchException(
            f'shift on {shift.layer_bits} bits needs {size} entries, got {v.shape[-1]}')
    return v[..., shift.index_map]


def inverse_shift(shift):
    """The rotation undoing shift"""
    m = shift.layer_bits
    return CyclicShift(m, (m - shift.shift) % m if m else 0)


def node_index(layer, offset, n):
    """Heap number of the node at (layer, offset)"""
    depth = n - layer
    return (1 << depth) + (offset >> layer)


def node_layer_offset(node, n):
    """(layer, offset) of a heap numbered node"""
    depth = node.bit_length() - 1
    layer = n - depth
    return layer, (node - (1 << depth)) << layer


def is_weight_class_complete(pattern):
    """True when the frozen status of a block depends on the local index weight only

    :param pattern: Boolean array of length 2^m, True on frozen positions
    """
    pattern = np.asarray(pattern, dtype=bool)
    m = pattern.size.bit_length() - 1
    weights = weight_table(m)
    for weight in range(m + 1):
        status = pattern[weights == weight]
        if status.any() and not status.all():
            return False
    return True


@dataclass(frozen=True)
class SpEligibility:
    """Per-node flag telling whether successive permutation may act there"""
    n: int
    eligible: np.ndarray

    def at(self, layer, offset):
        return bool(self.eligible[node_index(layer, offset, self.n)])

    def all(self):
        return bool(self.eligible[1:].all())


@lru_cache(maxsize=32)
def sp_eligibility(code):
    """Marks the nodes whose local frozen pattern is an RM sub-code

    For RM codes every node qualifies; for polar codes only those sub-codes do,
    which keeps the frozen/information pattern seen by the decoder unchanged.

    :param CodeSpec code: The code
    :returns SpEligibility: Flags in heap order, entry 0 unused
    """
    N = code.N
    eligible = np.zeros(2 * N, dtype=bool)
    mask = code.frozen_mask
    for node in range(1, 2 * N):
        layer, offset = node_layer_offset(node, code.n)
        eligible[node] = is_weight_class_complete(mask[offset:offset + (1 << layer)])
    eligible.flags.writeable = False
    return SpEligibility(code.n, eligible)


class PermState:
    """Permutation bookkeeping of the live decoding paths

    All arrays carry the path on axis 0, so cloning on a list fork is a single
    fancy index.

    active_shifts[p, m]: shift in force at the node of layer m being traversed
    leaf_map[p, i]: original bit index decided at decode position i
    node_shifts[p, k]: shift chosen at heap node k, -1 where none was chosen
    """

    def __init__(self, active_shifts, leaf_map, node_shifts):
        self.active_shifts = active_shifts
        self.leaf_map = leaf_map
        self.node_shifts = node_shifts

    @classmethod
    def identity(cls, n, paths=1):
        N = 1 << n
        return cls(
            np.zeros((paths, n + 1), dtype=np.int64),
            np.tile(np.arange(N, dtype=np.int64), (paths, 1)),
            np.full((paths, 2 * N), -1, dtype=np.int8),
        )

    @property
    def paths(self):
        return self.leaf_map.shape[0]

    @property
    def n(self):
        return self.active_shifts.shape[1] - 1

    def select(self, parents):
        """Keeps (and duplicates) the paths listed in parents, in that order"""
        self.active_shifts = self.active_shifts[parents]
        self.leaf_map = self.leaf_map[parents]
        self.node_shifts = self.node_shifts[parents]

    def path(self, index):
        """Independent single-path copy"""
        return PermState(
            self.active_shifts[index:index + 1].copy(),
            self.leaf_map[index:index + 1].copy(),
            self.node_shifts[index:index + 1].copy(),
        )

    def enter_node(self, layer, offset, node, shifts):
        """Records the per-path shifts of a node and composes them into leaf_map

        :param int layer: Layer of the node
        :param int offset: First decode position covered by the node
        :param int node: Heap number of the node
        :param numpy.ndarray shifts: One shift per path
        :returns numpy.ndarray: (paths, 2^layer) gather indices for the node LLRs
        """
        index = shift_tables(layer)[shifts]
        span = slice(offset, offset + (1 << layer))
        self.leaf_map[:, span] = np.take_along_axis(self.leaf_map[:, span], index, axis=1)
        self.active_shifts[:, layer] = shifts
        self.node_shifts[:, node] = shifts
        return index

    def exit_index(self, layer):
        """(paths, 2^layer) gather indices taking partial sums back to node order"""
        shifts = self.active_shifts[:, layer]
        return shift_tables(layer)[(layer - shifts) % layer]

    def chosen_shifts(self, index=0):
        """[(layer, offset, shift), ...] of one path, in heap order"""
        chosen = []
        for node in np.flatnonzero(self.node_shifts[index] >= 0):
            layer, offset = node_layer_offset(int(node), self.n)
            chosen.append((layer, offset, int(self.node_shifts[index, node])))
        return chosen

    def is_bijection(self):
        N = self.leaf_map.shape[1]
        return all(np.array_equal(np.sort(row), np.arange(N)) for row in self.leaf_map)


def enumerate_shift_assignments(n):
    """Every assignment of one cyclic shift per tree node, with its leaf map

    Exhaustive, meant for n <= 4 only. Nodes of layer 0 and 1 have the
    identity as their only shift and are left out of the assignment.

    :param int n: log2 of the block length
    :returns generator: (dict {node: shift}, leaf_map) pairs
    """
    nodes = [node for node in range(1, 1 << n) if node_layer_offset(node, n)[0] >= 2]
    choices = [range(node_layer_offset(node, n)[0]) for node in nodes]
    for assignment in itertools.product(*choices):
        leaf_map = np.arange(1 << n, dtype=np.int64)
        # parents precede children in heap order
        for node, shift in zip(nodes, assignment):
            layer, offset = node_layer_offset(node, n)
            span = slice(offset, offset + (1 << layer))
            leaf_map[span] = leaf_map[span][rotation_table(layer, shift)]
        yield dict(zip(nodes, assignment)), leaf_map
