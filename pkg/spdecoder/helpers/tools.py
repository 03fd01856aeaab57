"""Small bit and index utilities shared by the code, permutation and decoder
modules.
"""
from functools import lru_cache
from math import comb

import numpy as np


def hamming_weight(index):
    """Number of ones in the binary expansion of index

    :param int index: A non negative integer
    :returns int: The Hamming weight
    """
    return bin(index).count('1')


@lru_cache(maxsize=None)
def weight_table(m):
    """Hamming weight of every local index of a length 2^m block

    :param int m: Number of index bits
    :returns numpy.ndarray: Read-only int array of length 2^m
    """
    weights = np.array([hamming_weight(i) for i in range(1 << m)], dtype=np.int64)
    weights.flags.writeable = False
    return weights


def rotate_bits(index, shift, m):
    """Rotates the m-bit binary expansion of index left by shift positions

    :param int index: Local index in [0, 2^m)
    :param int shift: Rotation amount in [0, m)
    :param int m: Number of bits
    :returns int: The rotated index
    """
    if m == 0 or shift % m == 0:
        return index
    shift %= m
    mask = (1 << m) - 1
    return ((index << shift) | (index >> (m - shift))) & mask


def partial_binomial_sums(n):
    """Cumulative sums C(n,0), C(n,0)+C(n,1), ..., 2^n

    :param int n: log2 of the block length
    :returns list: n + 1 increasing integers
    """
    sums = []
    total = 0
    for i in range(n + 1):
        total += comb(n, i)
        sums.append(total)
    return sums


def int_to_bits(value, width):
    """Unpacks the width low bits of value, most significant first

    :param int value: The value to unpack
    :param int width: Number of bits to emit
    :returns numpy.ndarray: uint8 array of length width
    """
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)
