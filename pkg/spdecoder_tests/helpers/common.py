"""Independent oracles the decoder library is checked against

Everything here is written directly from the definitions, in plain Python or
dense linear algebra, without going through the library's fast paths.
"""
import math

import numpy as np
from fauxfactory import gen_integer

from spdecoder.channel import ChannelParams
from spdecoder.channel import modulate
from spdecoder.channel import transmit
from spdecoder.code import attach_crc
from spdecoder.code import encode
from spdecoder.code import place_message


def random_seed():
    return gen_integer(min_value=0, max_value=2 ** 32 - 1)


def kronecker_generator(n):
    """G^{(x)n} as a dense 0/1 matrix"""
    kernel = np.array([[1, 0], [1, 1]], dtype=np.int64)
    generator = np.ones((1, 1), dtype=np.int64)
    for _ in range(n):
        generator = np.kron(generator, kernel)
    return generator


def dense_encode(u):
    u = np.asarray(u, dtype=np.int64)
    n = u.size.bit_length() - 1
    return (u @ kronecker_generator(n) % 2).astype(np.uint8)


def crc_long_division(bits, width, polynomial):
    """Remainder of message(x) x^width divided by the generator, over GF(2)"""
    generator = [int(b) for b in format((1 << width) | polynomial, f'0{width + 1}b')]
    dividend = [int(b) for b in bits] + [0] * width
    for i in range(len(bits)):
        if dividend[i]:
            for j, coefficient in enumerate(generator):
                dividend[i + j] ^= coefficient
    return dividend[-width:]


def minsum(a, b):
    return math.copysign(1.0, a) * math.copysign(1.0, b) * min(abs(a), abs(b)) if a and b else 0.0


def boxplus(a, b):
    """ln((1 + e^(a+b)) / (e^a + e^b)) in its overflow free sign-magnitude form"""
    if not a or not b:
        return 0.0
    big, small = max(abs(a), abs(b)), min(abs(a), abs(b))
    magnitude = small + math.log1p(math.exp(-(big + small))) - math.log1p(math.exp(-(big - small)))
    return math.copysign(1.0, a) * math.copysign(1.0, b) * magnitude


def reference_sc(alpha, frozen, f=minsum):
    """Recursive SC decoder on Python lists

    :returns tuple: (u estimate, re-encoded codeword), both lists of ints
    """
    N = len(alpha)
    if N == 1:
        bit = 0 if frozen[0] or alpha[0] >= 0 else 1
        return [bit], [bit]
    half = N // 2
    a, b = alpha[:half], alpha[half:]
    u_left, x_left = reference_sc([f(x, y) for x, y in zip(a, b)], frozen[:half], f)
    right = [y - x if s else y + x for x, y, s in zip(a, b, x_left)]
    u_right, x_right = reference_sc(right, frozen[half:], f)
    return u_left + u_right, [left ^ r for left, r in zip(x_left, x_right)] + x_right


def rotate_left(index, shift, m):
    """Rotates the m-character binary string of index"""
    if m == 0:
        return index
    digits = format(index, f'0{m}b')
    return int(digits[shift:] + digits[:shift], 2)


def brute_force_objectives(alphas, f=minsum):
    """Summed |f| over the node halves for every cyclic shift of the local index"""
    alphas = list(alphas)
    m = len(alphas).bit_length() - 1
    half = len(alphas) // 2
    objectives = []
    for shift in range(m):
        permuted = [alphas[rotate_left(i, shift, m)] for i in range(len(alphas))]
        objectives.append(sum(abs(f(permuted[i], permuted[i + half])) for i in range(half)))
    return objectives


def random_transmission(code, ebn0_db, rng):
    """Random message through encode, BPSK and AWGN

    :returns tuple: (input vector u, LlrFrame)
    """
    if code.crc is not None:
        message = attach_crc(code, rng.integers(0, 2, code.payload_size, dtype=np.uint8))
    else:
        message = rng.integers(0, 2, code.K, dtype=np.uint8)
    u = place_message(code, message)
    params = ChannelParams.from_ebn0(ebn0_db, code.rate)
    return u, transmit(modulate(encode(code, u)), params, rng)
