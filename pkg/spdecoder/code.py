"""Construction, encoding and CRC handling of polar and Reed-Muller codes.

Both families share the generator G^{(x)n} with G = [[1, 0], [1, 1]] and differ
only in which rows carry information: RM codes keep the rows of largest Hamming
weight, polar codes the most reliable bit-channels at a design SNR.
"""
import enum
import math
from dataclasses import dataclass
from dataclasses import field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from spdecoder.helpers.constants.constants import CRC_POLYNOMIALS
from spdecoder.helpers.constants.constants import DEFAULT_CRC
from spdecoder.helpers.constants.constants import GA_PHI_ALPHA
from spdecoder.helpers.constants.constants import GA_PHI_BETA
from spdecoder.helpers.constants.constants import GA_PHI_GAMMA
from spdecoder.helpers.constants.constants import GA_PHI_SWITCH
from spdecoder.helpers.logger import logger
from spdecoder.helpers.tools import int_to_bits
from spdecoder.helpers.tools import partial_binomial_sums
from spdecoder.helpers.tools import weight_table

logger = logger()


class InvalidCodeParameterException(ValueError):
    """Raise when a code cannot be built from the given n, K or CRC"""


class InvalidRmDimensionException(InvalidCodeParameterException):
    """Raise when K is not a partial binomial sum, i.e. would split a weight class"""


class FrozenBitViolationException(ValueError):
    """Raise when an input vector carries a one on a frozen position"""


class MissingCrcException(ValueError):
    """Raise on a CRC operation for a code built without CRC"""


class CodeFamily(enum.Enum):
    POLAR = 'polar'
    RM = 'rm'


@dataclass(frozen=True)
class CrcSpec:
    """Cyclic redundancy check parameters

    :param int width: Number of check bits
    :param int polynomial: Generator in normal representation, the x^width term
        is implicit
    :param int initial_value: Register content before the first message bit
    :param bool reflect: Emit the check bits least significant first
    """
    width: int
    polynomial: int
    initial_value: int = 0
    reflect: bool = False

    def __post_init__(self):
        if self.width < 1:
            raise InvalidCodeParameterException(f'CRC width must be >= 1, got {self.width}')
        if not 0 <= self.polynomial < (1 << self.width):
            raise InvalidCodeParameterException(
                f'CRC polynomial {self.polynomial:#x} does not have degree {self.width}')
        if not 0 <= self.initial_value < (1 << self.width):
            raise InvalidCodeParameterException(
                f'CRC initial value {self.initial_value:#x} wider than {self.width} bits')

    @classmethod
    def default(cls):
        """The CRC configured in the CODE settings section (CRC-11 unless changed)"""
        return cls(**DEFAULT_CRC)

    @classmethod
    def from_name(cls, name):
        """Builds one of the named CRCs, e.g. '11'

        :param str name: A key of CRC_POLYNOMIALS
        """
        try:
            return cls(**CRC_POLYNOMIALS[str(name)])
        except KeyError:
            raise InvalidCodeParameterException(
                f'Unknown CRC {name!r}, expected one of {sorted(CRC_POLYNOMIALS)}')


@dataclass(frozen=True)
class CodeSpec:
    """An (N, K) polar or RM code

    The info set is derived from the frozen set and kept in ascending order.
    K counts the CRC bits when a CRC is attached. channel_rate, when set,
    replaces K/N in the Eb/N0 to noise mapping, e.g. the payload rate of a
    code whose CRC sits on top of its payload.
    """
    family: CodeFamily
    n: int
    K: int
    frozen: frozenset
    crc: CrcSpec = None
    design_snr_db: float = None
    channel_rate: float = None
    info: tuple = field(init=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidCodeParameterException(f'n must be >= 1, got {self.n}')
        N = 1 << self.n
        if any(not 0 <= i < N for i in self.frozen):
            raise InvalidCodeParameterException(f'frozen indices must lie in [0, {N})')
        info = tuple(i for i in range(N) if i not in self.frozen)
        if len(info) != self.K:
            raise InvalidCodeParameterException(
                f'{len(info)} unfrozen positions for K = {self.K}')
        if self.crc is not None and self.crc.width >= self.K:
            raise InvalidCodeParameterException(
                f'CRC of width {self.crc.width} leaves no payload in K = {self.K}')
        if self.channel_rate is not None and not 0 < self.channel_rate <= 1:
            raise InvalidCodeParameterException(
                f'channel rate must lie in (0, 1], got {self.channel_rate}')
        object.__setattr__(self, 'info', info)
        mask = np.zeros(N, dtype=bool)
        mask[list(self.frozen)] = True
        mask.flags.writeable = False
        object.__setattr__(self, '_frozen_mask', mask)
        info_array = np.array(info, dtype=np.int64)
        info_array.flags.writeable = False
        object.__setattr__(self, '_info_array', info_array)

    @property
    def N(self):
        return 1 << self.n

    @property
    def rate(self):
        """Rate of the Eb/N0 mapping"""
        if self.channel_rate is not None:
            return self.channel_rate
        return self.K / self.N

    @property
    def payload_size(self):
        """Information bits excluding the CRC"""
        return self.K - (self.crc.width if self.crc else 0)

    @property
    def frozen_mask(self):
        """Read-only boolean array, True on frozen positions"""
        return self._frozen_mask

    @property
    def info_array(self):
        return self._info_array

    def with_crc(self, crc, channel_rate=None):
        """Returns the same code with a CRC attached (K unchanged)"""
        if channel_rate is None:
            channel_rate = self.channel_rate
        return CodeSpec(
            self.family, self.n, self.K, self.frozen, crc, self.design_snr_db, channel_rate)

    def __str__(self):
        name = 'RM' if self.family is CodeFamily.RM else 'P'
        suffix = f'+CRC{self.crc.width}' if self.crc else ''
        return f'{name}({self.N},{self.K}){suffix}'


def rm_dimensions(n):
    """Every dimension an RM code of length 2^n can have

    :param int n: log2 of the block length
    :returns dict: {K: r} where r is the order, i.e. the code keeps the rows
        of index weight >= n - r
    """
    return {K: r for r, K in enumerate(partial_binomial_sums(n))}


def construct_rm(n, K):
    """Builds RM(2^n, K) by keeping the rows of G^{(x)n} with the largest weight

    Row i of the Kronecker power has weight 2^wt(i), so the info set is the set
    of indices whose binary expansion has at least n - r ones.

    :param int n: log2 of the block length
    :param int K: Dimension, must be a partial binomial sum
    :returns CodeSpec: The RM code
    """
    if n < 1:
        raise InvalidCodeParameterException(f'n must be >= 1, got {n}')
    N = 1 << n
    if not 0 < K <= N:
        raise InvalidCodeParameterException(f'K must satisfy 0 < K <= {N}, got {K}')
    dimensions = rm_dimensions(n)
    if K not in dimensions:
        raise InvalidRmDimensionException(
            f'K = {K} is not an RM dimension for n = {n}; valid values are '
            f'{sorted(dimensions)}')
    min_weight = n - dimensions[K]
    weights = weight_table(n)
    frozen = frozenset(int(i) for i in np.flatnonzero(weights < min_weight))
    code = CodeSpec(CodeFamily.RM, n, K, frozen)
    logger.debug(f'Constructed {code} keeping index weights >= {min_weight}')
    return code


def _ga_log_phi(x):
    """Natural log of the Gaussian approximation function phi"""
    if x < GA_PHI_SWITCH:
        return GA_PHI_ALPHA * x ** GA_PHI_GAMMA + GA_PHI_BETA
    return 0.5 * math.log(math.pi / x) + math.log1p(-10.0 / (7.0 * x)) - x / 4.0


def _ga_check_mean(mu):
    """Mean LLR after a check node combining two channels of mean mu"""
    log_phi = _ga_log_phi(mu)
    # 1 - (1 - phi)^2 = phi * (2 - phi), kept in the log domain
    target = log_phi + math.log(2.0 - math.exp(log_phi))

    def residual(x):
        return _ga_log_phi(x) - target

    if residual(mu) >= 0:
        return mu * mu / 2.0
    return brentq(residual, 0.0, mu, xtol=1e-12, rtol=1e-12)


@lru_cache(maxsize=64)
def _polar_reliabilities(n, design_snr_db, rate):
    sigma2 = 1.0 / (2.0 * rate * 10 ** (design_snr_db / 10.0))
    means = np.array([2.0 / sigma2])
    for _ in range(n):
        check = np.array([_ga_check_mean(mu) for mu in means])
        means = np.column_stack([check, 2.0 * means]).ravel()
    means.flags.writeable = False
    return means


def polar_reliabilities(n, design_snr_db, rate):
    """Mean LLR of every bit-channel under the Gaussian approximation

    The design SNR is read as Eb/N0 at the given rate. Index bit n-1 selects
    the first polarization step, a zero bit being the degraded (check) branch.

    :param int n: log2 of the block length
    :param float design_snr_db: Design Eb/N0 in dB
    :param float rate: Rate used to map Eb/N0 to the noise variance
    :returns numpy.ndarray: Length 2^n array, larger is more reliable
    """
    return _polar_reliabilities(int(n), float(design_snr_db), float(rate))


def construct_polar(n, K, design_snr_db, design_rate=None):
    """Builds P(2^n, K) from the K most reliable bit-channels

    Ties in reliability go to the lower index, so for a fixed design rate the
    info sets are nested in K.

    :param int n: log2 of the block length
    :param int K: Dimension
    :param float design_snr_db: Design Eb/N0 in dB
    :param float design_rate: Rate for the Eb/N0 mapping, K/N by default
    :returns CodeSpec: The polar code
    """
    if n < 1:
        raise InvalidCodeParameterException(f'n must be >= 1, got {n}')
    N = 1 << n
    if not 0 < K <= N:
        raise InvalidCodeParameterException(f'K must satisfy 0 < K <= {N}, got {K}')
    rate = K / N if design_rate is None else design_rate
    means = polar_reliabilities(n, design_snr_db, rate)
    ranking = np.argsort(-means, kind='stable')
    frozen = frozenset(int(i) for i in ranking[K:])
    code = CodeSpec(CodeFamily.POLAR, n, K, frozen, design_snr_db=float(design_snr_db))
    logger.debug(f'Constructed {code} at design Eb/N0 {design_snr_db} dB')
    return code


def construct_code(family, n, K, design_snr_db=None, crc=None, crc_on_top=False):
    """Builds a code of either family, optionally with a CRC

    By default K includes the CRC bits. With crc_on_top K is the payload size:
    the code gets K + crc.width info positions and Eb/N0 is mapped at the
    payload rate K/N.

    :param family: CodeFamily or its value ('polar', 'rm')
    :param int n: log2 of the block length
    :param int K: Dimension, CRC bits included unless crc_on_top
    :param float design_snr_db: Polar design SNR, ignored for RM
    :param CrcSpec crc: CRC to attach, or None
    :param bool crc_on_top: Add the CRC bits to K instead of taking them from it
    """
    family = CodeFamily(family)
    channel_rate = None
    if crc is not None and crc_on_top:
        channel_rate = K / (1 << n)
        K += crc.width
    if family is CodeFamily.RM:
        code = construct_rm(n, K)
    else:
        if design_snr_db is None:
            raise InvalidCodeParameterException('polar construction needs a design SNR')
        code = construct_polar(n, K, design_snr_db)
    return code.with_crc(crc, channel_rate) if crc is not None else code


def polar_transform(bits):
    """Multiplies by G^{(x)n} over GF(2) with the O(N log N) butterfly

    Works on the last axis, so a batch of frames can be transformed at once.
    The transform is its own inverse.

    :param bits: Array-like of 0/1 with power-of-two last dimension
    :returns numpy.ndarray: uint8 array of the same shape
    """
    x = np.array(bits, dtype=np.uint8)
    N = x.shape[-1]
    lead = x.shape[:-1]
    half = 1
    while half < N:
        view = x.reshape(*lead, N // (2 * half), 2, half)
        view[..., 0, :] ^= view[..., 1, :]
        half *= 2
    return x


def encode(code, u):
    """x = u G^{(x)n}

    :param CodeSpec code: The code
    :param u: Length-N input vector (or a batch of them) with zero frozen bits
    :returns numpy.ndarray: The codeword(s)
    """
    u = np.asarray(u, dtype=np.uint8)
    if u.shape[-1] != code.N:
        raise InvalidCodeParameterException(f'input length {u.shape[-1]} != N = {code.N}')
    if np.any(u[..., code.frozen_mask]):
        raise FrozenBitViolationException(f'nonzero frozen bit in input to {code}')
    return polar_transform(u)


def place_message(code, message):
    """Scatters K message bits into the info positions of a zero input vector

    :param CodeSpec code: The code
    :param message: Length-K bits
    :returns numpy.ndarray: Length-N input vector u
    """
    message = np.asarray(message, dtype=np.uint8)
    if message.shape[-1] != code.K:
        raise InvalidCodeParameterException(f'message length {message.shape[-1]} != K = {code.K}')
    u = np.zeros(message.shape[:-1] + (code.N,), dtype=np.uint8)
    u[..., code.info_array] = message
    return u


def extract_message(code, u):
    """Gathers the K info bits of an input vector, in index order"""
    return np.asarray(u, dtype=np.uint8)[..., code.info_array]


def crc_remainder(crc, bits):
    """Check bits of a message under the given CRC

    :param CrcSpec crc: The CRC parameters
    :param bits: Message bits, first transmitted first
    :returns numpy.ndarray: crc.width check bits
    """
    mask = (1 << crc.width) - 1
    top = crc.width - 1
    register = crc.initial_value
    for bit in np.asarray(bits, dtype=np.uint8):
        feedback = ((register >> top) & 1) ^ int(bit)
        register = (register << 1) & mask
        if feedback:
            register ^= crc.polynomial
    check = int_to_bits(register, crc.width)
    return check[::-1].copy() if crc.reflect else check


def attach_crc(code, payload):
    """payload || CRC remainder, K bits ready for place_message

    :param CodeSpec code: A code built with a CRC
    :param payload: K - crc.width bits
    """
    if code.crc is None:
        raise MissingCrcException(f'{code} has no CRC')
    payload = np.asarray(payload, dtype=np.uint8)
    if payload.shape[-1] != code.payload_size:
        raise InvalidCodeParameterException(
            f'payload length {payload.shape[-1]} != {code.payload_size}')
    return np.concatenate([payload, crc_remainder(code.crc, payload)])


def check_crc(code, message):
    """True iff the trailing check bits match the payload

    :param CodeSpec code: A code built with a CRC
    :param message: K bits as produced by attach_crc
    """
    if code.crc is None:
        raise MissingCrcException(f'{code} has no CRC')
    message = np.asarray(message, dtype=np.uint8)
    if message.shape[-1] != code.K:
        raise InvalidCodeParameterException(f'message length {message.shape[-1]} != K = {code.K}')
    payload, check = message[:code.payload_size], message[code.payload_size:]
    return bool(np.array_equal(crc_remainder(code.crc, payload), check))


def dump_code(code):
    """Text form of a code, one `key: value` per line, for pinned fixtures"""
    crc = code.crc
    lines = [
        f'family: {code.family.value}',
        f'n: {code.n}',
        f'K: {code.K}',
        f'design_snr_db: {"" if code.design_snr_db is None else repr(code.design_snr_db)}',
        f'channel_rate: {"" if code.channel_rate is None else repr(code.channel_rate)}',
        f'crc_width: {crc.width if crc else ""}',
        f'crc_polynomial: {hex(crc.polynomial) if crc else ""}',
        f'crc_initial_value: {hex(crc.initial_value) if crc else ""}',
        f'crc_reflect: {str(crc.reflect).lower() if crc else ""}',
        f'frozen: {" ".join(str(i) for i in sorted(code.frozen))}',
    ]
    return '\n'.join(lines) + '\n'


def load_code(text):
    """Parses the output of dump_code

    :param str text: The dumped code
    :returns CodeSpec: The code, with the exact frozen set of the dump
    """
    fields = {}
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith('#'):
            continue
        key, _, value = line.partition(':')
        fields[key.strip()] = value.strip()
    try:
        crc = None
        if fields.get('crc_width'):
            crc = CrcSpec(
                width=int(fields['crc_width']),
                polynomial=int(fields['crc_polynomial'], 0),
                initial_value=int(fields['crc_initial_value'], 0),
                reflect=fields['crc_reflect'] == 'true',
            )
        snr = fields.get('design_snr_db')
        channel_rate = fields.get('channel_rate')
        return CodeSpec(
            family=CodeFamily(fields['family']),
            n=int(fields['n']),
            K=int(fields['K']),
            frozen=frozenset(int(i) for i in fields['frozen'].split()),
            crc=crc,
            design_snr_db=float(snr) if snr else None,
            channel_rate=float(channel_rate) if channel_rate else None,
        )
    except KeyError as err:
        raise InvalidCodeParameterException(f'code dump is missing {err}')

