"""Monte Carlo FER/BER simulation of the decoders over BPSK-AWGN.

Frames are processed in fixed batches of consecutive frame indices, each frame
drawing from its own generator, and batch results are folded in batch order.
Where a point stops therefore depends on the seed and the configuration only,
never on how many worker processes share the work.
"""
import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from functools import partial

import numpy as np
from scipy import stats

from spdecoder.channel import ChannelParams
from spdecoder.channel import frame_rng
from spdecoder.channel import modulate
from spdecoder.channel import transmit
from spdecoder.code import attach_crc
from spdecoder.code import dump_code
from spdecoder.code import encode
from spdecoder.code import extract_message
from spdecoder.code import load_code
from spdecoder.code import place_message
from spdecoder.decode import DecodeOptions
from spdecoder.decode import DecoderKind
from spdecoder.decode import FMode
from spdecoder.decode import PmMode
from spdecoder.decode import decode
from spdecoder.decode import decode_genie
from spdecoder.helpers import settings
from spdecoder.helpers.constants.constants import CSV_COLUMNS
from spdecoder.helpers.logger import logger

logger = logger()


class InvalidSimConfigException(ValueError):
    """Raise when a simulation configuration is out of range"""


class UnsupportedDecoderException(ValueError):
    """Raise when the ML bound is requested for a decoder without a list"""


@dataclass(frozen=True)
class SimConfig:
    """Everything a sweep depends on

    :param CodeSpec code: The code, CRC included
    :param DecoderKind decoder: Which of the four decoders runs
    :param int list_size: List size, ignored by SC and SPSC
    :param tuple snr_points: Eb/N0 values in dB
    :param int max_frames: Frame budget per point
    :param int min_frame_errors: Error target stopping a point
    :param int seed: Global seed
    :param int workers: Process pool size
    :param FMode f_mode: f kernel
    :param bool ml_bound_mode: Count ML errors instead of decoder errors
    """
    code: object
    decoder: DecoderKind
    list_size: int = 1
    snr_points: tuple = ()
    max_frames: int = 10_000_000
    min_frame_errors: int = 100
    seed: int = 1
    workers: int = 1
    f_mode: FMode = FMode.MINSUM
    ml_bound_mode: bool = False
    pm_mode: PmMode = PmMode.EXACT
    batch_frames: int = 256
    all_zero_codeword: bool = False
    noiseless: bool = False
    llr_clip: float = None

    def __post_init__(self):
        object.__setattr__(self, 'decoder', DecoderKind(self.decoder))
        object.__setattr__(self, 'f_mode', FMode(self.f_mode))
        object.__setattr__(self, 'pm_mode', PmMode(self.pm_mode))
        object.__setattr__(self, 'snr_points', tuple(float(s) for s in self.snr_points))
        for name in ('max_frames', 'min_frame_errors', 'list_size', 'workers', 'batch_frames'):
            if getattr(self, name) < 1:
                raise InvalidSimConfigException(f'{name} must be >= 1, got {getattr(self, name)}')
        if self.llr_clip is not None and not self.llr_clip > 0:
            raise InvalidSimConfigException(f'llr_clip must be positive, got {self.llr_clip}')
        if self.ml_bound_mode and not self.decoder.is_list:
            raise UnsupportedDecoderException(
                f'ML bound needs a list decoder, got {self.decoder.value}')

    @classmethod
    def from_settings(cls, code, decoder, snr_points=(), list_size=None, **overrides):
        """Config with every field not given taken from the SIM settings section"""
        sim = settings.sim
        decoder = DecoderKind(decoder)
        ml_bound_mode = overrides.pop('ml_bound_mode', False)
        if list_size is None:
            list_size = int(sim.ml_bound_list_size) if ml_bound_mode else 1
        values = {
            'max_frames': int(sim.max_frames),
            'min_frame_errors': int(sim.min_frame_errors),
            'seed': int(sim.seed),
            'workers': int(sim.workers),
            'f_mode': sim.f_mode,
            'pm_mode': sim.pm_mode,
            'batch_frames': int(sim.batch_frames),
            'all_zero_codeword': bool(sim.all_zero_codeword),
            'llr_clip': None if sim.llr_clip in (None, '') else float(sim.llr_clip),
        }
        values.update(overrides)
        return cls(code=code, decoder=decoder, list_size=list_size, snr_points=snr_points,
                   ml_bound_mode=ml_bound_mode, **values)

    @property
    def label(self):
        name = self.decoder.value.upper()
        if self.decoder.is_list:
            name = f'{name}({self.list_size})'
        return f'{name} on {self.code}'

    @property
    def decode_options(self):
        return DecodeOptions(f_mode=self.f_mode, pm_mode=self.pm_mode, llr_clip=self.llr_clip)

    def channel(self, ebn0_db):
        if self.noiseless:
            return ChannelParams.noiseless(self.code.rate, self.seed, ebn0_db)
        return ChannelParams.from_ebn0(ebn0_db, self.code.rate, self.seed)

    def to_dict(self):
        """JSON friendly form, the code embedded in its text dump"""
        return {
            'code': dump_code(self.code),
            'decoder': self.decoder.value,
            'list_size': self.list_size,
            'snr_points': list(self.snr_points),
            'max_frames': self.max_frames,
            'min_frame_errors': self.min_frame_errors,
            'seed': self.seed,
            'workers': self.workers,
            'f_mode': self.f_mode.value,
            'ml_bound_mode': self.ml_bound_mode,
            'pm_mode': self.pm_mode.value,
            'batch_frames': self.batch_frames,
            'all_zero_codeword': self.all_zero_codeword,
            'noiseless': self.noiseless,
            'llr_clip': self.llr_clip,
        }

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        data['code'] = load_code(data['code'])
        return cls(**data)


@dataclass
class FerPoint:
    """Result of one operating point

    ci95_rel is the half width of the 95% Clopper-Pearson interval relative to
    fer, infinite when no error was seen. In ML-bound runs frame_errors counts
    ML errors and raw_frame_errors the decoder errors of the same frames.
    """
    ebn0_db: float
    frames: int
    frame_errors: int
    bit_errors: int
    fer: float
    ber: float
    ci95_rel: float
    elapsed_s: float
    low_confidence: bool = False
    ml_bound: bool = False
    raw_frame_errors: int = None

    def confidence_interval(self, level=0.95):
        return clopper_pearson(self.frame_errors, self.frames, level)

    def agrees_with(self, reference, margin=0.25):
        """True when reference lies in the 95% interval widened by a relative margin"""
        low, high = self.confidence_interval()
        return low * (1.0 - margin) <= reference <= high * (1.0 + margin)


@dataclass
class BatchCounts:
    frames: int = 0
    frame_errors: int = 0
    bit_errors: int = 0
    raw_frame_errors: int = 0

    def merge(self, other):
        self.frames += other.frames
        self.frame_errors += other.frame_errors
        self.bit_errors += other.bit_errors
        self.raw_frame_errors += other.raw_frame_errors


@dataclass
class SweepDocument:
    """Content of a JSON result file"""
    points: list
    config: SimConfig
    manifest: dict = field(default_factory=dict)


def clopper_pearson(errors, frames, level=0.95):
    """Exact binomial confidence interval of errors / frames

    :returns tuple: (low, high)
    """
    if frames == 0:
        return 0.0, 1.0
    tail = (1.0 - level) / 2.0
    low = 0.0 if errors == 0 else float(stats.beta.ppf(tail, errors, frames - errors + 1))
    high = 1.0
    if errors < frames:
        high = float(stats.beta.ppf(1.0 - tail, errors + 1, frames - errors))
    return low, high


def _simulate_frame(config, point_index, frame_index, params):
    """(payload bit errors, ML error) of one frame"""
    code = config.code
    rng = frame_rng(config.seed, point_index, frame_index)
    if config.all_zero_codeword:
        payload = np.zeros(code.payload_size, dtype=np.uint8)
    else:
        payload = rng.integers(0, 2, code.payload_size, dtype=np.uint8)
    message = attach_crc(code, payload) if code.crc is not None else payload
    u = place_message(code, message)
    frame = transmit(modulate(encode(code, u)), params, rng)
    opts = config.decode_options
    result = decode(code, frame, config.decoder, config.list_size, opts)
    estimate = extract_message(code, result.u_hat)[:code.payload_size]
    bit_errors = int(np.count_nonzero(estimate != payload))
    ml_error = False
    if bit_errors and config.ml_bound_mode:
        genie = decode_genie(code, frame, u, config.decoder, opts)
        ml_error = result.metric < genie.metric
    return bit_errors, ml_error


def _run_batch(config, point_index, ebn0_db, first_frame):
    count = min(config.batch_frames, config.max_frames - first_frame)
    params = config.channel(ebn0_db)
    counts = BatchCounts(frames=count)
    for frame_index in range(first_frame, first_frame + count):
        bit_errors, ml_error = _simulate_frame(config, point_index, frame_index, params)
        if bit_errors:
            counts.raw_frame_errors += 1
            counts.bit_errors += bit_errors
            if not config.ml_bound_mode or ml_error:
                counts.frame_errors += 1
    return counts


def _fold(totals, batches, target):
    """Merges batches in order, True once the error target is reached"""
    for batch in batches:
        totals.merge(batch)
        if totals.frame_errors >= target:
            return True
    return False


def _collect(config, point_index, ebn0_db):
    starts = range(0, config.max_frames, config.batch_frames)
    totals = BatchCounts()
    work = partial(_run_batch, config, point_index, ebn0_db)
    if config.workers == 1:
        _fold(totals, map(work, starts), config.min_frame_errors)
        return totals
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        logger.debug(f'{config.workers} workers on {len(starts)} batches of {config.batch_frames}')
        for first in range(0, len(starts), config.workers):
            round_starts = starts[first:first + config.workers]
            if _fold(totals, pool.map(work, round_starts), config.min_frame_errors):
                break
    return totals


def _low_confidence(totals, config):
    # one frame carries no spread, whatever its outcome
    return totals.frame_errors < config.min_frame_errors or totals.frames < 2


def run_point(config, ebn0_db, point_index=0):
    """Simulates one Eb/N0 until the error target or the frame budget is reached

    :param SimConfig config: The run configuration
    :param float ebn0_db: Eb/N0 in dB
    :param int point_index: Index of the point within its sweep, part of the frame seeds
    :returns FerPoint: The counts and rates of the point
    """
    started = time.perf_counter()
    totals = _collect(config, point_index, float(ebn0_db))
    elapsed = time.perf_counter() - started
    fer = totals.frame_errors / totals.frames
    ber = totals.bit_errors / (totals.frames * config.code.payload_size)
    low, high = clopper_pearson(totals.frame_errors, totals.frames)
    ci95_rel = (high - low) / 2.0 / fer if totals.frame_errors else math.inf
    point = FerPoint(
        ebn0_db=float(ebn0_db),
        frames=totals.frames,
        frame_errors=totals.frame_errors,
        bit_errors=totals.bit_errors,
        fer=fer,
        ber=ber,
        ci95_rel=ci95_rel,
        elapsed_s=elapsed,
        low_confidence=_low_confidence(totals, config),
        ml_bound=config.ml_bound_mode,
        raw_frame_errors=totals.raw_frame_errors if config.ml_bound_mode else None,
    )
    kind = 'ML bound' if config.ml_bound_mode else 'FER'
    logger.highlight(
        f'{config.label} @ {point.ebn0_db:g} dB: {kind} {point.fer:.4g} '
        f'({point.frame_errors}/{point.frames}, +-{point.ci95_rel:.1%}) in {elapsed:.1f}s')
    if point.low_confidence:
        logger.info(f'{config.label} @ {point.ebn0_db:g} dB is low confidence: '
                    f'{point.frame_errors} errors in {point.frames} frames')
    return point


def run_ml_bound(config, ebn0_db, point_index=0):
    """Lower bound on the MAP FER from a list decoder

    A wrong decision counts only when the decoder's answer has a smaller path
    metric than the transmitted input vector accumulates under the same
    decoder; other errors are blamed on the list size.
    """
    if not config.decoder.is_list:
        raise UnsupportedDecoderException(
            f'ML bound needs a list decoder, got {config.decoder.value}')
    return run_point(replace(config, ml_bound_mode=True), ebn0_db, point_index)


def run_sweep(config):
    """run_point over every Eb/N0 of the config, in order"""
    points = []
    for index, ebn0_db in enumerate(config.snr_points):
        point = run_point(config, ebn0_db, index)
        if points and _increases(points[-1], point):
            logger.warning(
                f'{config.label}: FER rises from {points[-1].fer:.4g} @ {points[-1].ebn0_db:g} dB '
                f'to {point.fer:.4g} @ {point.ebn0_db:g} dB beyond the confidence intervals')
        points.append(point)
    return points


def _increases(previous, current):
    return current.confidence_interval()[0] > previous.confidence_interval()[1]


def snr_at_fer(points, target_fer):
    """Eb/N0 where a curve crosses target_fer, interpolated linearly in log10(FER)

    :raises ValueError: When the curve does not bracket the target
    """
    curve = sorted((p.ebn0_db, p.fer) for p in points if p.fer > 0)
    target = math.log10(target_fer)
    for (x0, f0), (x1, f1) in zip(curve, curve[1:]):
        y0, y1 = math.log10(f0), math.log10(f1)
        if min(y0, y1) <= target <= max(y0, y1):
            if y0 == y1:
                return x0
            return x0 + (target - y0) * (x1 - x0) / (y1 - y0)
    raise ValueError(f'curve does not cross FER {target_fer}')


def snr_gap_db(curve_a, curve_b, target_fer):
    """Horizontal distance in dB between two FER curves, positive when b is better"""
    return snr_at_fer(curve_a, target_fer) - snr_at_fer(curve_b, target_fer)


def _csv_rows(points):
    for point in points:
        yield {name: repr(getattr(point, name)) for name in CSV_COLUMNS}


def write_csv(points, stream_or_path):
    """CSV with the columns of CSV_COLUMNS, floats at full precision"""
    if hasattr(stream_or_path, 'write'):
        _write_csv(points, stream_or_path)
        return
    with open(stream_or_path, 'w', newline='') as stream:
        _write_csv(points, stream)


def _write_csv(points, stream):
    writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator='\n')
    writer.writeheader()
    writer.writerows(_csv_rows(points))


def write_json(points, config, stream_or_path, manifest=None):
    """Points and the full config, plus the run manifest when given"""
    document = {
        'manifest': manifest or {},
        'config': config.to_dict(),
        'points': [asdict(point) for point in points],
    }
    if hasattr(stream_or_path, 'write'):
        _write_json(document, stream_or_path)
        return
    with open(stream_or_path, 'w') as stream:
        _write_json(document, stream)


def _write_json(document, stream):
    json.dump(document, stream, indent=2)
    stream.write('\n')


def read_json(path):
    """Loads a file written by write_json

    :returns SweepDocument: Points, config and manifest
    """
    with open(path) as stream:
        document = json.load(stream)
    return SweepDocument(
        points=[FerPoint(**point) for point in document['points']],
        config=SimConfig.from_dict(document['config']),
        manifest=document.get('manifest', {}),
    )
