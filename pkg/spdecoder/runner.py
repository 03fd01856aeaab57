"""Named experiment lineups for reproducing the RM(128,64) and P(128,64) FER curves.

Each lineup runs every decoder of its figure over the same Eb/N0 grid and
writes one result file per decoder into settings.output.results_dir. The
functions take plain strings too, so that fab can call them directly, e.g.

    fab run_lineup:rm,workers=8
    fab run_decoder:polar,spscl,list_size=8,snr=3
"""
import os

from spdecoder.cli import RunManifest
from spdecoder.cli import emit_plot_data
from spdecoder.cli import parse_snr
from spdecoder.code import CodeFamily
from spdecoder.code import CrcSpec
from spdecoder.code import construct_code
from spdecoder.decode import DecoderKind
from spdecoder.helpers import settings
from spdecoder.helpers.constants.constants import DEFAULT_DESIGN_SNR_DB
from spdecoder.helpers.logger import logger
from spdecoder.sim import SimConfig
from spdecoder.sim import run_sweep

logger = logger()

BLOCK_BITS = 7
DIMENSION = 64
DEFAULT_SNR = '2:0.5:5.5'

# (decoder, list size, ML bound)
LINEUPS = {
    'rm': (
        ('sc', 1, False),
        ('scl', 2, False),
        ('scl', 4, False),
        ('scl', 8, False),
        ('scl', 16, False),
        ('spsc', 1, False),
        ('spscl', 2, False),
        ('spscl', 4, False),
        ('spscl', 8, False),
        ('spscl', 16, False),
        ('spscl', 32, True),
    ),
    'polar': (
        ('sc', 1, False),
        ('scl', 2, False),
        ('scl', 4, False),
        ('scl', 8, False),
        ('scl', 16, False),
        ('spsc', 1, False),
        ('spscl', 2, False),
        ('spscl', 4, False),
        ('spscl', 8, False),
        ('spscl', 16, False),
    ),
}


# =============================================================================
# Codes and configurations
# =============================================================================

def experiment_code(family, decoder):
    """RM(128,64), or P(128,64) built at the design SNR

    List decoders of the polar lineup carry CRC-11 on top of the 64 payload
    bits, i.e. 75 info positions with Eb/N0 still mapped at rate 1/2.

    :param family: 'rm' or 'polar'
    :param decoder: DecoderKind or its value
    :returns CodeSpec: The code the decoder is simulated on
    """
    family = CodeFamily(family)
    crc = None
    if family is CodeFamily.POLAR and DecoderKind(decoder).is_list:
        crc = CrcSpec.default()
    return construct_code(family, BLOCK_BITS, DIMENSION, DEFAULT_DESIGN_SNR_DB, crc,
                          crc_on_top=crc is not None)


def experiment_config(family, decoder, list_size=1, ml_bound=False, snr=DEFAULT_SNR,
                      **overrides):
    """SimConfig of one curve, remaining fields from the SIM settings

    :param str family: 'rm' or 'polar'
    :param str decoder: One of sc, scl, spsc, spscl
    :param int list_size: List size of the list decoders
    :param bool ml_bound: Estimate the MAP lower bound instead of the decoder FER
    :param str snr: Eb/N0 grid in the --snr syntax
    """
    overrides = {key: int(value) for key, value in overrides.items() if value is not None}
    return SimConfig.from_settings(
        experiment_code(family, decoder), decoder, parse_snr(str(snr)), int(list_size),
        ml_bound_mode=_flag(ml_bound), **overrides)


def _flag(value):
    if isinstance(value, str):
        return value.lower() in ('1', 'true', 'yes')
    return bool(value)


def result_name(config, family):
    name = f'{family}{config.code.N}_{config.decoder.value}'
    if config.decoder.is_list:
        name = f'{name}{config.list_size}'
    return f'{name}_ml' if config.ml_bound_mode else name


# =============================================================================
# Runs
# =============================================================================

def run_decoder(family, decoder, list_size=1, ml_bound=False, snr=DEFAULT_SNR, workers=None,
                max_frames=None, min_frame_errors=None, fmt=None, results_dir=None):
    """Simulates one decoder of a lineup and writes its result file

    :returns list: The FerPoints of the sweep
    """
    config = experiment_config(
        family, decoder, list_size, ml_bound, snr,
        workers=workers, max_frames=max_frames, min_frame_errors=min_frame_errors)
    fmt = fmt or settings.output.format
    results_dir = results_dir or settings.output.results_dir
    os.makedirs(results_dir, exist_ok=True)
    path = os.path.join(results_dir, f'{result_name(config, family)}.{fmt}')
    logger.info(f'Running {config.label} over {config.snr_points}')
    points = run_sweep(config)
    emit_plot_data(points, fmt, path, config, RunManifest.collect(config))
    return points


def run_lineup(family, snr=DEFAULT_SNR, workers=None, max_frames=None, min_frame_errors=None,
               fmt=None, results_dir=None):
    """Runs every decoder of the 'rm' or 'polar' lineup

    :returns dict: {result name: FerPoints}
    """
    if family not in LINEUPS:
        raise ValueError(f'Unknown lineup {family!r}, expected one of {sorted(LINEUPS)}')
    results = {}
    for decoder, list_size, ml_bound in LINEUPS[family]:
        config = experiment_config(family, decoder, list_size, ml_bound, snr)
        results[result_name(config, family)] = run_decoder(
            family, decoder, list_size, ml_bound, snr, workers, max_frames,
            min_frame_errors, fmt, results_dir)
    logger.highlight(f'Finished the {family} lineup: {", ".join(results)}')
    return results
