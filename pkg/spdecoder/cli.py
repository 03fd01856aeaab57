"""Command line front end: spdecoder-sim runs one FER sweep and writes its results.

All run state comes from the flags (or from the config embedded in a JSON
result file with --replay); defaults are read from the conf/ settings.
"""
import argparse
import math
import platform
import sys
from dataclasses import dataclass
from datetime import datetime
from datetime import timezone

from jinja2 import Template

from spdecoder import __version__
from spdecoder.code import CodeFamily
from spdecoder.code import CrcSpec
from spdecoder.code import InvalidCodeParameterException
from spdecoder.code import InvalidRmDimensionException
from spdecoder.code import construct_code
from spdecoder.decode import DecoderKind
from spdecoder.helpers import settings
from spdecoder.helpers.constants.constants import CRC_POLYNOMIALS
from spdecoder.helpers.constants.constants import OUTPUT_FORMATS
from spdecoder.helpers.logger import logger
from spdecoder.sim import InvalidSimConfigException
from spdecoder.sim import SimConfig
from spdecoder.sim import UnsupportedDecoderException
from spdecoder.sim import read_json
from spdecoder.sim import run_sweep
from spdecoder.sim import write_csv
from spdecoder.sim import write_json

logger = logger()

GNUPLOT_HEADER = Template(
    '# {{ label }}\n'
    '{% if manifest %}'
    '# tool_version: {{ manifest.tool_version }}\n'
    '# timestamp: {{ manifest.timestamp }}\n'
    '# host: {{ manifest.host }}\n'
    '{% endif %}'
    '{% for key, value in config.items() if key != "code" %}'
    '# {{ key }}: {{ value }}\n'
    '{% endfor %}'
    '# ebn0_db fer\n',
    keep_trailing_newline=True,
)


class CliException(Exception):
    """Raise when the command line cannot be turned into a run"""
    exit_code = 1

    def __init__(self, message, flag=None):
        super().__init__(message)
        self.flag = flag


class UsageException(CliException):
    """Raise on unknown, missing or malformed flags"""
    exit_code = 2


class ValueRangeException(CliException):
    """Raise when a flag value is outside its allowed range"""
    exit_code = 3


class DimensionException(CliException):
    """Raise when K does not fit in N"""
    exit_code = 4


class RmRateException(CliException):
    """Raise when K is not an RM dimension"""
    exit_code = 5


class OutputException(CliException):
    """Raise when results cannot be written"""
    exit_code = 6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageException(f'{self.prog}: {message}')


@dataclass(frozen=True)
class RunRequest:
    """A parsed command line: what to run and where the results go"""
    config: SimConfig
    out: str = None
    fmt: str = 'csv'


@dataclass(frozen=True)
class RunManifest:
    """Provenance stored next to the results"""
    config: dict
    tool_version: str
    timestamp: str
    host: str

    @classmethod
    def collect(cls, config):
        return cls(
            config=config.to_dict(),
            tool_version=__version__,
            timestamp=datetime.now(timezone.utc).isoformat(timespec='seconds'),
            host=platform.node(),
        )

    def to_dict(self):
        return {
            'tool_version': self.tool_version,
            'timestamp': self.timestamp,
            'host': self.host,
            'config': self.config,
        }


def parse_snr(text):
    """Eb/N0 points from `start:step:stop` (stop included within 1e-9) or `a,b,c`

    :param str text: The --snr value
    :returns tuple: The points in dB
    """
    try:
        if ':' in text:
            start, step, stop = (float(part) for part in text.split(':'))
        else:
            return tuple(float(part) for part in text.split(','))
    except ValueError:
        raise UsageException(f'--snr expects start:step:stop or a comma list, got {text!r}',
                             '--snr')
    if not step > 0 or stop < start:
        raise ValueRangeException(f'--snr range {text!r} is empty', '--snr')
    count = math.floor((stop - start) / step + 1e-9) + 1
    return tuple(round(start + i * step, 12) for i in range(count))


def _build_parser():
    parser = _Parser(prog='spdecoder-sim', description='FER simulation of SC, SCL, SPSC and '
                     'SPSCL decoding of polar and RM codes over BPSK-AWGN')
    parser.add_argument('--code', choices=[family.value for family in CodeFamily], default='rm')
    parser.add_argument('--n', type=int, help='log2 of the block length')
    parser.add_argument('--k', type=int, help='code dimension, CRC bits included')
    parser.add_argument('--design-snr', type=float, default=float(settings.code.design_snr_db),
                        help='polar construction Eb/N0 in dB')
    parser.add_argument('--crc', choices=['none'] + sorted(CRC_POLYNOMIALS, key=int),
                        default='none')
    parser.add_argument('--crc-on-top', action='store_true',
                        help='--k counts payload bits, the CRC bits come on top of it')
    parser.add_argument('--decoder', choices=[kind.value for kind in DecoderKind], default='sc')
    parser.add_argument('--list', type=int, dest='list_size')
    parser.add_argument('--snr', help='start:step:stop or comma separated Eb/N0 values in dB')
    parser.add_argument('--max-frames', type=int)
    parser.add_argument('--min-errors', type=int)
    parser.add_argument('--seed', type=int)
    parser.add_argument('--workers', type=int)
    parser.add_argument('--batch-frames', type=int)
    parser.add_argument('--f', choices=['exact', 'minsum'], dest='f_mode')
    parser.add_argument('--pm', choices=['exact', 'hard'], dest='pm_mode')
    parser.add_argument('--ml-bound', action='store_true',
                        help='count only errors an ML decoder would also make')
    parser.add_argument('--replay', metavar='RESULTS_JSON',
                        help='rerun the config embedded in a JSON result file')
    parser.add_argument('--out', help='output file, standard output when absent')
    parser.add_argument('--format', choices=OUTPUT_FORMATS, dest='fmt',
                        default=settings.output.format)
    parser.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    return parser


def _check_positive(args, names):
    for name, flag in names:
        value = getattr(args, name)
        if value is not None and value < 1:
            raise ValueRangeException(f'{flag} must be >= 1, got {value}', flag)


def _build_code(args):
    for name, flag in (('n', '--n'), ('k', '--k'), ('snr', '--snr')):
        if getattr(args, name) is None:
            raise UsageException(f'{flag} is required', flag)
    _check_positive(args, [('n', '--n'), ('k', '--k')])
    crc = None if args.crc == 'none' else CrcSpec.from_name(args.crc)
    on_top = args.crc_on_top and crc is not None
    info_bits = args.k + crc.width if on_top else args.k
    if info_bits > 1 << args.n:
        raise DimensionException(
            f'--k {args.k} needs {info_bits} info positions, N = {1 << args.n}', '--k')
    try:
        return construct_code(args.code, args.n, args.k, args.design_snr, crc, on_top)
    except InvalidRmDimensionException as err:
        raise RmRateException(f'--k: {err}', '--k')
    except InvalidCodeParameterException as err:
        raise ValueRangeException(f'--crc: {err}', '--crc')


def parse_args(argv=None):
    """Turns command line flags into a RunRequest

    :param list argv: Arguments without the program name, sys.argv[1:] when None
    :returns RunRequest: The validated run
    :raises CliException: With the exit code matching the failure
    """
    args = _build_parser().parse_args(argv)
    if args.log_level:
        logger.setLevel(args.log_level)
    if args.seed is not None and args.seed < 0:
        raise ValueRangeException(f'--seed must be >= 0, got {args.seed}', '--seed')
    _check_positive(args, [
        ('list_size', '--list'), ('max_frames', '--max-frames'), ('min_errors', '--min-errors'),
        ('workers', '--workers'), ('batch_frames', '--batch-frames'),
    ])
    if args.replay:
        try:
            config = read_json(args.replay).config
        except (OSError, ValueError, KeyError) as err:
            raise UsageException(f'--replay {args.replay}: {err}', '--replay')
        return RunRequest(config, args.out, args.fmt)
    code = _build_code(args)
    overrides = {
        'max_frames': args.max_frames,
        'min_frame_errors': args.min_errors,
        'seed': args.seed,
        'workers': args.workers,
        'batch_frames': args.batch_frames,
        'f_mode': args.f_mode,
        'pm_mode': args.pm_mode,
    }
    overrides = {key: value for key, value in overrides.items() if value is not None}
    try:
        config = SimConfig.from_settings(
            code, args.decoder, parse_snr(args.snr), args.list_size,
            ml_bound_mode=args.ml_bound, **overrides)
    except UnsupportedDecoderException as err:
        raise UsageException(f'--ml-bound: {err}', '--ml-bound')
    except InvalidSimConfigException as err:
        raise ValueRangeException(str(err))
    logger.info(f'Parsed {config.label} over {len(config.snr_points)} Eb/N0 points')
    return RunRequest(config, args.out, args.fmt)


def render_gnuplot(points, config=None, manifest=None):
    """Two columns `ebn0_db fer` under a commented header"""
    header = GNUPLOT_HEADER.render(
        label=config.label if config else 'FER',
        manifest=manifest.to_dict() if manifest else None,
        config=config.to_dict() if config else {},
    )
    return header + ''.join(f'{point.ebn0_db} {point.fer}\n' for point in points)


def emit_plot_data(points, fmt='csv', out=None, config=None, manifest=None):
    """Writes points as csv, json or gnuplot data

    :param list points: FerPoints, at least one
    :param str fmt: One of OUTPUT_FORMATS
    :param str out: Output path, standard output when None
    :param SimConfig config: Run config, required by json
    :param RunManifest manifest: Provenance for the json and gnuplot headers
    :raises OutputException: On an empty point list or an unwritable path
    """
    if not points:
        raise OutputException('no FER points to write')
    if fmt not in OUTPUT_FORMATS:
        raise UsageException(f'--format must be one of {OUTPUT_FORMATS}, got {fmt!r}', '--format')
    if fmt == 'json' and config is None:
        raise OutputException('json output needs the run config')
    stream = sys.stdout
    try:
        if out is not None:
            stream = open(out, 'w', newline='')
        try:
            if fmt == 'csv':
                write_csv(points, stream)
            elif fmt == 'json':
                write_json(points, config, stream, manifest.to_dict() if manifest else None)
            else:
                stream.write(render_gnuplot(points, config, manifest))
        finally:
            if out is not None:
                stream.close()
    except OSError as err:
        raise OutputException(f'--out {out}: {err}', '--out')
    if out is not None:
        logger.info(f'Wrote {len(points)} points as {fmt} to {out}')


def main(argv=None):
    """Entry point of spdecoder-sim

    :returns int: 0 iff every point of the sweep completed
    """
    try:
        request = parse_args(argv)
        points = run_sweep(request.config)
        emit_plot_data(points, request.fmt, request.out, request.config,
                       RunManifest.collect(request.config))
    except CliException as err:
        logger.error(f'{err.flag or "spdecoder-sim"}: {err}')
        print(err, file=sys.stderr)
        return err.exit_code
    if len(points) != len(request.config.snr_points):
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
