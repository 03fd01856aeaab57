"""Test suite for the Monte Carlo FER simulator

:Requirement: FER simulation

:CaseAutomation: Automated

:CaseLevel: Integration

:CaseComponent: Sim

:TestType: functional

:CaseImportance: High

:Upstream: No
"""
import csv
import logging
import math
from dataclasses import replace

import numpy as np
import pytest

from spdecoder import sim
from spdecoder.code import construct_rm
from spdecoder.decode import DecoderKind
from spdecoder.helpers import settings
from spdecoder.sim import FerPoint
from spdecoder.sim import InvalidSimConfigException
from spdecoder.sim import SimConfig
from spdecoder.sim import UnsupportedDecoderException
from spdecoder.sim import clopper_pearson
from spdecoder.sim import read_json
from spdecoder.sim import run_ml_bound
from spdecoder.sim import run_point
from spdecoder.sim import run_sweep
from spdecoder.sim import snr_gap_db
from spdecoder.sim import write_csv
from spdecoder.sim import write_json
from spdecoder_tests.helpers.common import random_seed


@pytest.fixture(scope='module')
def rm32():
    return construct_rm(5, 16)


def point(ebn0_db, frames, errors):
    return FerPoint(ebn0_db, frames, errors, errors, errors / frames, errors / frames / 16,
                    math.inf, 0.0)


def test_negative_config_ranges(rm32):
    """Counts must be positive and the ML bound needs a list decoder

    :id: spdecoder-f2d8f8a4-883b-4b05-8187-3776790a1126

    :expectedresults: InvalidSimConfigException and UnsupportedDecoderException
    """
    with pytest.raises(InvalidSimConfigException):
        SimConfig(rm32, 'sc', max_frames=0)
    with pytest.raises(InvalidSimConfigException):
        SimConfig(rm32, 'scl', list_size=0)
    with pytest.raises(UnsupportedDecoderException):
        SimConfig(rm32, 'spsc', ml_bound_mode=True)
    with pytest.raises(UnsupportedDecoderException):
        run_ml_bound(SimConfig(rm32, 'sc', snr_points=(1.0,)), 1.0)


def test_positive_config_from_settings(rm32):
    """Unset fields come from the SIM settings section

    :id: spdecoder-274511bb-aea6-4e66-92b7-f24a50e94ee0

    :expectedresults: defaults match settings, the ML bound defaults to
        list size 32, and the dict form restores an equal config
    """
    config = SimConfig.from_settings(rm32, 'spscl', (1.0, 2.0), 4, seed=7)
    assert config.max_frames == settings.sim.max_frames
    assert config.min_frame_errors == settings.sim.min_frame_errors
    assert config.seed == 7
    assert config.decoder is DecoderKind.SPSCL
    assert config.label == 'SPSCL(4) on RM(32,16)'
    bound = SimConfig.from_settings(rm32, 'scl', (3.0,), ml_bound_mode=True)
    assert bound.list_size == settings.sim.ml_bound_list_size == 32
    assert SimConfig.from_dict(config.to_dict()) == config


@pytest.mark.parametrize('kind', list(DecoderKind))
def test_positive_noiseless_point(rm32, kind):
    """A clean channel produces no frame errors

    :id: spdecoder-ebc90407-2043-46da-9404-2b336217242a

    :expectedresults: fer = 0 over 10^3 frames, flagged low confidence
    """
    config = SimConfig.from_settings(
        rm32, kind, (3.0,), 4, noiseless=True, max_frames=1000, batch_frames=250,
        seed=random_seed())
    result = run_point(config, 3.0)
    assert result.frames == 1000
    assert result.frame_errors == 0
    assert result.fer == 0.0
    assert result.low_confidence
    assert math.isinf(result.ci95_rel)


def test_positive_worker_count_does_not_change_results(rm32):
    """Same seed, one or two workers, identical counts

    :id: spdecoder-3a73f2f0-2adb-4f4a-aa5f-13366aa4c1d2

    :expectedresults: frames, frame errors and bit errors agree and the
        point stops on a batch boundary once the error target is met
    """
    common = dict(max_frames=4000, min_frame_errors=40, batch_frames=50, seed=random_seed())
    single = run_point(SimConfig.from_settings(rm32, 'spsc', (1.0,), workers=1, **common), 1.0)
    pooled = run_point(SimConfig.from_settings(rm32, 'spsc', (1.0,), workers=2, **common), 1.0)
    assert (single.frames, single.frame_errors, single.bit_errors) == \
        (pooled.frames, pooled.frame_errors, pooled.bit_errors)
    assert single.frame_errors >= 40
    assert single.frames % 50 == 0
    assert single.fer == single.frame_errors / single.frames
    assert not single.low_confidence


def test_positive_sweep(rm32):
    """Sweeps map run_point over the grid

    :id: spdecoder-aed225fa-6bac-4629-bc2d-5f962c084067

    :expectedresults: no points for an empty grid, one low confidence point
        per Eb/N0 with a one frame budget
    """
    assert run_sweep(SimConfig.from_settings(rm32, 'sc', ())) == []
    config = SimConfig.from_settings(rm32, 'sc', (1.0, 2.0, 3.0), max_frames=1,
                                     min_frame_errors=100)
    points = run_sweep(config)
    assert [p.ebn0_db for p in points] == [1.0, 2.0, 3.0]
    assert all(p.frames == 1 and p.low_confidence for p in points)


def test_positive_single_frame_is_low_confidence(rm32):
    """A point of one frame is flagged even when it reaches its error target

    :id: spdecoder-d17b3318-3b04-4c96-a3c1-4f3b4acf0531

    :expectedresults: one erroneous frame with an error target of one is low
        confidence, two frames reaching the target are not
    """
    config = SimConfig.from_settings(rm32, 'sc', (-10.0,), max_frames=1, min_frame_errors=1,
                                     seed=random_seed())
    single = run_point(config, -10.0)
    assert single.frames == 1
    assert single.frame_errors == 1
    assert single.low_confidence
    pair = run_point(replace(config, max_frames=2), -10.0)
    assert pair.frames == 2
    assert pair.frame_errors >= 1
    assert not pair.low_confidence


def test_positive_sweep_warns_on_rising_fer(rm32, monkeypatch, caplog):
    """A sweep point significantly above its predecessor is logged as a warning

    :id: spdecoder-19d4db2c-017c-49b9-b643-bfa0374ffd6c

    :expectedresults: one warning for the rise from 1 to 2 dB, none for the
        overlapping intervals from 2 to 3 dB
    """
    points = {1.0: point(1.0, 1000, 100), 2.0: point(2.0, 1000, 300),
              3.0: point(3.0, 1000, 290)}
    monkeypatch.setattr(sim, 'run_point', lambda config, ebn0_db, index: points[ebn0_db])
    config = SimConfig.from_settings(rm32, 'sc', (1.0, 2.0, 3.0))
    with caplog.at_level(logging.WARNING, logger='spdecoder'):
        assert run_sweep(config) == list(points.values())
    warnings = [record for record in caplog.records if record.levelno == logging.WARNING]
    assert len(warnings) == 1
    assert 'to 0.3 @ 2 dB' in warnings[0].getMessage()


def test_positive_ml_bound_counts_a_subset(rm32):
    """ML errors are a subset of the decoder errors

    :id: spdecoder-5e470986-7632-4b17-a95a-cfef99615f89

    :expectedresults: bound errors <= raw errors on a noisy point, zero on
        a clean channel
    """
    config = SimConfig.from_settings(rm32, 'scl', (0.5,), 2, max_frames=200,
                                     min_frame_errors=1000, seed=random_seed())
    bound = run_ml_bound(config, 0.5)
    assert bound.ml_bound
    assert bound.raw_frame_errors is not None
    assert bound.frame_errors <= bound.raw_frame_errors
    clean = SimConfig.from_settings(rm32, 'spscl', (0.5,), 2, max_frames=100, noiseless=True)
    assert run_ml_bound(clean, 0.5).fer == 0.0


def test_positive_clopper_pearson():
    """Exact binomial interval at the edges and its coverage

    :id: spdecoder-f686bb74-180f-4933-b7fa-18d60a4913de

    :expectedresults: closed forms for 0 and n errors, coverage of a known
        p close to 95% on repeated Bernoulli streams
    """
    assert clopper_pearson(0, 10) == (0.0, pytest.approx(1.0 - 0.025 ** 0.1))
    assert clopper_pearson(10, 10) == (pytest.approx(0.025 ** 0.1), 1.0)
    rng = np.random.default_rng(2024)
    p, n = 0.1, 200
    covered = 0
    for _ in range(500):
        low, high = clopper_pearson(int(rng.binomial(n, p)), n)
        covered += low <= p <= high
    assert covered / 500 >= 0.92


def test_positive_agrees_with():
    """Reference values are judged against the widened interval

    :id: spdecoder-9c71bad8-ff13-4645-b51d-b546984ad266

    :expectedresults: 30/1000 agrees with 0.03 and with 0.05 only when the
        interval is widened
    """
    measured = point(3.0, 1000, 30)
    assert measured.agrees_with(0.03)
    assert measured.agrees_with(0.05)
    assert not measured.agrees_with(0.05, margin=0.0)
    assert not measured.agrees_with(0.08)


def test_positive_snr_gap():
    """Horizontal distance between two curves at a target FER

    :id: spdecoder-453d6627-a3fe-447f-9abf-fc8139a4462a

    :expectedresults: a copy shifted by 0.5 dB is 0.5 dB better, an
        unreached target raises ValueError
    """
    worse = [point(2.0, 1000, 100), point(3.0, 1000, 10)]
    better = [point(1.5, 1000, 100), point(2.5, 1000, 10)]
    assert snr_gap_db(worse, better, 10 ** -1.5) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        snr_gap_db(worse, better, 1e-4)


def test_positive_result_files(rm32, tmp_path):
    """CSV has the documented columns and JSON reads back identically

    :id: spdecoder-0ccfa3a3-0820-4c08-b443-f5395767e8e0

    :expectedresults: one CSV row per point and equal points and config
        after the JSON round trip
    """
    config = SimConfig.from_settings(rm32, 'spscl', (1.0, 2.0), 2, max_frames=20,
                                     batch_frames=10, seed=random_seed())
    points = run_sweep(config)
    csv_path = tmp_path / 'points.csv'
    write_csv(points, csv_path)
    with open(csv_path) as stream:
        rows = list(csv.DictReader(stream))
    assert list(rows[0]) == ['ebn0_db', 'frames', 'frame_errors', 'bit_errors', 'fer', 'ber',
                             'ci95_rel', 'elapsed_s']
    assert [float(row['fer']) for row in rows] == [p.fer for p in points]
    json_path = tmp_path / 'points.json'
    write_json(points, config, json_path, {'tool_version': 'test'})
    document = read_json(json_path)
    assert document.points == points
    assert document.config == config
    assert document.manifest == {'tool_version': 'test'}
