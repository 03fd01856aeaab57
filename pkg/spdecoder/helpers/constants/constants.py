"""Simulator needed Constants"""
from spdecoder.helpers import settings

# Generator polynomials in normal representation (implicit leading 1), keyed by
# the --crc spelling.
CRC_POLYNOMIALS = {
    # x^11 + x^10 + x^9 + x^5 + 1
    '11': {'width': 11, 'polynomial': 0x621},
    # x^6 + x^5 + 1
    '6': {'width': 6, 'polynomial': 0x21},
    # x^16 + x^12 + x^5 + 1
    '16': {'width': 16, 'polynomial': 0x1021},
    # x^24 + x^23 + x^21 + x^20 + x^17 + x^15 + x^13 + x^12 + x^8 + x^4 + x^2 + x + 1
    '24': {'width': 24, 'polynomial': 0xB2B117},
}

DEFAULT_CRC = {
    'width': int(settings.code.crc.width),
    'polynomial': int(str(settings.code.crc.polynomial), 0),
    'initial_value': int(str(settings.code.crc.initial_value), 0),
    'reflect': bool(settings.code.crc.reflect),
}

DEFAULT_DESIGN_SNR_DB = float(settings.code.design_snr_db)

CSV_COLUMNS = (
    'ebn0_db', 'frames', 'frame_errors', 'bit_errors', 'fer', 'ber', 'ci95_rel', 'elapsed_s'
)

OUTPUT_FORMATS = ('csv', 'json', 'gnuplot')

# Coefficients of the usual closed form of the Gaussian approximation phi(x).
GA_PHI_ALPHA = -0.4527
GA_PHI_BETA = 0.0218
GA_PHI_GAMMA = 0.86
GA_PHI_SWITCH = 10.0
