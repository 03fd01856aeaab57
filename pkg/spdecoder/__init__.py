"""Successive-permutation SC and SCL decoding of polar and Reed-Muller codes."""
__version__ = '0.1.0'
