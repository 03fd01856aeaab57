"""Module which publish all simulation tasks"""
# flake8:noqa pylint:disable=F401
from spdecoder.runner import run_decoder
from spdecoder.runner import run_lineup
