#!/usr/bin/env python
# -*- coding: utf-8 -*-
try:
    from setuptools import find_packages, setup
except ImportError:
    from distutils.core import setup

with open('README.md', 'r') as f:
    readme = f.read()

setup(
    name='spdecoder',
    version='0.1.0',
    description='Successive-permutation SC and SCL decoding of polar and Reed-Muller codes, '
    'with a Monte Carlo FER simulator.',
    long_description=readme,
    license='GNU GPL v3.0',
    classifiers=(
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Natural Language :: English',
        'License :: OSI Approved :: GNU General Public License v3 (GPLv3)',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3.8',
        'Topic :: Scientific/Engineering',
    ),
    packages=find_packages(exclude=('spdecoder_tests', 'spdecoder_tests.*')),
    # fab tasks and lint tooling are in requirements-optional.txt
    install_requires=[
        'dynaconf',
        'fauxfactory',
        'jinja2',
        'numpy',
        'pytest',
        'scipy',
    ],
    entry_points={
        'console_scripts': ['spdecoder-sim=spdecoder.cli:main'],
    },
)
