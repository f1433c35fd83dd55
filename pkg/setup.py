#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Packaging of graphalign.
"""

# Imports #
from setuptools import setup, find_namespace_packages
from os import path

# Load the contents of the README file #
this_dir = path.abspath(path.dirname(__file__))
readme_path = path.join(this_dir, 'README.md')
with open(readme_path, encoding='utf-8') as handle: readme = handle.read()

# Call setup #
setup(
    name             = 'graphalign',
    version          = '0.3.1',
    description      = 'graphalign is a python package for lexicon-free grapheme'
                       ' acoustic modelling and audio to grapheme alignment.',
    license          = 'EUPL',
    packages         = find_namespace_packages(include=['graphalign', 'graphalign.*']),
    install_requires = ['autopaths>=1.6.0', 'plumbing>=2.11.1', 'numpy', 'scipy',
                        'pandas', 'simplejson', 'pyyaml', 'tqdm', 'p_tqdm',
                        'soundfile', 'regex', 'pystache'],
    extras_require   = {'testing': ['pytest']},
    python_requires  = ">=3.8",
    scripts          = ['scripts/graphalign'],
    long_description = readme,
    long_description_content_type = 'text/markdown',
    include_package_data = True,
    package_data     = {'graphalign': ['core/defaults.yaml',
                                       'analysis/templates/*.mustache']},
)
