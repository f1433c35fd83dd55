#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
The pipeline stages, one composition object each, attached to a
`graphalign.core.runner.Runner`.
"""
