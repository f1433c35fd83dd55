#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Run manifests. Every completed stage writes a JSON file recording the tool
version, the configuration hash, the seed, the worker count and the SHA-256
of each input and output artifact. Paths are stored relative to the work
directory, inputs outside of it with `..` components, and sorted, so that
identical runs in different directories give identical manifests.
"""

# Built-in modules #
import hashlib
import os
from pathlib import Path

# Third party modules #
import simplejson

# Internal modules #
import graphalign

###############################################################################
def sha256_file(path, block_size=1 << 20):
    digest = hashlib.sha256()
    with open(path, 'rb') as handle:
        for block in iter(lambda: handle.read(block_size), b''):
            digest.update(block)
    return digest.hexdigest()

def expand(paths):
    """Files of the given paths, directories being walked recursively."""
    result = []
    for path in paths:
        path = Path(str(path))
        if path.is_dir(): result.extend(p for p in sorted(path.rglob('*')) if p.is_file())
        elif path.is_file(): result.append(path)
    return result

def artifact_digests(paths, root):
    """Dictionary of path relative to `root` to digest, in sorted order."""
    root = Path(str(root))
    digests = {}
    for path in expand(paths):
        # Absolute when no relative path exists, for instance across drives #
        try: name = Path(os.path.relpath(path, root)).as_posix()
        except ValueError: name = path.as_posix()
        digests[name] = sha256_file(path)
    return dict(sorted(digests.items()))

def run_manifest(stage, combo, inputs, outputs, root):
    return {'tool':        graphalign.project_name,
            'version':     graphalign.__version__,
            'stage':       stage,
            'config_hash': combo.hash,
            'seed':        combo.seed,
            'workers':     combo.workers,
            'inputs':      artifact_digests(inputs, root),
            'outputs':     artifact_digests(outputs, root)}

def write_run_manifest(path, stage, combo, inputs, outputs, root):
    """Write the manifest of one stage and return it as a dictionary."""
    manifest = run_manifest(stage, combo, inputs, outputs, root)
    path = Path(str(path))
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as handle:
        simplejson.dump(manifest, handle, indent=4)
        handle.write('\n')
    return manifest

def read_run_manifest(path):
    with open(str(path), 'r', encoding='utf-8') as handle:
        return simplejson.load(handle)
