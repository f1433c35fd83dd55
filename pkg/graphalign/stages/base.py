#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Common behaviour of the pipeline stages.

A stage declares the files it writes in `all_paths` and the files it
reads from other stages in `requires`, as `(stage attribute, path name)`
pairs. Calling the stage checks its inputs, clears its own output
directory, runs it and writes the run manifest.
"""

# Built-in modules #
import logging
import shutil
from pathlib import Path

# First party modules #
from autopaths.auto_paths import AutoPaths
from plumbing.timer import LogTimer

# Internal modules #
from graphalign.core.errors   import MissingArtifactError
from graphalign.core.manifest import write_run_manifest

###############################################################################
class Stage(object):
    """A step of the pipeline, attached to a runner."""

    short_name = None
    out_dir    = None
    all_paths  = ""
    requires   = ()

    def __init__(self, runner):
        # Default attributes #
        self.runner = runner
        self.combo  = runner.combo
        # Directories #
        self.paths = AutoPaths(self.runner.data_dir, self.all_paths)

    def __repr__(self):
        return '%s object on "%s"' % (self.__class__, self.runner.data_dir)

    def __bool__(self):
        return all(Path(p).exists() for p in self.outputs)

    #----------------------------- Properties --------------------------------#
    @property
    def log(self): return self.runner.log

    @property
    def config(self): return self.combo.config

    @property
    def seed(self): return self.combo.seed

    @property
    def workers(self): return self.combo.workers

    @property
    def inputs(self):
        """Pairs of upstream path and name of the stage producing it."""
        result = []
        for attribute, name in self.requires:
            stage = getattr(self.runner, attribute)
            result.append((Path(str(stage.paths[name])), stage.short_name))
        return result

    @property
    def outputs(self):
        """Files and directories this stage writes, all of them by default."""
        return [Path(self.runner.data_dir) / self.out_dir]

    @property
    def manifest_path(self):
        return Path(str(self.runner.paths.manifest_dir)) / (self.short_name + '.json')

    #------------------------------- Methods ---------------------------------#
    def path(self, name):
        """Local path of a declared file or directory, directories created."""
        path = Path(str(self.paths[name]))
        if name.endswith('_dir'): path.mkdir(parents=True, exist_ok=True)
        else: path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def check_inputs(self):
        for path, producer in self.inputs:
            if not path.exists(): raise MissingArtifactError(path, producer)

    def remove_outputs(self):
        """Start from an empty output directory so reruns are complete."""
        out = Path(self.runner.data_dir) / self.out_dir
        if out.exists():
            self.log.info("Removing directory '%s'." % out)
            shutil.rmtree(out)

    def __call__(self):
        """
        Wrap the `run()` method by logging any exception with its traceback
        before raising it again.
        """
        self.log.info("Stage '%s' starting." % self.short_name)
        self.check_inputs()
        timer = LogTimer(self.log)
        timer.print_start()
        self.remove_outputs()
        try:
            result = self.run()
        except Exception:
            log_file_path = "unknown"
            for handler in self.log.handlers:
                if isinstance(handler, logging.FileHandler):
                    log_file_path = handler.baseFilename
            message = "Stage '%s' encountered an exception. See log file at %s"
            self.log.error(message % (self.short_name, log_file_path))
            self.log.exception("Exception", exc_info=True)
            raise
        inputs = [path for path, _ in self.inputs] + self.extra_inputs()
        write_run_manifest(self.manifest_path, self.short_name, self.combo,
                           inputs, self.outputs, self.runner.data_dir)
        timer.print_end()
        timer.print_total_elapsed()
        return result

    def extra_inputs(self):
        """Files read from outside the work directory."""
        return []

    def run(self):
        raise NotImplementedError
