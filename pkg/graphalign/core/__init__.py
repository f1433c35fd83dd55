"""The core components of the pipeline are: `graphalign.core.combo`,
`graphalign.core.runner` and `graphalign.core.cli`. A combination holds the
merged configuration of one run and creates the runner that owns the work
directory and the stage objects. A runner for a combo file can be created
and used as follows:

    >>> from graphalign.core.combo import Combination
    >>> runner = Combination("~/synth/combo.yaml").runner
    >>> runner.run('prep')
    >>> runner.run_all()
"""
