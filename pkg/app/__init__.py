"""
Operator surface: environment config, run configs, solver factory, output
writers and the ``screening`` command line.
"""
