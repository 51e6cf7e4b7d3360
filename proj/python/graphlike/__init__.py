"""Metric-graph realizations of graph-like continua.

Thin wrapper over the _graphlike extension module: finite metric multigraphs,
refinement-sequence fixtures, effective resistance with certified limits,
Hausdorff-measure estimation, and pseudo-edge decompositions.
"""

try:
    from ._graphlike import *  # noqa: F401,F403  (installed package layout)
    from ._graphlike import __doc__ as _doc
except ImportError:  # development layout: extension on PYTHONPATH
    from _graphlike import *  # noqa: F401,F403
    from _graphlike import __doc__ as _doc

__doc__ = _doc or __doc__
