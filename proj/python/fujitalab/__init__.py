"""Numerical experiments for semilinear heat flow on model spaces."""

try:
    from ._fujitalab import *  # noqa: F401,F403  (installed package layout)
    from ._fujitalab import __doc__ as _doc
except ImportError:
    from _fujitalab import *  # noqa: F401,F403  (build-tree layout)
    from _fujitalab import __doc__ as _doc

__doc__ = _doc
