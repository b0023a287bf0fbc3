"""Overload scenarios on a ring of join-lesser-workload servers.

Thin re-export of the compiled core: message-length laws, scenario rate
functions, critical input rates, work-split optimization, and the
rare-event simulator.
"""

try:
    from ._ringld import *  # noqa: F401,F403  (installed package layout)
    from ._ringld import __doc__ as _core_doc
except ImportError:  # build-tree layout: the module sits next to the package
    from _ringld import *  # noqa: F401,F403
    from _ringld import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
