"""Successive inverse-spectral fitting of the Riemann zeros.

Thin wrapper over the C++ core. Arrays come back as Python lists; pass them
to numpy.asarray when needed.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
