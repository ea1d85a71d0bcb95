"""Walkable-path guidance engine: mask analysis, light voting, drone control, simulation."""

from pathguide._core import *  # noqa: F401,F403
from pathguide._core import __doc__  # noqa: F401

__version__ = "0.1.0"
