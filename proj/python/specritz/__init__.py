"""Spectral approximation inequalities and the Ritz method in an auxiliary eigenbasis."""

from ._core import *  # noqa: F401,F403
from ._core import SpecritzError  # noqa: F401

__version__ = "0.1.0"
