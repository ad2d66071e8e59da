"""Quantitative mean ergodic theory for discrete amenable groups."""

from ergolab._ergolab import *  # noqa: F401,F403
from ergolab._ergolab import __doc__  # noqa: F401
