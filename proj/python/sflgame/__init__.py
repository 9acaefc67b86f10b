"""Incentive and cut-layer games for split federated learning."""

from ._sflgame import *  # noqa: F401,F403
from ._sflgame import Error, __doc__  # noqa: F401
