"""Spiking CA / geometric-network simulator with an evolutionary fitter
for MEA-style spike recordings."""

from evospike._core import *  # noqa: F401,F403
from evospike._core import __version__  # noqa: F401
