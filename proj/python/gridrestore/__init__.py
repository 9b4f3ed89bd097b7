"""Crew scheduling for distribution-network restoration over a road network."""

from ._core import *  # noqa: F401,F403
from ._core import (  # noqa: F401
    Error,
    IoError,
    ParseError,
    SolverError,
    ValidationError,
)

__version__ = "0.1.0"
