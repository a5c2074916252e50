"""Time-fractional diffusion-wave toolkit."""

from ._fdw import *  # noqa: F401,F403
from ._fdw import Error, ValidationError  # noqa: F401
