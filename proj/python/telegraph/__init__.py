"""Telegraph process workbench: Monte Carlo, PDE and Laplace-transform engines."""

from ._core import *  # noqa: F401,F403
from ._core import TelegraphError  # noqa: F401
