from ._risop import *  # noqa: F401,F403
from ._risop import __version__  # noqa: F401
