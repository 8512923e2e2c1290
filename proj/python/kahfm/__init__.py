from ._kahfm import *  # noqa: F401,F403
from ._kahfm import __doc__  # noqa: F401
