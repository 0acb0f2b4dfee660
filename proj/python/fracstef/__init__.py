from ._fracstef import *  # noqa: F401,F403
from ._fracstef import __doc__  # noqa: F401
