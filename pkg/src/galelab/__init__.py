"""Random Gale diagrams: exact face statistics, simulation and certified geometry.

Exact quantities are returned as :class:`fractions.Fraction`. Geometric
predicates are decided in exact rational arithmetic, with floating point
used only as a filter whose answers are checked.
"""

__version__ = "0.1.0"

from .asymptotics import *  # noqa: E402,F401,F403
from .exactcomb import *  # noqa: E402,F401,F403
from .galecore import *  # noqa: E402,F401,F403
from .geomcore import *  # noqa: E402,F401,F403
from .oracle import *  # noqa: E402,F401,F403
from .simulate import *  # noqa: E402,F401,F403
from . import asymptotics, exactcomb, galecore, geomcore, oracle, simulate  # noqa: E402

__all__ = (
    ["__version__"]
    + asymptotics.__all__
    + exactcomb.__all__
    + galecore.__all__
    + geomcore.__all__
    + oracle.__all__
    + simulate.__all__
)
