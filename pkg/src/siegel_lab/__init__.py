"""Siegel domains of the second kind and the generalized Heisenberg group.

The package computes with ``D(Omega, Q) = {(z, u) : Im z - Q(u, u) in Omega}``
for orthant and simplicial cones: the group law and action, holomorphic
multipliers, concrete representation models and intertwiners, the Bergman
kernel and metric from the dual-cone integral, and five cross-checked tests
of multiplicity-freeness of the restriction to ``G^W``.
"""
from .bergman import *  # noqa: F401,F403
from .cones import *  # noqa: F401,F403
from .config import *  # noqa: F401,F403
from .errors import *  # noqa: F401,F403
from .functions import *  # noqa: F401,F403
from .group import *  # noqa: F401,F403
from .hermitian import *  # noqa: F401,F403
from .mf import *  # noqa: F401,F403
from .multipliers import *  # noqa: F401,F403
from .representations import *  # noqa: F401,F403

__version__ = "0.1.0"
