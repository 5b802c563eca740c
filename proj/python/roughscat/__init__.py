"""Scattering by a locally rough half-space (Python bindings)."""

from ._core import *  # noqa: F401,F403
from ._core import BoundaryCondition, __doc__  # noqa: F401

DIRICHLET = BoundaryCondition.dirichlet
NEUMANN = BoundaryCondition.neumann
