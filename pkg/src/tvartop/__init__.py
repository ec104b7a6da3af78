"""Topological invariants of complexity-one torus varieties.

Input data is a divisorial fan on a marked rational curve; the package
computes Grothendieck-ring classes, Betti numbers, Chow-ring presentations
with Hilbert functions, shelling data, and fundamental groups, all in exact
rational arithmetic.
"""

__version__ = "0.1.0"

from .divfan import CurveData, DivisorialFan, GENERIC, PDivisor  # noqa: F401
from .polyhedron import Cone, Polyhedron  # noqa: F401
