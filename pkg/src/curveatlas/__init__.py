"""curveatlas: exact-arithmetic verification atlas for the class-number-one
curve family (point tables, coverings, birational maps, modular q-product
values, and bounded point searches)."""

__version__ = "0.1.0"

from .curves import CurveId, PointRecord, Provenance  # noqa: F401
from .kernel import BivarPoly, QuadRat, Rational, rational_sqrt  # noqa: F401
