"""refmod: obstructedness and moduli dimensions for rank-2 reflexive
sheaves on P^3 and for space curves, computed through graded free
resolutions, graded Betti numbers, local cohomology and Hom/Ext groups.
"""

from .algebra import GF, QQ, Ring, GradedMatrix, kernel_rank
from .resolution import (
    BettiTable,
    GradedPresentation,
    Resolution,
    betti_table,
    hilbert_from_betti,
    hilbert_function,
    minimal_free_resolution,
    minimize,
    verify_exactness,
)

__version__ = "0.1.0"
