"""Quadratic and Hermitian spaces over Q: local invariants, the local-global
principle, incoherent definite data and their neighbors, maximal lattices at
odd primes, fibers of the lattice maps, and mass identities."""
from .arith import (INF, PadicNum, Place, QuadExtNum, as_place, canonical_square_class,
                    hensel_sqrt, hilbert_symbol, smallest_nonresidue, symbol_support)
from .errors import (DomainError, IncoherentError, PrecisionError, PreconditionError,
                     SearchExhausted)
from .hermitian import HermGlobalInvariants, HermSpace, ImagQuadField, realize_herm
from .incoherent import (IncoherentHermData, IncoherentOrthData, neighbor_herm, neighbor_orth,
                         restrict_herm, restrict_orth, validate_herm, validate_orth)
from .quadratic import (GlobalQuadInvariants, QuadSpaceQ, global_exists, global_invariants,
                        realize_global)

__version__ = "0.1.0"
