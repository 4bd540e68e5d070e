"""Exact computation of d-term silting objects, torsion classes and cotorsion pairs."""

from .algebra import AlgebraSpec, QuiverAlgebra, build_algebra, load_spec, parse_spec
from .complexes import (ChainMap, ProjComplex, cone, decompose, is_isomorphic, minimize,
                        shift, stalk, two_term)
from .errors import *  # noqa: F401,F403
from .homs import (HomSpace, duality_defect, euler_form, ext, ext_dim, hom_D, hom_K,
                   hom_K_dim, stable_hom)
from .silting import (SiltingObject, SiltingPoset, enumerate_d_silt, is_silting,
                      left_mutate, right_mutate)
from .torsion import (CotorsionPair, TorsionPair, build_engine, lattice, psi, psi_prime,
                      verify_triangle, window_pool)

__version__ = "0.1.0"
