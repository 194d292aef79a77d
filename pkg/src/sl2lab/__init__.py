"""Growth of sets, Cayley graph spectra and random walks in SL2 over finite fields."""

from .errors import Sl2LabError
from .field import FieldParams, FqElem, make_field, quad_class
from .group import SL2, GroupSet, Sl2Elem, centralizer, conjugacy_class, count_tori, sl2, trace_variety
from .growth import (classify_pivot, large_set_check, phi_fiber_check, power_sym, product,
                     symmetrize, trichotomy, verify_orbit_stab, verify_plunnecke_chain, verify_ruzsa)
from .cayley import bfs, dense_spectrum, girth, lambda2_sparse, mixing_profile
from .escape import Variety, find_rss, point_count
from .bgfamily import IntMat2, PRESETS, family_scan, free_depth, reduce_mod, word_injectivity_check

__version__ = "0.1.0"
