"""Exact effective-cone computations for moduli of sheaves on P1 x P1."""

from .chern import (ChernCharacter, K_CHAR, Slope, euler_chi, hilbert_P,
                    rel_chi, sym_pairing, tensor_slope_delta)
from .config import Config
from .cone import (B_RAY, ConeRay, Facet, assemble_cone, effective_cone_character,
                   effective_cone_hilbert, ns_basis, ray_of_character)
from .exceptional import (Coil, Database, ExceptionalBundle, ExceptionalPair,
                          MutationKind, classify_mutation, complete_pair_to_coil,
                          exceptional_from_slope, get_database, left_mutation,
                          line_bundle, mutate_coil_left, mutate_coil_right,
                          right_mutation)
from .resolver import (KroneckerData, Resolution, delta_p_counts,
                       find_resolution, kronecker_data, select_case)
from .search import (ControllingBundle, ControllingPair, ExtremalPair,
                     OrthogonalPoint, controlling_exceptionals,
                     controlling_pairs, database_for, extremal_pairs,
                     hilbert_character, orthogonal_character, orthogonal_point)
from .stability import delta_E, delta_surface, moduli_nonempty, q_eval

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
