"""Triangulated 3-manifolds and Seifert invariant arithmetic."""
from .complex import (
    SimplicialComplex,
    FVector,
    SurfaceClass,
    build_complex,
    f_vector,
    link,
    classify_closed_surface,
    verify_closed_3_manifold,
    read_tri,
    write_tri,
)
from .homology import HomologyGroups, homology, smith_normal_form, boundary_matrix
from .constructions import mapping_torus, product, staircase_product
from .quotient import IdentificationScheme, Pairing, simplicialize
from .flips import BistellarMove, apply_move, reduce, valid_moves
from .seifert import (
    Geometry,
    SeifertInvariants,
    euler_number,
    geometry,
    normalize,
    orbifold_euler_characteristic,
    parse as parse_seifert,
)

__version__ = "0.1.0"
