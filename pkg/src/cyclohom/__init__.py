"""Cyclotomic polynomial coefficients read off from simplicial homology."""

from .exactlinalg import (
    HomologySummary,
    IntMatrix,
    SNFResult,
    cokernel_invariants,
    kernel_primitive_basis,
    rank_and_det,
    smith_normal_form,
)
from .numtheory import Factorization, crt_bijection, euler_phi, factorize, primitive_residues
from .polynomial import (
    IntPoly,
    cyclotomic,
    exact_div,
    lattice_coefficient,
    primitive_basis_determinant,
    radical_substitute,
    root_coordinate_matrix,
)
from .simplicial import (
    SimplicialComplex,
    boundary_matrix,
    complete_dpartite,
    dihedral_image,
    reduced_homology,
    subcomplex_KA,
    subcomplex_KT,
    suspension,
)
from .duality import dual_dependence, dual_matrix, find_spanning_tree, plucker_check
from .verify import (
    VerificationReport,
    sweep,
    verify_attaching,
    verify_kT,
    verify_main,
    verify_signs,
    verify_symmetries,
)

__version__ = "0.1.0"
