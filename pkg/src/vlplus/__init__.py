"""Exact toolkit for the plus-fixed-point algebra of an even lattice.

Everything is integer or rational arithmetic; there are no floats and
no tolerances.  The main entry points:

  validate_even_lattice   Gram matrix -> lattice
  classify_modules        census of irreducible-module labels
  character               exact graded dimensions
  fusion_dim              fusion-dimension queries (0 / 1 / unknown)
  branch_orthogonal       decomposition over rank-one factors
  branch_sublattice       decomposition over a sublattice subalgebra
  certify                 per-pair extension-vanishing certificate
"""

from .lattice import (
    Convention,
    CosetElement,
    DiscriminantGroup,
    EvenLattice,
    LatticeError,
    coset_element,
    coset_reps_mod_sublattice,
    delta_set,
    discriminant_group,
    enumerate_coset_vectors,
    epsilon_cocycle,
    minimal_coset_reps,
    mod_two_data,
    norm2_vectors,
    orthogonal_sublattice,
    validate_even_lattice,
)
from .sectors import (
    CentralCharacter,
    ModuleLabel,
    classify_modules,
    contragredient,
    format_label,
    lowest_weight,
    parse_label,
    top_level_dimension,
    zhu_block_report,
)
from .qseries import QSeries, character, euler_product_inv, series_denominator, theta_coset
from .fusion import (
    FusionAnswer,
    SignOracle,
    admissible_triple,
    fusion_dim,
    rank1_fusion,
    tensor_fusion,
)
from .branching import (
    BranchList,
    branch_orthogonal,
    branch_sublattice,
    rank1_m1_branch,
    verify_branch,
)
from .certify import ExtCertificate, ExtJustification, certify, verify_certificate

__all__ = [
    "BranchList",
    "CentralCharacter",
    "Convention",
    "CosetElement",
    "DiscriminantGroup",
    "EvenLattice",
    "ExtCertificate",
    "ExtJustification",
    "FusionAnswer",
    "LatticeError",
    "ModuleLabel",
    "QSeries",
    "SignOracle",
    "admissible_triple",
    "branch_orthogonal",
    "branch_sublattice",
    "certify",
    "character",
    "classify_modules",
    "contragredient",
    "coset_element",
    "coset_reps_mod_sublattice",
    "delta_set",
    "discriminant_group",
    "enumerate_coset_vectors",
    "epsilon_cocycle",
    "euler_product_inv",
    "format_label",
    "fusion_dim",
    "lowest_weight",
    "minimal_coset_reps",
    "mod_two_data",
    "norm2_vectors",
    "orthogonal_sublattice",
    "parse_label",
    "rank1_fusion",
    "rank1_m1_branch",
    "series_denominator",
    "tensor_fusion",
    "theta_coset",
    "top_level_dimension",
    "validate_even_lattice",
    "verify_branch",
    "verify_certificate",
    "zhu_block_report",
]
