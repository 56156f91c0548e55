"""Toolkit for one-relator groups of Demuskin type.

Builds the one-relator presentations with relator
``x1^q [x1,y1]...[xd,yd] yd^(-p^r')``, their catalog of cyclic splittings
(amalgams and HNN extensions), Dehn-twist endomorphisms, Bass-Serre
normal forms with translation lengths, Whitehead minimization, and
finite p-group certificates that twist powers are outer automorphisms.
"""

from .words import (Alphabet, Word, abelianize_mod_l, commutator, conjugate,
                    conjugate_in_free, cyclic_reduce, power_of, primitive_root)
from .gog import (GoGraph, Presentation, TwistEndo, apply_endo,
                  collapse_subtree, dehn_twist, fundamental_presentation,
                  to_dot, validate)
from .normal_forms import (AmalgamSplitting, EmbeddedSplitting, HnnSplitting,
                           TreeMetrics, splittings_intersect, syllable_reduce,
                           to_splitting_coords, tree_metrics)
from .catalog import (DemuskinParams, SplitDescriptor, build_split,
                      curve_complex_slice, demuskin_presentation,
                      neukirch_endo, nielsen_separation, relator, split_amalg,
                      split_hnn, theorem_beta, twist_images,
                      two_edge_refinement, validate_splitting,
                      whitehead_minimal)
from .pquot import (FiniteHom, OuternessCertificate, certify_outer,
                    chatzidakis_hypothesis_check, class2_quotient_hom,
                    finite_conjugacy, heisenberg_case_hom, higman_witness,
                    verify_certificate)

__all__ = [
    "Alphabet", "Word", "abelianize_mod_l", "commutator", "conjugate",
    "conjugate_in_free", "cyclic_reduce", "power_of", "primitive_root",
    "GoGraph", "Presentation", "TwistEndo", "apply_endo", "collapse_subtree",
    "dehn_twist", "fundamental_presentation", "to_dot", "validate",
    "AmalgamSplitting", "EmbeddedSplitting", "HnnSplitting", "TreeMetrics",
    "splittings_intersect", "syllable_reduce", "to_splitting_coords",
    "tree_metrics",
    "DemuskinParams", "SplitDescriptor", "build_split", "curve_complex_slice",
    "demuskin_presentation", "neukirch_endo", "nielsen_separation", "relator",
    "split_amalg", "split_hnn", "theorem_beta", "twist_images",
    "two_edge_refinement", "validate_splitting", "whitehead_minimal",
    "FiniteHom", "OuternessCertificate", "certify_outer",
    "chatzidakis_hypothesis_check", "class2_quotient_hom", "finite_conjugacy",
    "heisenberg_case_hom", "higman_witness", "verify_certificate",
]

__version__ = "0.1.0"
