"""Exact cohomology, eigenvalue group and splitting analysis for
one-dimensional substitution tiling spaces."""

from .apcomplex import APComplex, CohPresentation, build_ap_complex, h1_presentation
from .dirlimit import DLElement, DLGroup, NotDiagonalizable
from .exactlin import Lattice, Mat, smith_normal_form, solve_localized
from .spectral import check_invariants, eigenvalue_group, tau_data, theta_image
from .splitting import SplitVerdict, decide_split_seq1, decide_split_seq3
from .substitution import (Substitution, border_forcing, collar,
                           incidence_matrix, is_primitive, parse_substitution,
                           periodicity_scan, pf_data)

__version__ = "0.1.0"
