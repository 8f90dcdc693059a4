"""Exact commutants, reflexive covers and collineation groups over Q(i)."""

from .core import ExactMatrix, GaussianRational, field, format_scalar, gq, nullspace, parse_scalar, rref, solve_linear
from .errors import (CollatError, DimensionError, NoPermutationError, NoWitnessError, NotNilpotentError,
                     NotSimilarError, ParseError, PreconditionError, SingularMatrixError, SpectrumError)
from .subspace import Subspace, compare, intersect, is_invariant, join, preimage, span_of
from .structure import (JordanType, VectorSample, cycle_check, cyclic_chain, cyclic_subspace, group_by_similarity,
                        jordan_basis, jordan_type, nil_index, nilpotent_similarity, primary_decompose)
from .opspaces import (OperatorSpace, alg_lat_commutant, commutant, hankel_witness, hyperinvariant_generators,
                       intertwiners, is_hyperinvariant, jordan_intertwiner_closed_form, jordan_refl_closed_form,
                       refl_blockwise, refl_sampled_superset)
from .collineation import (ColParamJ2J2, ColVerdict, Verdict, build_swap_collineation, col_check,
                           col_check_sampled, col_j2j2_decide, col_single_chain_decide, commutant_witness,
                           eq66_check, extract_permutation, lat_j2j2_sample, theo01_separator)

__version__ = "0.1.0"
