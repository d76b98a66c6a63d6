"""Exact tools for Lie nilpotent matrix algebras and their dimension bounds."""

from lienil.algebra import (
    MatrixAlgebra,
    annihilator,
    center,
    close_generators,
    conjugate,
    extend_scalars,
    peirce_decompose,
    radical_trace_form,
    radical_triangular,
    triangularize_local,
)
from lienil.bounds import (
    CompositionVector,
    balanced_composition,
    deficiency,
    equality_region,
    floor_bound,
    m_bruteforce,
    m_closed_form,
)
from lienil.chain import (
    BoundReport,
    ChainTrace,
    bound_check,
    complement_sensitivity_experiment,
    compute_chain,
    verify_chain,
)
from lienil.extremal import BlockArray, balanced_extremal, block_array, type_algebra, type_algebra_dimension
from lienil.fields import FieldSpec, Scalar, embed_scalar, field_arith
from lienil.kernels import BACKEND
from lienil.lie import (
    BracketExpansion,
    bracket,
    derived_series,
    engel_check_bruteforce,
    expand_left_normed,
    left_normed,
    lie_nilpotence_index,
    lie_solvability_index,
    lower_central_series,
)
from lienil.linalg import Matrix, Subspace, complement_within, kernel_of_action, module_product, rref, subspace_ops

__version__ = "0.1.0"
