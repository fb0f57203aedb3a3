"""Optimal combinatorial batch codes from transversal designs and affine planes."""

from .bounds import (
    BoundReport,
    johnson_upper_A,
    minimal_s,
    new_range_check,
    optimality_report,
    storage_lower,
    table_exact_N,
    uniform_upper,
)
from .codes import (
    CodeParams,
    IncidenceMatrix,
    construct,
    construct_affine_cbc,
    construct_c1,
    construct_c2,
    construct_c3,
    construct_ctd,
    load_fixture,
    load_matrix,
    params_of,
    parse_matrix,
    format_matrix,
    save_matrix,
)
from .designs import Design, build_affine_plane, build_resolvable_td, validate_design
from .field import FieldTable, field_elements, field_new
from .matching import Assignment, DeficiencyWitness, max_matching, retrieve_batch
from .verify import (
    Verdict,
    max_k_dual,
    max_k_exhaustive,
    sampled_check,
    td_witness,
    verify_cbc,
)

__version__ = "0.1.0"
