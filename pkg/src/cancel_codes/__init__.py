"""Construct, verify, exactly maximise and bound t-cancellative set families."""

from __future__ import annotations

from .bounds import (
    BoundReport,
    bound_c_n2_upper,
    bound_cancellative_uniform_upper,
    bound_eq_tstar,
    bound_tcanc_recursive,
    bound_tolhuizen_lower,
    bound_uniform,
    bound_uniform_even,
    bound_uniform_odd,
    p_r,
    packing_ceiling,
    tolhuizen_c0,
)
from .constructions import (
    AlgebraicCode,
    TolhuizenCode,
    construct_algebraic,
    construct_complete_r_partite,
    construct_hk_packing,
    construct_linear_4uniform,
    construct_tolhuizen,
)
from .errors import CancelCodesError, FormatError
from .family import SetFamily, Verdict, VertexPartition, Witness, read_family, write_family
from .finite_field import Field, FieldElement, field_new
from .poly import find_good_set, is_independent
from .predicates import (
    contains_G6_or_G7,
    find_r_partition,
    is_cancellative,
    is_cover_free,
    is_linear,
    is_locally_thin,
    is_r_partite,
    is_sparse,
    is_t_cancellative,
    is_t_star_cancellative,
    replay,
)
from .search import C_exact, SearchProblem, SearchResult, c_exact, c_r_exact, c_star_exact, f_exact, max_family

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
