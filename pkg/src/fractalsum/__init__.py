"""Exact constructions and certificates for sumsets inside homogeneous self-similar sets."""

from .certificates import Certificate
from .cloud import DEFAULT_CAP, BudgetExceeded, PointCloud, minkowski_sum
from .exact import AffineMap, OrthoMatrix, apply, compose, lex_less, parse_point, point, rational
from .ifs import (
    DigitSet,
    HomogeneousIFS,
    SeparationVerdict,
    SSCStatus,
    difference_digits,
    load_ifs,
    prefix_points,
    similarity_dimension,
    ssc_check,
    translation_intersection_digits,
)
from .indexsets import (
    Blocks,
    ExplicitPrefix,
    ResidueClass,
    greedy_checkpoints,
    natural_numbers,
    parse_index_set,
    partition_limsup,
    residue_cover,
    residue_partition,
)
from .moran import b_ell_containment, b_ell_prefix, ev_params, ev_prefix, moran_dim_estimate, moran_table
from .subset import (
    SubsetCantorSpec,
    address_boxdim_estimate,
    boxdim_sweep,
    covering_shadow,
    grid_box_count,
    homogenization_containment,
    homogenize,
    pdsp_decompose,
    psp_decompose,
    subset_prefix,
    sweep_csv,
)
from .sumset import (
    PerPositionDigits,
    coding_pair_bound,
    e_rho_n_certificate,
    exhaustive_translate_oracle,
    gamma_of,
    hsp_beta,
    translate_intersection,
)

__version__ = "0.1.0"
