"""Castelnuovo-Mumford regularity of graded modules over polynomial rings,
computed by independent routes (Betti tables, postulation numbers of
filter-regular restrictions, saturation indices) and cross-checked by a
randomized theorem harness.
"""

from ._backend import BACKEND
from .ring import (
    NEG_INF,
    FieldSpec,
    FreeModule,
    Monomial,
    Polynomial,
    Presentation,
    RingSpec,
    Vector,
    ideal_to_cyclic_module,
    make_presentation,
    make_ring,
    ring_as_module,
    twist,
    zero_module,
)
from .groebner import (
    GroebnerBasis,
    TermOrder,
    buchberger,
    h0_submodule,
    is_zero_module,
    kernel_of_map,
    normal_form,
    submodule_presentation,
    syzygies,
)
from .hilbert import (
    HilbertSeries,
    PostulationData,
    graded_dim_oracle,
    hilbert_function,
    hilbert_polynomial,
    hilbert_series,
    krull_dim,
    postulation_data,
    postulation_number,
)
from .homology import (
    BettiTable,
    ChainComplex,
    FreeResolution,
    IndexSet,
    LocalCohomologyProfile,
    betti_table,
    depth_and_cm_test,
    ext_module,
    free_resolution,
    hom_module,
    koszul_complex,
    local_cohomology_profile,
    min_gen_degrees,
    partial_regularity,
    regularity_from_betti,
    tensor_product,
    tor,
)
from .reglab import (
    FilterRegularCertificate,
    RestrictionChain,
    is_filter_regular,
    random_filter_regular_sequence,
    regularity_conca_recursive,
    regularity_postulation,
    regularity_sat_formula,
    restrict,
    sat_index,
)

__version__ = "0.1.0"
