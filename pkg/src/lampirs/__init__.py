"""Exact computation in the subgroup space of lamplighter groups.

Layers, bottom up:

- ``algebra``: arithmetic over F_p[x] and the Laurent ring, Hermite forms.
- ``submodules``: periodic lamp subgroups, rank/period invariants, counting,
  enumeration, and the prescribed-invariant / convergent constructions.
- ``lamplighter``: group elements, subgroup triples, membership, conjugation,
  cylinder tests, and finite-window convergence certification.
- ``cbrank``: derivative levels of the divisor-product order, unboundedness
  certificates, and convergent-sequence construction/classification.
- ``irs``: exact window marginals of shift-invariant measures, block-average
  approximants with their distance bounds, seeded samplers, and splicing.
- ``cli``: reproducible command-line front end over all of the above.
"""

from .algebra import (
    LaurentPoly,
    Poly,
    PolyMatrix,
    enumerate_irreducibles,
    geometric_series,
    hermite_normal_form,
    is_irreducible,
    poly_gcd,
)
from .cbrank import (
    FinitePoset,
    build_approach_sequence,
    cb_levels,
    classify_limit,
    level_closed_form,
    poset_less,
    truncation,
    unbounded_rank_certificate,
)
from .errors import (
    ConsistencyError,
    ContextError,
    DomainError,
    FormatError,
    LampirsError,
    PreconditionError,
    ResourceBudgetError,
)
from .irs import (
    SubgroupMeasure,
    WindowDistribution,
    WindowSubgroup,
    block_average_marginal,
    block_average_measure,
    block_shift_term_marginal,
    convergence_report,
    enumerate_subspaces,
    majority_invariance_estimate,
    majority_symmetric_difference,
    sample_block_average_window,
    sampler_law_report,
    splice_measures,
    tv_distance,
    window_of_submodule,
)
from .lamplighter import (
    GroupElement,
    SubgroupTriple,
    certify_convergence,
    conjugate_element,
    cylinder_contains,
    delta_site,
    multiply,
    power,
)
from .rng import SplitMix64
from .submodules import (
    InvariantReport,
    LaurentVector,
    Submodule,
    approach_sequence,
    construct_with_invariants,
    count_submodules,
    invariant_report,
    submodules_of_codimension,
    vanish_sequence,
)

__version__ = "0.1.0"
