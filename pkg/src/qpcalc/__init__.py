"""qpcalc: exact computer algebra for quivers with potential.

Truncated noncommutative series, DWZ mutation and reduction, completed
Ginzburg dg algebras, truncation-level homology, and the mutation
bimodule checks, over exact rationals or a prime field.
"""

from .errors import (
    ArrowNameClash,
    CharacteristicObstruction,
    InsufficientTruncation,
    LoopAtVertex,
    NotACycle,
    NotARightEquivalence,
    NotComposable,
    QpcalcError,
    QuiverMismatch,
    SingularLinearPart,
    TruncationMismatch,
    TwoCycleAtVertex,
    VertexSetMismatch,
)
from .fields import QQ, PrimeField, field_by_name
from .quiver import Arrow, GradedQuiver, Path, compose_paths, cyclic_normalize
from .series import Series, cyclic_derivative, cyclic_normalize_series, series_mul
from .substitution import Substitution, compose_substitutions, invert_substitution, substitute
from .qp import (
    QP,
    Potential,
    SplitResult,
    apply_equiv,
    direct_sum,
    jacobian_dims,
    normalize_c3,
    split,
    validate_qp,
)
from .mutation import MutationResult, involution_report, mutate, premutate
from .ginzburg import (
    GinzburgAlgebra,
    HomologyTable,
    build_ginzburg,
    check_d_squared,
    degree0_criterion,
    transport_ginzburg,
    truncation_homology,
)
from .dgmod import (
    BimoduleData,
    TwistedComplex,
    build_mutation_bimodule,
    cofibrant_simple,
    hom_dims_to_simple,
    homology_dims,
    image_of_simple,
    phi_interval_of_simple,
    verify_bimodule_relations,
)

__version__ = "0.1.0"
