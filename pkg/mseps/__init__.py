# mseps: aceleración de convergencia (Shanks, ε de Wynn y ε multipaso) con oráculo de determinantes

from .determinants import (
    DeterminantOracle,
    cofactor_determinant,
    determinant,
    determinant_scale,
    extended_h,
    hankel,
    hankel_difference_forms,
    phi,
)
from .epsilon import (
    CellState,
    CellStatus,
    EpsilonTable,
    ProgressiveEpsilon,
    cross_rule_table,
    empty_table,
    multistep_epsilon,
    progressive_append,
    wynn_epsilon,
)
from .errors import (
    Breakdown,
    ConfigError,
    DegenerateRecurrence,
    DimensionTooSmall,
    EmptyFile,
    GaugeUnderdetermined,
    IndexOutOfRange,
    InvalidSpec,
    MsepsError,
    ParseError,
    SeedCountMismatch,
    SingularSystem,
)
from .identities import (
    IdentityCase,
    IdentityId,
    check_bilinear,
    check_corollary2,
    check_identity,
    check_sylvester,
    run_sweep,
)
from .lotka_volterra import (
    LVLattice,
    LVResidualReport,
    closed_form_lattice,
    lv_closed_form,
    lv_m1_u_check,
    lv_residuals,
    miura_from_epsilon,
)
from .numerics import (
    RATIONAL,
    ScalarMode,
    SequencePrefix,
    ZeroPolicy,
    default_zero_policy,
    difference_sequence,
    float_mode,
    forward_difference,
    is_effectively_zero,
)
from .sequences import (
    AlternatingHarmonic,
    Explicit,
    Geometric,
    KernelSpec,
    PowerSeriesPartialSums,
    SeriesSpec,
    generate,
    generate_kernel,
    load_sequence,
    save_sequence,
)
from .shanks import (
    aitken,
    epsilon_entry_det,
    multistep_shanks,
    multistep_shanks_linear,
    quasilinearity_check,
    shanks,
)

__version__ = "0.1.1"
