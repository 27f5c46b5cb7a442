"""Exact-arithmetic laboratory for self-avoiding walks and height
functions on Cayley graphs and periodic graphs."""

from .presentations import (
    CoefficientMatrix,
    GroupHeightSpec,
    KernelBasis,
    Presentation,
    PresentationError,
    WellDefinedReport,
    betti,
    choose_ghf,
    coefficient_matrix,
    d_of_ghf,
    evaluate_ghf,
    ghf_exists,
    integer_kernel_basis,
    parse_presentation,
    preset_presentation,
    rank_exact,
    verify_well_defined,
    PRESENTATION_PRESETS,
)
from .graphs import (
    Ball,
    BudgetExceeded,
    GraphError,
    GraphOracle,
    PeriodicGraph,
    PGOracle,
    ball,
    catalog,
    cover_vertex,
    periodic_graph_from_document,
    periodic_preset,
    resolve_model,
    CATALOG_NAMES,
    PERIODIC_PRESETS,
)
from .heights import (
    AxiomReport,
    CoordinateHeight,
    GammaHeight,
    HarmonicReport,
    HarmonicSolution,
    HeightError,
    HeightFunction,
    IdentityHeight,
    LevelHeight,
    PeriodicHeight,
    RepairExhausted,
    compute_d,
    compute_r,
    harmonic_extension,
    harmonic_residuals,
    height_table,
    increase_repair,
    repair_document,
    solution_space,
    verify_harmonic,
    verify_height_axioms,
)
from .saw import (
    BoundsReport,
    BoundsRow,
    CountTable,
    MultiplicativityReport,
    check_multiplicativity,
    count_bridges,
    count_saws,
    doubling_monotone,
    mu_bounds,
)
from .locality import (
    IsoRadiusResult,
    ScanRecord,
    ScanReport,
    ball_iso,
    count_agreement,
    iso_radius,
    locality_scan,
)

__version__ = "0.1.0"
