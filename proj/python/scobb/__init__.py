"""Global solver for nonconvex QCQP with multiple quadratic constraints.

The heavy lifting lives in the C++ extension ``scobb._core``; this package
re-exports its public surface.
"""

from scobb._core import (
    ActivityReport,
    AssumptionReport,
    CutPlaneResult,
    LiquidationParams,
    OracleResult,
    QcqpInstance,
    QuadForm,
    ScoResult,
    ShockCapacity,
    SolveReport,
    brute_force_oracle,
    build_qcqp,
    check_assumptions,
    check_optimality_activity,
    expected_equity,
    generate_instance,
    load_instance,
    run_cutplane,
    run_sco,
    save_instance,
    shock_capacity,
    solve_scobb,
    spectral_norm,
    spectral_split,
)

__all__ = [
    "ActivityReport",
    "AssumptionReport",
    "CutPlaneResult",
    "LiquidationParams",
    "OracleResult",
    "QcqpInstance",
    "QuadForm",
    "ScoResult",
    "ShockCapacity",
    "SolveReport",
    "brute_force_oracle",
    "build_qcqp",
    "check_assumptions",
    "check_optimality_activity",
    "expected_equity",
    "generate_instance",
    "load_instance",
    "run_cutplane",
    "run_sco",
    "save_instance",
    "shock_capacity",
    "solve_scobb",
    "spectral_norm",
    "spectral_split",
]
