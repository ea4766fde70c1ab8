"""P_N discontinuous Galerkin solver for scaled steady radiative transfer."""

from ._pndg import (
    ConfigError,
    InputError,
    InternalError,
    SolverError,
    StudyConfig,
    __version__,
    eoc,
    eval_basis,
    evaluate_interval,
    gauss_legendre,
    load_config,
    moment_matrices,
    parse_config,
    radau_project,
    run_convergence,
    run_eps_sweep,
    run_n_sweep,
    scattering_q,
    sphere_quadrature,
    verify_moment_matrices,
    write_config,
)

__all__ = [
    "ConfigError",
    "InputError",
    "InternalError",
    "SolverError",
    "StudyConfig",
    "__version__",
    "eoc",
    "eval_basis",
    "evaluate_interval",
    "gauss_legendre",
    "load_config",
    "moment_matrices",
    "parse_config",
    "radau_project",
    "run_convergence",
    "run_eps_sweep",
    "run_n_sweep",
    "scattering_q",
    "sphere_quadrature",
    "verify_moment_matrices",
    "write_config",
]
