"""Point-null normal testing: Bayes factors, prior regimes and Type I calibration."""

from ._lindley import (
    CalibrationResult,
    DomainError,
    InfeasibleError,
    IoError,
    LindleyError,
    MonteCarloReport,
    PriorScheme,
    RangeError,
    UnsupportedSchemeError,
    bayes_factor,
    classical_threshold,
    classify_regime,
    decide,
    expected_kl,
    kl_null_vs_alt,
    log_m_of_sigma,
    m_of_sigma,
    marginal_alt,
    positivity_bound,
    posterior_h0,
    power_analytic,
    psi,
    rho0,
    simulate,
    solve_sigma,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
    type_i_error,
)

__all__ = [name for name in dir() if not name.startswith("_")]
