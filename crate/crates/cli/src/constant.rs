use std::time::Instant;

use serde::Serialize;

use dp6a2::arithmetic::{predicted_constant, tau_p, TauProduct, ALPHA, MIN_PRIME_CUTOFF};
use dp6a2::density::{density_report, DensityReport};

use crate::report::RunReport;
use crate::{CliError, Result};

#[derive(Debug, Clone, Serialize)]
pub struct ConstantResults {
    /// Exact, as `"1/432"`.
    pub alpha: String,
    pub alpha_f64: f64,
    pub tau_inf: f64,
    pub density: DensityReport,
    pub tau_product: TauProduct,
    /// Exact, as `"13/64"`.
    pub tau_2: String,
    pub c: f64,
    pub c_completed: f64,
}

/// `c = α τ_∞ ∏_{p <= cutoff} τ_p`, with `τ_∞` from the three-dimensional
/// route and the planar route reported alongside.
pub fn cmd_constant(prime_cutoff: u64, quad_tol: f64) -> Result<(RunReport, ConstantResults)> {
    if prime_cutoff < MIN_PRIME_CUTOFF {
        return Err(CliError::Config(format!(
            "--primes-up-to must be at least {MIN_PRIME_CUTOFF}, got {prime_cutoff}"
        )));
    }
    let mut report = RunReport::new("constant")
        .param("primes_up_to", prime_cutoff)
        .param("quad_tol", quad_tol);

    let t0 = Instant::now();
    let density = density_report(quad_tol)?;
    report.timings.insert("density".into(), t0.elapsed().as_secs_f64());

    let t0 = Instant::now();
    let pc = predicted_constant(prime_cutoff, density.tau_inf_3d)?;
    report.timings.insert("euler_product".into(), t0.elapsed().as_secs_f64());

    let results = ConstantResults {
        alpha: format!("{}/{}", ALPHA.0, ALPHA.1),
        alpha_f64: pc.alpha,
        tau_inf: pc.tau_inf,
        tau_2: tau_p(2)?.to_string(),
        tau_product: pc.tau_product,
        c: pc.c,
        c_completed: pc.c_completed,
        density,
    };
    report.passed = results.density.routes_agree();
    report.results = serde_json::to_value(&results)?;
    Ok((report, results))
}

/// `c` from an already computed `τ_∞`.
pub fn predicted_c(prime_cutoff: u64, tau_inf: f64) -> Result<f64> {
    Ok(predicted_constant(prime_cutoff, tau_inf)?.c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_fields() {
        assert!(matches!(cmd_constant(10, 1e-6), Err(CliError::Config(_))));
        assert!(cmd_constant(1000, 0.5).is_err());
    }
}
