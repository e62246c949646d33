//! Least-squares fit of `N(B) = B (β3 L³ + β2 L² + β1 L + β0)`, `L = log B`,
//! with `c = β3` compared against the predicted leading constant.
//!
//! The error term is `O(B^{7/8+ε})`, so each equation is divided by
//! `B^{0.925}` before solving: the weighted residuals are the quantities the
//! boundedness check looks at.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use dp6a2::density::tau_infty_3d;
use dp6a2::torsor::{torsor_count_grid, zero_coordinate_count};

use crate::constant::predicted_c;
use crate::report::{decimal_vec, Check, RunReport};
use crate::{CliError, Result};

/// `7/8 + 0.05`.
pub const RESIDUAL_EXPONENT: f64 = 0.925;
/// Largest accepted `|N - fit| / B^{0.925}`.
pub const RESIDUAL_BOUND: f64 = 1.0;
pub const C_TOLERANCE: f64 = 0.3;
pub const STABILITY_TOLERANCE: f64 = 0.05;
pub const MIN_GRID_POINTS: usize = 8;
/// Smallest `max(B) / min(B)`.
pub const MIN_GRID_SPAN: f64 = 100.0;
/// Reciprocal condition numbers below this are reported as ill-conditioned.
const MIN_RCOND: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    pub points: usize,
    pub c: f64,
    pub c_std_error: f64,
    /// `c·p2`, `c·p1`, `c·p0`.
    pub lower_coefficients: [f64; 3],
    /// `N - fit`, in points.
    pub residuals: Vec<f64>,
    /// `(N - fit) / B^{0.925}`.
    pub scaled_residuals: Vec<f64>,
    pub max_scaled_residual: f64,
    /// Of the column-scaled weighted design matrix.
    pub condition_number: f64,
}

/// `N(B) = 2T(B) + N_zero(B)` on `grid`, from one torsor enumeration.
pub fn count_grid(grid: &[i64]) -> Result<Vec<u64>> {
    let t = torsor_count_grid(grid)?;
    grid.iter()
        .zip(t)
        .map(|(&b, t)| Ok(2 * t + zero_coordinate_count(b)?.total()))
        .collect()
}

fn check_grid(grid: &[i64]) -> Result<()> {
    if grid.len() < MIN_GRID_POINTS {
        return Err(CliError::Config(format!(
            "fit needs at least {MIN_GRID_POINTS} grid points, got {}",
            grid.len()
        )));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config("fit grid must be strictly increasing".into()));
    }
    let span = *grid.last().unwrap() as f64 / grid[0] as f64;
    if grid[0] < 2 || span < MIN_GRID_SPAN {
        return Err(CliError::Config(format!(
            "fit grid must start above 1 and span two decades, got {}..{}",
            grid[0],
            grid.last().unwrap()
        )));
    }
    Ok(())
}

/// Weighted least squares by Householder QR on a column-scaled design.
pub fn fit_counts(grid: &[i64], counts: &[u64]) -> Result<FitSummary> {
    check_grid(grid)?;
    assert_eq!(grid.len(), counts.len());
    let n = grid.len();
    let weight = |b: f64| b.powf(1.0 - RESIDUAL_EXPONENT);
    let x = DMatrix::from_fn(n, 4, |i, j| {
        let b = grid[i] as f64;
        b.ln().powi(3 - j as i32) * weight(b)
    });
    let y = DVector::from_fn(n, |i, _| {
        let b = grid[i] as f64;
        counts[i] as f64 / b.powf(RESIDUAL_EXPONENT)
    });
    let scale: Vec<f64> = (0..4).map(|j| x.column(j).norm()).collect();
    let xs = DMatrix::from_fn(n, 4, |i, j| x[(i, j)] / scale[j]);

    let sv = xs.clone().singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin > MIN_RCOND * smax) {
        return Err(CliError::Config(format!(
            "fit design is ill-conditioned (condition number {:e}); use a log-spaced grid",
            smax / smin
        )));
    }

    let qr = xs.clone().qr();
    let (q, r) = (qr.q(), qr.r());
    let z = r
        .solve_upper_triangular(&(q.transpose() * &y))
        .ok_or_else(|| CliError::Config("singular fit design".into()))?;
    let beta: Vec<f64> = (0..4).map(|j| z[j] / scale[j]).collect();

    let fitted = &xs * &z;
    let wres = &y - fitted;
    let dof = (n - 4).max(1) as f64;
    let s2 = wres.norm_squared() / dof;
    // Var(z) = s² (RᵀR)^{-1}; only the first entry is needed
    let rinv = r
        .clone()
        .try_inverse()
        .ok_or_else(|| CliError::Config("singular fit design".into()))?;
    let var_z0 = rinv.row(0).norm_squared() * s2;

    let scaled_residuals: Vec<f64> = wres.iter().copied().collect();
    let residuals = scaled_residuals
        .iter()
        .zip(grid)
        .map(|(r, &b)| r * (b as f64).powf(RESIDUAL_EXPONENT))
        .collect();
    Ok(FitSummary {
        points: n,
        c: beta[0],
        c_std_error: var_z0.sqrt() / scale[0],
        lower_coefficients: [beta[1], beta[2], beta[3]],
        residuals,
        max_scaled_residual: scaled_residuals.iter().fold(0.0, |m, r| m.max(r.abs())),
        scaled_residuals,
        condition_number: smax / smin,
    })
}

/// `grid` with the rounded geometric mean inserted between neighbours.
pub fn refine_grid(grid: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(2 * grid.len());
    for w in grid.windows(2) {
        out.push(w[0]);
        let mid = ((w[0] as f64) * (w[1] as f64)).sqrt().round() as i64;
        if w[0] < mid && mid < w[1] {
            out.push(mid);
        }
    }
    out.extend(grid.last());
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct FitResults {
    pub grid: Vec<i64>,
    #[serde(serialize_with = "decimal_vec")]
    pub counts: Vec<u64>,
    pub fit: FitSummary,
    pub refined_grid: Vec<i64>,
    #[serde(serialize_with = "decimal_vec")]
    pub refined_counts: Vec<u64>,
    pub refined_fit: FitSummary,
    pub tau_inf: f64,
    pub predicted_c: f64,
    /// `c / predicted_c - 1`.
    pub relative_deviation: f64,
    /// `c_refined / c - 1`.
    pub refinement_change: f64,
    pub checks: Vec<Check>,
}

/// Counts on `grid` and on its refinement (one enumeration at the largest
/// bound), fits both, and compares with the predicted constant.
pub fn cmd_fit(grid: &[i64], prime_cutoff: u64, quad_tol: f64) -> Result<(RunReport, FitResults)> {
    check_grid(grid)?;
    let mut report = RunReport::new("fit")
        .param("grid", grid)
        .param("primes_up_to", prime_cutoff)
        .param("quad_tol", quad_tol);

    let refined_grid = refine_grid(grid);
    let t0 = Instant::now();
    let refined_counts = count_grid(&refined_grid)?;
    report.timings.insert("counts".into(), t0.elapsed().as_secs_f64());
    let counts: Vec<u64> = grid
        .iter()
        .map(|b| refined_counts[refined_grid.binary_search(b).expect("grid is a subset")])
        .collect();

    let t0 = Instant::now();
    let fit = fit_counts(grid, &counts)?;
    let refined_fit = fit_counts(&refined_grid, &refined_counts)?;
    report.timings.insert("fit".into(), t0.elapsed().as_secs_f64());

    let t0 = Instant::now();
    let tau_inf = tau_infty_3d(quad_tol)?;
    let predicted = predicted_c(prime_cutoff, tau_inf)?;
    report.timings.insert("constant".into(), t0.elapsed().as_secs_f64());

    let relative_deviation = fit.c / predicted - 1.0;
    let refinement_change = refined_fit.c / fit.c - 1.0;
    let worst = fit.max_scaled_residual.max(refined_fit.max_scaled_residual);
    let checks = vec![
        Check::new(
            "fitted c near predicted c",
            relative_deviation.abs() < C_TOLERANCE,
            format!(
                "c = {:.6e} ± {:.2e}, predicted {:.6e}, deviation {:+.3} (tolerance {C_TOLERANCE})",
                fit.c, fit.c_std_error, predicted, relative_deviation
            ),
        ),
        Check::new(
            "fit stable under grid refinement",
            refinement_change.abs() < STABILITY_TOLERANCE,
            format!(
                "c = {:.6e} on {} points, {:.6e} on {} points, change {:+.3} (tolerance {STABILITY_TOLERANCE})",
                fit.c,
                fit.points,
                refined_fit.c,
                refined_fit.points,
                refinement_change
            ),
        ),
        Check::new(
            "residuals bounded by B^0.925",
            worst <= RESIDUAL_BOUND,
            format!("max |N - fit| / B^0.925 = {worst:.4} (bound {RESIDUAL_BOUND})"),
        ),
    ];
    report.passed = checks.iter().all(|c| c.passed);
    let results = FitResults {
        grid: grid.to_vec(),
        counts,
        fit,
        refined_grid,
        refined_counts,
        refined_fit,
        tau_inf,
        predicted_c: predicted,
        relative_deviation,
        refinement_change,
        checks,
    };
    report.results = serde_json::to_value(&results)?;
    Ok((report, results))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::log_grid;

    #[test]
    fn recovers_exact_cubic() {
        let grid = log_grid(1000, 10_000_000, 12);
        let (c, p) = (0.0027, [0.12, 1.3, 1.9]);
        let counts: Vec<u64> = grid
            .iter()
            .map(|&b| {
                let (bf, l) = (b as f64, (b as f64).ln());
                (bf * (c * l.powi(3) + p[0] * l * l + p[1] * l + p[2])).round() as u64
            })
            .collect();
        let f = fit_counts(&grid, &counts).unwrap();
        assert!((f.c / c - 1.0).abs() < 1e-3, "{f:?}");
        assert!(f.max_scaled_residual < 0.1);
        assert!(f.c_std_error < 1e-4);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(fit_counts(&[10, 20, 30], &[1, 2, 3]), Err(CliError::Config(_))));
        let narrow = log_grid(1000, 5000, 9);
        assert!(matches!(fit_counts(&narrow, &[1; 9]), Err(CliError::Config(_))));
        let unsorted = [100, 10, 1000, 2000, 3000, 4000, 5000, 100_000];
        assert!(fit_counts(&unsorted, &[1; 8]).is_err());
    }

    #[test]
    fn refinement_interleaves() {
        assert_eq!(refine_grid(&[100, 10_000, 1_000_000]), vec![100, 1000, 10_000, 100_000, 1_000_000]);
        assert_eq!(refine_grid(&[2, 3]), vec![2, 3]);
    }
}
