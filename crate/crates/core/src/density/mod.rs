//! The real density `τ_∞`.
//!
//! `F1(u, v)` is the length of the set of `t` with
//!
//! ```text
//! |t(ut + v²)|, |uvt|, |uvt + v³|, |u²t|, |u²t + uv²| <= 1,
//! ```
//!
//! `F2(u) = ∫_0^{min(1/u², 2^{1/3})} F1(u, v) dv` (the `v`-range past
//! `2^{1/3}` is empty), and `τ_∞ = 6 ∫_0^1 F2`. Independently, `τ_∞` is the
//! integral over the `(x3, x6)`-plane of `1 / max` of the seven forms
//! `|x3² + x3x6²|, |x3x6|, |x3x6 + x6³|, |x3|, |x3 + x6²|, 1, |x6|`.

mod interval;
pub mod quadrature;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use interval::IntervalSet;
use quadrature::{integrate, QuadOptions};

use crate::{Error, Result};

/// Relative agreement required between the two routes to `τ_∞`.
pub const AGREEMENT_TOLERANCE: f64 = 1e-3;

/// Default relative tolerance of the outer integrals.
pub const DEFAULT_QUAD_TOL: f64 = 1e-7;

/// Per-call absolute tolerance of [`f2`].
pub const F2_ABS_TOL: f64 = 1e-8;

/// Stop doubling the radius of the planar integral once a shell adds less
/// than this fraction of the running total.
pub const SHELL_FRACTION: f64 = 1e-5;

const CBRT_2: f64 = 1.259_921_049_894_873_2;

/// `{t : |t(ut + v²)| <= 1}`: an interval around the roots of `ut² + v²t`,
/// minus the hole where `ut² + v²t < -1`.
fn quadratic_set(u: f64, v: f64) -> IntervalSet {
    let v2 = v * v;
    // ut² + v²t - 1 = 0; roots have product -1/u, take the cancellation-free one first
    let sq = (v2 * v2 + 4.0 * u).sqrt();
    let lo = -(v2 + sq) / (2.0 * u);
    let hi = 2.0 / (v2 + sq);
    let set = IntervalSet::interval(lo, hi);
    let disc = v2 * v2 - 4.0 * u;
    if disc <= 0.0 {
        return set;
    }
    // ut² + v²t + 1 = 0; roots have product 1/u
    let sq = disc.sqrt();
    let h_lo = -(v2 + sq) / (2.0 * u);
    let h_hi = -2.0 / (v2 + sq);
    set.remove_open(h_lo, h_hi)
}

/// The `t`-set whose measure is `F1(u, v)`; `v` may have either sign.
pub fn f1_set(u: f64, v: f64) -> IntervalSet {
    [
        IntervalSet::linear_abs_le_one(u * v, 0.0),
        IntervalSet::linear_abs_le_one(u * v, v * v * v),
        IntervalSet::linear_abs_le_one(u * u, 0.0),
        IntervalSet::linear_abs_le_one(u * u, u * v * v),
    ]
    .iter()
    .fold(quadratic_set(u, v), |acc, s| acc.intersect(s))
}

/// `F1(u, v)` for `u > 0`; NaN otherwise.
pub fn f1(u: f64, v: f64) -> f64 {
    if !(u > 0.0) {
        return f64::NAN;
    }
    f1_set(u, v).measure()
}

fn check_u(u: f64) -> Result<()> {
    if u > 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            arg: u,
            reason: "F2 needs finite u > 0",
        })
    }
}

/// `F2(u)` to absolute accuracy `tol`.
pub fn f2_with_tol(u: f64, tol: f64) -> Result<f64> {
    check_u(u)?;
    let upper = (1.0 / (u * u)).min(CBRT_2);
    // the hole of the quadratic constraint opens at v = (4u)^{1/4}
    let breaks = [(4.0 * u).sqrt().sqrt(), 1.0];
    Ok(integrate(|v| f1(u, v), 0.0, upper, &breaks, QuadOptions::absolute(tol))?.value)
}

/// `F2(u)` to absolute accuracy `1e-8`.
pub fn f2(u: f64) -> Result<f64> {
    f2_with_tol(u, F2_ABS_TOL)
}

/// `6 ∫_0^1 F2(u) du`, computed as `12 ∫_0^1 w F2(w²) dw`.
pub fn tau_infty_3d(quad_tol: f64) -> Result<f64> {
    let inner = F2_ABS_TOL.min(quad_tol * 0.01);
    let err = std::sync::Mutex::new(None);
    // the outer integrand is w F2(w²), so an inner error of inner/w costs inner
    let g = |w: f64| match f2_with_tol(w * w, inner / w.min(1.0)) {
        Ok(v) => w * v,
        Err(e) => {
            err.lock().unwrap().get_or_insert(e);
            f64::NAN
        }
    };
    // F2 changes form where 1/u² crosses 2^{1/3}
    let breaks = [2f64.powf(-1.0 / 12.0)];
    let r = integrate(g, 0.0, 1.0, &breaks, QuadOptions::relative(quad_tol).parallel());
    if let Some(e) = err.into_inner().unwrap() {
        return Err(e);
    }
    Ok(12.0 * r?.value)
}

/// `3 ∫_0^1 ∫_{|u²v| <= 1} F1(u, v) dv du`, integrating over both signs of `v`.
pub fn tau_infty_3d_symmetric(quad_tol: f64) -> Result<f64> {
    let inner = F2_ABS_TOL.min(quad_tol * 0.01);
    let err = std::sync::Mutex::new(None);
    let g = |w: f64| {
        let u = w * w;
        let upper = (1.0 / (u * u)).min(CBRT_2);
        let k = (4.0 * u).sqrt().sqrt();
        let r = integrate(
            |v| f1(u, v),
            -upper,
            upper,
            &[-1.0, -k, 0.0, k, 1.0],
            QuadOptions::absolute(inner / w.min(1.0)),
        );
        match r {
            Ok(r) => w * r.value,
            Err(e) => {
                err.lock().unwrap().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let breaks = [2f64.powf(-1.0 / 12.0)];
    let r = integrate(g, 0.0, 1.0, &breaks, QuadOptions::relative(quad_tol).parallel());
    if let Some(e) = err.into_inner().unwrap() {
        return Err(e);
    }
    Ok(6.0 * r?.value)
}

/// `1 / max` of the seven forms at `(x3, x6)`.
pub fn integrand_2d(x3: f64, x6: f64) -> f64 {
    let y2 = x6 * x6;
    let m = [
        (x3 * (x3 + y2)).abs(),
        (x3 * x6).abs(),
        (x6 * (x3 + y2)).abs(),
        x3.abs(),
        (x3 + y2).abs(),
        1.0,
        x6.abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    1.0 / m
}

/// Real roots of `a w² + b w + c`.
fn roots(a: f64, b: f64, c: f64, out: &mut Vec<f64>) {
    if a == 0.0 {
        if b != 0.0 {
            out.push(-c / b);
        }
        return;
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return;
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q != 0.0 {
        out.push(q / a);
        out.push(c / q);
    } else {
        out.push(0.0);
    }
}

/// `G(y) = ∫_ℝ integrand_2d(w, y) dw`.
///
/// The real line is cut where two of the forms have equal absolute value.
/// Past the outermost cut `|w(w + y²)|` is the maximum, and the two tails are
/// integrated in closed form.
pub fn g_row(y: f64, tol: f64) -> Result<f64> {
    let y = y.abs();
    let y2 = y * y;
    let forms = [
        [1.0, y2, 0.0],
        [0.0, y, 0.0],
        [0.0, y, y2 * y],
        [0.0, 1.0, 0.0],
        [0.0, 1.0, y2],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, y],
    ];
    let mut cuts = vec![0.0, -y2];
    for i in 0..forms.len() {
        for j in i..forms.len() {
            let (f, g) = (forms[i], forms[j]);
            if i != j {
                roots(f[0] - g[0], f[1] - g[1], f[2] - g[2], &mut cuts);
            }
            roots(f[0] + g[0], f[1] + g[1], f[2] + g[2], &mut cuts);
        }
    }
    cuts.retain(|w| w.is_finite());
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let lo = cuts[0] - 1.0;
    let hi = cuts[cuts.len() - 1] + 1.0;

    // ∫_W^∞ dw / (w(w + y²)) = log(1 + y²/W) / y²
    let tail = |w: f64| {
        if y2 == 0.0 {
            1.0 / w
        } else {
            (y2 / w).ln_1p() / y2
        }
    };
    let middle = integrate(
        |w| integrand_2d(w, y),
        lo,
        hi,
        &cuts,
        QuadOptions {
            abs_tol: 0.0,
            rel_tol: tol,
            max_intervals: 20_000,
            parallel: false,
        },
    )?;
    Ok(middle.value + tail(hi) + tail(-lo - y2))
}

/// Diagnostics of the planar route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarIntegral {
    pub value: f64,
    /// Radius `R` at which the shell `[R/2, R]` first added less than
    /// [`SHELL_FRACTION`] of the running total.
    pub radius: f64,
    /// `2 ∫_R^∞ G`, computed with `y = 1/s`.
    pub tail: f64,
    pub shells: usize,
}

/// `∫∫_{ℝ²} integrand_2d = 2 ∫_0^∞ G(y) dy`.
pub fn tau_infty_2d(quad_tol: f64) -> Result<PlanarIntegral> {
    let inner = (quad_tol * 1e-3).max(1e-12);
    let err = std::sync::Mutex::new(None);
    let record = |r: Result<f64>| match r {
        Ok(v) => v,
        Err(e) => {
            err.lock().unwrap().get_or_insert(e);
            f64::NAN
        }
    };
    let outer = QuadOptions::relative(quad_tol).parallel();
    let g = |y: f64| record(g_row(y, inner));

    let mut total = integrate(g, 0.0, 1.0, &[], outer)?.value;
    let mut radius = 1.0;
    let mut shells = 0;
    loop {
        let shell = integrate(g, radius, 2.0 * radius, &[], outer)?.value;
        total += shell;
        radius *= 2.0;
        shells += 1;
        if shell < SHELL_FRACTION * total || shells > 200 {
            break;
        }
    }
    // ∫_R^∞ G(y) dy = ∫_0^{1/R} G(1/s) / s² ds; the part below 1e-30/R is
    // O(1e-30 log) and dropped
    let inv = 1.0 / radius;
    let tail = integrate(
        |s: f64| {
            let y = 1.0 / s;
            record(g_row(y, inner)) * y * y
        },
        1e-30 * inv,
        inv,
        &[],
        outer,
    )?
    .value;
    if let Some(e) = err.into_inner().unwrap() {
        return Err(e);
    }
    Ok(PlanarIntegral {
        value: 2.0 * (total + tail),
        radius,
        tail: 2.0 * tail,
        shells,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub tau_inf_3d: f64,
    /// The same integral at half the tolerance.
    pub tau_inf_3d_refined: f64,
    pub tau_inf_3d_symmetric: f64,
    pub tau_inf_2d: f64,
    pub relative_difference: f64,
    pub agreement_tolerance: f64,
    pub quad_tol: f64,
    pub f2_abs_tol: f64,
    pub truncation_radius: f64,
    pub planar_tail: f64,
    pub f2_samples: Vec<(f64, f64)>,
}

impl DensityReport {
    pub fn routes_agree(&self) -> bool {
        self.relative_difference <= self.agreement_tolerance
    }
}

pub fn density_report(quad_tol: f64) -> Result<DensityReport> {
    if !(quad_tol > 0.0 && quad_tol < 1e-3) {
        return Err(Error::Domain {
            arg: quad_tol,
            reason: "quadrature tolerance must lie in (0, 1e-3)",
        });
    }
    let tau_inf_3d = tau_infty_3d(quad_tol)?;
    let tau_inf_3d_refined = tau_infty_3d(quad_tol / 2.0)?;
    let tau_inf_3d_symmetric = tau_infty_3d_symmetric(quad_tol)?;
    let planar = tau_infty_2d(quad_tol)?;
    let f2_samples = [0.01, 0.1, 0.25, 0.5, 1.0]
        .par_iter()
        .map(|&u| f2(u).map(|v| (u, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityReport {
        tau_inf_3d,
        tau_inf_3d_refined,
        tau_inf_3d_symmetric,
        tau_inf_2d: planar.value,
        relative_difference: (tau_inf_3d - planar.value).abs() / tau_inf_3d,
        agreement_tolerance: AGREEMENT_TOLERANCE,
        quad_tol,
        f2_abs_tol: F2_ABS_TOL,
        truncation_radius: planar.radius,
        planar_tail: planar.tail,
        f2_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn constraints_hold(u: f64, v: f64, t: f64) -> bool {
        (t * (u * t + v * v)).abs() <= 1.0
            && (u * v * t).abs() <= 1.0
            && (u * v * t + v * v * v).abs() <= 1.0
            && (u * u * t).abs() <= 1.0
            && (u * u * t + u * v * v).abs() <= 1.0
    }

    #[test]
    fn f1_examples() {
        assert!((f1(1.0, 0.0) - 2.0).abs() < 1e-15);
        for u in [0.25f64, 1.0, 4.0] {
            let want = 2.0 * u.powf(-0.5).min(u.powi(-2));
            assert!((f1(u, 0.0) - want).abs() < 1e-14, "u = {u}");
        }
        assert!(f1(0.0, 1.0).is_nan());
    }

    #[test]
    fn f1_is_even_in_v() {
        for (u, v) in [(0.3, 0.7), (1.0, 1.1), (0.01, 0.2), (0.5, 1.2)] {
            assert_eq!(f1(u, v), f1(u, -v));
        }
    }

    #[test]
    fn f1_matches_grid_indicator() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 1_000_000;
        for _ in 0..100 {
            let u: f64 = rng.gen_range(0.01..1.0);
            let v: f64 = rng.gen_range(0.0..1.3);
            // |u² t| <= 1 confines t
            let (lo, hi) = (-1.0 / (u * u), 1.0 / (u * u));
            let dt = (hi - lo) / n as f64;
            let hits = (0..n)
                .filter(|&i| constraints_hold(u, v, lo + (i as f64 + 0.5) * dt))
                .count();
            let set = f1_set(u, v);
            let slack = 2.0 * (set.intervals().len() as f64 + 1.0) * dt;
            assert!(
                (hits as f64 * dt - set.measure()).abs() <= slack,
                "u = {u}, v = {v}"
            );
        }
    }

    #[test]
    fn f1_bound_on_grid() {
        // the quadratic constraint alone has measure 2 sqrt(1/u + v⁴/4u²),
        // which is at most 2 sqrt(2/u) while v⁴ <= 4u; past that a hole opens
        for i in 1..=100 {
            let u = i as f64 / 100.0;
            for j in 0..100 {
                let v = j as f64 / 99.0 * 1.3;
                assert!(f1(u, v) <= 2.0 * (2.0 / u).sqrt() + 1e-12, "u = {u}, v = {v}");
            }
        }
    }

    #[test]
    fn f1_exceeds_two_over_sqrt_u() {
        // v⁴ = 4u: every constraint but the quadratic is slack
        let (u, v) = (0.002025, 0.3);
        let bound = 2.0 / f64::sqrt(u);
        assert!(f1(u, v) > 1.4 * bound);
        assert!((f1(u, v) - 2.0 * (2.0 / u).sqrt()).abs() < 1e-9);
        assert!(f1(0.01, 0.05) > 2.0 / f64::sqrt(0.01));
    }

    #[test]
    fn f2_bounds() {
        for u in [0.01, 0.1, 0.5, 1.0] {
            assert!(f2(u).unwrap() <= 4.0 / f64::sqrt(u), "u = {u}");
        }
        for i in 1..=50 {
            let u = i as f64 / 50.0;
            assert!(f2(u).unwrap() <= 4.0 / u.sqrt());
        }
        assert!(f2(0.0).is_err());
    }

    #[test]
    fn f2_is_reproducible() {
        let a = f2(1.0).unwrap();
        let b = f2(1.0).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        let c = f2_with_tol(1.0, 1e-11).unwrap();
        assert!((a - c).abs() < 1e-8);
    }

    #[test]
    fn f2_monte_carlo() {
        // F2(1) is the area of {(t, v) in [-1, 1] x [0, 1] : constraints}
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 10_000_000u64;
        let hits = (0..n)
            .filter(|_| {
                let t: f64 = rng.gen_range(-1.0..1.0);
                let v: f64 = rng.gen_range(0.0..1.0);
                constraints_hold(1.0, v, t)
            })
            .count();
        let mc = 2.0 * hits as f64 / n as f64;
        let q = f2(1.0).unwrap();
        assert!((mc - q).abs() < 1e-3, "mc {mc} vs quadrature {q}");
    }

    #[test]
    fn integrand_examples() {
        assert_eq!(integrand_2d(0.0, 0.0), 1.0);
        assert!((integrand_2d(10.0, 0.0) - 0.01).abs() < 1e-15);
        assert!((integrand_2d(0.5, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn g_row_closed_form_at_zero() {
        assert!((g_row(0.0, 1e-12).unwrap() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn g_row_matches_brute_force() {
        for y in [0.3, 1.0, 2.5, 17.0] {
            let fine = integrate(
                |w| integrand_2d(w, y),
                -1e6,
                1e6,
                &[-y * y, 0.0],
                QuadOptions {
                    max_intervals: 200_000,
                    ..QuadOptions::absolute(1e-9)
                },
            )
            .unwrap()
            .value;
            // the two tails beyond 1e6 add about 2e-6
            let g = g_row(y, 1e-12).unwrap();
            assert!((g - fine).abs() < 1e-5, "y = {y}: {g} vs {fine}");
        }
    }
}
