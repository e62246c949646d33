//! `ζ(s)` for real `s > 1` and the products `E1`, `E2` built from it.

use crate::{Error, Result};

/// `B_2, B_4, ..., B_20`.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Cutoff of the direct sum; the Euler–Maclaurin remainder is below
/// `1e-20` relative for all `s > 1` at this size.
const EM_TERMS: usize = 20;

/// `ζ(s)` by Euler–Maclaurin summation.
pub fn zeta_real(s: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(Error::Domain {
            arg: s,
            reason: "zeta_real requires finite s > 1",
        });
    }
    let n = EM_TERMS as f64;
    // Largest terms last would lose digits; the head sum is added smallest first.
    let head: f64 = (1..EM_TERMS).rev().map(|k| (k as f64).powf(-s)).sum();
    let n_s = n.powf(-s);
    let mut tail = n * n_s / (s - 1.0) + 0.5 * n_s;
    // running s(s+1)...(s+2k-2) / (2k)! * N^{-s-2k+1}
    let mut factor = s * n_s / n;
    let mut fact = 2.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        tail += b / fact * factor;
        let k2 = 2.0 * (k as f64 + 1.0);
        factor *= (s + k2 - 1.0) * (s + k2) / (n * n);
        fact *= (k2 + 1.0) * (k2 + 2.0);
    }
    Ok(head + tail)
}

/// `E1(s) = ζ(4σ+1) ζ(3σ+1)² ζ(2σ+1)` with `σ = s - 1`.
pub fn e1(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(Error::Domain {
            arg: s,
            reason: "E1 has its pole at s = 1 and needs s > 1 on the reals",
        });
    }
    let sg = s - 1.0;
    Ok(zeta_real(4.0 * sg + 1.0)?
        * zeta_real(3.0 * sg + 1.0)?.powi(2)
        * zeta_real(2.0 * sg + 1.0)?)
}

/// `E2(s) = ζ(7σ+3)⁴ ζ(8σ+3)² / (ζ(4σ+2)³ ζ(5σ+2)² ζ(6σ+2) ζ(10σ+4))` with
/// `σ = s - 1`. Every argument exceeds 1 exactly when `s > 5/6`.
pub fn e2(s: f64) -> Result<f64> {
    if !(s > 5.0 / 6.0) {
        return Err(Error::Domain {
            arg: s,
            reason: "E2 is evaluated through real zeta values, which needs s > 5/6",
        });
    }
    let sg = s - 1.0;
    let z = |a: f64, b: f64| zeta_real(a * sg + b);
    Ok(z(7.0, 3.0)?.powi(4) * z(8.0, 3.0)?.powi(2)
        / (z(4.0, 2.0)?.powi(3) * z(5.0, 2.0)?.powi(2) * z(6.0, 2.0)? * z(10.0, 4.0)?))
}
