//! Euler factors at a single prime and the products over primes.
//!
//! `D_p(s + 1/3)` is the local factor of `Σ Δ(n) n^{-s-1/3}`; `E1,p`, `E2,p`
//! are the local factors of [`e1`](super::e1) and [`e2`](super::e2), and
//! `G12,p(s+1) = D_p(s+1/3) / (E1,p(s+1) E2,p(s+1))`. At `s = 0`,
//! `E1,p(1) = (1 - 1/p)^{-4}`, so `E2,p(1) G12,p(1) = τ_p`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::intmath::{is_prime, primes_up_to};
use crate::{Error, Result};

/// Smallest cutoff accepted by [`predicted_constant`].
pub const MIN_PRIME_CUTOFF: u64 = 1000;

/// `α = 1/432` as `(numerator, denominator)`.
pub const ALPHA: (u64, u64) = (1, 432);

/// Local factors at one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalFactor {
    p: u64,
}

impl LocalFactor {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `D_p(k + 1/3)` exactly, for integer `k >= 0`. Non-integral `s` makes
    /// `p^{2s+1}` irrational, so exact evaluation is limited to integers.
    pub fn dp_exact(&self, k: u32) -> BigRational {
        let p = BigInt::from(self.p);
        let one = BigRational::one();
        let inv = |e: u32| BigRational::new(BigInt::one(), p.pow(e) - 1);
        let m1 = &one - BigRational::new(BigInt::one(), p.clone());
        let m2 = &one - BigRational::new(BigInt::from(2), p.clone());
        let (a, b, c) = (inv(2 * k + 1), inv(3 * k + 1), inv(4 * k + 1));
        let two = BigRational::from_integer(BigInt::from(2));
        let first = &m1 * (&a + &two * &b + &m2 * &c);
        let second = &m1 * &m1 * &c * (&a + &two * &b);
        one + first + second
    }

    /// `D_p(s + 1/3)` for real `s > -1/3`.
    pub fn dp(&self, s: f64) -> f64 {
        let p = self.p as f64;
        let inv = |e: f64| 1.0 / (p.powf(e) - 1.0);
        let (a, b, c) = (inv(2.0 * s + 1.0), inv(3.0 * s + 1.0), inv(4.0 * s + 1.0));
        let m1 = 1.0 - 1.0 / p;
        1.0 + m1 * (a + 2.0 * b + (1.0 - 2.0 / p) * c) + m1 * m1 * c * (a + 2.0 * b)
    }

    /// `τ_p = (1 - 1/p)⁴ (1 + 4/p + 1/p²)`.
    pub fn tau_exact(&self) -> BigRational {
        let p = BigInt::from(self.p);
        let m1 = BigRational::new(&p - 1, p.clone());
        let poly = BigRational::new(&p * &p + 4 * &p + 1, &p * &p);
        m1.pow(4) * poly
    }

    /// `log τ_p`, accurate for large `p`.
    pub fn log_tau(&self) -> f64 {
        let x = 1.0 / self.p as f64;
        4.0 * (-x).ln_1p() + (4.0 * x + x * x).ln_1p()
    }

    /// `E1,p(s) = ζ_p(4σ+1) ζ_p(3σ+1)² ζ_p(2σ+1)`, `σ = s - 1`, `ζ_p(x) = (1 - p^{-x})^{-1}`.
    pub fn e1(&self, s: f64) -> f64 {
        let sg = s - 1.0;
        let z = |x: f64| self.zeta_p(x);
        z(4.0 * sg + 1.0) * z(3.0 * sg + 1.0).powi(2) * z(2.0 * sg + 1.0)
    }

    /// The Euler factor of [`e2`](super::e2) at `s`.
    pub fn e2(&self, s: f64) -> f64 {
        let sg = s - 1.0;
        let z = |a: f64, b: f64| self.zeta_p(a * sg + b);
        z(7.0, 3.0).powi(4) * z(8.0, 3.0).powi(2)
            / (z(4.0, 2.0).powi(3) * z(5.0, 2.0).powi(2) * z(6.0, 2.0) * z(10.0, 4.0))
    }

    /// `G12,p(s + 1) = D_p(s + 1/3) / (E1,p(s+1) E2,p(s+1))`.
    pub fn g12(&self, s: f64) -> f64 {
        self.dp(s) / (self.e1(s + 1.0) * self.e2(s + 1.0))
    }

    fn zeta_p(&self, x: f64) -> f64 {
        1.0 / (1.0 - (self.p as f64).powf(-x))
    }
}

/// `D_p(s + 1/3)` as a free function; see [`LocalFactor::dp`].
pub fn local_dp(p: u64, s: f64) -> Result<f64> {
    Ok(LocalFactor::new(p)?.dp(s))
}

pub fn tau_p(p: u64) -> Result<BigRational> {
    Ok(LocalFactor::new(p)?.tau_exact())
}

pub fn local_g12(p: u64, s: f64) -> Result<f64> {
    Ok(LocalFactor::new(p)?.g12(s))
}

/// `∏_{p <= cutoff} τ_p` with a tail estimate for the omitted primes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauProduct {
    pub cutoff: u64,
    pub primes: usize,
    /// `Σ_{p <= cutoff} log τ_p`, summed in increasing `p`.
    pub log_sum: f64,
    pub product: f64,
    /// `-9 / (P log P)`, the leading term of `Σ_{p > P} log τ_p`.
    pub log_tail_estimate: f64,
    /// `10 / P`, which bounds `|Σ_{p > P} log τ_p|` since `|log τ_p| <= 10/p²`.
    pub log_tail_bound: f64,
    /// `exp(log_sum + log_tail_estimate)`.
    pub completed: f64,
}

pub fn tau_product(cutoff: u64) -> TauProduct {
    let primes = primes_up_to(cutoff);
    let log_sum: f64 = primes.iter().map(|&p| LocalFactor { p }.log_tau()).sum();
    let pf = cutoff.max(2) as f64;
    let log_tail_estimate = -9.0 / (pf * pf.ln());
    TauProduct {
        cutoff,
        primes: primes.len(),
        log_sum,
        product: log_sum.exp(),
        log_tail_estimate,
        log_tail_bound: 10.0 / pf,
        completed: (log_sum + log_tail_estimate).exp(),
    }
}

/// `∏_{p <= cutoff} G12,p(s + 1)`.
pub fn g12_product(cutoff: u64, s: f64) -> f64 {
    primes_up_to(cutoff)
        .iter()
        .map(|&p| LocalFactor { p }.g12(s).ln())
        .sum::<f64>()
        .exp()
}

/// The leading constant `α τ_∞ ∏_p τ_p` with `α = 1/432`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictedConstant {
    pub alpha: f64,
    pub tau_inf: f64,
    pub tau_product: TauProduct,
    /// `α τ_∞ ∏_{p <= cutoff} τ_p`.
    pub c: f64,
    /// `c` with the tail estimate applied.
    pub c_completed: f64,
}

pub fn predicted_constant(prime_cutoff: u64, tau_inf: f64) -> Result<PredictedConstant> {
    if prime_cutoff < MIN_PRIME_CUTOFF {
        return Err(Error::InvalidCutoff {
            got: prime_cutoff,
            min: MIN_PRIME_CUTOFF,
        });
    }
    let alpha = ALPHA.0 as f64 / ALPHA.1 as f64;
    let tp = tau_product(prime_cutoff);
    Ok(PredictedConstant {
        alpha,
        tau_inf,
        c: alpha * tau_inf * tp.product,
        c_completed: alpha * tau_inf * tp.completed,
        tau_product: tp,
    })
}

/// Converts an exact local value to `f64`.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::multiplicative::{theta_closed, EtaTuple};
    use crate::arithmetic::zeta::e2;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn dp_at_zero() {
        let f = |p| LocalFactor::new(p).unwrap();
        assert_eq!(f(2).dp_exact(0), q(13, 4));
        assert_eq!(f(3).dp_exact(0), q(22, 9));
        assert!((f(2).dp(0.0) - 3.25).abs() < 1e-14);
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_p(2).unwrap(), q(13, 64));
        assert_eq!(tau_p(3).unwrap(), q(352, 729));
        assert!(tau_p(4).is_err());
    }

    #[test]
    fn tau_equals_scaled_dp() {
        for p in primes_up_to(1000) {
            let f = LocalFactor::new(p).unwrap();
            let m1 = q(p as i64 - 1, p as i64);
            assert_eq!(m1.pow(4) * f.dp_exact(0), f.tau_exact(), "p = {p}");
        }
    }

    /// `Σ_k ϑ(p^k) p^{-(5k1 + 3k2 + 4k3 + 4k4)}` over `p^{k_i} <= p^6`.
    fn dp_series_at_one(p: u64) -> BigRational {
        let mut total = BigRational::from_integer(BigInt::from(0));
        for k1 in 0..=6u32 {
            for k2 in 0..=6u32 {
                for k3 in 0..=6u32 {
                    for k4 in 0..=6u32 {
                        let eta = EtaTuple([p.pow(k1), p.pow(k2), p.pow(k3), p.pow(k4)]);
                        let th = theta_closed(eta);
                        if *th.numer() == 0 {
                            continue;
                        }
                        let e = 5 * k1 + 3 * k2 + 4 * (k3 + k4);
                        total += BigRational::new(
                            BigInt::from(*th.numer()),
                            BigInt::from(*th.denom()) * BigInt::from(p).pow(e),
                        );
                    }
                }
            }
        }
        total
    }

    #[test]
    fn dp_formula_matches_defining_series() {
        for p in [2u64, 3, 5] {
            let exact = LocalFactor::new(p).unwrap().dp_exact(1);
            let diff = rational_to_f64(&(&exact - dp_series_at_one(p))).abs();
            // every omitted term carries p^{-21} or smaller, times O(1) many terms
            assert!(diff < 50.0 * (p as f64).powi(-21), "p = {p}: {diff:e}");
            assert!((rational_to_f64(&exact) - LocalFactor::new(p).unwrap().dp(1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn g12_chain_gives_tau() {
        for p in primes_up_to(500) {
            let f = LocalFactor::new(p).unwrap();
            let lhs = f.g12(0.0) * f.e2(1.0);
            let tau = rational_to_f64(&f.tau_exact());
            assert!((lhs - tau).abs() < 1e-14, "p = {p}");
            assert!((f.e1(1.0) - (1.0 - 1.0 / p as f64).powi(-4)).abs() < 1e-12 * f.e1(1.0));
        }
        let g = local_g12(2, 1.0).unwrap();
        assert!(g.is_finite() && g > 0.0);
    }

    #[test]
    fn product_identity_with_e2() {
        // ∏ τ_p = E2(1) ∏ G12,p(1), compared at a finite cutoff with the
        // tail of E2's Euler product accounted for
        let cutoff = 20_000;
        let e2_head: f64 = primes_up_to(cutoff)
            .iter()
            .map(|&p| LocalFactor::new(p).unwrap().e2(1.0).ln())
            .sum::<f64>()
            .exp();
        let lhs = tau_product(cutoff).product;
        let rhs = e2_head * g12_product(cutoff, 0.0);
        assert!((lhs - rhs).abs() < 1e-12 * lhs);
        let e2_full = e2(1.0).unwrap();
        assert!((e2_head / e2_full - 1.0).abs() < 1e-3);
    }

    #[test]
    fn log_tau_bound_holds() {
        for p in primes_up_to(100_000) {
            let l = LocalFactor::new(p).unwrap().log_tau();
            assert!(l.abs() <= 10.0 / (p as f64 * p as f64), "p = {p}");
        }
    }

    #[test]
    fn tail_estimate_predicts_refinement() {
        let a = tau_product(10_000);
        let b = tau_product(100_000);
        let actual = b.log_sum - a.log_sum;
        let predicted = a.log_tail_estimate - b.log_tail_estimate;
        assert!((actual - predicted).abs() < 0.1 * predicted.abs());
        assert!(actual.abs() <= a.log_tail_bound);
    }

    #[test]
    fn predicted_constant_guards_cutoff() {
        assert!(predicted_constant(999, 1.0).is_err());
        let c = predicted_constant(1000, 1.0).unwrap();
        assert!((c.c - c.tau_product.product / 432.0).abs() < 1e-15);
    }
}
