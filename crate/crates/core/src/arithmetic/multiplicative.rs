//! `φ*`, `ϑ` and `Δ`, with exact rational values wherever the definitions
//! allow it.

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::intmath::{factor_trial, gcd_u64, icbrt, iroot_bound, isqrt};
use crate::{Error, Result};

pub type Rational = Ratio<i128>;

/// `n` together with its factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredInteger {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "FactoredInteger requires n >= 1");
        Self {
            n,
            factors: factor_trial(n),
        }
    }

    /// Builds from `(prime, exponent)` pairs with strictly increasing primes.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Option<Self> {
        let increasing = factors.windows(2).all(|w| w[0].0 < w[1].0);
        let valid = factors
            .iter()
            .all(|&(p, e)| e >= 1 && crate::intmath::is_prime(p));
        if !increasing || !valid {
            return None;
        }
        let mut n = 1u64;
        for &(p, e) in &factors {
            n = n.checked_mul(p.checked_pow(e)?)?;
        }
        Some(Self { n, factors })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn mu(&self) -> i32 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Squarefree divisors `k` with `μ(k)`.
    pub fn squarefree_divisors(&self) -> Vec<(u64, i32)> {
        squarefree_divisors_of(&self.primes().collect::<Vec<_>>())
    }

    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

fn squarefree_divisors_of(primes: &[u64]) -> Vec<(u64, i32)> {
    let mut out = vec![(1u64, 1i32)];
    for &p in primes {
        let len = out.len();
        for i in 0..len {
            let (d, m) = out[i];
            out.push((d * p, -m));
        }
    }
    out
}

fn distinct_primes(ns: &[u64]) -> Vec<u64> {
    let mut ps: Vec<u64> = ns
        .iter()
        .flat_map(|&n| factor_trial(n).into_iter().map(|(p, _)| p))
        .collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

fn one_minus(c: i128, p: u64) -> Rational {
    Rational::new(p as i128 - c, p as i128)
}

/// `∏_{p | gcd(ns)} (1 - 1/p)`; a single argument stands for `φ*(a, a)`.
pub fn phi_star(ns: &[u64]) -> Rational {
    assert!(!ns.is_empty() && ns.iter().all(|&n| n >= 1));
    let g = ns.iter().fold(0, |g, &n| gcd_u64(g, n));
    factor_trial(g)
        .into_iter()
        .map(|(p, _)| one_minus(1, p))
        .product()
}

/// Positive `(η1, η2, η3, η4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EtaTuple(pub [u64; 4]);

impl EtaTuple {
    pub fn new(eta: [u64; 4]) -> Result<Self> {
        if eta.contains(&0) {
            return Err(Error::InvalidEta(eta));
        }
        Ok(Self(eta))
    }

    /// `(η2, η3) = (η2, η4) = (η3, η4) = 1`.
    pub fn pairwise_coprime(&self) -> bool {
        let [_, e2, e3, e4] = self.0;
        gcd_u64(e2, e3) == 1 && gcd_u64(e2, e4) == 1 && gcd_u64(e3, e4) == 1
    }
}

/// `ϑ(η)` from its product formula.
pub fn theta_closed(eta: EtaTuple) -> Rational {
    if !eta.pairwise_coprime() {
        return Rational::zero();
    }
    let [e1, e2, e3, e4] = eta.0;
    let mut out: Rational = eta.0.iter().map(|&e| phi_star(&[e])).product();
    let rest = e2 * e3 * e4;
    for p in distinct_primes(&[e1]) {
        if rest % p != 0 {
            out *= one_minus(2, p);
        }
    }
    out
}

/// `ϑ(η)` as the literal triple Möbius sum over `k3 | η1`, `k2 | η1η2`,
/// `k1 | η1η3η4` with the coprimality side conditions on `k3` and `k2`.
pub fn theta_bruteforce(eta: EtaTuple) -> Rational {
    if !eta.pairwise_coprime() {
        return Rational::zero();
    }
    let [e1, e2, e3, e4] = eta.0;
    let k3s = squarefree_divisors_of(&distinct_primes(&[e1]));
    let k2s = squarefree_divisors_of(&distinct_primes(&[e1, e2]));
    let k1s = squarefree_divisors_of(&distinct_primes(&[e1, e3, e4]));
    // every k3 k2 k1 divides the product of the three radicals
    let rad = |ks: &[(u64, i32)]| ks.iter().map(|&(k, _)| k).max().unwrap_or(1) as i128;
    let denom = rad(&k3s) * rad(&k2s) * rad(&k1s);
    let mut numer = 0i128;
    for &(k3, m3) in &k3s {
        if gcd_u64(k3, e2 * e3) != 1 {
            continue;
        }
        for &(k2, m2) in &k2s {
            if gcd_u64(k2, k3 * e4) != 1 {
                continue;
            }
            for &(k1, m1) in &k1s {
                numer += (m3 * m2 * m1) as i128 * (denom / (k3 * k2 * k1) as i128);
            }
        }
    }
    Rational::new(numer, denom)
}

fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn weight(e1: u64, e2: u64) -> f64 {
    (e1 as f64 / e2 as f64).cbrt()
}

/// `Δ(n) = Σ_{η1⁴η2²η3³η4³ = n} ϑ(η) (η1/η2)^{1/3}`.
///
/// Factorizations of `n` are assembled prime by prime; `ϑ` is evaluated on
/// the assembled tuple, so multiplicativity of `Δ` is not built in.
pub fn delta(n: &FactoredInteger) -> f64 {
    // (k1, k2, k3, k4) with 4k1 + 2k2 + 3k3 + 3k4 = e
    let splits = |e: u32| -> Vec<[u32; 4]> {
        let mut v = Vec::new();
        for k1 in 0..=e / 4 {
            for k3 in 0..=(e - 4 * k1) / 3 {
                for k4 in 0..=(e - 4 * k1 - 3 * k3) / 3 {
                    let r = e - 4 * k1 - 3 * k3 - 3 * k4;
                    if r % 2 == 0 {
                        v.push([k1, r / 2, k3, k4]);
                    }
                }
            }
        }
        v
    };
    let mut tuples = vec![[1u64; 4]];
    for &(p, e) in n.factors() {
        let options = splits(e);
        tuples = tuples
            .iter()
            .flat_map(|t| {
                options.iter().map(move |k| {
                    let mut t = *t;
                    for i in 0..4 {
                        t[i] *= p.pow(k[i]);
                    }
                    t
                })
            })
            .collect();
    }
    tuples
        .into_iter()
        .map(|t| to_f64(&theta_closed(EtaTuple(t))) * weight(t[0], t[1]))
        .sum()
}

/// `M(B) = Σ_{n <= B} Δ(n)`, summed over `η` with `η1⁴η2²η3³η4³ <= B`.
pub fn delta_partial_sum(bound: u64) -> f64 {
    let b = bound as u128;
    let mut total = 0.0;
    for e1 in 1..=iroot_bound(b, 1, 4) {
        let r1 = b / e1.pow(4);
        for e3 in 1..=icbrt(r1) {
            let r3 = r1 / e3.pow(3);
            for e4 in 1..=icbrt(r3) {
                if gcd_u64(e3 as u64, e4 as u64) != 1 {
                    continue;
                }
                let r4 = r3 / e4.pow(3);
                for e2 in 1..=isqrt(r4) {
                    let eta = EtaTuple([e1 as u64, e2 as u64, e3 as u64, e4 as u64]);
                    let th = theta_closed(eta);
                    if !th.is_zero() {
                        total += to_f64(&th) * weight(e1 as u64, e2 as u64);
                    }
                }
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn factored_integer_basics() {
        let f = FactoredInteger::new(360);
        assert_eq!(f.factors(), &[(2, 3), (3, 2), (5, 1)]);
        assert_eq!(f.mu(), 0);
        assert_eq!(f.omega(), 3);
        assert_eq!(FactoredInteger::new(30).mu(), -1);
        assert_eq!(FactoredInteger::new(1).mu(), 1);
        assert_eq!(FactoredInteger::new(12).divisors(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(
            FactoredInteger::from_factors(vec![(2, 2), (7, 1)]).unwrap().n(),
            28
        );
        assert!(FactoredInteger::from_factors(vec![(3, 1), (2, 1)]).is_none());
        assert!(FactoredInteger::from_factors(vec![(4, 1)]).is_none());
        let mut sf: Vec<_> = FactoredInteger::new(30).squarefree_divisors();
        sf.sort();
        assert_eq!(sf.len(), 8);
        assert_eq!(sf.iter().map(|&(_, m)| m).sum::<i32>(), 0);
    }

    #[test]
    fn phi_star_examples() {
        assert_eq!(phi_star(&[1]), r(1, 1));
        assert_eq!(phi_star(&[12]), r(1, 3));
        assert_eq!(phi_star(&[4, 6]), r(1, 2));
        assert_eq!(phi_star(&[12, 12]), phi_star(&[12]));
        assert_eq!(phi_star(&[9, 10]), r(1, 1));
    }

    #[test]
    fn theta_examples() {
        let t = |e: [u64; 4]| EtaTuple::new(e).unwrap();
        for f in [theta_closed, theta_bruteforce] {
            assert_eq!(f(t([1, 1, 1, 1])), r(1, 1));
            assert_eq!(f(t([2, 1, 1, 1])), r(0, 1));
            assert_eq!(f(t([3, 1, 1, 1])), r(2, 9));
            assert_eq!(f(t([1, 2, 2, 1])), r(0, 1));
        }
        assert!(EtaTuple::new([0, 1, 1, 1]).is_err());
    }

    #[test]
    fn theta_agrees_on_small_cube() {
        for e1 in 1..=12 {
            for e2 in 1..=12 {
                for e3 in 1..=12 {
                    for e4 in 1..=12 {
                        let eta = EtaTuple([e1, e2, e3, e4]);
                        assert_eq!(theta_closed(eta), theta_bruteforce(eta), "{eta:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn delta_examples() {
        let d = |n| delta(&FactoredInteger::new(n));
        assert!((d(1) - 1.0).abs() < 1e-15);
        assert_eq!(d(2), 0.0);
        assert_eq!(d(3), 0.0);
        assert!((d(4) - 2f64.powf(-4.0 / 3.0)).abs() < 1e-15);
        assert!((d(8) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_sums_match_pointwise_delta() {
        assert!((delta_partial_sum(1) - 1.0).abs() < 1e-15);
        assert!((delta_partial_sum(4) - (1.0 + 2f64.powf(-4.0 / 3.0))).abs() < 1e-14);
        assert!((delta_partial_sum(8) - (2.0 + 2f64.powf(-4.0 / 3.0))).abs() < 1e-14);
        let pointwise: f64 = (1..=5000).map(|n| delta(&FactoredInteger::new(n))).sum();
        assert!((delta_partial_sum(5000) - pointwise).abs() < 1e-9 * pointwise);
    }
}
