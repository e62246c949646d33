//! The universal torsor `η2 α1² + η3 α2 + η4 α3 = 0` over the minimal
//! desingularization, its map to `S`, and the exact torsor count.
//!
//! `π(η, α)` is
//!
//! ```text
//! (α2α3, η1η2η3α1α2, η1η2η4α1α3, η1²η2η3²η4α2,
//!  η1²η2η3η4²α3, η1⁴η2²η3³η4³, η1³η2²η3²η4²α1)
//! ```
//!
//! and `(k1, k2, k3, k4) ∈ G_m^4` acts by `η_i ↦ k_i η_i`,
//! `α1 ↦ k1k3k4 α1`, `α2 ↦ k1²k2k3k4² α2`, `α3 ↦ k1²k2k3²k4 α3`.
//! Points of `U` with no zero coordinate have a unique integral preimage with
//! positive `η` and the coprimality conditions of [`CanonicalTorsorPoint`].
//! Negating `α1` negates `x1, x2, x6` and so pairs distinct rational points,
//! which is where the factor two in `N_U(B) = 2 T(B) + N_zero(B)` comes from.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::intmath::{
    gcd_i128, gcd_u64, icbrt, iroot_bound, isqrt, mod_inverse, quadratic_abs_le, IntRange,
    SpfSieve,
};
use crate::surface::{check_height, phi, PlanePoint, SurfacePoint};
use crate::{Error, Result};

/// An integral point `(η1..η4, α1..α3)` on the torsor equation.
///
/// `η` entries are nonzero; positivity is restored by [`canonicalize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorsorPoint {
    pub eta: [i128; 4],
    pub alpha: [i128; 3],
}

impl TorsorPoint {
    pub fn new(eta: [i128; 4], alpha: [i128; 3]) -> Result<Self> {
        let t = Self { eta, alpha };
        let r = t.relation();
        if r != 0 {
            return Err(Error::TorsorRelation(r));
        }
        if eta.contains(&0) {
            return Err(Error::DegenerateTorsorPoint);
        }
        Ok(t)
    }

    /// `η2 α1² + η3 α2 + η4 α3`.
    pub fn relation(&self) -> i128 {
        let [_, e2, e3, e4] = self.eta;
        let [a1, a2, a3] = self.alpha;
        e2 * a1 * a1 + e3 * a2 + e4 * a3
    }

    /// The seven monomials of `π`, without primitivization.
    pub fn monomials(&self) -> [i128; 7] {
        let [e1, e2, e3, e4] = self.eta;
        let [a1, a2, a3] = self.alpha;
        [
            a2 * a3,
            e1 * e2 * e3 * a1 * a2,
            e1 * e2 * e4 * a1 * a3,
            e1 * e1 * e2 * e3 * e3 * e4 * a2,
            e1 * e1 * e2 * e3 * e4 * e4 * a3,
            e1.pow(4) * e2 * e2 * e3.pow(3) * e4.pow(3),
            e1.pow(3) * e2 * e2 * e3 * e3 * e4 * e4 * a1,
        ]
    }

    /// Applies the torsor action of `k = (num_i / den_i)`; fails unless the
    /// result is integral.
    pub fn act(&self, num: [i128; 4], den: [i128; 4]) -> Option<Self> {
        let [e1, e2, e3, e4] = self.eta;
        let [a1, a2, a3] = self.alpha;
        let scale = |v: i128, n: i128, d: i128| -> Option<i128> {
            let x = v.checked_mul(n)?;
            (x % d == 0).then(|| x / d)
        };
        let [n1, n2, n3, n4] = num;
        let [d1, d2, d3, d4] = den;
        Some(Self {
            eta: [
                scale(e1, n1, d1)?,
                scale(e2, n2, d2)?,
                scale(e3, n3, d3)?,
                scale(e4, n4, d4)?,
            ],
            alpha: [
                scale(a1, n1 * n3 * n4, d1 * d3 * d4)?,
                scale(a2, n1 * n1 * n2 * n3 * n4 * n4, d1 * d1 * d2 * d3 * d4 * d4)?,
                scale(a3, n1 * n1 * n2 * n3 * n3 * n4, d1 * d1 * d2 * d3 * d3 * d4)?,
            ],
        })
    }
}

/// The unique integral representative of a torsor orbit, characterized by:
///
/// * `(α1, η1η3η4) = (α2, η1η2η4) = (α3, η1η2η3) = 1`
/// * `η2, η3, η4` pairwise coprime
/// * `η_i > 0`, `α1 > 0`, `α2 α3 ≠ 0`
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalTorsorPoint(TorsorPoint);

impl CanonicalTorsorPoint {
    pub fn point(&self) -> &TorsorPoint {
        &self.0
    }

    pub fn satisfies_invariants(t: &TorsorPoint) -> bool {
        let [e1, e2, e3, e4] = t.eta;
        let [a1, a2, a3] = t.alpha;
        t.relation() == 0
            && t.eta.iter().all(|&e| e > 0)
            && a1 > 0
            && a2 != 0
            && a3 != 0
            && gcd_i128(a1, e1 * e3 * e4) == 1
            && gcd_i128(a2, e1 * e2 * e4) == 1
            && gcd_i128(a3, e1 * e2 * e3) == 1
            && gcd_i128(e2, e3) == 1
            && gcd_i128(e2, e4) == 1
            && gcd_i128(e3, e4) == 1
    }
}

/// `π(t)` as a primitive, sign-normalized point.
pub fn pi_map(t: &TorsorPoint) -> Result<SurfacePoint> {
    let r = t.relation();
    if r != 0 {
        return Err(Error::TorsorRelation(r));
    }
    SurfacePoint::normalize(t.monomials()).ok_or(Error::DegenerateTorsorPoint)
}

/// The integral preimage `η = (1, 1, b, 1)`, `α = (c, a, -(ab + c²))` of `φ(a:b:c)`.
pub fn section(p: &PlanePoint) -> Result<TorsorPoint> {
    let (a, b, c) = (p.a as i128, p.b as i128, p.c as i128);
    if b < 1 {
        return Err(Error::OutsideChart {
            a: p.a,
            b: p.b,
            c: p.c,
        });
    }
    let w = p.w();
    if a == 0 || c == 0 || w == 0 {
        return Err(Error::ZeroCoordinate {
            a: p.a,
            b: p.b,
            c: p.c,
        });
    }
    TorsorPoint::new([1, 1, b, 1], [c, a, -w])
}

/// Moves a torsor point to its canonical representative.
///
/// Each step divides out a common factor `g` of one coprimality pair by an
/// integral torsor action; the π-image is unchanged except for the final
/// sign of `α1`, which is chosen positive (this may apply the involution).
pub fn canonicalize(t: &TorsorPoint) -> Result<CanonicalTorsorPoint> {
    let r = t.relation();
    if r != 0 {
        return Err(Error::TorsorRelation(r));
    }
    if t.eta.contains(&0) || t.alpha.contains(&0) {
        return Err(Error::DegenerateTorsorPoint);
    }

    // Each move removes at least one prime factor from a gcd, and the
    // entries only ever pick up primes already present.
    let budget = 8 * t
        .eta
        .iter()
        .chain(t.alpha.iter())
        .map(|v| (v.unsigned_abs() as f64).log2().ceil() as usize + 1)
        .sum::<usize>()
        + 16;

    // signs of eta via k_i = -1
    let signs = t.eta.map(|e| e.signum());
    let mut cur = t.act(signs, [1; 4]).expect("unit action");

    for _ in 0..budget {
        let [e1, e2, e3, e4] = cur.eta;
        let [a1, a2, a3] = cur.alpha;
        let moved = if let Some(g) = common(e1, a1) {
            // k1 = 1/g, k2 = g^3
            cur.act([1, g * g * g, 1, 1], [g, 1, 1, 1])
        } else if let Some(g) = common(e3, a1) {
            // k3 = 1/g, k2 = g^2
            cur.act([1, g * g, 1, 1], [1, 1, g, 1])
        } else if let Some(g) = common(e4, a1) {
            // k4 = 1/g, k2 = g^2
            cur.act([1, g * g, 1, 1], [1, 1, 1, g])
        } else if let Some(g) = common(a2, e1) {
            // k1 = 1/g, k3 = g
            cur.act([1, 1, g, 1], [g, 1, 1, 1])
        } else if let Some(g) = common(a2, e4) {
            // k3 = g, k4 = 1/g
            cur.act([1, 1, g, 1], [1, 1, 1, g])
        } else if let Some(g) = common(a2, e2) {
            // g | η4 α3 and (α2, η4) = 1 force g | α3; k2 = 1/g
            cur.act([1; 4], [1, g, 1, 1])
        } else if let Some(g) = common(a3, e1) {
            // k1 = 1/g, k4 = g
            cur.act([1, 1, 1, g], [g, 1, 1, 1])
        } else if let Some(g) = common(a3, e3) {
            // g | η2 α1² and (α1, η3) = 1 force g | η2; k1 = g, k2 = k3 = 1/g
            cur.act([g, 1, 1, 1], [1, g, g, 1])
        } else if let Some(g) = common(gcd_i128(e2, e3), e4) {
            // k1 = g^2, k2 = k3 = k4 = 1/g
            cur.act([g * g, 1, 1, 1], [1, g, g, g])
        } else {
            debug_assert!(common(a3, e2).is_none());
            let mut done = cur;
            if done.alpha[0] < 0 {
                done.alpha[0] = -done.alpha[0];
            }
            if !CanonicalTorsorPoint::satisfies_invariants(&done) {
                return Err(Error::DegenerateTorsorPoint);
            }
            return Ok(CanonicalTorsorPoint(done));
        };
        cur = moved.ok_or(Error::Overflow("canonicalize"))?;
        debug_assert_eq!(cur.relation(), 0);
    }
    Err(Error::NonTermination(budget))
}

fn common(a: i128, b: i128) -> Option<i128> {
    let g = gcd_i128(a, b);
    (g > 1).then_some(g)
}

/// The real quantities `X3, X5, X6` attached to `η` and `B`. Only loop
/// bounds are derived from them; membership is decided on integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightNormalization {
    pub x3: f64,
    pub x5: f64,
    pub x6: f64,
}

impl HeightNormalization {
    pub fn new(eta: [u64; 4], bound: i64) -> Self {
        let [e1, e2, e3, e4] = eta.map(|e| e as f64);
        let b = bound as f64;
        Self {
            x3: (b * e1 * e1 * e2 * e4.powi(3)).powf(-1.0 / 3.0),
            x5: (e1.powi(4) * e2 * e2 * e3.powi(3) * e4.powi(3) / b).cbrt(),
            x6: (e1 * e2 * e2 / b).cbrt(),
        }
    }

    /// `(X3³, X5³, X6³)` as exact rationals.
    pub fn cubes(eta: [u64; 4], bound: i64) -> [Ratio<i128>; 3] {
        let [e1, e2, e3, e4] = eta.map(|e| e as i128);
        let b = bound as i128;
        [
            Ratio::new(1, b * e1 * e1 * e2 * e4.pow(3)),
            Ratio::new(e1.pow(4) * e2 * e2 * e3.pow(3) * e4.pow(3), b),
            Ratio::new(e1 * e2 * e2, b),
        ]
    }

    /// The real bound `α1 <= sqrt(2) / (X6 sqrt(X5))`.
    pub fn alpha1_bound(&self) -> f64 {
        std::f64::consts::SQRT_2 / (self.x6 * self.x5.sqrt())
    }
}

/// Largest `α1` with `α1² η1²η2²η3η4 <= 2B` and `η1³η2²η3²η4² α1 <= B`.
pub fn alpha1_max(eta: [u64; 4], bound: i64) -> u64 {
    let [e1, e2, e3, e4] = eta.map(|e| e as u128);
    let b = bound as u128;
    let sq = iroot_bound(2 * b, e1 * e1 * e2 * e2 * e3 * e4, 2);
    let lin = b / (e1.pow(3) * e2 * e2 * e3 * e3 * e4 * e4);
    sq.min(lin) as u64
}

/// Admissible `η`: positive, pairwise coprime `η2, η3, η4`, `η1⁴η2²η3³η4³ <= B`.
pub fn eta_tuples(bound: i64) -> Vec<[u64; 4]> {
    let b = bound as u128;
    let mut out = Vec::new();
    for e1 in 1..=iroot_bound(b, 1, 4) {
        let r1 = b / e1.pow(4);
        for e2 in 1..=isqrt(r1) {
            let r2 = r1 / (e2 * e2);
            for e3 in 1..=icbrt(r2) {
                if gcd_u64(e2 as u64, e3 as u64) != 1 {
                    continue;
                }
                let r3 = r2 / e3.pow(3);
                for e4 in 1..=icbrt(r3) {
                    if gcd_u64(e2 as u64, e4 as u64) == 1 && gcd_u64(e3 as u64, e4 as u64) == 1 {
                        out.push([e1 as u64, e2 as u64, e3 as u64, e4 as u64]);
                    }
                }
            }
        }
    }
    out
}

/// Calls `visit(acc, t, height)` for every canonical torsor point counted by
/// `T(bound)`. Work is split into `(η, α1-block)` items processed in
/// parallel; the returned accumulators follow the item order.
fn for_each_torsor_point<T, I, F>(bound: i64, init: I, visit: F) -> Result<Vec<T>>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, &TorsorPoint, i128) + Sync,
{
    check_height(bound)?;
    const BLOCK: u64 = 32;
    let items: Vec<([u64; 4], u64, u64)> = eta_tuples(bound)
        .into_iter()
        .flat_map(|eta| {
            let top = alpha1_max(eta, bound);
            (0..top.div_ceil(BLOCK)).map(move |k| (eta, k * BLOCK + 1, ((k + 1) * BLOCK).min(top)))
        })
        .collect();

    let big_b = bound as i128;
    Ok(items
        .into_par_iter()
        .map(|(eta, lo, hi)| {
            let mut acc = init();
            let [e1, e2, e3, e4] = eta.map(|e| e as i128);
            let k = e1 * e1 * e2 * e3 * e4;
            let g2 = (e1 * e2 * e4) as u64;
            let g3 = (e1 * e2 * e3) as u64;
            let g1 = (e1 * e3 * e4) as u64;
            let inv = mod_inverse(e3, e4).expect("(η3, η4) = 1");
            for a1 in lo..=hi {
                if gcd_u64(a1, g1) != 1 {
                    continue;
                }
                let a1 = a1 as i128;
                let q = e2 * a1 * a1;
                // |x3| = K η3 |α2| and |x1| = η1η2η3 α1 |α2|
                let lin = (big_b / (k * e3)).min(big_b / (e1 * e2 * e3 * a1));
                // |x4| = K |q + η3α2| and |x2| = η1η2 α1 |q + η3α2|
                let m = (big_b / k).min(big_b / (e1 * e2 * a1));
                let window = IntRange::new(-lin, lin).intersect(&IntRange::new(
                    Integer::div_ceil(&(-m - q), &e3),
                    Integer::div_floor(&(m - q), &e3),
                ));
                // η4 | q + η3 α2
                let residue = (-q * inv).mod_floor(&e4);
                // |x0| = |α2 (q + η3 α2)| / η4
                for range in quadratic_abs_le(e3, q, big_b * e4, window) {
                    let mut a2 = range.lo + (residue - range.lo).mod_floor(&e4);
                    while a2 <= range.hi {
                        let num = q + e3 * a2;
                        let a3 = -num / e4;
                        if a2 != 0
                            && a3 != 0
                            && gcd_u64(a2.unsigned_abs() as u64, g2) == 1
                            && gcd_u64(a3.unsigned_abs() as u64, g3) == 1
                        {
                            let t = TorsorPoint {
                                eta: [e1, e2, e3, e4],
                                alpha: [a1, a2, a3],
                            };
                            let h = t.monomials().iter().map(|v| v.abs()).max().unwrap();
                            if h <= big_b {
                                visit(&mut acc, &t, h);
                            }
                        }
                        a2 += e4;
                    }
                }
            }
            acc
        })
        .collect())
}

/// `T(B)`: canonical torsor points with `α1 > 0` whose image has height `<= B`.
pub fn torsor_count(bound: i64) -> Result<u64> {
    let parts = for_each_torsor_point(bound, || 0u64, |acc, _, _| *acc += 1)?;
    Ok(parts.into_iter().sum())
}

/// The canonical points counted by [`torsor_count`].
pub fn torsor_points(bound: i64) -> Result<Vec<CanonicalTorsorPoint>> {
    let parts = for_each_torsor_point(bound, Vec::new, |acc, t, _| {
        acc.push(CanonicalTorsorPoint(*t))
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// `T(B)` at every bound of `grid`, from one enumeration at the largest bound.
pub fn torsor_count_grid(grid: &[i64]) -> Result<Vec<u64>> {
    let mut sorted = grid.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let Some(&top) = sorted.last() else {
        return Ok(Vec::new());
    };
    for &b in &sorted {
        check_height(b)?;
    }
    let n = sorted.len();
    let parts = for_each_torsor_point(
        top,
        || vec![0u64; n],
        |bk, _, h| bk[sorted.partition_point(|&g| (g as i128) < h)] += 1,
    )?;
    let mut cum = vec![0u64; n];
    for part in parts {
        for (c, v) in cum.iter_mut().zip(part) {
            *c += v;
        }
    }
    for i in 1..n {
        cum[i] += cum[i - 1];
    }
    Ok(grid
        .iter()
        .map(|b| cum[sorted.binary_search(b).unwrap()])
        .collect())
}

/// Points of `U` with a zero coordinate, split by the curve they lie on.
/// The three families are disjoint once `c = 0` is assigned to `A1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ZeroCounts {
    /// `c = 0`: images `(-a² : 0 : 0 : ab : -ab : b² : 0)`, height `max(|a|, b)²`.
    pub a1: u64,
    /// `a = 0, c ≠ 0`: height `max(|c|, b)³`.
    pub a2: u64,
    /// `ab = -c², c ≠ 0`, i.e. `(a, b, c) = (-u², v², ±uv)`: height `max(u, v)³`.
    pub a3: u64,
}

impl ZeroCounts {
    pub fn total(&self) -> u64 {
        self.a1 + self.a2 + self.a3
    }
}

/// `N_zero(B)` by counting each coordinate curve in closed form.
pub fn zero_coordinate_count(bound: i64) -> Result<ZeroCounts> {
    check_height(bound)?;
    let m = isqrt(bound as u128) as u64;
    let k = icbrt(bound as u128) as u64;
    let sieve = SpfSieve::new(m.max(k).max(1));

    // #{1 <= a <= n : gcd(a, b) = 1} by inclusion-exclusion over rad(b)
    let coprime_upto = |b: u64, n: u64| -> u64 {
        let primes = sieve.primes_of(b);
        let mut total = 0i64;
        for mask in 0u32..(1 << primes.len()) {
            let (d, sign) = primes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold((1u64, 1i64), |(d, s), (_, &p)| (d * p, -s));
            total += sign * (n / d) as i64;
        }
        total as u64
    };

    // b = 1 admits every a, including a = 0
    let a1 = if m == 0 {
        0
    } else {
        (2 * m + 1) + (2..=m).map(|b| 2 * coprime_upto(b, m)).sum::<u64>()
    };
    let pairs: u64 = (1..=k).map(|b| coprime_upto(b, k)).sum();
    Ok(ZeroCounts {
        a1,
        a2: 2 * pairs,
        a3: 2 * pairs,
    })
}

/// The points behind [`zero_coordinate_count`], generated family by family
/// from plane triples and merged into one set.
pub fn zero_coordinate_points(bound: i64) -> Result<BTreeSet<SurfacePoint>> {
    check_height(bound)?;
    let big_b = bound as i128;
    let m = isqrt(bound as u128) as i64;
    let k = icbrt(bound as u128) as i64;
    let mut set = BTreeSet::new();
    let mut add = |a: i64, b: i64, c: i64| {
        if let Ok(p) = PlanePoint::new(a, b, c) {
            let s = phi(&p).expect("b >= 1");
            if s.height() <= big_b {
                set.insert(s);
            }
        }
    };
    for b in 1..=m {
        for a in -m..=m {
            add(a, b, 0);
        }
    }
    for b in 1..=k {
        for c in -k..=k {
            add(0, b, c);
        }
    }
    for u in 1..=k {
        for v in 1..=k {
            add(-u * u, v * v, u * v);
            add(-u * u, v * v, -u * v);
        }
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{direct_count, direct_points};

    fn tp(eta: [i128; 4], alpha: [i128; 3]) -> TorsorPoint {
        TorsorPoint::new(eta, alpha).unwrap()
    }

    #[test]
    fn pi_map_examples() {
        let p = pi_map(&tp([1, 1, 1, 1], [1, 1, -2])).unwrap();
        assert_eq!(tp([1, 1, 1, 1], [1, 1, -2]).monomials(), [-2, 1, -2, 1, -2, 1, 1]);
        assert_eq!(p.coords(), &[2, -1, 2, -1, 2, -1, -1]);

        // negating α1 negates x1, x2, x6
        let q = tp([1, 1, 1, 1], [-1, 1, -2]);
        assert_eq!(q.monomials(), [-2, -1, 2, 1, -2, 1, -1]);
        assert_eq!(pi_map(&q).unwrap(), p.involution());
        assert_ne!(pi_map(&q).unwrap(), p);

        let r = tp([1, 1, 2, 1], [1, 1, -3]);
        assert_eq!(r.monomials(), [-3, 2, -3, 4, -6, 8, 4]);
        let img = pi_map(&r).unwrap();
        assert_eq!(img.coords(), &[3, -2, 3, -4, 6, -8, -4]);
        assert!(img.lies_on_surface());
    }

    #[test]
    fn pi_map_rejects_off_torsor() {
        let t = TorsorPoint {
            eta: [1, 1, 1, 1],
            alpha: [1, 1, 1],
        };
        assert_eq!(pi_map(&t), Err(Error::TorsorRelation(3)));
    }

    #[test]
    fn section_examples() {
        let s = |a, b, c| section(&PlanePoint::new(a, b, c).unwrap()).unwrap();
        assert_eq!(s(1, 1, 1), tp([1, 1, 1, 1], [1, 1, -2]));
        assert_eq!(s(2, 1, 1), tp([1, 1, 1, 1], [1, 2, -3]));
        assert_eq!(s(1, 2, 1), tp([1, 1, 2, 1], [1, 1, -3]));
        for (a, b, c) in [(0, 1, 1), (1, 1, 0), (-1, 1, 1)] {
            assert!(matches!(
                section(&PlanePoint::new(a, b, c).unwrap()),
                Err(Error::ZeroCoordinate { .. })
            ));
        }
    }

    #[test]
    fn canonicalize_examples() {
        let fixed = tp([1, 1, 1, 1], [1, 1, -2]);
        assert_eq!(canonicalize(&fixed).unwrap().point(), &fixed);

        // 2 | (η1, α1): k1 = 1/2, k2 = 8 gives (1, 8, 1, 1; 1, -4, -4),
        // then 4 | (α2, η2) is removed with k2 = 1/4
        let t = tp([2, 1, 1, 1], [2, -2, -2]);
        let step = t.act([1, 8, 1, 1], [2, 1, 1, 1]).unwrap();
        assert_eq!(step, tp([1, 8, 1, 1], [1, -4, -4]));
        let c = canonicalize(&t).unwrap();
        assert_eq!(c.point(), &tp([1, 2, 1, 1], [1, -1, -1]));
        assert_eq!(pi_map(c.point()).unwrap(), pi_map(&t).unwrap());
        assert_eq!(canonicalize(c.point()).unwrap(), c);
    }

    #[test]
    fn canonicalize_fixes_signs() {
        let t = tp([1, 1, 1, 1], [1, 1, -2]);
        let neg = t.act([-1, 1, -1, 1], [1; 4]).unwrap();
        assert!(neg.eta[0] < 0);
        assert_eq!(canonicalize(&neg).unwrap().point(), &t);
        let flipped = tp([1, 1, 1, 1], [-1, 1, -2]);
        assert_eq!(canonicalize(&flipped).unwrap().point(), &t);
    }

    #[test]
    fn canonicalize_rejects_degenerate() {
        let t = TorsorPoint {
            eta: [1, 1, 1, 1],
            alpha: [1, -1, 0],
        };
        assert_eq!(canonicalize(&t), Err(Error::DegenerateTorsorPoint));
    }

    #[test]
    fn normalization_identities_are_exact() {
        for eta in [[1, 1, 1, 1], [2, 3, 5, 7], [3, 1, 4, 1], [1, 5, 2, 9]] {
            for bound in [1, 17, 1000, 123_456] {
                let [x3, x5, x6] = HeightNormalization::cubes(eta, bound);
                let [e1, e2, e3, e4] = eta.map(|e| e as i128);
                let b = Ratio::from_integer(bound as i128);
                // X3 X5² = η1²η2η3²η4 / B and X6 X5² = η1³η2²η3²η4² / B, cubed
                let lhs = x3 * x5 * x5;
                assert_eq!(lhs, (Ratio::from_integer(e1 * e1 * e2 * e3 * e3 * e4) / b).pow(3));
                let lhs = x6 * x5 * x5;
                assert_eq!(
                    lhs,
                    (Ratio::from_integer(e1.pow(3) * e2 * e2 * e3 * e3 * e4 * e4) / b).pow(3)
                );
            }
        }
    }

    #[test]
    fn integer_alpha1_bound_matches_real_bound() {
        for eta in [[1, 1, 1, 1], [1, 2, 3, 5], [2, 1, 1, 3]] {
            for bound in [10i64, 1000, 98_765] {
                let real = HeightNormalization::new(eta, bound).alpha1_bound();
                let [e1, e2, e3, e4] = eta.map(|e| e as u128);
                let sq = iroot_bound(2 * bound as u128, e1 * e1 * e2 * e2 * e3 * e4, 2);
                assert!((sq as f64 - real.floor()).abs() <= 1.0, "{eta:?} {bound}");
            }
        }
    }

    #[test]
    fn torsor_count_at_one() {
        assert_eq!(torsor_count(1).unwrap(), 0);
    }

    #[test]
    fn canonical_points_are_canonical_and_primitive() {
        for c in torsor_points(2000).unwrap() {
            let t = c.point();
            assert!(CanonicalTorsorPoint::satisfies_invariants(t), "{t:?}");
            let m = t.monomials();
            assert_eq!(m.iter().fold(0, |g, &v| gcd_i128(g, v)), 1, "{t:?}");
        }
    }

    #[test]
    fn decomposition_small_bounds() {
        for b in [1, 2, 5, 10, 30, 60, 100, 250, 1000] {
            let d = direct_count(b).unwrap();
            let t = torsor_count(b).unwrap();
            let z = zero_coordinate_count(b).unwrap();
            assert_eq!(d.total, 2 * t + z.total(), "B = {b}");
            assert_eq!(d.zero, z.total(), "B = {b}");
        }
    }

    #[test]
    fn torsor_images_match_direct_points() {
        let b = 500;
        let mut from_torsor: Vec<SurfacePoint> = torsor_points(b)
            .unwrap()
            .iter()
            .flat_map(|c| {
                let p = pi_map(c.point()).unwrap();
                [p, p.involution()]
            })
            .collect();
        from_torsor.extend(zero_coordinate_points(b).unwrap());
        from_torsor.sort();
        assert_eq!(from_torsor, direct_points(b).unwrap());
    }

    #[test]
    fn zero_count_matches_set() {
        for b in [1, 2, 7, 8, 26, 27, 64, 1000, 4096, 20_000] {
            let set = zero_coordinate_points(b).unwrap();
            assert_eq!(set.len() as u64, zero_coordinate_count(b).unwrap().total(), "B = {b}");
        }
        assert_eq!(zero_coordinate_count(1).unwrap().total(), 7);
    }

    #[test]
    fn grid_matches_pointwise() {
        let grid = [1000, 10, 1, 333];
        let g = torsor_count_grid(&grid).unwrap();
        for (b, t) in grid.iter().zip(g) {
            assert_eq!(t, torsor_count(*b).unwrap());
        }
    }
}
