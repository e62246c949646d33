//! The surface `S ⊂ P^6`, its anticanonical height, and the plane
//! parametrization of the open subset `U = S \ {x5 = 0}`.
//!
//! The parametrization sends `(a : b : c) = (x3 : x5 : x6)` to
//!
//! ```text
//! (-a²b - ac², abc, -abc - c³, ab², -ab² - bc², b³, b²c)
//! ```
//!
//! and is a bijection between primitive triples with `b >= 1` and `U(Q)`.
//!
//! # Enumeration box
//!
//! Write `d` for the gcd of the seven cubics at a primitive triple and put
//! `e = v_p(b)`, `f = v_p(c)`. If `p | d` then `p | b³`; if moreover `p | a`
//! then `p ∤ c` and `v_p(-c(ab + c²)) = 0`, so in fact `p ∤ a`. Then
//! `v_p(abc) = e + f` and `v_p(ab²) = 2e` give `v_p(d) <= e + min(e, f)`,
//! and comparing `v_p(ab) = e` with `v_p(c²) = 2f` inside `ab + c²` gives
//! `v_p(d) <= 3e/2`. If `f = 0` then `p ∤ ab + c²` and `v_p(-c(ab + c²)) = 0`.
//! Hence
//!
//! ```text
//! d | b·gcd(b, c),        d² | b³,        rad(d) | gcd(b, c).
//! ```
//!
//! A point of height `H <= B` therefore has `b^{3/2} <= b³/d <= H`,
//! `|a| b^{1/2} <= |a| b²/d <= H` and `|c| b^{1/2} <= H`, so every such
//! point has `b <= B^{2/3}` and `|a|, |c| <= B / sqrt(b)`. The cruder box
//! `b <= sqrt(B)` is wrong: `(-9 : 4 : -6)` has `d = 8 > b`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::intmath::{gcd_i128, icbrt, isqrt, quadratic_abs_le, IntRange};
use crate::{Error, Result};

/// Height bounds above this are rejected: coordinates are cubics in values
/// up to `B`, and every intermediate has to stay inside `i128`.
pub const MAX_HEIGHT: i64 = 100_000_000;

/// A rational point of `P^6` as a primitive integer vector whose first
/// nonzero coordinate is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfacePoint {
    coords: [i128; 7],
}

impl SurfacePoint {
    /// Primitivizes and sign-normalizes `x`. Returns `None` for the zero vector.
    pub fn normalize(x: [i128; 7]) -> Option<Self> {
        let g = x.iter().fold(0i128, |g, &v| gcd_i128(g, v));
        if g == 0 {
            return None;
        }
        let first = x.iter().copied().find(|&v| v != 0)?;
        let s = if first < 0 { -g } else { g };
        Some(Self {
            coords: x.map(|v| v / s),
        })
    }

    /// Wraps `x` after checking that it is primitive, sign-normalized and on `S`.
    pub fn new(x: [i128; 7]) -> Option<Self> {
        let p = Self::normalize(x)?;
        (p.coords == x && quadric_residuals(&x).iter().all(|&r| r == 0)).then_some(p)
    }

    pub fn coords(&self) -> &[i128; 7] {
        &self.coords
    }

    /// `max |x_i|`.
    pub fn height(&self) -> i128 {
        height(&self.coords)
    }

    pub fn lies_on_surface(&self) -> bool {
        quadric_residuals(&self.coords).iter().all(|&r| r == 0)
    }

    pub fn has_zero_coordinate(&self) -> bool {
        self.coords.contains(&0)
    }

    /// The image under `(a:b:c) -> (a:b:-c)`, which negates `x1`, `x2`, `x6`.
    pub fn involution(&self) -> Self {
        let mut x = self.coords;
        for i in [1, 2, 6] {
            x[i] = -x[i];
        }
        Self::normalize(x).expect("nonzero")
    }
}

impl fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coords;
        write!(
            f,
            "({}:{}:{}:{}:{}:{}:{})",
            c[0], c[1], c[2], c[3], c[4], c[5], c[6]
        )
    }
}

/// A primitive triple `(a : b : c)`, standing for `(x3 : x5 : x6)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanePoint {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl PlanePoint {
    /// Checks primitivity and `b >= 1`.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if b < 1 {
            return Err(Error::OutsideChart { a, b, c });
        }
        let g = gcd_i128(gcd_i128(a as i128, b as i128), c as i128);
        if g != 1 {
            return Err(Error::NotPrimitive { a, b, c });
        }
        Ok(Self { a, b, c })
    }

    /// `ab + c²`; the image has a zero coordinate iff `a`, `c` or this vanishes.
    pub fn w(&self) -> i128 {
        self.a as i128 * self.b as i128 + (self.c as i128).pow(2)
    }
}

/// The nine quadrics cutting out `S`, evaluated at `x`, in the order
///
/// ```text
/// x3² + x0x5 + x1x6,  x2x3 - x0x6,  x1x2 + x0x3 + x0x4,
/// x3x5 + x4x5 + x6²,  x2x5 - x4x6,  x1x5 - x3x6,
/// x4² + x0x5 + x2x6,  x3x4 - x0x5,  x1x4 - x0x6.
/// ```
pub fn quadric_residuals(x: &[i128; 7]) -> [i128; 9] {
    let [x0, x1, x2, x3, x4, x5, x6] = *x;
    [
        x3 * x3 + x0 * x5 + x1 * x6,
        x2 * x3 - x0 * x6,
        x1 * x2 + x0 * x3 + x0 * x4,
        x3 * x5 + x4 * x5 + x6 * x6,
        x2 * x5 - x4 * x6,
        x1 * x5 - x3 * x6,
        x4 * x4 + x0 * x5 + x2 * x6,
        x3 * x4 - x0 * x5,
        x1 * x4 - x0 * x6,
    ]
}

/// `max |x_i|`.
pub fn height(x: &[i128; 7]) -> i128 {
    x.iter().map(|v| v.abs()).max().unwrap_or(0)
}

/// The seven cubics of the parametrization, before any gcd is removed.
pub fn phi_raw(a: i128, b: i128, c: i128) -> [i128; 7] {
    let w = a * b + c * c;
    [-a * w, a * b * c, -c * w, a * b * b, -b * w, b * b * b, b * b * c]
}

/// The point of `U` parametrized by `p`.
pub fn phi(p: &PlanePoint) -> Result<SurfacePoint> {
    if p.b == 0 {
        return Err(Error::OutsideChart {
            a: p.a,
            b: p.b,
            c: p.c,
        });
    }
    let x = phi_raw(p.a as i128, p.b as i128, p.c as i128);
    Ok(SurfacePoint::normalize(x).expect("x5 = b^3 is nonzero"))
}

/// Counts from the plane enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DirectCount {
    /// Points of `U(Q)` with height at most `B`.
    pub total: u64,
    /// Those with at least one zero coordinate.
    pub zero: u64,
}

impl std::ops::Add for DirectCount {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            total: self.total + o.total,
            zero: self.zero + o.zero,
        }
    }
}

pub(crate) fn check_height(bound: i64) -> Result<()> {
    if bound < 1 {
        return Err(Error::InvalidHeight(bound));
    }
    if bound > MAX_HEIGHT {
        return Err(Error::HeightTooLarge {
            bound,
            limit: MAX_HEIGHT,
        });
    }
    Ok(())
}

/// Visits every point of `U(Q)` with height at most `bound` exactly once,
/// passing its triple, its height and whether it has a zero coordinate.
/// Work for distinct `b` is independent; one accumulator per `b` is
/// returned in increasing `b`.
fn for_each_plane_point<T, I, F>(bound: i64, init: I, visit: F) -> Result<Vec<T>>
where
    T: Send,
    I: Fn() -> T + Sync,
    F: Fn(&mut T, i64, i64, i64, i128, bool) + Sync,
{
    check_height(bound)?;
    let big_b = bound as i128;
    // b^{3/2} <= B  <=>  b^3 <= B^2
    let b_max = icbrt((big_b * big_b) as u128) as i64;

    let per_b: Vec<T> = (1..=b_max)
        .into_par_iter()
        .map(|b| {
            let mut acc = init();
            let bb = b as i128;
            let b2 = bb * bb;
            let b3 = b2 * bb;
            let root_b3 = isqrt(b3 as u128) as i128;
            for g in divisors(bb) {
                // d | b g, d^2 | b^3, and every prime of d divides g
                let smooth = smooth_part(bb * g, g);
                let d_max = smooth.min(root_b3);
                let lim = big_b * d_max;
                if b3 > lim {
                    continue;
                }
                let cofactor = bb / g;
                let c_max = lim / b2 / g;
                for c1 in -c_max..=c_max {
                    if gcd_i128(cofactor, c1) != 1 {
                        continue;
                    }
                    let c = g * c1;
                    let c2 = c * c;
                    // |a| b^2 <= lim, |a b c| <= lim
                    let a_lin = lim / (b2.max(bb * c.abs()));
                    // |w| b <= lim, |w c| <= lim with w = a b + c^2
                    let w_lim = lim / bb.max(c.abs());
                    let a_from_w = IntRange::new(
                        num_integer::Integer::div_ceil(&(-w_lim - c2), &bb),
                        num_integer::Integer::div_floor(&(w_lim - c2), &bb),
                    );
                    let window = IntRange::new(-a_lin, a_lin).intersect(&a_from_w);
                    // |a w| = |b a^2 + c^2 a| <= lim
                    for range in quadratic_abs_le(bb, c2, lim, window) {
                        for a in range.lo..=range.hi {
                            if g != 1 && gcd_i128(a, g) != 1 {
                                continue;
                            }
                            let x = phi_raw(a, bb, c);
                            let d = x.iter().fold(0i128, |acc, &v| gcd_i128(acc, v));
                            debug_assert!(smooth % d == 0 && b3 % (d * d) == 0);
                            let h = height(&x) / d;
                            if h <= big_b {
                                let zero = a == 0 || c == 0 || a * bb + c2 == 0;
                                visit(&mut acc, a as i64, b, c as i64, h, zero);
                            }
                        }
                    }
                }
            }
            acc
        })
        .collect();
    Ok(per_b)
}

fn divisors(n: i128) -> Vec<i128> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n % k == 0 {
            small.push(k);
            if k * k != n {
                large.push(n / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Largest divisor of `n` whose primes all divide `g`.
fn smooth_part(mut n: i128, g: i128) -> i128 {
    let mut out = 1;
    loop {
        let t = gcd_i128(n, g);
        if t == 1 {
            return out;
        }
        out *= t;
        n /= t;
    }
}

/// `N_U(B)` and the number of those points with a zero coordinate, by
/// enumerating primitive triples in the box described in the module docs.
pub fn direct_count(bound: i64) -> Result<DirectCount> {
    let parts = for_each_plane_point(bound, DirectCount::default, |acc, _, _, _, _, zero| {
        acc.total += 1;
        acc.zero += u64::from(zero);
    })?;
    Ok(parts.into_iter().fold(DirectCount::default(), |s, p| s + p))
}

/// The points counted by [`direct_count`], sorted.
pub fn direct_points(bound: i64) -> Result<Vec<SurfacePoint>> {
    let parts = for_each_plane_point(bound, Vec::new, |acc, a, b, c, _, _| {
        acc.push(phi(&PlanePoint { a, b, c }).expect("b >= 1"));
    })?;
    let mut v: Vec<SurfacePoint> = parts.into_iter().flatten().collect();
    v.sort();
    Ok(v)
}

/// [`direct_count`] at every bound of `grid` in one pass at the largest bound.
pub fn direct_count_grid(grid: &[i64]) -> Result<Vec<DirectCount>> {
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
    let parts = for_each_plane_point(
        top,
        || vec![DirectCount::default(); n],
        |bk, _, _, _, h, zero| {
            let i = sorted.partition_point(|&g| (g as i128) < h);
            bk[i].total += 1;
            bk[i].zero += u64::from(zero);
        },
    )?;
    let mut cum = vec![DirectCount::default(); n];
    for part in parts {
        for (acc, v) in cum.iter_mut().zip(part) {
            *acc = *acc + v;
        }
    }
    for i in 1..n {
        cum[i] = cum[i] + cum[i - 1];
    }
    Ok(grid
        .iter()
        .map(|b| cum[sorted.binary_search(b).unwrap()])
        .collect())
}

/// `#S(F_p)` by brute force over the seven standard affine charts of `P^6`.
pub fn count_fp(p: u64) -> Result<u64> {
    if !crate::intmath::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    assert!(p <= 13, "brute force over F_p is limited to p <= 13");
    let p = p as i64;
    let mut total = 0u64;
    for chart in 0..7 {
        let free = 6 - chart;
        let count = (p as u64).pow(free as u32);
        total += (0..count)
            .into_par_iter()
            .filter(|&idx| {
                let mut x = [0i128; 7];
                x[chart] = 1;
                let mut r = idx;
                for slot in x.iter_mut().skip(chart + 1) {
                    *slot = (r % p as u64) as i128;
                    r /= p as u64;
                }
                quadric_residuals(&x)
                    .iter()
                    .all(|v| v.rem_euclid(p as i128) == 0)
            })
            .count() as u64;
    }
    Ok(total)
}
