//! Small exact-integer helpers shared by the enumerators.

use num_integer::Integer;

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// `floor(sqrt(n))` for `n >= 0`.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// `floor(cbrt(n))` for `n >= 0`.
pub fn icbrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).cbrt() as u128;
    while x * x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Largest `k >= 0` with `k^e * coeff <= n`.
pub fn iroot_bound(n: u128, coeff: u128, e: u32) -> u128 {
    if coeff > n {
        return 0;
    }
    let q = n / coeff;
    let mut x = (q as f64).powf(1.0 / e as f64) as u128;
    while x > 0 && x.checked_pow(e).is_none_or(|v| v > q) {
        x -= 1;
    }
    while (x + 1).checked_pow(e).is_some_and(|v| v <= q) {
        x += 1;
    }
    x
}

/// Inverse of `a` modulo `m` (`m >= 1`, `gcd(a, m) = 1`), in `[0, m)`.
pub fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let e = a.mod_floor(&m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.mod_floor(&m))
}

/// First `x` in `[lo, hi]` where the monotone predicate `pred` (false, then
/// true) holds, or `hi + 1` if it never does. `guess` only affects speed.
pub fn first_true(lo: i128, hi: i128, guess: i128, pred: impl Fn(i128) -> bool) -> i128 {
    if lo > hi {
        return hi + 1;
    }
    let g = guess.clamp(lo, hi);
    // Gallop away from the guess to bracket the transition, then bisect.
    let (mut f, mut t) = if pred(g) {
        let mut step = 1i128;
        let mut t = g;
        loop {
            let x = t.saturating_sub(step);
            if x < lo {
                if pred(lo) {
                    return lo;
                }
                break (lo, t);
            }
            if !pred(x) {
                break (x, t);
            }
            t = x;
            step = step.saturating_mul(2);
        }
    } else {
        let mut step = 1i128;
        let mut f = g;
        loop {
            let x = f.saturating_add(step);
            if x > hi {
                if !pred(hi) {
                    return hi + 1;
                }
                break (f, hi);
            }
            if pred(x) {
                break (f, x);
            }
            f = x;
            step = step.saturating_mul(2);
        }
    };
    while t - f > 1 {
        let mid = f + (t - f) / 2;
        if pred(mid) {
            t = mid;
        } else {
            f = mid;
        }
    }
    t
}

/// Inclusive integer range; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub lo: i128,
    pub hi: i128,
}

impl IntRange {
    pub fn new(lo: i128, hi: i128) -> Self {
        Self { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn intersect(&self, other: &IntRange) -> IntRange {
        IntRange::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }
}

/// Integers `x` in `window` with `|p x^2 + q x| <= r`, as at most two
/// disjoint ranges in increasing order. Requires `p > 0`, `r >= 0`, and
/// `p x^2 + |q x|` representable for every `x` in `window`.
pub fn quadratic_abs_le(p: i128, q: i128, r: i128, window: IntRange) -> Vec<IntRange> {
    debug_assert!(p > 0 && r >= 0);
    if window.is_empty() {
        return Vec::new();
    }
    let f = |x: i128| p * x * x + q * x;
    let (lo, hi) = (window.lo, window.hi);

    // Integer minimizer of f on the window.
    let v = Integer::div_floor(&-q, &(2 * p));
    let m = {
        let a = v.clamp(lo, hi);
        let b = (v + 1).clamp(lo, hi);
        if f(b) < f(a) {
            b
        } else {
            a
        }
    };
    if f(m) > r {
        return Vec::new();
    }

    let pf = p as f64;
    let qf = q as f64;
    let rf = r as f64;
    let disc_up = (qf * qf + 4.0 * pf * rf).sqrt();
    let root_lo = (-qf - disc_up) / (2.0 * pf);
    let root_hi = (-qf + disc_up) / (2.0 * pf);

    // {f <= r} is contiguous around m.
    let left = first_true(lo, m, root_lo.ceil() as i128, |x| f(x) <= r);
    let right = first_true(m, hi, root_hi.floor() as i128 + 1, |x| f(x) > r) - 1;

    // {f < -r} is a (possibly empty) contiguous hole around m.
    if f(m) >= -r {
        return vec![IntRange::new(left, right)];
    }
    let disc_dn = (qf * qf - 4.0 * pf * rf).max(0.0).sqrt();
    let hole_lo_guess = ((-qf - disc_dn) / (2.0 * pf)).floor() as i128 + 1;
    let hole_hi_guess = ((-qf + disc_dn) / (2.0 * pf)).ceil() as i128;
    let hole_lo = first_true(left, m, hole_lo_guess, |x| f(x) < -r);
    let hole_hi = first_true(m, right, hole_hi_guess, |x| f(x) >= -r) - 1;

    let mut out = Vec::with_capacity(2);
    if left < hole_lo {
        out.push(IntRange::new(left, hole_lo - 1));
    }
    if hole_hi < right {
        out.push(IntRange::new(hole_hi + 1, right));
    }
    out
}

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest-prime-factor table for fast factorization of `n <= limit`.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u64) -> Self {
        let n = limit.max(1) as usize;
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Self { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Prime factorization as `(prime, exponent)` pairs, primes increasing.
    pub fn factor(&self, mut n: u64) -> Vec<(u64, u32)> {
        assert!(n >= 1 && n <= self.limit(), "{n} outside sieve range");
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// Distinct prime divisors.
    pub fn primes_of(&self, n: u64) -> Vec<u64> {
        self.factor(n).into_iter().map(|(p, _)| p).collect()
    }
}

/// Prime factorization by trial division.
pub fn factor_trial(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn roots() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(icbrt(26), 2);
        assert_eq!(icbrt(27), 3);
        assert_eq!(iroot_bound(100, 4, 2), 5);
        assert_eq!(iroot_bound(100, 101, 2), 0);
        assert_eq!(iroot_bound(10u128.pow(8), 1, 4), 100);
    }

    #[test]
    fn inverse() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(-3, 7), Some(2));
        assert_eq!(mod_inverse(2, 4), None);
        assert_eq!(mod_inverse(5, 1), Some(0));
    }

    #[test]
    fn sieve_and_factor() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        let s = SpfSieve::new(1000);
        assert_eq!(s.factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(s.factor(1), vec![]);
        assert_eq!(factor_trial(997 * 991), vec![(991, 1), (997, 1)]);
        assert!(is_prime(997) && !is_prime(1001));
    }

    fn brute(p: i128, q: i128, r: i128, lo: i128, hi: i128) -> Vec<i128> {
        (lo..=hi)
            .filter(|&x| (p * x * x + q * x).abs() <= r)
            .collect()
    }

    proptest! {
        #[test]
        fn quadratic_set_matches_brute_force(
            p in 1i128..20, q in -400i128..400, r in 0i128..2000,
            lo in -300i128..0, len in 0i128..600,
        ) {
            let hi = lo + len;
            let got: Vec<i128> = quadratic_abs_le(p, q, r, IntRange::new(lo, hi))
                .into_iter()
                .flat_map(|rg| rg.lo..=rg.hi)
                .collect();
            prop_assert_eq!(got, brute(p, q, r, lo, hi));
        }

        #[test]
        fn first_true_finds_threshold(t in -1000i128..1000, guess in -2000i128..2000) {
            let got = first_true(-500, 500, guess, |x| x >= t);
            prop_assert_eq!(got, t.clamp(-500, 501));
        }
    }
}
