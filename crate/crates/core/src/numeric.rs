//! Exact big-integer / big-rational kernels shared by the rest of the crate:
//! integer nth roots, rational-exponent power enclosures, dyadic round-down
//! rationalization, and a small interval ("enclosure") type with the circle
//! distance `||x|| = dist(x, Z)` as an interval extension.

use num::bigint::{BigInt, BigUint};
use num::rational::Ratio;
use num::{BigRational, Integer, One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Convenience: rational from two machine integers.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// floor of a big rational, as a big integer.
pub fn rat_floor(r: &Rat) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// ceil of a big rational, as a big integer.
pub fn rat_ceil(r: &Rat) -> BigInt {
    r.numer().div_ceil(r.denom())
}

/// Natural log of a positive big integer via its top 53 bits.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 53 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Natural log of a positive big integer.
pub fn ln_big(x: &BigInt) -> f64 {
    debug_assert!(x.is_positive());
    ln_biguint(x.magnitude())
}

/// Natural log of a positive big rational.
pub fn ln_rat(r: &Rat) -> f64 {
    debug_assert!(r.is_positive());
    ln_big(r.numer()) - ln_big(r.denom())
}

/// Base-10 log of a positive big rational.
pub fn log10_rat(r: &Rat) -> f64 {
    ln_rat(r) / std::f64::consts::LN_10
}

/// Integer part of the n-th root: the largest `r` with `r^n <= x`.
pub fn floor_nth_root(x: &BigUint, n: u32) -> BigUint {
    assert!(n >= 1);
    if n == 1 || x <= &BigUint::one() {
        return x.clone();
    }
    let bits = x.bits();
    // Initial guess strictly above the root.
    let mut r: BigUint = BigUint::one() << (bits / n as u64 + 1);
    let n_big = BigUint::from(n);
    let n_minus_1 = BigUint::from(n - 1);
    loop {
        // Newton step: r' = ((n-1) r + x / r^{n-1}) / n
        let rn1 = r.pow(n - 1);
        let t = (&n_minus_1 * &r + x / &rn1) / &n_big;
        if t >= r {
            break;
        }
        r = t;
    }
    // Guard against off-by-one on either side.
    while r.pow(n) > *x {
        r -= BigUint::one();
    }
    while (&r + BigUint::one()).pow(n) <= *x {
        r += BigUint::one();
    }
    r
}

/// floor(base^(num/den)) for a positive integer base and positive rational
/// exponent, computed exactly.
pub fn floor_pow_ratio(base: &BigUint, num: u32, den: u32) -> BigUint {
    assert!(den >= 1);
    floor_nth_root(&base.pow(num), den)
}

/// true iff base^(num/den) is an integer equal to the returned floor
/// (i.e. base^num is a perfect den-th power).
pub fn pow_ratio_is_exact(base: &BigUint, num: u32, den: u32) -> bool {
    let f = floor_pow_ratio(base, num, den);
    f.pow(den) == base.pow(num)
}

/// Order two rationals by cross-multiplication. `Ratio`'s own `Ord` walks the
/// continued-fraction expansions of both operands and recurses once per shared
/// quotient; enclosure endpoints produced at proxy precision agree to
/// thousands of quotients, which overflows the stack. Cross-multiplying is one
/// pair of big-integer products instead (denominators are kept positive by
/// `Ratio::new`).
pub fn rat_cmp(a: &Rat, b: &Rat) -> std::cmp::Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}

/// `a <= b` via [`rat_cmp`].
pub fn rat_le(a: &Rat, b: &Rat) -> bool {
    rat_cmp(a, b) != std::cmp::Ordering::Greater
}

/// `a < b` via [`rat_cmp`].
pub fn rat_lt(a: &Rat, b: &Rat) -> bool {
    rat_cmp(a, b) == std::cmp::Ordering::Less
}

/// A closed rational interval guaranteed to contain a real value.
#[derive(Clone, Debug, PartialEq)]
pub struct Bounds {
    pub lo: Rat,
    pub hi: Rat,
}

impl Bounds {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(rat_le(&lo, &hi), "inverted bounds");
        Bounds { lo, hi }
    }

    pub fn point(v: Rat) -> Self {
        Bounds { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / rat_int(2)
    }

    pub fn mid_f64(&self) -> f64 {
        if self.lo.is_zero() && self.hi.is_zero() {
            return 0.0;
        }
        let m = self.mid();
        if m.is_zero() {
            0.0
        } else if m.is_positive() {
            (ln_rat(&m)).exp()
        } else {
            -((ln_rat(&(-m.clone()))).exp())
        }
    }

    /// Natural log of the midpoint (requires a positive interval).
    pub fn ln_mid(&self) -> f64 {
        ln_rat(&self.mid())
    }

    pub fn contains(&self, v: &Rat) -> bool {
        rat_le(&self.lo, v) && rat_le(v, &self.hi)
    }

    pub fn overlaps(&self, other: &Bounds) -> bool {
        rat_le(&self.lo, &other.hi) && rat_le(&other.lo, &self.hi)
    }

    pub fn add(&self, other: &Bounds) -> Bounds {
        Bounds::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Bounds) -> Bounds {
        Bounds::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn scale_int(&self, k: &BigInt) -> Bounds {
        debug_assert!(!k.is_negative());
        Bounds::new(&self.lo * k, &self.hi * k)
    }

    pub fn sub_rat(&self, v: &Rat) -> Bounds {
        Bounds::new(&self.lo - v, &self.hi - v)
    }

    /// Interval extension of |.|.
    pub fn abs(&self) -> Bounds {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            Bounds::new(-self.hi.clone(), -self.lo.clone())
        } else {
            let neg_lo = -self.lo.clone();
            let m = if rat_lt(&self.hi, &neg_lo) { neg_lo } else { self.hi.clone() };
            Bounds::new(Rat::zero(), m)
        }
    }

    /// Is this interval strictly below `other`? `None` when they overlap.
    pub fn strictly_below(&self, other: &Bounds) -> Option<bool> {
        if rat_lt(&self.hi, &other.lo) {
            Some(true)
        } else if rat_lt(&other.hi, &self.lo) {
            Some(false)
        } else {
            None
        }
    }

    /// Compare against an exact rational: Some(Ordering) when decidable.
    pub fn cmp_rat(&self, v: &Rat) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        if rat_lt(&self.hi, v) {
            Some(Less)
        } else if rat_lt(v, &self.lo) {
            Some(Greater)
        } else if rat_cmp(&self.lo, v) == Equal && rat_cmp(&self.hi, v) == Equal {
            Some(Equal)
        } else {
            None
        }
    }

    /// Interval extension of the distance to the nearest integer.
    pub fn norm_mod1(&self) -> Bounds {
        let half = rat(1, 2);
        let one = rat_int(1);
        if rat_le(&one, &self.width()) {
            return Bounds::new(Rat::zero(), half);
        }
        let t = rat_floor(&self.lo);
        let t = Rat::from_integer(t);
        let a = &self.lo - &t;
        let b = &self.hi - &t;
        // now 0 <= a < 1 and a <= b < a + 1 < 2
        if rat_le(&b, &half) {
            Bounds::new(a, b)
        } else if rat_le(&half, &a) && rat_le(&b, &one) {
            Bounds::new(&one - &b, &one - &a)
        } else if rat_le(&b, &one) {
            // straddles 1/2
            let r = &one - &b;
            let lo = if rat_lt(&a, &r) { a } else { r };
            Bounds::new(lo, half)
        } else if rat_le(&half, &a) {
            // crosses the integer at 1
            let left = &one - &a;
            let right = &b - &one;
            let m = if rat_lt(&right, &left) { left } else { right };
            Bounds::new(Rat::zero(), m)
        } else {
            // wide interval straddling both 1/2 and 1
            Bounds::new(Rat::zero(), half)
        }
    }
}

/// Enclosure of base^(-num/den) (positive base >= 1, positive exponent) with
/// about `frac_bits` fractional bits of accuracy.
pub fn pow_neg_enclosure(base: &BigUint, num: u32, den: u32, frac_bits: u32) -> Bounds {
    assert!(den >= 1 && num >= 1);
    assert!(!base.is_zero());
    if base.is_one() {
        return Bounds::point(Rat::one());
    }
    if den == 1 {
        let v = Rat::new(BigInt::one(), BigInt::from(base.pow(num)));
        return Bounds::point(v);
    }
    if pow_ratio_is_exact(base, num, den) {
        let f = floor_pow_ratio(base, num, den);
        return Bounds::point(Rat::new(BigInt::one(), BigInt::from(f)));
    }
    // R = (base^num)^(1/den); f/2^s <= R < (f+1)/2^s
    let s = frac_bits as u64;
    let shifted = base.pow(num) << (s * den as u64);
    let f = floor_nth_root(&shifted, den);
    let two_s = BigUint::one() << s;
    let lo = Rat::new(BigInt::from(two_s.clone()), BigInt::from(&f + BigUint::one()));
    let hi = Rat::new(BigInt::from(two_s), BigInt::from(f));
    Bounds::new(lo, hi)
}

/// Round base^(-num/den) down to a rational with a dyadic denominator of at
/// most 2^bits (the denominator is widened automatically if the value is
/// smaller than 2^-bits, so the result is never zero).
pub fn pow_neg_dyadic_floor(base: &BigUint, num: u32, den: u32, bits: u32) -> Rat {
    assert!(den >= 1 && num >= 1);
    assert!(!base.is_zero());
    if base.is_one() {
        return Rat::one();
    }
    if den == 1 {
        return Rat::new(BigInt::one(), BigInt::from(base.pow(num)));
    }
    if pow_ratio_is_exact(base, num, den) {
        let f = floor_pow_ratio(base, num, den);
        return Rat::new(BigInt::one(), BigInt::from(f));
    }
    let p = base.pow(num);
    let mut b = bits as u64;
    loop {
        // m = floor( (2^(b*den) / p)^(1/den) ): the largest m with m^den * p <= 2^(b*den)
        let top = BigUint::one() << (b * den as u64);
        let q = &top / &p;
        let m = floor_nth_root(&q, den);
        if !m.is_zero() {
            return Rat::new(BigInt::from(m), BigInt::from(BigUint::one() << b));
        }
        b *= 2;
        assert!(b <= 1 << 20, "dyadic rounding exhausted");
    }
}

/// Best rational approximation of a positive float with denominator <= max_den,
/// via the continued fraction of x.
pub fn rationalize_f64(x: f64, max_den: u64) -> Ratio<i64> {
    assert!(x.is_finite() && x > 0.0);
    let (mut p0, mut q0, mut p1, mut q1): (i64, i64, i64, i64) = (1, 0, 0, 1);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a > i64::MAX as f64 {
            break;
        }
        let a_i = a as i64;
        let p2 = a_i.saturating_mul(p0).saturating_add(p1);
        let q2 = a_i.saturating_mul(q0).saturating_add(q1);
        if q2 as u64 > max_den || q2 < 0 || p2 < 0 {
            break;
        }
        p1 = p0;
        q1 = q0;
        p0 = p2;
        q0 = q2;
        let frac = v - a;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q0 == 0 {
        Ratio::new(x.round() as i64, 1)
    } else {
        Ratio::new(p0, q0)
    }
}

/// Parse "p/q" or "p" into a Ratio<i64>.
pub fn parse_ratio(s: &str) -> Option<Ratio<i64>> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let p: i64 = a.trim().parse().ok()?;
        let q: i64 = b.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        Some(Ratio::new(p, q))
    } else {
        let p: i64 = s.parse().ok()?;
        Some(Ratio::from_integer(p))
    }
}

/// Ratio<i64> -> big rational.
pub fn ratio_to_rat(r: &Ratio<i64>) -> Rat {
    Rat::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nth_root_small_and_exact() {
        assert_eq!(floor_nth_root(&BigUint::from(0u32), 3), BigUint::from(0u32));
        assert_eq!(floor_nth_root(&BigUint::from(1u32), 7), BigUint::from(1u32));
        assert_eq!(floor_nth_root(&BigUint::from(27u32), 3), BigUint::from(3u32));
        assert_eq!(floor_nth_root(&BigUint::from(26u32), 3), BigUint::from(2u32));
        assert_eq!(floor_nth_root(&BigUint::from(28u32), 3), BigUint::from(3u32));
        // 10^30 has a cube root of 10^10
        let x = BigUint::from(10u32).pow(30);
        assert_eq!(floor_nth_root(&x, 3), BigUint::from(10u32).pow(10));
    }

    #[test]
    fn nth_root_random_consistency() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let v: u128 = rng.gen_range(1..u128::MAX);
            let n: u32 = rng.gen_range(2..8);
            let x = BigUint::from(v);
            let r = floor_nth_root(&x, n);
            assert!(r.pow(n) <= x);
            assert!((&r + BigUint::one()).pow(n) > x);
        }
    }

    #[test]
    fn pow_enclosure_brackets_value() {
        // 2^(-3/2) = 0.35355339...
        let b = pow_neg_enclosure(&BigUint::from(2u32), 3, 2, 80);
        let lo = b.lo.to_f64().unwrap();
        let hi = b.hi.to_f64().unwrap();
        let v = 2f64.powf(-1.5);
        assert!(lo <= v && v <= hi);
        assert!(hi - lo < 1e-20);
    }

    #[test]
    fn pow_enclosure_exact_cases() {
        // 4^(-1/2) = 1/2 exactly
        let b = pow_neg_enclosure(&BigUint::from(4u32), 1, 2, 64);
        assert_eq!(b, Bounds::point(rat(1, 2)));
        // integer exponent stays exact
        let b = pow_neg_enclosure(&BigUint::from(10u32), 2, 1, 64);
        assert_eq!(b, Bounds::point(rat(1, 100)));
    }

    #[test]
    fn dyadic_floor_is_lower_bound() {
        let v = pow_neg_dyadic_floor(&BigUint::from(20u32), 3, 2, 64);
        let truth = 20f64.powf(-1.5);
        let vf = v.to_f64().unwrap();
        assert!(vf <= truth);
        assert!(truth - vf < 1e-18);
        // exact when the exponent is an integer
        let v = pow_neg_dyadic_floor(&BigUint::from(9u32), 3, 1, 64);
        assert_eq!(v, rat(1, 729));
    }

    #[test]
    fn norm_mod1_cases() {
        // [0.2, 0.3] -> [0.2, 0.3]
        let b = Bounds::new(rat(1, 5), rat(3, 10)).norm_mod1();
        assert_eq!(b, Bounds::new(rat(1, 5), rat(3, 10)));
        // [0.7, 0.8] -> [0.2, 0.3]
        let b = Bounds::new(rat(7, 10), rat(4, 5)).norm_mod1();
        assert_eq!(b, Bounds::new(rat(1, 5), rat(3, 10)));
        // [0.4, 0.6] -> [0.4, 0.5]
        let b = Bounds::new(rat(2, 5), rat(3, 5)).norm_mod1();
        assert_eq!(b, Bounds::new(rat(2, 5), rat(1, 2)));
        // [2.9, 3.05] -> [0, 0.1]
        let b = Bounds::new(rat(29, 10), rat(61, 20)).norm_mod1();
        assert_eq!(b, Bounds::new(rat(0, 1), rat(1, 10)));
    }

    #[test]
    fn ln_big_accuracy() {
        let x = BigUint::from(10u32).pow(50);
        let l = ln_biguint(&x);
        assert!((l - 50.0 * std::f64::consts::LN_10).abs() < 1e-9 * l);
    }

    #[test]
    fn rationalize_roundtrip() {
        let r = rationalize_f64(2.0022, 64);
        assert_eq!(r, Ratio::new(2, 1));
        let r = rationalize_f64(1.5, 64);
        assert_eq!(r, Ratio::new(3, 2));
        let r = rationalize_f64(0.3333333333, 100);
        assert_eq!(r, Ratio::new(1, 3));
    }
}
