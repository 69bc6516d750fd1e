//! Decreasing approximation-rate functions phi: N -> (0, 1], their exact
//! evaluation as symbolic power values, and empirical estimation of the upper
//! and lower exponents limsup/liminf log n / (-log phi(n)).

use crate::error::{Error, Result};
use crate::numeric::{
    floor_pow_ratio, ln_biguint, ln_rat, pow_neg_enclosure, Bounds, Rat,
};
use num::bigint::{BigInt, BigUint};
use num::rational::Ratio;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Exponent arithmetic is exact; final numeric output goes through enclosures.
pub type Expo = Ratio<u64>;

fn expo_from_signed(r: Ratio<i64>, what: &str) -> Result<Expo> {
    if r.is_negative() {
        return Err(Error::InvalidInputs(format!("{what} must be nonnegative")));
    }
    Ok(Ratio::new(*r.numer() as u64, *r.denom() as u64))
}

fn expo_parts(e: &Expo, what: &str) -> Result<(u32, u32)> {
    let n = e.numer().to_u32();
    let d = e.denom().to_u32();
    match (n, d) {
        (Some(n), Some(d)) if d > 0 => Ok((n, d)),
        _ => Err(Error::InvalidInputs(format!("{what} exponent too large: {e}"))),
    }
}

/// A positive value known exactly: either a rational, or base^(-num/den)
/// kept symbolic so that comparisons across different bases stay exact.
#[derive(Clone, Debug)]
pub enum PhiVal {
    Pow { base: BigUint, num: u32, den: u32 },
    Exact(Rat),
}

impl PhiVal {
    pub fn pow(base: BigUint, num: u32, den: u32) -> PhiVal {
        assert!(!base.is_zero() && num > 0 && den > 0);
        if base.is_one() {
            PhiVal::Exact(Rat::one())
        } else {
            let g = num.gcd(&den);
            PhiVal::Pow { base, num: num / g, den: den / g }
        }
    }

    /// Rational enclosure; exact point when the power is rational.
    pub fn enclosure(&self, bits: u32) -> Bounds {
        match self {
            PhiVal::Exact(r) => Bounds::point(r.clone()),
            PhiVal::Pow { base, num, den } => pow_neg_enclosure(base, *num, *den, bits),
        }
    }

    /// Natural log of the value (nonpositive for values <= 1).
    pub fn ln_value(&self) -> f64 {
        match self {
            PhiVal::Exact(r) => ln_rat(r),
            PhiVal::Pow { base, num, den } => {
                -(*num as f64 / *den as f64) * ln_biguint(base)
            }
        }
    }

    /// Exact three-way comparison.
    pub fn cmp_exact(&self, other: &PhiVal) -> Ordering {
        match (self, other) {
            (PhiVal::Exact(a), PhiVal::Exact(b)) => a.cmp(b),
            (PhiVal::Exact(r), PhiVal::Pow { base, num, den }) => {
                // r >=< base^(-num/den)  <=>  r^den * base^num >=< 1
                assert!(r.is_positive());
                let p = r.numer().magnitude().pow(*den);
                let q = r.denom().magnitude().pow(*den);
                (p * base.pow(*num)).cmp(&q)
            }
            (PhiVal::Pow { .. }, PhiVal::Exact(_)) => other.cmp_exact(self).reverse(),
            (
                PhiVal::Pow { base: a, num: n1, den: d1 },
                PhiVal::Pow { base: b, num: n2, den: d2 },
            ) => {
                // a^(-n1/d1) >=< b^(-n2/d2)  <=>  a^(n1 d2) <=> b^(n2 d1) reversed;
                // both exponents shrink by their gcd (x -> x^g is monotone).
                let e1 = *n1 as u64 * *d2 as u64;
                let e2 = *n2 as u64 * *d1 as u64;
                let g = e1.gcd(&e2);
                let e1 = u32::try_from(e1 / g).expect("exponent overflow");
                let e2 = u32::try_from(e2 / g).expect("exponent overflow");
                a.pow(e1).cmp(&b.pow(e2)).reverse()
            }
        }
    }
}

/// Sampling plan for exponent estimation.
#[derive(Clone, Copy, Debug)]
pub enum SampleStrategy {
    /// geometric grid with this many points
    Geometric(usize),
    /// band boundaries of the family, plus a geometric fill
    FamilyAware,
}

#[derive(Clone, Debug)]
pub struct ExponentEstimate {
    pub u_hat: f64,
    pub l_hat: f64,
    pub samples: Vec<BigUint>,
    pub ratios: Vec<f64>,
}

#[derive(Clone, Debug)]
enum Family {
    /// phi(n) = n^(-gamma)
    Power { gamma: Expo },
    /// phi(n) = c/n
    Linear { c: Rat },
    /// tower bands: n_1 = 2, n_(i+1) = 2^(n_i); phi = n_i^(-1/l) on
    /// (n_i, floor(n_i^(u/l))], n^(-1/u) elsewhere
    Thm5 { l: Expo, u: Expo },
    /// bands (k_(i-1), k_i] with k_i = floor(q_i^(u/z)), z = max(l, (1+u)/(1+beta));
    /// phi = max(n^(-1/l), k_i^(-1/u)); the q-sequence is injected
    Thm4 { l: Expo, u: Expo, z: Expo, qs: Vec<BigUint>, ks: Vec<BigUint> },
    /// bands (floor(q_(k-1)^(u/l)), floor(q_k^(u/l))];
    /// phi = max(n^(-1/l), q_k^(-1/l))
    Example3 { l: Expo, u: Expo, qs: Vec<BigUint>, edges: Vec<BigUint> },
    /// explicit values for n = 1..=len
    Table { values: Vec<Rat> },
}

#[derive(Clone, Debug)]
pub struct ErrorFunction {
    family: Family,
}

fn recip(e: &Expo) -> Expo {
    Ratio::new(*e.denom(), *e.numer())
}

fn check_lu(l: &Expo, u: &Expo, l_may_be_zero: bool) -> Result<()> {
    if l >= u || *u > Expo::one() || (!l_may_be_zero && l.is_zero()) {
        return Err(Error::InvalidInputs(format!(
            "need 0 {} l < u <= 1, got l = {l}, u = {u}",
            if l_may_be_zero { "<=" } else { "<" }
        )));
    }
    Ok(())
}

impl ErrorFunction {
    pub fn power(gamma: Ratio<i64>) -> Result<Self> {
        let gamma = expo_from_signed(gamma, "gamma")?;
        if gamma.is_zero() {
            return Err(Error::InvalidInputs("gamma must be positive".into()));
        }
        expo_parts(&gamma, "gamma")?;
        Ok(Self { family: Family::Power { gamma } })
    }

    pub fn linear(c: Rat) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidInputs("linear coefficient must be positive".into()));
        }
        Ok(Self { family: Family::Linear { c } })
    }

    pub fn thm5(l: Ratio<i64>, u: Ratio<i64>) -> Result<Self> {
        let (l, u) = (expo_from_signed(l, "l")?, expo_from_signed(u, "u")?);
        check_lu(&l, &u, false)?;
        expo_parts(&recip(&l), "1/l")?;
        expo_parts(&recip(&u), "1/u")?;
        Ok(Self { family: Family::Thm5 { l, u } })
    }

    /// `qs` are the denominators q_(n_1) < q_(n_2) < ... of the sparse
    /// convergent subsequence tied to the target alpha.
    pub fn thm4(
        l: Ratio<i64>,
        u: Ratio<i64>,
        beta: Ratio<i64>,
        qs: Vec<BigUint>,
    ) -> Result<Self> {
        let (l, u) = (expo_from_signed(l, "l")?, expo_from_signed(u, "u")?);
        check_lu(&l, &u, true)?;
        let beta = expo_from_signed(beta, "beta")?;
        if beta * u <= Expo::one() {
            return Err(Error::InvalidInputs("thm4 requires u > 1/beta".into()));
        }
        let z = {
            let alt = (Expo::one() + u) / (Expo::one() + beta);
            if l > alt { l } else { alt }
        };
        let (en, ed) = expo_parts(&(u / z), "u/z")?;
        if qs.is_empty() || qs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInputs("q-sequence must be strictly increasing".into()));
        }
        let ks: Vec<BigUint> = qs.iter().map(|q| floor_pow_ratio(q, en, ed)).collect();
        if ks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::FamilyGap("thm4 band edges not strictly increasing".into()));
        }
        Ok(Self { family: Family::Thm4 { l, u, z, qs, ks } })
    }

    /// `qs` are q_1 < q_2 < ... of the synthesized alpha (q_0 = 1 implied).
    pub fn example3(l: Ratio<i64>, u: Ratio<i64>, qs: Vec<BigUint>) -> Result<Self> {
        let (l, u) = (expo_from_signed(l, "l")?, expo_from_signed(u, "u")?);
        check_lu(&l, &u, false)?;
        let (en, ed) = expo_parts(&(u / l), "u/l")?;
        if qs.is_empty() || qs[0] < BigUint::from(2u32) || qs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInputs("q-sequence must be strictly increasing from >= 2".into()));
        }
        let edges: Vec<BigUint> = qs.iter().map(|q| floor_pow_ratio(q, en, ed)).collect();
        if edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::FamilyGap("band edges not strictly increasing".into()));
        }
        Ok(Self { family: Family::Example3 { l, u, qs, edges } })
    }

    pub fn table(values: Vec<Rat>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_positive()) {
            return Err(Error::InvalidInputs("table values must be positive and nonempty".into()));
        }
        Ok(Self { family: Family::Table { values } })
    }

    /// The derived exponent z = max(l, (1+u)/(1+beta)) of the banded family
    /// (the natural K for its level construction is 1/z).
    pub fn banded_z(&self) -> Option<Expo> {
        match &self.family {
            Family::Thm4 { z, .. } => Some(*z),
            _ => None,
        }
    }

    /// The (l, u) exponent pair of a two-exponent family, if it has one.
    pub fn exponent_pair(&self) -> Option<(Expo, Expo)> {
        match &self.family {
            Family::Thm5 { l, u }
            | Family::Thm4 { l, u, .. }
            | Family::Example3 { l, u, .. } => Some((*l, *u)),
            _ => None,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match &self.family {
            Family::Power { .. } => "power",
            Family::Linear { .. } => "linear",
            Family::Thm5 { .. } => "thm5",
            Family::Thm4 { .. } => "thm4",
            Family::Example3 { .. } => "example3",
            Family::Table { .. } => "table",
        }
    }

    /// The tower n_1 = 2, n_(i+1) = 2^(n_i), materialized while n_i < cap.
    fn tower_below(cap: &BigUint) -> Vec<BigUint> {
        let mut t = vec![BigUint::from(2u32)];
        loop {
            let last = t.last().unwrap();
            if last >= cap {
                break;
            }
            match last.to_u64() {
                Some(s) if s < 1 << 24 => t.push(BigUint::one() << s),
                _ => break, // next element astronomically above any usable cap
            }
        }
        t
    }

    pub fn eval(&self, n: &BigUint) -> Result<PhiVal> {
        if n.is_zero() {
            return Err(Error::InvalidInputs("phi is defined on n >= 1".into()));
        }
        match &self.family {
            Family::Power { gamma } => {
                let (gn, gd) = expo_parts(gamma, "gamma")?;
                Ok(PhiVal::pow(n.clone(), gn, gd))
            }
            Family::Linear { c } => Ok(PhiVal::Exact(c / Rat::from_integer(BigInt::from(n.clone())))),
            Family::Thm5 { l, u } => {
                let (ln_, ld) = expo_parts(&recip(l), "1/l")?;
                let (un, ud) = expo_parts(&recip(u), "1/u")?;
                let (en, ed) = expo_parts(&(*u / *l), "u/l")?;
                let tower = Self::tower_below(n);
                for ni in tower.iter().rev() {
                    if ni < n {
                        if *n <= floor_pow_ratio(ni, en, ed) {
                            return Ok(PhiVal::pow(ni.clone(), ln_, ld));
                        }
                        break;
                    }
                }
                Ok(PhiVal::pow(n.clone(), un, ud))
            }
            Family::Thm4 { l, u, ks, .. } => {
                let i = ks.partition_point(|k| k < n);
                let ki = ks.get(i).ok_or_else(|| {
                    Error::FamilyGap(format!("n = {n} beyond the last band edge {}", ks.last().unwrap()))
                })?;
                let (un, ud) = expo_parts(&recip(u), "1/u")?;
                let tail = PhiVal::pow(ki.clone(), un, ud);
                if l.is_zero() {
                    return Ok(tail);
                }
                let (ln_, ld) = expo_parts(&recip(l), "1/l")?;
                let head = PhiVal::pow(n.clone(), ln_, ld);
                Ok(if head.cmp_exact(&tail) == Ordering::Greater { head } else { tail })
            }
            Family::Example3 { l, qs, edges, .. } => {
                let k = edges.partition_point(|e| e < n);
                let qk = qs.get(k).ok_or_else(|| {
                    Error::FamilyGap(format!("n = {n} beyond the last band edge {}", edges.last().unwrap()))
                })?;
                let (ln_, ld) = expo_parts(&recip(l), "1/l")?;
                let head = PhiVal::pow(n.clone(), ln_, ld);
                let tail = PhiVal::pow(qk.clone(), ln_, ld);
                Ok(if head.cmp_exact(&tail) == Ordering::Greater { head } else { tail })
            }
            Family::Table { values } => match n.to_usize() {
                Some(i) if i <= values.len() => Ok(PhiVal::Exact(values[i - 1].clone())),
                _ => Err(Error::FamilyGap(format!("table covers n <= {}", values.len()))),
            },
        }
    }

    pub fn eval_bounds(&self, n: &BigUint, bits: u32) -> Result<Bounds> {
        Ok(self.eval(n)?.enclosure(bits))
    }

    /// log n / (-log phi(n)); None when n = 1 or phi(n) = 1.
    pub fn ratio_at(&self, n: &BigUint) -> Result<Option<f64>> {
        let neg_ln = -self.eval(n)?.ln_value();
        let ln_n = ln_biguint(n);
        Ok(if neg_ln > 0.0 && ln_n > 0.0 { Some(ln_n / neg_ln) } else { None })
    }

    /// Indices in [2, n_max] where phi(n) < phi(n+1) (strict increases);
    /// empty for a genuinely decreasing function.
    pub fn monotonicity_violations(&self, n_max: u64) -> Result<Vec<u64>> {
        let mut out = Vec::new();
        let mut prev = self.eval(&BigUint::one())?;
        for n in 2..=n_max {
            let cur = match self.eval(&BigUint::from(n)) {
                Ok(v) => v,
                Err(Error::FamilyGap(_)) => break,
                Err(e) => return Err(e),
            };
            if cur.cmp_exact(&prev) == Ordering::Greater {
                out.push(n);
            }
            prev = cur;
        }
        Ok(out)
    }

    fn band_breakpoints(&self, n_min: u64, n_max: u64) -> Vec<BigUint> {
        let mut pts: Vec<BigUint> = Vec::new();
        let mut push_near = |e: &BigUint| {
            for cand in [e.clone(), e + 1u32] {
                pts.push(cand);
            }
        };
        match &self.family {
            Family::Thm5 { l, u } => {
                let cap = BigUint::from(n_max);
                let (en, ed) = expo_parts(&(*u / *l), "u/l").unwrap();
                for ni in Self::tower_below(&cap) {
                    if ni <= cap {
                        push_near(&ni);
                        push_near(&floor_pow_ratio(&ni, en, ed));
                    }
                }
            }
            Family::Thm4 { qs, ks, .. } => {
                for k in ks {
                    push_near(k);
                }
                for q in qs {
                    pts.push(q.clone());
                }
            }
            Family::Example3 { qs, edges, .. } => {
                for e in edges {
                    push_near(e);
                }
                for q in qs {
                    pts.push(q.clone());
                }
            }
            _ => {}
        }
        let lo = BigUint::from(n_min.max(2));
        let hi = BigUint::from(n_max);
        pts.retain(|p| *p >= lo && *p <= hi);
        pts
    }

    pub fn estimate_exponents(
        &self,
        n_min: u64,
        n_max: u64,
        strategy: SampleStrategy,
    ) -> Result<ExponentEstimate> {
        if n_min < 1 || n_min >= n_max {
            return Err(Error::InvalidInputs("need 1 <= n_min < n_max".into()));
        }
        let grid_points = match strategy {
            SampleStrategy::Geometric(p) => p.max(2),
            SampleStrategy::FamilyAware => 32,
        };
        let mut samples: Vec<BigUint> = Vec::new();
        let (lo, hi) = (n_min.max(2) as f64, n_max as f64);
        for j in 0..grid_points {
            let t = j as f64 / (grid_points - 1) as f64;
            let n = (lo * (hi / lo).powf(t)).round() as u64;
            samples.push(BigUint::from(n.clamp(n_min.max(2), n_max)));
        }
        if matches!(strategy, SampleStrategy::FamilyAware) {
            samples.extend(self.band_breakpoints(n_min, n_max));
        }
        samples.sort_unstable();
        samples.dedup();
        let mut kept = Vec::new();
        let mut ratios = Vec::new();
        for n in samples {
            match self.ratio_at(&n) {
                Ok(Some(r)) => {
                    kept.push(n);
                    ratios.push(r);
                }
                Ok(None) => {}
                Err(Error::FamilyGap(_)) => {}
                Err(e) => return Err(e),
            }
        }
        if ratios.is_empty() {
            return Err(Error::InvalidInputs("no usable sample points".into()));
        }
        let u_hat = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let l_hat = ratios.iter().cloned().fold(f64::MAX, f64::min);
        Ok(ExponentEstimate { u_hat, l_hat, samples: kept, ratios })
    }

    /// phi(m_i) >= q_n^(-K) with K = k_num/k_den; by monotonicity of phi this
    /// extends to every n <= m_i. Exact symbolic comparison.
    pub fn check_inclusion_threshold(
        &self,
        m_i: &BigUint,
        q_n: &BigUint,
        k_num: u32,
        k_den: u32,
    ) -> Result<bool> {
        let phi = self.eval(m_i)?;
        let cutoff = PhiVal::pow(q_n.clone(), k_num, k_den);
        Ok(phi.cmp_exact(&cutoff) != Ordering::Less)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn b(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn power_family_basics() {
        let phi = ErrorFunction::power(Ratio::new(2, 1)).unwrap();
        let v = phi.eval(&b(10)).unwrap();
        assert_eq!(v.cmp_exact(&PhiVal::Exact(rat(1, 100))), Ordering::Equal);
        let est = phi.estimate_exponents(2, 100_000, SampleStrategy::Geometric(50)).unwrap();
        assert!((est.u_hat - 0.5).abs() < 1e-9 && (est.l_hat - 0.5).abs() < 1e-9);
    }

    #[test]
    fn phival_cross_base_comparisons() {
        // 8^(-2/3) = 1/4 exactly
        let a = PhiVal::pow(b(8), 2, 3);
        assert_eq!(a.cmp_exact(&PhiVal::Exact(rat(1, 4))), Ordering::Equal);
        // 2^(-3/2) vs 3^(-1): 2^3 = 8 < 9 = 3^2, so 2^(-3/2) > 3^(-1)
        let x = PhiVal::pow(b(2), 3, 2);
        let y = PhiVal::pow(b(3), 1, 1);
        assert_eq!(x.cmp_exact(&y), Ordering::Greater);
        // enclosure sanity: 2^(-3/2) ~ 0.35355
        let e = x.enclosure(80);
        assert!((e.mid_f64() - 0.35355339).abs() < 1e-6);
    }

    #[test]
    fn tower_band_values() {
        // l = 1/3, u = 1/2: bands (2,2], (4,8], (16,64], (65536, 2^24]
        let phi = ErrorFunction::thm5(Ratio::new(1, 3), Ratio::new(1, 2)).unwrap();
        let v5 = phi.eval(&b(5)).unwrap(); // in (4, 8]: 4^(-3) = 1/64
        assert_eq!(v5.cmp_exact(&PhiVal::Exact(rat(1, 64))), Ordering::Equal);
        let v9 = phi.eval(&b(9)).unwrap(); // outside bands: 9^(-2) = 1/81
        assert_eq!(v9.cmp_exact(&PhiVal::Exact(rat(1, 81))), Ordering::Equal);
        let v17 = phi.eval(&b(17)).unwrap(); // in (16, 64]: 16^(-3)
        assert_eq!(v17.cmp_exact(&PhiVal::Exact(rat(1, 4096))), Ordering::Equal);
    }

    #[test]
    fn tower_exponent_estimates() {
        let phi = ErrorFunction::thm5(Ratio::new(1, 3), Ratio::new(1, 2)).unwrap();
        let est = phi.estimate_exponents(2, 100_000, SampleStrategy::FamilyAware).unwrap();
        assert!(est.u_hat >= 0.45 && est.u_hat <= 0.5 + 1e-9, "u_hat = {}", est.u_hat);
        assert!(est.l_hat >= 1.0 / 3.0 - 1e-9 && est.l_hat <= 0.37, "l_hat = {}", est.l_hat);
    }

    #[test]
    fn tower_lower_envelope() {
        // phi(n) >= n^(-1/l) on both branches
        let phi = ErrorFunction::thm5(Ratio::new(1, 3), Ratio::new(1, 2)).unwrap();
        for n in 2..2000u64 {
            let v = phi.eval(&b(n)).unwrap();
            let envelope = PhiVal::pow(b(n), 3, 1);
            assert_ne!(v.cmp_exact(&envelope), Ordering::Less, "n = {n}");
        }
        assert!(phi.monotonicity_violations(2000).unwrap().is_empty());
    }

    #[test]
    fn thm4_parameters() {
        // l = 1/3, u = 1/2, beta = 3: z = max(1/3, 3/8) = 3/8, u/z = 4/3
        let qs = vec![b(10), b(1000), b(1_000_000)];
        let phi = ErrorFunction::thm4(Ratio::new(1, 3), Ratio::new(1, 2), Ratio::new(3, 1), qs).unwrap();
        match &phi.family {
            Family::Thm4 { z, ks, .. } => {
                assert_eq!(*z, Expo::new(3, 8));
                // k_1 = floor(10^(4/3)) = 21
                assert_eq!(ks[0], b(21));
                assert_eq!(ks[1], b(10_000)); // 1000^(4/3) = 10^4
            }
            _ => unreachable!(),
        }
        // inside band 2 (21 < n <= 10^4): phi = max(n^(-3), 10000^(-2))
        let v = phi.eval(&b(30)).unwrap(); // 30^(-3) = 1/27000 > 1e-8
        assert_eq!(v.cmp_exact(&PhiVal::Exact(rat(1, 27000))), Ordering::Equal);
        let v = phi.eval(&b(9000)).unwrap(); // 9000^(-3) < 1e-8 -> k^(-1/u)
        assert_eq!(v.cmp_exact(&PhiVal::Exact(rat(1, 100_000_000))), Ordering::Equal);
        // beyond the last band
        assert!(matches!(phi.eval(&b(u64::MAX)), Err(Error::FamilyGap(_))));
    }

    #[test]
    fn example3_ratio_at_q_is_l() {
        // squared-growth q-sequence: ratio at n = q_k equals exactly l = 1/3
        let qs = vec![b(2), b(5), b(27), b(734), b(538_783)];
        let phi = ErrorFunction::example3(Ratio::new(1, 3), Ratio::new(1, 2), qs.clone()).unwrap();
        for q in &qs[1..] {
            let r = phi.ratio_at(q).unwrap().unwrap();
            assert!((r - 1.0 / 3.0).abs() < 1e-12, "ratio at {q} was {r}");
        }
        // near a band top the ratio approaches u
        let est = phi.estimate_exponents(2, 300_000_000, SampleStrategy::FamilyAware).unwrap();
        assert!(est.u_hat > 0.45, "u_hat = {}", est.u_hat);
    }

    #[test]
    fn inclusion_threshold_boundary() {
        // power(gamma), m = q, K = gamma: q^(-gamma) >= q^(-gamma) holds
        let phi = ErrorFunction::power(Ratio::new(3, 2)).unwrap();
        assert!(phi.check_inclusion_threshold(&b(997), &b(997), 3, 2).unwrap());
        // power(3), K = 2, m = q = 10: 10^(-3) >= 10^(-2) is false
        let phi3 = ErrorFunction::power(Ratio::new(3, 1)).unwrap();
        assert!(!phi3.check_inclusion_threshold(&b(10), &b(10), 2, 1).unwrap());
        // m slightly above q tips the boundary case to false
        assert!(!phi.check_inclusion_threshold(&b(998), &b(997), 3, 2).unwrap());
    }

    #[test]
    fn linear_and_table() {
        let phi = ErrorFunction::linear(rat(3, 1)).unwrap();
        let v = phi.eval(&b(12)).unwrap();
        assert_eq!(v.cmp_exact(&PhiVal::Exact(rat(1, 4))), Ordering::Equal);
        let t = ErrorFunction::table(vec![rat(1, 2), rat(1, 3), rat(1, 8)]).unwrap();
        assert_eq!(
            t.eval(&b(3)).unwrap().cmp_exact(&PhiVal::Exact(rat(1, 8))),
            Ordering::Equal
        );
        assert!(matches!(t.eval(&b(4)), Err(Error::FamilyGap(_))));
        assert!(t.monotonicity_violations(3).unwrap().is_empty());
    }

    #[test]
    fn monotonicity_holds_on_families() {
        let fams = [
            ErrorFunction::power(Ratio::new(2, 1)).unwrap(),
            ErrorFunction::linear(rat(1, 1)).unwrap(),
            ErrorFunction::thm5(Ratio::new(1, 3), Ratio::new(1, 2)).unwrap(),
            ErrorFunction::example3(
                Ratio::new(1, 3),
                Ratio::new(1, 2),
                vec![b(2), b(5), b(27), b(734)],
            )
            .unwrap(),
        ];
        for f in &fams {
            assert!(
                f.monotonicity_violations(5000).unwrap().is_empty(),
                "family {}",
                f.family_name()
            );
        }
    }
}
