//! Level schedules (n_i, m_i): validation of explicit schedules, automatic
//! selection driven by a target phi, and the derived exponents N-hat and
//! auto-chosen K.

use crate::cf::ContinuedFraction;
use crate::error::{Error, Result};
use crate::numeric::{ln_big, rationalize_f64};
use crate::phi::ErrorFunction;
use num::bigint::BigInt;
use num::rational::Ratio;
use num::{FromPrimitive, One, Signed, Zero};

/// Default exponent g in the sparsity requirement q_(n_(i+1)) >= (q_(n_i + 1))^g.
pub const DEFAULT_GROWTH_EXP: u32 = 20;
/// The growth exponent reported as the "sufficiently fast" reference check.
pub const REFERENCE_GROWTH_EXP: u32 = 10;

#[derive(Clone, Debug)]
pub struct ScheduleLevel {
    /// 1-based level index
    pub i: usize,
    /// convergent index n_i
    pub n_index: usize,
    pub m_prev: BigInt,
    pub m_i: BigInt,
    pub q_n: BigInt,
    /// q_(n_i + 1), the upper bound for m_i
    pub q_n_next: BigInt,
}

impl ScheduleLevel {
    pub fn n_points(&self) -> BigInt {
        &self.m_i - &self.m_prev
    }
}

#[derive(Clone, Debug)]
pub struct Schedule {
    pub levels: Vec<ScheduleLevel>,
}

impl Schedule {
    /// Validate an explicit (n_i, m_i) list against the convergents of alpha.
    pub fn explicit(cf: &mut ContinuedFraction, pairs: &[(usize, BigInt)]) -> Result<Schedule> {
        if pairs.is_empty() {
            return Err(Error::InvalidInputs("schedule must have at least one level".into()));
        }
        let mut levels = Vec::with_capacity(pairs.len());
        let mut m_prev = BigInt::zero();
        let mut last_n = 0usize;
        for (i, (n_index, m_i)) in pairs.iter().enumerate() {
            if *n_index < 1 || (i > 0 && *n_index <= last_n) {
                return Err(Error::InvalidInputs("n_i must be strictly increasing, n_1 >= 1".into()));
            }
            let q_n = cf.q(*n_index)?;
            let q_n_next = cf.q(*n_index + 1)?;
            if m_i <= &q_n || m_i > &q_n_next {
                return Err(Error::InvalidInputs(format!(
                    "level {}: need q_n < m_i <= q_(n+1), got m = {m_i}, q_n = {q_n}, q_(n+1) = {q_n_next}",
                    i + 1
                )));
            }
            if &m_prev - &q_n >= BigInt::zero() {
                return Err(Error::ScheduleTooThin(format!(
                    "level {}: m_(i-1) = {m_prev} >= q_n = {q_n} leaves fewer than q_n points",
                    i + 1
                )));
            }
            levels.push(ScheduleLevel {
                i: i + 1,
                n_index: *n_index,
                m_prev: m_prev.clone(),
                m_i: m_i.clone(),
                q_n,
                q_n_next,
            });
            m_prev = m_i.clone();
            last_n = *n_index;
        }
        Ok(Schedule { levels })
    }

    /// Automatic schedule: n_1 is minimal with q >= 2; each subsequent n is
    /// minimal with q_n >= (q_(previous n + 1))^growth_exp; m_i maximizes
    /// log m / (-log phi(m)) over a geometric grid on (q_(n_i), q_(n_i + 1)],
    /// ties resolved toward the larger m.
    pub fn auto(
        cf: &mut ContinuedFraction,
        phi: &ErrorFunction,
        depth: usize,
        growth_exp: u32,
    ) -> Result<Schedule> {
        if depth < 1 {
            return Err(Error::InvalidInputs("depth must be >= 1".into()));
        }
        if growth_exp < 2 {
            return Err(Error::InvalidInputs("growth exponent must be >= 2".into()));
        }
        let two = BigInt::from(2);
        let mut n_index = 1usize;
        while cf.q(n_index)? < two {
            n_index += 1;
        }
        let mut levels = Vec::with_capacity(depth);
        let mut m_prev = BigInt::zero();
        for i in 1..=depth {
            let q_n = cf.q(n_index)?;
            let q_n_next = cf.q(n_index + 1)?;
            let m_i = pick_m(phi, &q_n, &q_n_next)?;
            levels.push(ScheduleLevel {
                i,
                n_index,
                m_prev: m_prev.clone(),
                m_i: m_i.clone(),
                q_n,
                q_n_next: q_n_next.clone(),
            });
            m_prev = m_i;
            if i < depth {
                let target = q_n_next.pow(growth_exp);
                let mut k = n_index + 1;
                while cf.q(k)? < target {
                    k += 1;
                }
                n_index = k;
            }
        }
        Ok(Schedule { levels })
    }

    /// Whether every step satisfies the reference sparsity condition
    /// q_(n_(i+1)) >= (q_(n_i + 1))^exp. Reported, not enforced.
    pub fn growth_condition(&self, exp: u32) -> bool {
        self.levels
            .windows(2)
            .all(|w| w[1].q_n >= w[0].q_n_next.pow(exp))
    }

    /// N-hat = log m_i / log q_(n_i) at the deepest level.
    pub fn n_hat(&self) -> f64 {
        let last = self.levels.last().expect("nonempty schedule");
        ln_big(&last.m_i) / ln_big(&last.q_n)
    }

    /// B-hat = max over levels of log q_(n_i + 1) / log q_(n_i).
    pub fn b_hat(&self) -> f64 {
        self.levels
            .iter()
            .map(|l| ln_big(&l.q_n_next) / ln_big(&l.q_n))
            .fold(f64::MIN, f64::max)
    }
}

/// Integer near e^ln_m, safe far beyond f64 range (mantissa << shift).
fn bigint_from_ln(ln_m: f64) -> BigInt {
    let log2 = ln_m / std::f64::consts::LN_2;
    if log2 < 52.0 {
        return BigInt::from_f64(ln_m.exp().floor()).unwrap();
    }
    let shift = (log2 - 52.0).floor() as u64;
    let mant = (log2 - shift as f64).exp2().floor();
    BigInt::from_f64(mant).unwrap() << shift
}

/// Geometric-grid argmax of log m / (-log phi(m)) over (q_lo, q_hi];
/// near-ties (within 1e-9) go to the larger m.
fn pick_m(phi: &ErrorFunction, q_lo: &BigInt, q_hi: &BigInt) -> Result<BigInt> {
    debug_assert!(q_lo < q_hi);
    const GRID: usize = 64;
    let lo = q_lo + BigInt::one();
    let ln_lo = ln_big(&lo);
    let ln_hi = ln_big(q_hi);
    let mut cands: Vec<BigInt> = (0..GRID)
        .map(|j| {
            let t = j as f64 / (GRID - 1) as f64;
            bigint_from_ln(ln_lo + t * (ln_hi - ln_lo))
        })
        .collect();
    cands.push(lo.clone());
    cands.push(q_hi.clone());
    cands.sort();
    cands.dedup();
    cands.retain(|m| m >= &lo && m <= q_hi);
    let mut scored: Vec<(BigInt, f64)> = Vec::new();
    for m in cands {
        let mu = m.magnitude().clone();
        match phi.ratio_at(&mu) {
            Ok(Some(r)) => scored.push((m, r)),
            Ok(None) => {}
            Err(Error::FamilyGap(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if scored.is_empty() {
        // phi undefined across the whole window: fall back to the endpoint
        return Ok(q_hi.clone());
    }
    let best = scored.iter().map(|(_, r)| *r).fold(f64::MIN, f64::max);
    let m = scored
        .into_iter()
        .filter(|(_, r)| *r >= best - 1e-9)
        .map(|(m, _)| m)
        .max()
        .unwrap();
    Ok(m)
}

/// K chosen as the simplest rational near N-hat / u-hat (§ "K = N/u" choice):
/// the continued-fraction convergent of smallest denominator within `tol`,
/// with denominator capped at 64.
pub fn auto_k(n_hat: f64, u_hat: f64, tol: f64) -> Result<Ratio<i64>> {
    if !(n_hat.is_finite() && u_hat.is_finite()) || u_hat <= 0.0 {
        return Err(Error::InvalidInputs("invalid exponents for auto K".into()));
    }
    let x = n_hat / u_hat;
    if x <= 1.0 {
        return Err(Error::InvalidK(format!("auto K = {x:.4} is not > 1")));
    }
    let k = simplest_within(x, tol, 64);
    if k <= Ratio::one() {
        return Err(Error::InvalidK(format!("auto K = {k} is not > 1")));
    }
    Ok(k)
}

/// Smallest-denominator continued-fraction convergent of x within tol
/// (falls back to the best approximation with denominator <= max_den).
pub fn simplest_within(x: f64, tol: f64, max_den: u64) -> Ratio<i64> {
    let mut t = x;
    let (mut p0, mut q0) = (1i64, 0i64);
    let (mut p1, mut q1) = (x.floor() as i64, 1i64);
    for _ in 0..40 {
        let approx = p1 as f64 / q1 as f64;
        if (approx - x).abs() <= tol {
            return Ratio::new(p1, q1);
        }
        let f = t - t.floor();
        if f.abs() < 1e-15 {
            break;
        }
        t = 1.0 / f;
        let a = t.floor() as i64;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 as u64 > max_den || q2 <= 0 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    rationalize_f64(x, max_den)
}

/// log m_i / log q_(n_i) per level (finite-depth view of the N exponent).
pub fn level_n_ratios(s: &Schedule) -> Vec<f64> {
    s.levels.iter().map(|l| ln_big(&l.m_i) / ln_big(&l.q_n)).collect()
}

/// Convenience: true when every level leaves at least q_n points.
pub fn admissible_counts(s: &Schedule) -> bool {
    s.levels.iter().all(|l| l.n_points() >= l.q_n && l.n_points().is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::ContinuedFraction;
    use num::rational::Ratio;

    #[test]
    fn explicit_schedule_validation() {
        let mut cf = ContinuedFraction::golden();
        // golden q: 1,1,2,3,5,8,13,21,34,...
        let s = Schedule::explicit(&mut cf, &[(5, BigInt::from(12)), (8, BigInt::from(50))]).unwrap();
        assert_eq!(s.levels.len(), 2);
        assert_eq!(s.levels[0].q_n, BigInt::from(8));
        assert_eq!(s.levels[1].m_prev, BigInt::from(12));
        // m out of window rejected
        assert!(Schedule::explicit(&mut cf, &[(5, BigInt::from(14))]).is_err());
        // m below q_n rejected
        assert!(Schedule::explicit(&mut cf, &[(5, BigInt::from(8))]).is_err());
    }

    #[test]
    fn auto_schedule_golden_power() {
        let mut cf = ContinuedFraction::golden();
        let phi = ErrorFunction::power(Ratio::new(2, 1)).unwrap();
        let s = Schedule::auto(&mut cf, &phi, 3, DEFAULT_GROWTH_EXP).unwrap();
        assert_eq!(s.levels.len(), 3);
        // constant ratio family ties toward the endpoint m_i = q_(n_i + 1)
        for l in &s.levels {
            assert_eq!(l.m_i, l.q_n_next, "level {}", l.i);
        }
        assert!(s.growth_condition(REFERENCE_GROWTH_EXP));
        assert!(s.growth_condition(DEFAULT_GROWTH_EXP));
        assert!(admissible_counts(&s));
        // golden: m = q_(n+1) ~ 1.618 q_n, so N-hat slightly above 1
        let nh = s.n_hat();
        assert!(nh > 1.0 && nh < 1.1, "n_hat = {nh}");
    }

    #[test]
    fn auto_k_golden_power2() {
        let mut cf = ContinuedFraction::golden();
        let phi = ErrorFunction::power(Ratio::new(2, 1)).unwrap();
        let s = Schedule::auto(&mut cf, &phi, 3, DEFAULT_GROWTH_EXP).unwrap();
        let est = phi
            .estimate_exponents(2, 1_000_000, crate::phi::SampleStrategy::Geometric(64))
            .unwrap();
        let k = auto_k(s.n_hat(), est.u_hat, 0.05).unwrap();
        assert_eq!(k, Ratio::new(2, 1));
    }

    #[test]
    fn simplest_rational_choices() {
        assert_eq!(simplest_within(2.03, 0.05, 64), Ratio::new(2, 1));
        assert_eq!(simplest_within(1.5, 1e-9, 64), Ratio::new(3, 2));
        assert_eq!(simplest_within(0.3333334, 1e-3, 64), Ratio::new(1, 3));
    }

    #[test]
    fn growth_condition_reports_failure() {
        let mut cf = ContinuedFraction::golden();
        // adjacent convergent indices: far below the ^10 growth requirement
        let s = Schedule::explicit(
            &mut cf,
            &[(5, BigInt::from(12)), (8, BigInt::from(50)), (11, BigInt::from(200))],
        )
        .unwrap();
        assert!(!s.growth_condition(REFERENCE_GROWTH_EXP));
    }
}
