//! Exact construction of the nested approximation level sets: unions of arcs
//! of radius half q_n^(-K) around orbit points, their containment-filtered
//! intersections, the uniform mass distribution on the deepest level, a
//! certified membership scan, and log-space predicted geometry for depths
//! where exact arcs are no longer materializable.

use crate::cf::ContinuedFraction;
use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::numeric::{
    ln_big, pow_neg_dyadic_floor, pow_neg_enclosure, pow_ratio_is_exact,
    floor_pow_ratio, rat_le, rat_lt, Bounds, Rat,
};
use crate::phi::ErrorFunction;
use crate::rotation::{group_structure, orbit_proxy, GroupStructure, MAX_BITS};
use crate::schedule::{Schedule, ScheduleLevel};
use num::bigint::{BigInt, BigUint};
use num::rational::Ratio;
use num::{Integer, One, Signed, ToPrimitive, Zero};

/// Largest point count for which exact arcs are materialized.
pub const EXACT_ARC_CAP: u64 = 150_000;

/// How irrational scale values q^(-K) are replaced by rationals: exact when
/// the power is rational, otherwise the dyadic floor with this many bits
/// (round-down only ever shrinks the sets).
#[derive(Clone, Copy, Debug)]
pub struct RationalizationPolicy {
    pub bits: u32,
}

impl Default for RationalizationPolicy {
    fn default() -> Self {
        RationalizationPolicy { bits: 64 }
    }
}

pub fn k_parts(k: Ratio<i64>) -> Result<(u32, u32)> {
    if k <= Ratio::one() {
        return Err(Error::InvalidK(format!("K must be > 1, got {k}")));
    }
    match (k.numer().to_u32(), k.denom().to_u32()) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(Error::InvalidK(format!("K = {k} out of range"))),
    }
}

/// Round-down rational stand-in for q^(-num/den).
pub fn rationalized_scale(q: &BigUint, num: u32, den: u32, pol: RationalizationPolicy) -> Rat {
    if den == 1 {
        return Rat::new(BigInt::one(), BigInt::from(q.pow(num)));
    }
    if pow_ratio_is_exact(q, num, den) {
        let root = floor_pow_ratio(q, num, den);
        return Rat::new(BigInt::one(), BigInt::from(root));
    }
    pow_neg_dyadic_floor(q, num, den, pol.bits)
}

#[derive(Clone, Debug)]
pub struct LevelGeometry {
    /// 1 when xi <= q^(-K) (intra-group arcs merge), else 2
    pub case_tag: u8,
    pub q_n: BigInt,
    pub n_points: BigInt,
    pub points_per_group: BigInt,
    pub remainder: BigInt,
    /// group count exposed by the orbit structure (= q_n)
    pub s_i: BigInt,
    /// q_n (case 1) or n_points (case 2); exact when q_n divides n_points
    pub predicted_count: BigInt,
    /// uniform component length: y_i (case 1) or z_i (case 2), exact with
    /// respect to the rational proxy of alpha
    pub length: Rat,
    /// rationalized arc length q_n^(-K) (arcs have radius half of this)
    pub scale: Rat,
    /// intra-group gap of the proxy orbit
    pub xi_proxy: Rat,
    /// inter-group gap of the proxy orbit
    pub zeta_proxy: Rat,
    /// true-value enclosures, for reporting
    pub xi: Bounds,
    pub zeta: Bounds,
    /// gap between surviving components: zeta - q^(-K)
    pub c_i: Rat,
    /// case 2 only: gap between arcs inside a group, xi - q^(-K)
    pub d_i: Option<Rat>,
}

/// distance of r/q to the nearest integer, as an exact rational
fn dist_to_int(r: &BigInt, q: &BigInt) -> Rat {
    let m = r.mod_floor(q);
    let other = q - &m;
    let num = if m <= other { m } else { other };
    Rat::new(num, q.clone())
}

/// Build the exact arc union for one schedule level. The arcs are centered at
/// the orbit of the rational proxy p_M/q_M of alpha (accurate to m_i 2^(-bits));
/// all reported lengths are exact for that proxy and the case classification
/// is certified against the true alpha with escalating precision.
pub fn build_level(
    cf: &mut ContinuedFraction,
    lvl: &ScheduleLevel,
    k: Ratio<i64>,
    pol: RationalizationPolicy,
    bits: u32,
) -> Result<(IntervalSet, LevelGeometry)> {
    let (kn, kd) = k_parts(k)?;
    let n_points_big = &lvl.m_i - &lvl.m_prev;
    // a single orbit point is its own group; otherwise the level must be
    // thick enough for the group structure to apply
    let (ppg, remainder, xi_b, zeta_b) = if n_points_big.is_one() {
        let b = bits.max(64);
        let xi = cf.norm_q(lvl.n_index, b)?;
        let zeta = if lvl.n_index == 1 {
            cf.alpha_enclosure(b)?.norm_mod1()
        } else {
            cf.norm_q(lvl.n_index - 1, b)?
        };
        (BigInt::one(), BigInt::zero(), xi, zeta)
    } else {
        let gs = group_structure(cf, lvl.n_index, &lvl.m_prev, &lvl.m_i, bits)?;
        if !gs.admissible {
            return Err(Error::ScheduleTooThin(format!(
                "level {}: inter-group gap is not positive",
                lvl.i
            )));
        }
        (gs.points_per_group, gs.remainder, gs.xi, gs.zeta)
    };
    if n_points_big.to_u64().filter(|n| *n <= EXACT_ARC_CAP).is_none() {
        return Err(Error::InvalidInputs(format!(
            "level {} has {} points; exact arcs are capped at {EXACT_ARC_CAP} (use predicted geometry)",
            lvl.i, n_points_big
        )));
    }
    let q_n_u = lvl.q_n.magnitude();
    let scale = rationalized_scale(q_n_u, kn, kd, pol);
    let half = &scale / Rat::from_integer(BigInt::from(2));

    // certified case decision against the true alpha
    let case1 = {
        let mut b = bits.max(64);
        loop {
            let xi_b = cf.norm_q(lvl.n_index, b)?;
            let r_b = pow_neg_enclosure(q_n_u, kn, kd, b);
            if rat_le(&xi_b.hi, &r_b.lo) {
                break true;
            }
            if rat_lt(&r_b.hi, &xi_b.lo) {
                break false;
            }
            if b >= MAX_BITS {
                return Err(Error::PrecisionConflict { bits: b });
            }
            b = (b * 2).min(MAX_BITS);
        }
    };

    // proxy orbit; the proxy index is kept beyond n_i so proxy gaps are nonzero
    let bits_arcs = bits.max(64);
    let proxy = orbit_proxy(cf, &lvl.m_prev, &lvl.m_i, bits_arcs, lvl.n_index + 2)?;
    let arcs: Vec<(Rat, Rat)> = proxy
        .residues
        .iter()
        .map(|r| {
            let c = Rat::new(r.clone(), proxy.q.clone());
            (&c - &half, &c + &half)
        })
        .collect();
    let set = IntervalSet::from_raw_arcs(arcs);

    // proxy gaps: ||q_n p_M / q_M|| and ||q_(n-1) p_M / q_M||, exact rationals
    let xi_proxy = dist_to_int(&(&lvl.q_n * &proxy.p), &proxy.q);
    let prev_q = cf.q(lvl.n_index - 1)?;
    let prev_norm_proxy = dist_to_int(&(&prev_q * &proxy.p), &proxy.q);
    let ppg_minus1 = &ppg - BigInt::one();
    let zeta_proxy = &prev_norm_proxy - &xi_proxy * Rat::from_integer(ppg_minus1.clone());

    let (length, d_i) = if case1 {
        (&xi_proxy * Rat::from_integer(ppg_minus1) + &scale, None)
    } else {
        (scale.clone(), Some(&xi_proxy - &scale))
    };
    let c_i = &zeta_proxy - &scale;
    let predicted_count = if n_points_big.is_one() {
        BigInt::one()
    } else if case1 {
        lvl.q_n.clone()
    } else {
        n_points_big.clone()
    };
    let geom = LevelGeometry {
        case_tag: if case1 { 1 } else { 2 },
        q_n: lvl.q_n.clone(),
        n_points: n_points_big,
        points_per_group: ppg,
        remainder,
        s_i: lvl.q_n.clone(),
        predicted_count,
        length,
        scale,
        xi_proxy,
        zeta_proxy,
        xi: xi_b,
        zeta: zeta_b,
        c_i,
        d_i,
    };
    Ok((set, geom))
}

/// Containment-filtered intersection: level j keeps only components lying
/// entirely inside a retained component of level j-1. Returns the final set
/// and the retained component count per level.
pub fn intersect_levels(levels: &[IntervalSet]) -> Result<(IntervalSet, Vec<u64>)> {
    if levels.is_empty() {
        return Err(Error::InvalidInputs("need at least one level".into()));
    }
    let mut retained = levels[0].clone();
    let mut counts = vec![retained.component_count() as u64];
    for (j, e) in levels.iter().enumerate().skip(1) {
        retained = e.retained_within(&retained);
        if retained.is_empty() {
            return Err(Error::EmptyIntersection { level: j + 1 });
        }
        counts.push(retained.component_count() as u64);
    }
    Ok((retained, counts))
}

/// Uniform measure on the finite construction: every component of the same
/// level carries the same mass; queries resolve at the deepest level.
#[derive(Clone, Debug)]
pub struct MassDistribution {
    levels: Vec<IntervalSet>,
}

impl MassDistribution {
    /// `levels` must already be containment-filtered (F_1, F_2, ..., F_depth).
    pub fn new(levels: Vec<IntervalSet>) -> Result<Self> {
        if levels.is_empty() || levels.iter().any(|l| l.is_empty()) {
            return Err(Error::InvalidInputs("mass distribution needs nonempty levels".into()));
        }
        Ok(MassDistribution { levels })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, j: usize) -> &IntervalSet {
        &self.levels[j]
    }

    pub fn deepest(&self) -> &IntervalSet {
        self.levels.last().unwrap()
    }

    /// Mass of each component at level j (1-based), uniform by construction.
    pub fn component_mass(&self, j: usize) -> Rat {
        let count = self.levels[j - 1].component_count();
        Rat::new(BigInt::one(), BigInt::from(count))
    }

    /// mu([center - radius, center + radius]): components of the deepest level
    /// touching the ball are counted fully (upper-bound flavor).
    pub fn mass_of_ball(&self, center: &Rat, radius: &Rat) -> Result<Rat> {
        if !radius.is_positive() {
            return Err(Error::InvalidInputs("radius must be positive".into()));
        }
        if radius * Rat::from_integer(BigInt::from(2)) >= Rat::one() {
            return Ok(Rat::one());
        }
        let deep = self.deepest();
        let min_len = deep
            .components()
            .iter()
            .map(|(lo, hi)| hi - lo)
            .min()
            .unwrap();
        if *radius < min_len / Rat::from_integer(BigInt::from(4)) {
            return Err(Error::InsufficientDepth(format!(
                "radius {radius} below the resolution of depth {}",
                self.depth()
            )));
        }
        let c = center - Rat::from_integer(center.floor().to_integer());
        let touched = deep.component_indices_touching(&(&c - radius), &(&c + radius));
        Ok(Rat::new(
            BigInt::from(touched.len()),
            BigInt::from(deep.component_count()),
        ))
    }
}

#[derive(Clone, Debug)]
pub struct MembershipReport {
    /// n with a certified ||n alpha - y|| < phi(n)
    pub witnesses: Vec<u64>,
    /// n whose enclosure straddles phi(n) at the working precision
    pub near_misses: Vec<u64>,
    /// last n actually scanned (phi may stop being defined earlier)
    pub scanned_to: u64,
}

/// Exhaustive scan for approximation witnesses of a rational target y.
pub fn membership_check(
    cf: &mut ContinuedFraction,
    phi: &ErrorFunction,
    y: &Rat,
    n_max: u64,
    bits: u32,
) -> Result<MembershipReport> {
    if n_max == 0 || n_max > 10_000_000 {
        return Err(Error::InvalidInputs("n_max must be in 1..=10^7".into()));
    }
    let bits = bits.max(96);
    let m = cf.proxy_index(&(BigInt::from(n_max) << bits))?;
    cf.ensure(m + 1)?;
    let (p, q) = cf.convergents(m + 1)?[m].clone();
    let q_next = cf.q(m + 1)?;
    // |alpha - p/q| < 1/(q q'), so |n alpha - n p/q| < n_max/(q q') =: eps
    let eps = Rat::new(BigInt::from(n_max), &q * &q_next);
    let (a, b) = (y.numer().clone(), y.denom().clone());
    let qb = &q * &b;
    let step = (&p * &b).mod_floor(&qb);
    // s_n = (n p b - a q) mod (q b); ||n p/q - y|| = min(s, qb - s)/(qb)
    let mut s = (&step - (&a * &q)).mod_floor(&qb);
    let two = BigInt::from(2);
    let mut witnesses = Vec::new();
    let mut near_misses = Vec::new();
    let mut block_hi = 0u64; // exclusive end of current threshold block
    let mut thr = BigInt::zero();
    let mut scanned_to = 0u64;
    let eps2 = &eps * Rat::from_integer(two.clone());
    'scan: for n in 1..=n_max {
        if n >= block_hi {
            // dyadic block [n, 2n): phi is decreasing, so phi(n) bounds it
            block_hi = n.saturating_mul(2);
            let phi_hi = match phi.eval_bounds(&BigUint::from(n), 64) {
                Ok(bnd) => bnd.hi,
                Err(Error::FamilyGap(_)) => break 'scan,
                Err(e) => return Err(e),
            };
            let t = (&phi_hi + &eps2) * Rat::from_integer(qb.clone());
            thr = t.ceil().to_integer();
        }
        scanned_to = n;
        let dist_num = if &s * &two <= qb { s.clone() } else { &qb - &s };
        if dist_num <= thr {
            // candidate: certify with true enclosures
            let nb = BigUint::from(n);
            let phi_b = phi.eval_bounds(&nb, bits)?;
            let d_b = cf
                .alpha_enclosure(bits + 64)?
                .scale_int(&BigInt::from(n))
                .sub_rat(y)
                .norm_mod1();
            match d_b.strictly_below(&phi_b) {
                Some(true) => witnesses.push(n),
                Some(false) => {}
                None => near_misses.push(n),
            }
        }
        s += &step;
        if s >= qb {
            s -= &qb;
        }
    }
    Ok(MembershipReport { witnesses, near_misses, scanned_to })
}

/// Log-space geometry of one level, used beyond the exact-arc cap.
#[derive(Clone, Debug)]
pub struct PredictedLevel {
    pub i: usize,
    pub case_tag: u8,
    /// ln of the component count of E_i over the whole circle
    pub ln_comps: f64,
    /// ln of the uniform component length
    pub ln_len: f64,
    /// ln of expected children retained per previous-level component
    pub ln_children: f64,
    /// cumulative: ln of the retained component count of F_i
    pub ln_count: f64,
}

/// Predict counts and lengths for a whole schedule without materializing
/// arcs: retained children per parent are the level's components thinned by
/// the parent's length fraction.
pub fn predict_levels(
    cf: &mut ContinuedFraction,
    schedule: &Schedule,
    k: Ratio<i64>,
    bits: u32,
) -> Result<Vec<PredictedLevel>> {
    let (kn, kd) = k_parts(k)?;
    let mut out: Vec<PredictedLevel> = Vec::with_capacity(schedule.levels.len());
    let mut ln_count_prev = 0.0f64;
    let mut ln_len_prev = 0.0f64;
    for lvl in &schedule.levels {
        let gs: GroupStructure = group_structure(cf, lvl.n_index, &lvl.m_prev, &lvl.m_i, bits)?;
        if !gs.admissible {
            return Err(Error::ScheduleTooThin(format!(
                "level {}: inter-group gap is not positive",
                lvl.i
            )));
        }
        let q_n_u = lvl.q_n.magnitude();
        let ln_scale = {
            let e = pow_neg_enclosure(q_n_u, kn, kd, 96);
            e.ln_mid()
        };
        let xi = gs.xi.ln_mid();
        let case1 = xi <= ln_scale;
        let (ln_comps, ln_len) = if case1 {
            let ppg1 = &gs.points_per_group - BigInt::one();
            let y = if ppg1.is_zero() {
                ln_scale
            } else {
                // ln((ppg-1) xi + scale) via max + log1p
                let lx = ln_big(&ppg1) + xi;
                let (hi, lo) = if lx > ln_scale { (lx, ln_scale) } else { (ln_scale, lx) };
                hi + (lo - hi).exp().ln_1p()
            };
            (ln_big(&lvl.q_n), y)
        } else {
            (ln_big(&gs.n_points), ln_scale)
        };
        let ln_children = ln_comps + ln_len_prev;
        let ln_count = ln_count_prev + ln_children;
        out.push(PredictedLevel {
            i: lvl.i,
            case_tag: if case1 { 1 } else { 2 },
            ln_comps,
            ln_len,
            ln_children,
            ln_count,
        });
        ln_count_prev = ln_count;
        ln_len_prev = ln_len;
    }
    Ok(out)
}

/// ln of the predicted number of delta-boxes needed to cover the deepest
/// retained set, for ln_delta between the deepest and the unit scale.
pub fn ln_box_count(pred: &[PredictedLevel], ln_delta: f64) -> Result<f64> {
    if pred.is_empty() {
        return Err(Error::InvalidInputs("empty prediction".into()));
    }
    if ln_delta >= 0.0 {
        return Ok(0.0);
    }
    if ln_delta < pred.last().unwrap().ln_len {
        return Err(Error::InsufficientDepth(format!(
            "ln delta = {ln_delta} below the deepest predicted scale {}",
            pred.last().unwrap().ln_len
        )));
    }
    // find j with ln_len_j <= ln_delta < ln_len_(j-1); level 0 is the circle
    let mut ln_count_prev = 0.0f64;
    let mut ln_len_prev = 0.0f64;
    for lv in pred {
        if ln_delta >= lv.ln_len {
            // boxes: every surviving parent contributes min(children,
            // parent_len/delta); children < 1 just means few parents survive
            let per_parent = lv.ln_children.min(ln_len_prev - ln_delta);
            return Ok((ln_count_prev + per_parent).max(0.0));
        }
        ln_count_prev = lv.ln_count;
        ln_len_prev = lv.ln_len;
    }
    unreachable!("ln_delta checked against the deepest scale");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::{ContinuedFraction, GrowthSpec};
    use crate::schedule::Schedule;
    use num::rational::Ratio;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn single_point_level() {
        // one orbit point: a single arc of length q^(-K)
        let mut cf = ContinuedFraction::golden();
        let s = Schedule::explicit(&mut cf, &[(5, bi(12))]).unwrap();
        let lone = ScheduleLevel { m_prev: bi(11), ..s.levels[0].clone() };
        let (set, geom) = build_level(&mut cf, &lone, Ratio::new(3, 1), Default::default(), 128).unwrap();
        assert_eq!(set.component_count(), 1);
        assert_eq!(geom.predicted_count, bi(1));
        assert_eq!(set.total_length(), Rat::new(bi(1), bi(512)));
    }

    #[test]
    fn case2_golden_counts_and_lengths() {
        // golden, K = 3: xi >> q^(-3), so no merging; N arcs of length q^(-3)
        let mut cf = ContinuedFraction::golden();
        let s = Schedule::explicit(
            &mut cf,
            &[(5, bi(8 + 5)), (10, bi(89 + 55)), (15, bi(987 + 610))],
        )
        .unwrap();
        for lvl in &s.levels {
            let (set, geom) =
                build_level(&mut cf, lvl, Ratio::new(3, 1), Default::default(), 128).unwrap();
            assert_eq!(geom.case_tag, 2);
            assert_eq!(BigInt::from(set.component_count()), geom.n_points);
            assert_eq!(geom.predicted_count, geom.n_points);
            let q3 = geom.q_n.pow(3);
            assert_eq!(geom.length, Rat::new(bi(1), q3.clone()));
            for (lo, hi) in set.components() {
                assert_eq!(hi - lo, Rat::new(bi(1), q3.clone()));
            }
            assert!(geom.d_i.unwrap().is_positive());
        }
    }

    #[test]
    fn case1_merges_into_group_count() {
        // alpha with a huge quotient after n = 1 forces xi_1 <= q_1^(-K)
        let mut cf = ContinuedFraction::from_quotients(vec![
            20, 100_000, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29, 31, 33, 35, 37, 39, 41,
        ])
        .unwrap();
        // q_1 = 20, q_2 = 2_000_001; level (1, 0, m) with m = 600
        let s = Schedule::explicit(&mut cf, &[(1, bi(600))]).unwrap();
        let (set, geom) =
            build_level(&mut cf, &s.levels[0], Ratio::new(3, 2), Default::default(), 128).unwrap();
        assert_eq!(geom.case_tag, 1);
        // 600 = 30 * 20: exact divisibility, so exactly q_1 = 20 components
        assert_eq!(set.component_count(), 20);
        assert_eq!(geom.predicted_count, bi(20));
        for (lo, hi) in set.components() {
            assert_eq!(hi - lo, geom.length);
        }
    }

    #[test]
    fn exact_cap_is_enforced() {
        let mut cf = ContinuedFraction::synthesize(GrowthSpec::FixedType {
            beta: Ratio::new(3, 1),
            seed_q1: 10,
        })
        .unwrap();
        let q4 = cf.q(4).unwrap();
        let q5 = cf.q(5).unwrap();
        assert!(q5 > BigInt::from(EXACT_ARC_CAP));
        let s = Schedule::explicit(&mut cf, &[(4, q4 * 2)]).unwrap();
        let r = build_level(&mut cf, &s.levels[0], Ratio::new(2, 1), Default::default(), 128);
        assert!(matches!(r, Err(Error::InvalidInputs(_))));
    }

    #[test]
    fn intersect_keeps_nested_components() {
        let e1 = IntervalSet::from_raw_arcs(vec![
            (Rat::new(bi(0), bi(1)), Rat::new(bi(1), bi(4))),
            (Rat::new(bi(1), bi(2)), Rat::new(bi(3), bi(4))),
        ]);
        let e2 = IntervalSet::from_raw_arcs(vec![
            (Rat::new(bi(1), bi(16)), Rat::new(bi(2), bi(16))), // inside arc 1
            (Rat::new(bi(9), bi(16)), Rat::new(bi(10), bi(16))), // inside arc 2
            (Rat::new(bi(7), bi(16)), Rat::new(bi(35), bi(64))), // straddles: dropped
        ]);
        let (f2, counts) = intersect_levels(&[e1, e2]).unwrap();
        assert_eq!(counts, vec![2, 2]);
        assert_eq!(f2.component_count(), 2);
    }

    #[test]
    fn empty_intersection_is_reported() {
        let e1 = IntervalSet::from_raw_arcs(vec![(Rat::new(bi(0), bi(1)), Rat::new(bi(1), bi(4)))]);
        let e2 = IntervalSet::from_raw_arcs(vec![(Rat::new(bi(1), bi(2)), Rat::new(bi(3), bi(4)))]);
        match intersect_levels(&[e1, e2]) {
            Err(Error::EmptyIntersection { level }) => assert_eq!(level, 2),
            other => panic!("expected EmptyIntersection, got {other:?}"),
        }
    }

    #[test]
    fn mass_distribution_basics() {
        let f1 = IntervalSet::from_raw_arcs(vec![
            (Rat::new(bi(0), bi(1)), Rat::new(bi(1), bi(4))),
            (Rat::new(bi(1), bi(2)), Rat::new(bi(3), bi(4))),
        ]);
        let md = MassDistribution::new(vec![f1]).unwrap();
        assert_eq!(md.component_mass(1), Rat::new(bi(1), bi(2)));
        // whole circle
        assert_eq!(md.mass_of_ball(&Rat::new(bi(1), bi(3)), &Rat::new(bi(1), bi(2))).unwrap(), Rat::one());
        // ball centered in the first arc, radius half its length
        let m = md
            .mass_of_ball(&Rat::new(bi(1), bi(8)), &Rat::new(bi(1), bi(8)))
            .unwrap();
        assert_eq!(m, Rat::new(bi(1), bi(2)));
    }

    #[test]
    fn membership_exact_hit_and_oracle_free_checks() {
        let mut cf = ContinuedFraction::golden();
        // y = proxy of 100 alpha: n = 100 must be a certified witness of n^(-2)
        let m = cf.proxy_index(&(BigInt::from(1000) << 120)).unwrap();
        let pv = cf.proxy_value(m);
        let y = (&pv * Rat::from_integer(bi(100))).fract();
        let phi = ErrorFunction::power(Ratio::new(2, 1)).unwrap();
        let rep = membership_check(&mut cf, &phi, &y, 1000, 128).unwrap();
        assert!(rep.witnesses.contains(&100), "witnesses: {:?}", rep.witnesses);
        assert_eq!(rep.scanned_to, 1000);
        // every witness is genuine: recheck with doubled precision
        for &n in &rep.witnesses {
            let d = cf
                .alpha_enclosure(512)
                .unwrap()
                .scale_int(&bi(n as i64))
                .sub_rat(&y)
                .norm_mod1();
            let ph = phi.eval_bounds(&BigUint::from(n), 512).unwrap();
            assert_eq!(d.strictly_below(&ph), Some(true), "n = {n}");
        }
    }

    #[test]
    fn predicted_matches_exact_on_small_fixture() {
        let mut cf = ContinuedFraction::golden();
        let s = Schedule::explicit(&mut cf, &[(5, bi(13)), (10, bi(144))]).unwrap();
        let k = Ratio::new(2, 1);
        let pred = predict_levels(&mut cf, &s, k, 128).unwrap();
        let mut sets = Vec::new();
        for lvl in &s.levels {
            sets.push(build_level(&mut cf, lvl, k, Default::default(), 128).unwrap().0);
        }
        let (_, counts) = intersect_levels(&sets).unwrap();
        for (lv, &actual) in pred.iter().zip(counts.iter()) {
            let err = (lv.ln_count - (actual as f64).ln()).abs();
            assert!(err < 1.0, "level {}: predicted ln {} vs actual ln {}", lv.i, lv.ln_count, (actual as f64).ln());
        }
    }

    #[test]
    fn box_count_prediction_endpoints() {
        let mut cf = ContinuedFraction::golden();
        let s = Schedule::explicit(&mut cf, &[(5, bi(13)), (10, bi(144))]).unwrap();
        let pred = predict_levels(&mut cf, &s, Ratio::new(3, 1), 128).unwrap();
        // at delta = deepest length, count ~ deepest component count
        let deep = pred.last().unwrap();
        let n = ln_box_count(&pred, deep.ln_len).unwrap();
        assert!((n - deep.ln_count).abs() < 0.7, "{n} vs {}", deep.ln_count);
        // below resolution
        assert!(matches!(
            ln_box_count(&pred, deep.ln_len - 5.0),
            Err(Error::InsufficientDepth(_))
        ));
        // at delta = 1
        assert_eq!(ln_box_count(&pred, 0.0).unwrap(), 0.0);
    }
}
