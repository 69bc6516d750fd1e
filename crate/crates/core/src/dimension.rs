//! Closed-form dimension values, the one-variable landscape optimization,
//! the log-convexity inequality, cover-sum decay data, and box-counting
//! reports with log-log slope fits.

use crate::error::{Error, Result};
use crate::interval::IntervalSet;
use crate::numeric::{ln_rat, Rat};
use crate::sets::{ln_box_count, PredictedLevel};
use num::{One, Signed};

fn rat_min(a: Rat, b: Rat) -> Rat {
    if a <= b { a } else { b }
}

fn rat_max(a: Rat, b: Rat) -> Rat {
    if a >= b { a } else { b }
}

fn check_nbk(n: &Rat, b: &Rat, k: &Rat) -> Result<()> {
    if *n < Rat::one() || n > b || *k <= Rat::one() {
        return Err(Error::InvalidInputs(format!(
            "need 1 <= N <= B and K > 1; got N = {n}, B = {b}, K = {k}"
        )));
    }
    Ok(())
}

/// S(N, B, K) = min(N/K, max(1/K, 1/(1 + B - N))), exact.
pub fn s_formula(n: &Rat, b: &Rat, k: &Rat) -> Result<Rat> {
    check_nbk(n, b, k)?;
    let inv_k = Rat::one() / k;
    let denom = Rat::one() + b - n;
    Ok(rat_min(n / k, rat_max(inv_k, Rat::one() / denom)))
}

/// The same value via its piecewise form in K (small/middle/large K).
pub fn s_piecewise(n: &Rat, b: &Rat, k: &Rat) -> Result<Rat> {
    check_nbk(n, b, k)?;
    let w = Rat::one() + b - n; // 1 + B - N >= 1
    Ok(if *k < w {
        Rat::one() / k
    } else if *k <= n * &w {
        Rat::one() / w
    } else {
        n / k
    })
}

/// The dichotomy behind the case split: B >= K makes N/K the larger branch,
/// B < K the smaller. Returns (left, right) of the implied strict inequality.
pub fn case_fact(n: &Rat, b: &Rat, k: &Rat) -> Result<(Rat, Rat, bool)> {
    check_nbk(n, b, k)?;
    let lhs = n / k;
    let rhs = Rat::one() / (Rat::one() + b - n);
    let holds = if b >= k { lhs > rhs } else { Rat::one() / k < rhs };
    Ok((lhs, rhs, holds))
}

fn check_ulb(u: &Rat, l: &Rat, beta: &Rat) -> Result<()> {
    if l.is_negative() || l > u || *u > Rat::one() || *beta < Rat::one() {
        return Err(Error::InvalidInputs(format!(
            "need 0 <= l <= u <= 1 and beta >= 1; got u = {u}, l = {l}, beta = {beta}"
        )));
    }
    Ok(())
}

/// min(u, max(l, (1+u)/(1+beta))), exact; asserts the equivalent
/// max(l, min(u, (1+u)/(1+beta))) form agrees.
pub fn theorem2_lower_bound(u: &Rat, l: &Rat, beta: &Rat) -> Result<Rat> {
    check_ulb(u, l, beta)?;
    let mid = (Rat::one() + u) / (Rat::one() + beta);
    let form1 = rat_min(u.clone(), rat_max(l.clone(), mid.clone()));
    let form2 = rat_max(l.clone(), rat_min(u.clone(), mid));
    debug_assert_eq!(form1, form2);
    if form1 != form2 {
        return Err(Error::InvalidInputs("lower-bound forms disagree".into()));
    }
    Ok(form1)
}

/// Both written forms of the lower bound, for property checking.
pub fn theorem2_both_forms(u: &Rat, l: &Rat, beta: &Rat) -> Result<(Rat, Rat)> {
    check_ulb(u, l, beta)?;
    let mid = (Rat::one() + u) / (Rat::one() + beta);
    Ok((
        rat_min(u.clone(), rat_max(l.clone(), mid.clone())),
        rat_max(l.clone(), rat_min(u.clone(), mid)),
    ))
}

/// Grid minimization of M(N) = min(u, max(u/N, 1/(1+beta-N))) over N in
/// [1, beta]. Returns (argmin, min value).
pub fn landscape_min(u: f64, beta: f64, grid: usize) -> Result<(f64, f64)> {
    if !(0.0 < u && u <= 1.0) || beta < 1.0 || grid < 1000 {
        return Err(Error::InvalidInputs(
            "need u in (0,1], beta >= 1, grid >= 1000".into(),
        ));
    }
    let m = |n: f64| u.min((u / n).max(1.0 / (1.0 + beta - n)));
    let mut best_n = 1.0;
    let mut best_v = m(1.0);
    for j in 1..=grid {
        let n = 1.0 + (beta - 1.0) * j as f64 / grid as f64;
        let v = m(n);
        if v < best_v {
            best_v = v;
            best_n = n;
        }
    }
    Ok((best_n, best_v))
}

/// The interpolation inequality: for 1 > a > b > 0, 1 > c > d > 0 and
/// delta in [0, 1],
/// log(da + (1-d)c) / log(db + (1-d)d') >= min(log a/log b, log c/log d').
pub fn log_convexity_check(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    delta: f64,
) -> Result<(f64, f64, bool)> {
    if !(0.0 < b && b < a && a < 1.0 && 0.0 < d && d < c && c < 1.0) || !(0.0..=1.0).contains(&delta)
    {
        return Err(Error::InvalidInputs(format!(
            "need 1 > a > b > 0, 1 > c > d > 0, delta in [0,1]; got a={a}, b={b}, c={c}, d={d}, delta={delta}"
        )));
    }
    let lhs = (delta * a + (1.0 - delta) * c).ln() / (delta * b + (1.0 - delta) * d).ln();
    let rhs = (a.ln() / b.ln()).min(c.ln() / d.ln());
    Ok((lhs, rhs, lhs >= rhs - 1e-12))
}

/// ln of the per-level cover sums count * length^s.
pub fn cover_sum_ln(levels: &[(f64, f64)], s: f64) -> Vec<f64> {
    levels.iter().map(|(ln_count, ln_len)| ln_count + s * ln_len).collect()
}

/// Least-squares slope of y against x with its standard error.
pub fn slope_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert!(xs.len() == ys.len() && xs.len() >= 2);
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xm).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let slope = sxy / sxx;
    if xs.len() == 2 {
        return (slope, 0.0);
    }
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let fit = ym + slope * (x - xm);
            (y - fit).powi(2)
        })
        .sum();
    let stderr = (ss_res / (n - 2.0) / sxx).sqrt();
    (slope, stderr)
}

#[derive(Clone, Debug)]
pub struct BoxCountReport {
    /// -ln of each scale, ascending (coarse to fine)
    pub neg_ln_scales: Vec<f64>,
    /// ln of the box count at each scale
    pub ln_counts: Vec<f64>,
    /// slope over the 3 deepest scales, with standard error
    pub slope: f64,
    pub stderr: f64,
    /// slope between consecutive scale pairs
    pub local_slopes: Vec<f64>,
}

fn report_from_pairs(mut pairs: Vec<(f64, f64)>) -> Result<BoxCountReport> {
    if pairs.len() < 2 {
        return Err(Error::InvalidInputs("need at least two usable scales".into()));
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    let local_slopes: Vec<f64> = xs
        .windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
        .collect();
    let fit_n = xs.len().min(3);
    let (slope, stderr) = slope_fit(&xs[xs.len() - fit_n..], &ys[ys.len() - fit_n..]);
    Ok(BoxCountReport { neg_ln_scales: xs, ln_counts: ys, slope, stderr, local_slopes })
}

/// Exact grid-cell counting on a materialized set.
pub fn box_count_exact(set: &IntervalSet, scales: &[Rat]) -> Result<BoxCountReport> {
    if set.is_empty() {
        return Err(Error::InvalidInputs("empty set".into()));
    }
    let mut pairs = Vec::new();
    for d in scales {
        if !d.is_positive() || *d >= Rat::one() {
            return Err(Error::InvalidInputs(format!("scale {d} outside (0, 1)")));
        }
        let count = set.count_boxes(d);
        pairs.push((-ln_rat(d), (count as f64).ln()));
    }
    report_from_pairs(pairs)
}

/// Box counting against predicted log-geometry (for depths where exact arcs
/// are not materializable).
pub fn box_count_predicted(pred: &[PredictedLevel], ln_scales: &[f64]) -> Result<BoxCountReport> {
    let mut pairs = Vec::new();
    for &ln_d in ln_scales {
        let ln_n = ln_box_count(pred, ln_d)?;
        pairs.push((-ln_d, ln_n));
    }
    report_from_pairs(pairs)
}
