//! Continued fractions of irrationals in (0,1): lazy partial quotients,
//! exact convergents, rational enclosures of n*alpha distances, Diophantine
//! type estimation, and synthesis of quotient sequences whose denominators
//! follow a prescribed growth band.

use crate::error::{Error, Result};
use crate::numeric::{ln_big, rat_ceil, Bounds, Rat};
use num::bigint::{BigInt, BigUint};
use num::rational::Ratio;
use num::{One, Signed, ToPrimitive, Zero};

/// Where a quotient sequence came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Named(&'static str),
    Explicit,
    Synthesized,
}

/// One side of a growth band: the map q -> coeff * q^exp with positive
/// rational coefficient and exponent. All comparisons are exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthExpr {
    pub coeff: Ratio<i64>,
    pub exp: Ratio<i64>,
}

impl GrowthExpr {
    pub fn new(coeff: Ratio<i64>, exp: Ratio<i64>) -> Result<Self> {
        if !coeff.is_positive() || !exp.is_positive() {
            return Err(Error::InvalidInputs(
                "growth expression needs positive coefficient and exponent".into(),
            ));
        }
        let e = GrowthExpr { coeff, exp };
        e.exp_parts()?;
        Ok(e)
    }

    /// Parse the grammar `c*q^e`, `q^e`, `q`, with `c` and `e` rational.
    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (coeff_str, rest) = match s.split_once('*') {
            Some((c, r)) => (Some(c), r),
            None => (None, s.as_str()),
        };
        let coeff = match coeff_str {
            Some(c) => crate::numeric::parse_ratio(c)
                .ok_or_else(|| Error::InvalidInputs(format!("bad coefficient in '{s}'")))?,
            None => Ratio::one(),
        };
        let exp = if rest == "q" {
            Ratio::one()
        } else if let Some(e) = rest.strip_prefix("q^") {
            crate::numeric::parse_ratio(e)
                .ok_or_else(|| Error::InvalidInputs(format!("bad exponent in '{s}'")))?
        } else {
            return Err(Error::InvalidInputs(format!("cannot parse growth term '{s}'")));
        };
        GrowthExpr::new(coeff, exp)
    }

    fn exp_parts(&self) -> Result<(u32, u32)> {
        let a = self.exp.numer().to_u32();
        let b = self.exp.denom().to_u32();
        match (a, b) {
            (Some(a), Some(b)) if a >= 1 && b >= 1 && a <= 64 && b <= 64 => Ok((a, b)),
            _ => Err(Error::InvalidInputs("growth exponent out of range".into())),
        }
    }

    /// Is v >= coeff * q^exp? Exact in big integers.
    pub fn le_value(&self, q: &BigInt, v: &BigInt) -> bool {
        let (a, b) = self.exp_parts().expect("validated");
        let cn = BigInt::from(*self.coeff.numer());
        let cd = BigInt::from(*self.coeff.denom());
        // v >= (cn/cd) q^{a/b}  <=>  (v*cd)^b >= cn^b q^a
        (v * &cd).pow(b) >= cn.pow(b) * q.pow(a)
    }

    /// Is v <= coeff * q^exp? Exact in big integers.
    pub fn ge_value(&self, q: &BigInt, v: &BigInt) -> bool {
        let (a, b) = self.exp_parts().expect("validated");
        let cn = BigInt::from(*self.coeff.numer());
        let cd = BigInt::from(*self.coeff.denom());
        (v * &cd).pow(b) <= cn.pow(b) * q.pow(a)
    }

    /// ceil(coeff * q^exp), exactly.
    pub fn eval_ceil(&self, q: &BigInt) -> BigInt {
        let (a, b) = self.exp_parts().expect("validated");
        let cn = BigUint::try_from(BigInt::from(*self.coeff.numer())).unwrap();
        let cd = BigUint::try_from(BigInt::from(*self.coeff.denom())).unwrap();
        let qm = q.magnitude().clone();
        // value^b = cn^b q^a / cd^b ; floor of the b-th root of the floor
        let num = cn.pow(b) * qm.pow(a);
        let den = cd.pow(b);
        let f = crate::numeric::floor_nth_root(&(&num / &den), b);
        let exact = f.pow(b) * &den == num;
        let f = BigInt::from(f);
        if exact {
            f
        } else {
            f + BigInt::one()
        }
    }
}

/// Specification for synthesizing partial quotients.
#[derive(Clone, Debug)]
pub enum GrowthSpec {
    /// Denominator band lo(q) <= q_{n+1} <= hi(q), with a seed value for q_1.
    Band { lo: GrowthExpr, hi: GrowthExpr, seed_q1: u64 },
    /// Fixed Diophantine type beta: band q^beta <= q_{n+1} <= 2 q^beta.
    FixedType { beta: Ratio<i64>, seed_q1: u64 },
    /// Explicit quotient list.
    Explicit(Vec<u64>),
}

#[derive(Clone, Debug)]
enum Source {
    Golden,
    Sqrt2,
    EMinusTwo,
    Explicit(Vec<BigUint>),
    Band { lo: GrowthExpr, hi: GrowthExpr, seed: BigUint },
}

/// A continued fraction [0; a_1, a_2, ...] with a lazily forced quotient
/// stream and exact convergent cache. Convergent index k stores (p_k, q_k)
/// with (p_0, q_0) = (0, 1) and implicit seeds (p_{-1}, q_{-1}) = (1, 0).
#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    source: Source,
    provenance: Provenance,
    quotients: Vec<BigUint>,
    conv: Vec<(BigInt, BigInt)>,
}

impl ContinuedFraction {
    fn with_source(source: Source, provenance: Provenance) -> Self {
        ContinuedFraction {
            source,
            provenance,
            quotients: Vec::new(),
            conv: vec![(BigInt::zero(), BigInt::one())],
        }
    }

    /// The golden rotation: all partial quotients 1.
    pub fn golden() -> Self {
        Self::with_source(Source::Golden, Provenance::Named("golden"))
    }

    /// sqrt(2) - 1 = [0; 2, 2, 2, ...].
    pub fn sqrt2() -> Self {
        Self::with_source(Source::Sqrt2, Provenance::Named("sqrt2"))
    }

    /// e - 2 = [0; 1, 2, 1, 1, 4, 1, 1, 6, ...].
    pub fn e_minus_two() -> Self {
        Self::with_source(Source::EMinusTwo, Provenance::Named("e"))
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "golden" => Ok(Self::golden()),
            "sqrt2" => Ok(Self::sqrt2()),
            "e" => Ok(Self::e_minus_two()),
            other => Err(Error::InvalidInputs(format!("unknown alpha constant '{other}'"))),
        }
    }

    /// From an explicit list of partial quotients (all >= 1).
    pub fn from_quotients(quotients: Vec<u64>) -> Result<Self> {
        if quotients.is_empty() || quotients.iter().any(|&a| a == 0) {
            return Err(Error::InvalidInputs("quotients must be nonempty and >= 1".into()));
        }
        Ok(Self::with_source(
            Source::Explicit(quotients.into_iter().map(BigUint::from).collect()),
            Provenance::Explicit,
        ))
    }

    /// Synthesize quotients so the denominators obey the growth spec.
    /// Among admissible a_{n+1} the smallest is chosen.
    pub fn synthesize(spec: GrowthSpec) -> Result<Self> {
        match spec {
            GrowthSpec::Explicit(v) => {
                let mut cf = Self::from_quotients(v)?;
                cf.provenance = Provenance::Synthesized;
                Ok(cf)
            }
            GrowthSpec::FixedType { beta, seed_q1 } => {
                if beta < Ratio::one() {
                    return Err(Error::InvalidInputs("fixed type needs beta >= 1".into()));
                }
                let lo = GrowthExpr::new(Ratio::one(), beta)?;
                let hi = GrowthExpr::new(Ratio::from_integer(2), beta)?;
                Self::synthesize(GrowthSpec::Band { lo, hi, seed_q1 })
            }
            GrowthSpec::Band { lo, hi, seed_q1 } => {
                if seed_q1 == 0 {
                    return Err(Error::InvalidInputs("seed quotient must be >= 1".into()));
                }
                let mut cf = Self::with_source(
                    Source::Band { lo, hi, seed: BigUint::from(seed_q1) },
                    Provenance::Synthesized,
                );
                // Force a couple of terms so infeasible bands fail early.
                cf.ensure(2)?;
                Ok(cf)
            }
        }
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Number of convergents currently forced (highest valid index).
    pub fn forced_depth(&self) -> usize {
        self.conv.len() - 1
    }

    fn next_quotient(&self, k: usize) -> Result<BigUint> {
        debug_assert!(k >= 1);
        match &self.source {
            Source::Golden => Ok(BigUint::one()),
            Source::Sqrt2 => Ok(BigUint::from(2u32)),
            Source::EMinusTwo => {
                // a_k = 2(k+1)/3 when k = 2 mod 3, else 1
                if k % 3 == 2 {
                    Ok(BigUint::from(2 * (k as u64 + 1) / 3))
                } else {
                    Ok(BigUint::one())
                }
            }
            Source::Explicit(v) => {
                v.get(k - 1).cloned().ok_or(Error::ExhaustedQuotients { needed: k })
            }
            Source::Band { lo, hi, seed } => {
                if k == 1 {
                    return Ok(seed.clone());
                }
                let (_, q1) = &self.conv[k - 1];
                let (_, q2) = &self.conv[k - 2];
                let target = lo.eval_ceil(q1);
                let base = Rat::new(target - q2, q1.clone());
                let a0 = rat_ceil(&base).max(BigInt::one());
                let start = if a0 > BigInt::one() { &a0 - BigInt::one() } else { a0.clone() };
                let mut a = start;
                for _ in 0..3 {
                    let cand = &a * q1 + q2;
                    if lo.le_value(q1, &cand) && hi.ge_value(q1, &cand) {
                        return Ok(a.magnitude().clone());
                    }
                    a += BigInt::one();
                }
                Err(Error::InfeasibleGrowth { index: k })
            }
        }
    }

    /// Ensure convergents up to index n exist.
    pub fn ensure(&mut self, n: usize) -> Result<()> {
        while self.conv.len() <= n {
            let k = self.conv.len();
            let a = self.next_quotient(k)?;
            let ab = BigInt::from(a.clone());
            let (p1, q1) = self.conv[k - 1].clone();
            let (p2, q2) = if k >= 2 {
                self.conv[k - 2].clone()
            } else {
                (BigInt::one(), BigInt::zero())
            };
            let p = &ab * &p1 + &p2;
            let q = &ab * &q1 + &q2;
            debug_assert!(
                (&p * &q1 - &p1 * &q).magnitude().is_one(),
                "determinant identity violated"
            );
            self.conv.push((p, q));
            self.quotients.push(a);
        }
        Ok(())
    }

    /// Partial quotient a_k (k >= 1).
    pub fn quotient(&mut self, k: usize) -> Result<BigUint> {
        if k == 0 {
            return Err(Error::InvalidInputs("quotient index starts at 1".into()));
        }
        self.ensure(k)?;
        Ok(self.quotients[k - 1].clone())
    }

    /// Convergents (p_0,q_0) .. (p_n,q_n).
    pub fn convergents(&mut self, n: usize) -> Result<&[(BigInt, BigInt)]> {
        self.ensure(n)?;
        Ok(&self.conv[..=n])
    }

    pub fn q(&mut self, k: usize) -> Result<BigInt> {
        self.ensure(k)?;
        Ok(self.conv[k].1.clone())
    }

    pub fn p(&mut self, k: usize) -> Result<BigInt> {
        self.ensure(k)?;
        Ok(self.conv[k].0.clone())
    }

    /// Smallest forced index M with q_M * q_{M+1} >= min_qq; alpha then lies
    /// strictly between p_M/q_M and p_{M+1}/q_{M+1}, a bracket of width
    /// < 1/min_qq.
    pub fn proxy_index(&mut self, min_qq: &BigInt) -> Result<usize> {
        let mut m = 1usize;
        loop {
            self.ensure(m + 1)?;
            let prod = &self.conv[m].1 * &self.conv[m + 1].1;
            if &prod >= min_qq {
                return Ok(m);
            }
            m += 1;
        }
    }

    /// Exact rational bracket of alpha from consecutive convergents at M.
    pub fn alpha_bounds_at(&self, m: usize) -> Bounds {
        let (p0, q0) = &self.conv[m];
        let (p1, q1) = &self.conv[m + 1];
        let a = Rat::new(p0.clone(), q0.clone());
        let b = Rat::new(p1.clone(), q1.clone());
        // even index below alpha, odd above
        if m % 2 == 0 {
            Bounds::new(a, b)
        } else {
            Bounds::new(b, a)
        }
    }

    /// Enclosure of alpha of width < 2^-bits.
    pub fn alpha_enclosure(&mut self, bits: u32) -> Result<Bounds> {
        let m = self.proxy_index(&(BigInt::one() << bits))?;
        Ok(self.alpha_bounds_at(m))
    }

    /// Rational enclosure of ||n*alpha|| of width < 2^(1-bits).
    pub fn nearest_int_distance(&mut self, n: &BigInt, bits: u32) -> Result<Bounds> {
        if !n.is_positive() {
            return Err(Error::InvalidInputs("nearest_int_distance needs n >= 1".into()));
        }
        let m = self.proxy_index(&(n << bits))?;
        let b = self.alpha_bounds_at(m).scale_int(n);
        Ok(b.norm_mod1())
    }

    /// Enclosure of ||q_k * alpha|| = |q_k alpha - p_k|.
    pub fn norm_q(&mut self, k: usize, bits: u32) -> Result<Bounds> {
        self.ensure(k + 1)?;
        let qk = self.conv[k].1.clone();
        let pk = self.conv[k].0.clone();
        let m = self.proxy_index(&(&qk << bits))?;
        let m = m.max(k + 1);
        self.ensure(m + 1)?;
        let b = self.alpha_bounds_at(m).scale_int(&qk);
        Ok(b.sub_rat(&Rat::from_integer(pk)).abs())
    }

    /// Exact rational proxy for alpha at forced index m: p_m / q_m.
    pub fn proxy_value(&self, m: usize) -> Rat {
        let (p, q) = &self.conv[m];
        Rat::new(p.clone(), q.clone())
    }

    /// Estimate the Diophantine type over a window of convergent indices:
    /// beta_hat = max over n in [first, last-1] of log q_{n+1} / log q_n.
    pub fn estimate_type_window(&mut self, first: usize, last: usize) -> Result<TypeEstimate> {
        if first < 1 || last < first + 1 {
            return Err(Error::InsufficientDepth(
                "type estimation needs at least two convergents".into(),
            ));
        }
        self.ensure(last)?;
        let mut ratios = Vec::new();
        for n in first..last {
            let a = ln_big(&self.conv[n].1);
            let b = ln_big(&self.conv[n + 1].1);
            if a <= 0.0 {
                return Err(Error::InsufficientDepth(
                    "type ratio undefined while q_n = 1; start the window later".into(),
                ));
            }
            ratios.push(b / a);
        }
        let beta_hat = ratios.iter().cloned().fold(f64::MIN, f64::max);
        Ok(TypeEstimate { beta_hat, window: (first, last), ratios })
    }

    /// Type estimate over the full window (1, depth).
    pub fn estimate_type(&mut self, depth: usize) -> Result<TypeEstimate> {
        self.estimate_type_window(1, depth)
    }
}

/// Result of a finite-window Diophantine type estimate.
#[derive(Clone, Debug)]
pub struct TypeEstimate {
    pub beta_hat: f64,
    pub window: (usize, usize),
    pub ratios: Vec<f64>,
}
