//! JSON/CLI specifications for alpha, phi, schedules, and whole experiments.

use dlab_core::cf::{ContinuedFraction, GrowthExpr, GrowthSpec};
use dlab_core::error::{Error, Result};
use dlab_core::numeric::parse_ratio;
use dlab_core::phi::ErrorFunction;
use dlab_core::schedule::{Schedule, DEFAULT_GROWTH_EXP};
use num::bigint::BigInt;
use num::rational::Ratio;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

fn ratio_field(s: &str, what: &str) -> Result<Ratio<i64>> {
    parse_ratio(s).ok_or_else(|| Error::InvalidInputs(format!("bad rational for {what}: {s}")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    /// "golden" | "sqrt2" | "e"
    Named(String),
    /// {"quotients":[1,2,3]}
    Quotients { quotients: Vec<u64> },
    /// {"kind":"band","lo":"q^2","hi":"2*q^2","seed_q1":2}
    /// or {"kind":"fixed-type","beta":"3","seed_q1":10}
    Growth {
        kind: String,
        #[serde(default)]
        lo: Option<String>,
        #[serde(default)]
        hi: Option<String>,
        #[serde(default)]
        beta: Option<String>,
        seed_q1: u64,
    },
}

impl AlphaSpec {
    /// CLI strings: a name, a JSON object, or a JSON array of quotients.
    pub fn parse(s: &str) -> Result<AlphaSpec> {
        let t = s.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t)
                .map_err(|e| Error::InvalidInputs(format!("bad alpha spec: {e}")));
        }
        if t.starts_with('[') {
            let q: Vec<u64> = serde_json::from_str(t)
                .map_err(|e| Error::InvalidInputs(format!("bad quotient list: {e}")))?;
            return Ok(AlphaSpec::Quotients { quotients: q });
        }
        Ok(AlphaSpec::Named(t.to_string()))
    }

    pub fn build(&self) -> Result<ContinuedFraction> {
        match self {
            AlphaSpec::Named(n) => ContinuedFraction::by_name(n),
            AlphaSpec::Quotients { quotients } => {
                ContinuedFraction::from_quotients(quotients.clone())
            }
            AlphaSpec::Growth { kind, lo, hi, beta, seed_q1 } => match kind.as_str() {
                "band" => {
                    let lo = GrowthExpr::parse(lo.as_deref().ok_or_else(|| {
                        Error::InvalidInputs("band needs \"lo\"".into())
                    })?)?;
                    let hi = GrowthExpr::parse(hi.as_deref().ok_or_else(|| {
                        Error::InvalidInputs("band needs \"hi\"".into())
                    })?)?;
                    ContinuedFraction::synthesize(GrowthSpec::Band {
                        lo,
                        hi,
                        seed_q1: *seed_q1,
                    })
                }
                "fixed-type" => {
                    let beta = ratio_field(
                        beta.as_deref()
                            .ok_or_else(|| Error::InvalidInputs("fixed-type needs \"beta\"".into()))?,
                        "beta",
                    )?;
                    ContinuedFraction::synthesize(GrowthSpec::FixedType { beta, seed_q1: *seed_q1 })
                }
                other => Err(Error::InvalidInputs(format!("unknown growth kind {other}"))),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhiSpec {
    pub family: String,
    #[serde(default)]
    pub gamma: Option<String>,
    #[serde(default)]
    pub c: Option<String>,
    #[serde(default)]
    pub l: Option<String>,
    #[serde(default)]
    pub u: Option<String>,
    #[serde(default)]
    pub beta: Option<String>,
    #[serde(default)]
    pub values: Option<Vec<String>>,
    /// how many convergent denominators to hand to the banded families
    #[serde(default)]
    pub q_levels: Option<usize>,
}

impl PhiSpec {
    pub fn parse(s: &str) -> Result<PhiSpec> {
        serde_json::from_str(s.trim())
            .map_err(|e| Error::InvalidInputs(format!("bad phi spec: {e}")))
    }

    fn lu(&self) -> Result<(Ratio<i64>, Ratio<i64>)> {
        let l = ratio_field(
            self.l.as_deref().ok_or_else(|| Error::InvalidInputs("family needs \"l\"".into()))?,
            "l",
        )?;
        let u = ratio_field(
            self.u.as_deref().ok_or_else(|| Error::InvalidInputs("family needs \"u\"".into()))?,
            "u",
        )?;
        Ok((l, u))
    }

    fn q_sequence(&self, cf: &mut ContinuedFraction) -> Result<Vec<num::bigint::BigUint>> {
        let depth = self.q_levels.unwrap_or(12);
        let mut qs = Vec::with_capacity(depth);
        for k in 1..=depth {
            qs.push(cf.q(k)?.magnitude().clone());
        }
        Ok(qs)
    }

    /// The banded families borrow the q-sequence of the experiment's alpha.
    pub fn build(&self, cf: &mut ContinuedFraction) -> Result<ErrorFunction> {
        match self.family.as_str() {
            "power" => ErrorFunction::power(ratio_field(
                self.gamma
                    .as_deref()
                    .ok_or_else(|| Error::InvalidInputs("power needs \"gamma\"".into()))?,
                "gamma",
            )?),
            "linear" => {
                let c = ratio_field(
                    self.c.as_deref().unwrap_or("1"),
                    "c",
                )?;
                ErrorFunction::linear(dlab_core::numeric::ratio_to_rat(&c))
            }
            "thm5" => {
                let (l, u) = self.lu()?;
                ErrorFunction::thm5(l, u)
            }
            "thm4" => {
                let (l, u) = self.lu()?;
                let beta = ratio_field(
                    self.beta
                        .as_deref()
                        .ok_or_else(|| Error::InvalidInputs("thm4 needs \"beta\"".into()))?,
                    "beta",
                )?;
                let qs = self.q_sequence(cf)?;
                ErrorFunction::thm4(l, u, beta, qs)
            }
            "example3" => {
                let (l, u) = self.lu()?;
                let qs = self.q_sequence(cf)?;
                ErrorFunction::example3(l, u, qs)
            }
            "table" => {
                let vals = self
                    .values
                    .as_ref()
                    .ok_or_else(|| Error::InvalidInputs("table needs \"values\"".into()))?
                    .iter()
                    .map(|v| Ok(dlab_core::numeric::ratio_to_rat(&ratio_field(v, "value")?)))
                    .collect::<Result<Vec<_>>>()?;
                ErrorFunction::table(vals)
            }
            other => Err(Error::InvalidInputs(format!("unknown phi family {other}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScheduleSpec {
    Auto {
        auto: AutoSchedule,
    },
    Explicit {
        /// [[n_i, "m_i"], ...]
        explicit: Vec<(usize, String)>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutoSchedule {
    pub depth: usize,
    #[serde(default)]
    pub growth_exp: Option<u32>,
}

impl ScheduleSpec {
    pub fn build(&self, cf: &mut ContinuedFraction, phi: &ErrorFunction) -> Result<Schedule> {
        match self {
            ScheduleSpec::Auto { auto } => Schedule::auto(
                cf,
                phi,
                auto.depth,
                auto.growth_exp.unwrap_or(DEFAULT_GROWTH_EXP),
            ),
            ScheduleSpec::Explicit { explicit } => {
                let pairs = explicit
                    .iter()
                    .map(|(n, m)| {
                        BigInt::from_str(m)
                            .map(|m| (*n, m))
                            .map_err(|e| Error::InvalidInputs(format!("bad m_i {m}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Schedule::explicit(cf, &pairs)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub alpha: AlphaSpec,
    pub phi: PhiSpec,
    pub schedule: ScheduleSpec,
    /// exact rational "p/q", or "auto" for K = N-hat / u-hat
    pub k: String,
    #[serde(default)]
    pub precision_bits: Option<u32>,
    /// slope tolerance used by the report's hard assertions
    #[serde(default)]
    pub slope_tol: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<ExperimentConfig> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInputs(format!("bad config: {e}")))
    }

    pub fn preset(name: &str) -> Result<ExperimentConfig> {
        let json = match name {
            "gamma-law" => {
                r#"{
                  "alpha": "golden",
                  "phi": {"family": "power", "gamma": "2"},
                  "schedule": {"auto": {"depth": 3}},
                  "k": "auto"
                }"#
            }
            "example3" => {
                r#"{
                  "alpha": {"kind": "band", "lo": "q^2", "hi": "2*q^2", "seed_q1": 2},
                  "phi": {"family": "example3", "l": "1/3", "u": "1/2", "q_levels": 16},
                  "schedule": {"auto": {"depth": 3}},
                  "k": "auto"
                }"#
            }
            "thm5-tower" => {
                r#"{
                  "alpha": "golden",
                  "phi": {"family": "thm5", "l": "1/3", "u": "1/2"},
                  "schedule": {"auto": {"depth": 3}},
                  "k": "auto"
                }"#
            }
            other => {
                return Err(Error::InvalidInputs(format!(
                    "unknown preset {other}; expected gamma-law | example3 | thm5-tower"
                )))
            }
        };
        ExperimentConfig::from_json(json)
    }
}

/// Default precision: DLAB_PRECISION_BITS env var, else 128.
pub fn default_bits() -> u32 {
    std::env::var("DLAB_PRECISION_BITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(128)
}
