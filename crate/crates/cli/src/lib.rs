//! Command-line front end: JSON experiment configs, presets, and the
//! end-to-end report pipeline.

pub mod pipeline;
pub mod spec;

use dlab_core::numeric::rat;
use dlab_core::Rat;
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use std::str::FromStr;

/// Render a rational in [0, 1] as a fixed-point decimal string with `digits`
/// fractional digits, rounded toward zero.
pub fn rat_to_decimal(x: &Rat, digits: u32) -> String {
    let pow = BigInt::from(10u32).pow(digits);
    let scaled = (x * Rat::from_integer(pow)).floor().to_integer();
    let neg = scaled.is_negative();
    let mag = scaled.magnitude().to_string();
    let mut frac = format!("{:0>width$}", mag, width = digits as usize);
    let int_part = frac.split_off(frac.len() - digits as usize);
    let (whole, frac) = (frac, int_part);
    let whole = if whole.is_empty() { "0".to_string() } else { whole };
    format!("{}{}.{}", if neg { "-" } else { "" }, whole, frac)
}

/// Parse a decimal string (as produced by [`rat_to_decimal`]) or a "p/q"
/// rational into an exact rational.
pub fn decimal_to_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rat::new(p, q));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(b) => (-Rat::one(), b),
        None => (Rat::one(), s),
    };
    match body.split_once('.') {
        Some((w, f)) => {
            let whole = BigInt::from_str(if w.is_empty() { "0" } else { w }).ok()?;
            if f.is_empty() {
                return Some(sign * Rat::from_integer(whole));
            }
            let frac = BigInt::from_str(f).ok()?;
            let den = BigInt::from(10u32).pow(f.len() as u32);
            Some(sign * (Rat::from_integer(whole) + Rat::new(frac, den)))
        }
        None => Some(sign * Rat::from_integer(BigInt::from_str(body).ok()?)),
    }
}

/// Parse a comma-separated list of rationals like "1/64,1/512,0.001".
pub fn parse_scale_list(s: &str) -> Option<Vec<Rat>> {
    s.split(',').map(|t| decimal_to_rat(t)).collect()
}

/// Convenience: small i64 rational.
pub fn small_rat(p: i64, q: i64) -> Rat {
    rat(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_round_trip() {
        let x = rat(1, 3);
        let s = rat_to_decimal(&x, 12);
        assert_eq!(s, "0.333333333333");
        let back = decimal_to_rat(&s).unwrap();
        assert!((&x - &back).abs() < rat(1, 1_000_000_000));
    }

    #[test]
    fn decimal_parses_fractions_and_integers() {
        assert_eq!(decimal_to_rat("3/8").unwrap(), rat(3, 8));
        assert_eq!(decimal_to_rat("2").unwrap(), rat(2, 1));
        assert_eq!(decimal_to_rat("0.25").unwrap(), rat(1, 4));
        assert_eq!(decimal_to_rat("-0.5").unwrap(), rat(-1, 2));
        assert!(decimal_to_rat("1/0").is_none());
    }

    #[test]
    fn zero_and_one_format_cleanly() {
        assert_eq!(rat_to_decimal(&Rat::zero(), 4), "0.0000");
        assert_eq!(rat_to_decimal(&Rat::one(), 4), "1.0000");
    }
}
