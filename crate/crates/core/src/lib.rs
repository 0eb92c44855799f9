//! Minimum triangle-free 2-edge-covers and 2-edge-connected spanning
//! subgraphs.
//!
//! The crate computes minimum triangle-free 2-edge-covers via the duality
//! with maximum triangle-free 2-matchings, rewrites covers into
//! semi-canonical form with a terminating local-search system, and glues
//! semi-canonical covers into 2-edge-connected spanning subgraphs, with
//! exact brute-force oracles for verification at small scale.

pub mod canonical;
pub mod cover;
pub mod generate;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod pipeline;
pub mod structured;

pub use graph::{Decomposition, EdgeSet, Graph};

/// Exact rational scalar used for all bound accounting.
pub type Rational = num_rational::Rational64;

/// Parses a rational from `a/b`, an integer, or a finite decimal such as
/// `0.05` (kept exact).
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: i64 = den.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if d == 0 {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let sign = if whole.trim_start().starts_with('-') { -1 } else { 1 };
        let w: i64 = if whole.is_empty() || whole == "-" {
            0
        } else {
            whole.parse().map_err(|_| format!("bad number {s:?}"))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad number {s:?}"));
        }
        let digits: i64 = frac.parse().map_err(|_| format!("bad number {s:?}"))?;
        let scale = 10i64
            .checked_pow(frac.len() as u32)
            .ok_or_else(|| format!("too many decimal digits in {s:?}"))?;
        return Ok(Rational::from_integer(w) + Rational::new(sign * digits, scale));
    }
    let n: i64 = s.parse().map_err(|_| format!("bad number {s:?}"))?;
    Ok(Rational::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/24").unwrap(), Rational::new(1, 24));
        assert_eq!(parse_rational("0.05").unwrap(), Rational::new(1, 20));
        assert_eq!(parse_rational("3").unwrap(), Rational::from_integer(3));
        assert_eq!(parse_rational("-0.5").unwrap(), Rational::new(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
