//! Parsing for unit-suffixed numeric literals such as `28 ns` or `18GHz`.
//!
//! A bare number is taken in base units (seconds, hertz). Suffixes are
//! case-insensitive and may be separated from the number by whitespace.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("cannot parse `{text}` as {expected}")]
pub struct UnitError {
    pub text: String,
    pub expected: &'static str,
}

const TIME_UNITS: &[(&str, i32)] = &[("s", 0), ("ms", -3), ("us", -6), ("ns", -9), ("ps", -12)];

const FREQ_UNITS: &[(&str, i32)] = &[("hz", 0), ("khz", 3), ("mhz", 6), ("ghz", 9), ("thz", 12)];

fn parse_with(text: &str, units: &[(&str, i32)], expected: &'static str) -> Result<f64, UnitError> {
    let err = || UnitError { text: text.to_string(), expected };
    let t = text.trim();
    let suffix_len = t.chars().rev().take_while(|c| c.is_ascii_alphabetic()).count();
    let (num, suffix) = t.split_at(t.len() - suffix_len);
    let num = num.trim();
    let exponent = if suffix.is_empty() {
        0
    } else {
        let lower = suffix.to_ascii_lowercase();
        units.iter().find(|(u, _)| *u == lower).ok_or_else(err)?.1
    };
    // Fold the unit into the numeral's decimal exponent where possible, so
    // "28 ns" parses to exactly the same double as the literal 28e-9.
    let value: f64 = if num.contains(['e', 'E']) {
        let v: f64 = num.parse().map_err(|_| err())?;
        v * 10f64.powi(exponent)
    } else {
        format!("{num}e{exponent}").parse().map_err(|_| err())?
    };
    if !value.is_finite() {
        return Err(err());
    }
    Ok(value)
}

/// Parse a duration: `28ns`, `28 ns`, `2.8e-8`, `0.5us`, …
pub fn parse_seconds(text: &str) -> Result<f64, UnitError> {
    parse_with(text, TIME_UNITS, "a time (s, ms, us, ns, ps)")
}

/// Parse a frequency: `18GHz`, `18 ghz`, `1.8e10`, `11250 kHz`, …
pub fn parse_hertz(text: &str) -> Result<f64, UnitError> {
    parse_with(text, FREQ_UNITS, "a frequency (Hz, kHz, MHz, GHz, THz)")
}
