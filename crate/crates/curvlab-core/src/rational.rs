//! Exact rational arithmetic. All curvature values in this crate are
//! `Rational`s; nothing curvature-facing ever touches floating point.
//! The magnitudes involved are tiny (denominators stay far below 10^7),
//! so `i64` components are ample.

use crate::error::Error;
use num_rational::Ratio;

/// Always stored reduced with a positive denominator (`Ratio` maintains this).
pub type Rational = Ratio<i64>;

/// Convenience constructor. Panics on a zero denominator, like `Ratio::new`.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Ratio::new(numer, denom)
}

/// Parses "p/q" or a bare integer "p".
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    s.trim()
        .parse()
        .map_err(|_| Error::Internal(format!("not a rational: {s:?}")))
}

/// Serde adapter rendering rationals as "p/q" strings in JSON.
pub mod rational_string {
    use super::{parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(|_| de::Error::custom(format!("bad rational {raw:?}")))
    }
}

/// Decimal rendering with `digits` places, rounded half away from zero.
/// Display-only; computations never use this.
pub fn to_decimal(r: Rational, digits: u32) -> String {
    let scale = 10i64.pow(digits);
    let scaled = r * Rational::from_integer(scale);
    let rounded = scaled.round().to_integer();
    let sign = if rounded < 0 { "-" } else { "" };
    let mag = rounded.abs();
    if digits == 0 {
        return format!("{sign}{mag}");
    }
    format!(
        "{sign}{}.{:0width$}",
        mag / scale,
        mag % scale,
        width = digits as usize
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_round_trip() {
        let cases = [
            (rational(3, 2), "3/2"),
            (rational(-1, 12), "-1/12"),
            (rational(2, 1), "2"),
            (rational(0, 5), "0"),
            (rational(6, 4), "3/2"),
        ];
        for (r, s) in cases {
            assert_eq!(r.to_string(), s);
            assert_eq!(parse_rational(s).unwrap(), r);
        }
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(rational(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(rational(-1, 12), 4), "-0.0833");
        assert_eq!(to_decimal(rational(3, 2), 2), "1.50");
        assert_eq!(to_decimal(rational(2, 1), 0), "2");
        assert_eq!(to_decimal(rational(1, 2), 0), "1");
    }
}
