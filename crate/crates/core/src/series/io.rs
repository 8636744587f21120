//! CSV (`index,numerator,denominator`) and JSON (array of coefficient
//! strings) encodings. Exact series round-trip bit for bit.

use super::PowerSeries;
use crate::error::{Error, Result};
use crate::scalar::Coefficient;

pub const CSV_HEADER: &str = "index,numerator,denominator";

pub fn to_csv<C: Coefficient>(s: &PowerSeries<C>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (k, c) in s.coeffs().iter().enumerate() {
        let (n, d) = c.to_fraction();
        out.push_str(&format!("{k},{n},{d}\n"));
    }
    out
}

/// Parses [`to_csv`] output. Lines starting with `#` are ignored, and the
/// indices must run `0, 1, 2, ...` without gaps.
pub fn from_csv<C: Coefficient>(text: &str) -> Result<PowerSeries<C>> {
    let mut coeffs = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == CSV_HEADER {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("expected 3 fields: {line}")));
        }
        let idx: usize = fields[0]
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("index {}: {e}", fields[0])))?;
        if idx != coeffs.len() {
            return Err(Error::Parse(format!("index {idx} out of sequence")));
        }
        coeffs.push(C::from_fraction(fields[1], fields[2])?);
    }
    PowerSeries::new(coeffs)
}

pub fn to_json<C: Coefficient>(s: &PowerSeries<C>) -> String {
    let texts: Vec<String> = s.coeffs().iter().map(Coefficient::to_text).collect();
    serde_json::to_string(&texts).expect("string arrays always serialize")
}

pub fn from_json<C: Coefficient>(text: &str) -> Result<PowerSeries<C>> {
    let texts: Vec<String> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let coeffs = texts.iter().map(|t| C::parse_text(t)).collect::<Result<Vec<_>>>()?;
    PowerSeries::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FunctionSpec;
    use crate::series::lagrange_invert;
    use num_rational::BigRational;
    use proptest::prelude::*;

    #[test]
    fn lambert_series_round_trips_exactly() {
        let f: PowerSeries<BigRational> = FunctionSpec::ZExp.taylor(30).unwrap();
        let w = lagrange_invert(&f, 30).unwrap();
        assert_eq!(from_csv::<BigRational>(&to_csv(&w)).unwrap(), w);
        assert_eq!(from_json::<BigRational>(&to_json(&w)).unwrap(), w);
        assert!(to_csv(&w).lines().nth(3).unwrap() == "2,-1,1");
    }

    #[test]
    fn csv_rejects_gaps() {
        let text = "index,numerator,denominator\n0,0,1\n2,1,1\n";
        assert!(from_csv::<BigRational>(text).is_err());
    }

    proptest! {
        #[test]
        fn rational_series_round_trip(v in prop::collection::vec((-10_000i64..10_000, 1i64..10_000), 1..30)) {
            let s = PowerSeries::new(v.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect()).unwrap();
            prop_assert_eq!(from_csv::<BigRational>(&to_csv(&s)).unwrap(), s.clone());
            prop_assert_eq!(from_json::<BigRational>(&to_json(&s)).unwrap(), s);
        }

        #[test]
        fn float_series_round_trip(v in prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 1..30)) {
            let s = PowerSeries::new(v).unwrap();
            let back = from_json::<f64>(&to_json(&s)).unwrap();
            prop_assert!(back.coeffs().iter().zip(s.coeffs()).all(|(a, b)| a.to_bits() == b.to_bits()));
            let back = from_csv::<f64>(&to_csv(&s)).unwrap();
            prop_assert!(back.coeffs().iter().zip(s.coeffs()).all(|(a, b)| a.to_bits() == b.to_bits()));
        }
    }
}
