//! JSON output with byte-stable numbers.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// A double written with 17 significant digits, which round-trips exactly.
/// Non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Num {
    pub fn render(self) -> String {
        let x = self.0;
        if !x.is_finite() {
            return "null".to_string();
        }
        if x == 0.0 {
            return if x.is_sign_negative() { "-0.0" } else { "0.0" }.to_string();
        }
        let sci = format!("{x:.16e}");
        let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
        let exp: i32 = exp.parse().expect("integer exponent");
        if (-5..17).contains(&exp) {
            let decimals = (16 - exp).max(0) as usize;
            let fixed = format!("{x:.decimals$}");
            if fixed.contains('.') { fixed } else { fixed + ".0" }
        } else {
            format!("{mantissa}e{exp}")
        }
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(self.render()).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Num(x)
    }
}

pub fn nums(xs: &[f64]) -> Vec<Num> {
    xs.iter().copied().map(Num).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(Num(std::f64::consts::FRAC_PI_2).render(), "1.5707963267948966");
        assert_eq!(Num(1.0).render(), "1.0000000000000000");
        assert_eq!(Num(-2.5e-9).render(), "-2.5000000000000001e-9");
        assert_eq!(Num(1e300).render(), "1.0000000000000001e300");
        assert_eq!(Num(123456.0).render(), "123456.00000000000");
        assert_eq!(Num(f64::NAN).render(), "null");
    }

    #[test]
    fn round_trips() {
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e-7, 6.02214076e23, -4.0 / 3.0] {
            let back: f64 = Num(x).render().parse().unwrap();
            assert_eq!(back, x);
        }
    }

    #[test]
    fn serializes_inside_structs() {
        #[derive(Serialize)]
        struct Out {
            value: Num,
        }
        let s = serde_json::to_string(&Out { value: Num(0.5) }).unwrap();
        assert_eq!(s, r#"{"value":0.50000000000000000}"#);
    }
}
