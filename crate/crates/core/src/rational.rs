//! Exact rationals, serialized as `{"num": p, "den": q}` in lowest terms.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational(Ratio<i64>);

impl Rational {
    /// Panics if `den` is zero.
    pub fn new(num: i64, den: i64) -> Self {
        Rational(Ratio::new(num, den))
    }

    pub fn integer(value: i64) -> Self {
        Rational(Ratio::from_integer(value))
    }

    pub fn num(&self) -> i64 {
        *self.0.numer()
    }

    pub fn den(&self) -> i64 {
        *self.0.denom()
    }

    pub fn ceil(&self) -> i64 {
        self.0.ceil().to_integer()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.num())
        } else {
            write!(f, "{}/{}", self.num(), self.den())
        }
    }
}

impl std::str::FromStr for Rational {
    type Err = String;

    /// Accepts `p/q` or a plain integer.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |_| format!("`{s}` is not a rational (expected p/q)");
        match s.split_once('/') {
            Some((p, q)) => {
                let (p, q): (i64, i64) = (p.trim().parse().map_err(bad)?, q.trim().parse().map_err(bad)?);
                if q == 0 {
                    return Err(format!("`{s}` has a zero denominator"));
                }
                Ok(Rational::new(p, q))
            }
            None => s.trim().parse().map(Rational::integer).map_err(bad),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Repr {
    num: i64,
    den: i64,
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        Repr {
            num: self.num(),
            den: self.den(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = Repr::deserialize(deserializer)?;
        if r.den == 0 {
            return Err(serde::de::Error::custom("rational with zero denominator"));
        }
        Ok(Rational::new(r.num, r.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_json() {
        let r = Rational::new(8, 10);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"num":4,"den":5}"#);
        let back: Rational = serde_json::from_str(r#"{"num":-6,"den":4}"#).unwrap();
        assert_eq!(back, Rational::new(-3, 2));
        assert!(serde_json::from_str::<Rational>(r#"{"num":1,"den":0}"#).is_err());
    }

    #[test]
    fn ceiling_and_order() {
        assert_eq!(Rational::new(4, 5).ceil(), 1);
        assert_eq!(Rational::new(8, 4).ceil(), 2);
        assert_eq!(Rational::new(0, 7).ceil(), 0);
        assert!(Rational::new(4, 5) < Rational::integer(1));
        assert_eq!(Rational::new(4, 5).to_string(), "4/5");
        assert_eq!(Rational::new(4, 2).to_string(), "2");
    }

    #[test]
    fn parsing() {
        assert_eq!("2/4".parse::<Rational>(), Ok(Rational::new(1, 2)));
        assert_eq!("3".parse::<Rational>(), Ok(Rational::integer(3)));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("0.5".parse::<Rational>().is_err());
    }
}
