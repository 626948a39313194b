//! JSON form: `{"variables": ["z1", ...], "terms": [[[e1, ...], "num/den"], ...]}`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::monomial::Monomial;
use crate::poly::MultiPoly;
use crate::ratfunc::RationalFunc;
use crate::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub variables: Vec<String>,
    pub terms: Vec<(Vec<u32>, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFuncJson {
    pub num: PolyJson,
    pub den: PolyJson,
}

fn rational_to_string(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

fn rational_from_str(s: &str) -> Result<BigRational, AlgebraError> {
    let bad = || AlgebraError::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
    let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(AlgebraError::ZeroDenominator);
    }
    Ok(BigRational::new(n, d))
}

pub fn variable_names(nvars: usize) -> Vec<String> {
    (0..nvars).map(|i| format!("z{}", i + 1)).collect()
}

impl MultiPoly {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            variables: variable_names(self.nvars()),
            terms: self
                .terms()
                .iter()
                .map(|(m, c)| (m.exponents(self.nvars()), rational_to_string(c)))
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self, AlgebraError> {
        let n = j.variables.len();
        let mut terms = Vec::with_capacity(j.terms.len());
        for (exps, c) in &j.terms {
            if exps.len() != n {
                return Err(AlgebraError::Parse("exponent vector length differs from variable count".into()));
            }
            let m = Monomial::from_exponents(exps).ok_or(AlgebraError::ExponentOverflow)?;
            terms.push((m, rational_from_str(c)?));
        }
        Ok(MultiPoly::from_terms(n, terms))
    }
}

impl RationalFunc {
    pub fn to_json(&self) -> RationalFuncJson {
        RationalFuncJson { num: self.num().to_json(), den: self.den().to_json() }
    }

    pub fn from_json(j: &RationalFuncJson) -> Result<Self, AlgebraError> {
        RationalFunc::new(MultiPoly::from_json(&j.num)?, MultiPoly::from_json(&j.den)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let f = RationalFunc::parse("(3 z1^2 z2 - 1/2)/(7 z2 + 5)", 2).unwrap();
        let text = serde_json::to_string(&f.to_json()).unwrap();
        let back: RationalFuncJson = serde_json::from_str(&text).unwrap();
        let g = RationalFunc::from_json(&back).unwrap();
        assert_eq!(g.num(), f.num());
        assert_eq!(g.den(), f.den());
        assert!(text.contains("\"variables\":[\"z1\",\"z2\"]"));
    }

    #[test]
    fn rejects_bad_rationals() {
        let j = PolyJson { variables: vec!["z1".into()], terms: vec![(vec![1], "1/0".into())] };
        assert!(MultiPoly::from_json(&j).is_err());
        let j = PolyJson { variables: vec!["z1".into()], terms: vec![(vec![1, 2], "1".into())] };
        assert!(MultiPoly::from_json(&j).is_err());
    }
}
