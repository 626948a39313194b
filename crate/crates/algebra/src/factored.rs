//! Fractions with a factored denominator.
//!
//! Sums of many rational functions whose denominators are products of a few
//! known irreducible factors are far cheaper to handle when the denominator is
//! kept as a list of `(factor, exponent)` pairs: the common denominator is a
//! max over exponents and cancellation is trial division.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::MultiPoly;
use crate::ratfunc::RationalFunc;
use crate::AlgebraError;

/// `num / prod f_i^e_i`. Every factor is a non-constant primitive integer
/// polynomial with positive leading coefficient; no factor is repeated.
#[derive(Clone, Debug)]
pub struct FactoredFrac {
    num: MultiPoly,
    den: Vec<(MultiPoly, u32)>,
}

impl FactoredFrac {
    pub fn from_poly(num: MultiPoly) -> Self {
        FactoredFrac { num, den: Vec::new() }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(MultiPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_poly(MultiPoly::constant(nvars, c))
    }

    /// `num / prod factors`, normalizing each factor.
    pub fn new(num: MultiPoly, factors: Vec<(MultiPoly, u32)>) -> Result<Self, AlgebraError> {
        let mut out = Self::from_poly(num);
        for (f, e) in factors {
            out.push_factor(f, e)?;
        }
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den_factors(&self) -> &[(MultiPoly, u32)] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn den_poly(&self) -> MultiPoly {
        self.den
            .iter()
            .fold(MultiPoly::one(self.nvars()), |acc, (f, e)| &acc * &f.pow(*e))
    }

    fn exponent_of(&self, f: &MultiPoly) -> u32 {
        self.den.iter().find(|(g, _)| g == f).map_or(0, |(_, e)| *e)
    }

    /// Divides by `f^e`.
    pub fn push_factor(&mut self, f: MultiPoly, e: u32) -> Result<(), AlgebraError> {
        if e == 0 {
            return Ok(());
        }
        if f.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        let (unit, prim) = f.unit_and_primitive();
        if !unit.is_one() {
            self.num = self.num.scale(&rat_pow(&unit.recip(), e));
        }
        if prim.is_constant() {
            return Ok(());
        }
        match self.den.iter_mut().find(|(g, _)| *g == prim) {
            Some(slot) => slot.1 += e,
            None => self.den.push((prim, e)),
        }
        Ok(())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        FactoredFrac { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        FactoredFrac { num: &self.num * p, den: self.den.clone() }
    }

    pub fn neg(&self) -> Self {
        FactoredFrac { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = FactoredFrac { num: &self.num * &other.num, den: self.den.clone() };
        for (f, e) in &other.den {
            match out.den.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 += e,
                None => out.den.push((f.clone(), *e)),
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::sum(&[self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::sum(&[self.clone(), other.neg()])
    }

    /// Sum over a common denominator (exponent-wise maximum).
    pub fn sum(terms: &[FactoredFrac]) -> Self {
        let nonzero: Vec<&FactoredFrac> = terms.iter().filter(|t| !t.is_zero()).collect();
        let nv = match terms.first() {
            Some(t) => t.nvars(),
            None => panic!("sum of an empty list has no variable set"),
        };
        if nonzero.is_empty() {
            return Self::zero(nv);
        }
        let mut den: Vec<(MultiPoly, u32)> = Vec::new();
        for t in &nonzero {
            for (f, e) in &t.den {
                match den.iter_mut().find(|(g, _)| g == f) {
                    Some(slot) => slot.1 = slot.1.max(*e),
                    None => den.push((f.clone(), *e)),
                }
            }
        }
        let mut num = MultiPoly::zero(nv);
        for t in nonzero {
            let mut cof = t.num.clone();
            for (f, e) in &den {
                let k = e - t.exponent_of(f);
                if k > 0 {
                    cof = &cof * &f.pow(k);
                }
            }
            num = &num + &cof;
        }
        FactoredFrac { num, den }
    }

    /// Partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let nv = self.nvars();
        let involved: Vec<usize> = (0..self.den.len()).filter(|&i| self.den[i].0.uses_var(var)).collect();
        if involved.is_empty() {
            return FactoredFrac { num: self.num.derivative(var), den: self.den.clone() };
        }
        // d(N / prod f^e) = (N' F - N sum e f' F/f) / (prod f^e * F),  F = prod of involved f
        let mut big_f = MultiPoly::one(nv);
        for &i in &involved {
            big_f = &big_f * &self.den[i].0;
        }
        let mut num = &self.num.derivative(var) * &big_f;
        for &i in &involved {
            let (f, e) = &self.den[i];
            let mut cof = f.derivative(var).scale(&BigRational::from_integer(BigInt::from(*e)));
            for &j in &involved {
                if j != i {
                    cof = &cof * &self.den[j].0;
                }
            }
            num = &num - &(&self.num * &cof);
        }
        let mut den = self.den.clone();
        for &i in &involved {
            den[i].1 += 1;
        }
        FactoredFrac { num, den }
    }

    /// Multiplies by `f^e`, cancelling against a matching denominator factor first.
    pub fn mul_factor(&mut self, f: &MultiPoly, e: u32) {
        let (unit, prim) = f.unit_and_primitive();
        self.num = self.num.scale(&rat_pow(&unit, e));
        if prim.is_constant() {
            return;
        }
        let mut left = e;
        if let Some(slot) = self.den.iter_mut().find(|(g, _)| *g == prim) {
            let k = slot.1.min(left);
            slot.1 -= k;
            left -= k;
        }
        self.den.retain(|(_, k)| *k > 0);
        if left > 0 {
            self.num = &self.num * &prim.pow(left);
        }
    }

    /// Cancels one denominator factor as far as the numerator allows; returns
    /// the exponent left over.
    pub fn cancel_factor(&mut self, f: &MultiPoly) -> u32 {
        let (_, prim) = f.unit_and_primitive();
        let mut left = 0;
        if let Some(slot) = self.den.iter_mut().find(|(g, _)| *g == prim) {
            while slot.1 > 0 {
                match self.num.div_exact(&prim) {
                    Some(q) => {
                        self.num = q;
                        slot.1 -= 1;
                    }
                    None => break,
                }
            }
            left = slot.1;
        }
        if self.num.is_zero() {
            self.den.clear();
        }
        self.den.retain(|(_, k)| *k > 0);
        left
    }

    /// Sets `var = value`; factors that become constant move into the numerator
    /// and factors left in one variable are split over their rational roots.
    pub fn partial_eval(&self, var: usize, value: &BigRational) -> Result<Self, AlgebraError> {
        let mut out = Self::from_poly(self.num.partial_eval(var, value));
        for (f, e) in &self.den {
            if !f.uses_var(var) {
                out.push_factor(f.clone(), *e)?;
                continue;
            }
            let r = f.partial_eval(var, value);
            if r.is_zero() {
                return Err(AlgebraError::ZeroDenominator);
            }
            let used: Vec<usize> = (0..r.nvars()).filter(|&v| r.uses_var(v)).collect();
            if used.len() == 1 {
                let (unit, parts) = split_rational_roots(&r, used[0]);
                out.num = out.num.scale(&rat_pow(&unit.recip(), *e));
                for (q, m) in parts {
                    out.push_factor(q, m * e)?;
                }
            } else {
                out.push_factor(r, *e)?;
            }
        }
        Ok(out)
    }

    /// Cancels denominator factors that divide the numerator.
    pub fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, e) in self.den.iter_mut() {
            while *e > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
    }

    pub fn reduced(mut self) -> Self {
        self.reduce();
        self
    }

    /// Variable relabelling; merging variables is a diagonal substitution.
    /// Denominator factors that become univariate are split over their
    /// rational roots.
    pub fn rename(&self, map: &[usize], nvars: usize) -> Result<Self, AlgebraError> {
        let mut out = Self::from_poly(self.num.rename(map, nvars));
        for (f, e) in &self.den {
            let r = f.rename(map, nvars);
            if r.is_zero() {
                return Err(AlgebraError::ZeroDenominator);
            }
            let used = r.used_vars();
            if used.len() == 1 && r.degree_in(used[0]) > 1 {
                let (unit, parts) = split_rational_roots(&r, used[0]);
                out.num = out.num.scale(&rat_pow(&unit.recip(), *e));
                for (p, m) in parts {
                    out.push_factor(p, m * e)?;
                }
            } else {
                out.push_factor(r, *e)?;
            }
        }
        Ok(out)
    }

    /// Expands into a [`RationalFunc`], trusting that the numerator shares no
    /// factor with the (reduced) denominator.
    pub fn to_rational_func(&self) -> RationalFunc {
        RationalFunc::from_coprime(self.num.clone(), self.den_poly()).expect("nonzero denominator")
    }

    /// Expands and runs a full gcd reduction.
    pub fn to_rational_func_checked(&self) -> RationalFunc {
        RationalFunc::new(self.num.clone(), self.den_poly()).expect("nonzero denominator")
    }

    /// Splits the denominator of `f` over the given factors. Fails when a
    /// non-constant cofactor remains.
    pub fn from_rational_func(f: &RationalFunc, atoms: &[MultiPoly]) -> Result<Self, AlgebraError> {
        let mut den = f.den().clone();
        let mut out = Self::from_poly(f.num().clone());
        for a in atoms {
            let mut e = 0;
            while let Some(q) = den.div_exact(a) {
                den = q;
                e += 1;
            }
            out.push_factor(a.clone(), e)?;
        }
        match den.as_constant() {
            Some(c) if !c.is_zero() => {
                out.num = out.num.scale(&c.recip());
                Ok(out)
            }
            _ => Err(AlgebraError::InexactDivision),
        }
    }

    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        let d: f64 = self.den.iter().map(|(f, e)| f.evaluate_f64(point).powi(*e as i32)).product();
        self.num.evaluate_f64(point) / d
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational, AlgebraError> {
        let mut d = BigRational::one();
        for (f, e) in &self.den {
            d *= rat_pow(&f.evaluate(point), *e);
        }
        if d.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(self.num.evaluate(point) / d)
    }
}

/// Splits a univariate polynomial in `v` into `unit * rest * prod (q z - p)^m`
/// over its rational roots. Returns the unit and the factor list (the
/// cofactor `rest` included when non-constant).
pub fn split_rational_roots(p: &MultiPoly, v: usize) -> (BigRational, Vec<(MultiPoly, u32)>) {
    let nv = p.nvars();
    let (unit, mut rest) = p.unit_and_primitive();
    let mut parts: Vec<(MultiPoly, u32)> = Vec::new();
    let z = MultiPoly::var(nv, v);
    let mut m0 = 0;
    while rest.degree_in(v) > 0 && rest.coefficients_in(v)[0].is_zero() {
        rest = rest.div_exact(&z).expect("z divides");
        m0 += 1;
    }
    if m0 > 0 {
        parts.push((z.clone(), m0));
    }
    if rest.degree_in(v) > 0 {
        let coeffs = rest.coefficients_in(v);
        let a0 = coeffs[0].as_constant().expect("univariate").to_integer();
        let an = coeffs.last().unwrap().as_constant().expect("univariate").to_integer();
        if let (Some(ps), Some(qs)) = (small_divisors(&a0), small_divisors(&an)) {
            for q in &qs {
                for p0 in &ps {
                    for sign in [1i64, -1] {
                        let cand = MultiPoly::var(nv, v).scale(&BigRational::from_integer(BigInt::from(*q)))
                            - MultiPoly::from_int(nv, sign * *p0 as i64);
                        let cand = cand.primitive_part();
                        let mut m = 0;
                        while rest.degree_in(v) > 0 {
                            match rest.div_exact(&cand) {
                                Some(r) => {
                                    rest = r;
                                    m += 1;
                                }
                                None => break,
                            }
                        }
                        if m > 0 {
                            parts.push((cand, m));
                        }
                    }
                }
            }
        }
    }
    let (u2, rest) = rest.unit_and_primitive();
    if !rest.is_constant() {
        parts.push((rest, 1));
    }
    (unit * u2, parts)
}

fn small_divisors(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    Some(out)
}

fn rat_pow(c: &BigRational, e: u32) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn rf(s: &str, n: usize) -> RationalFunc {
        RationalFunc::parse(s, n).unwrap()
    }

    fn poly(s: &str, n: usize) -> MultiPoly {
        rf(s, n).num().clone()
    }

    #[test]
    fn sum_and_reduce() {
        // 1/(z1-z2) - 1/(z1-z2) + z1/(z1+1) = z1/(z1+1)
        let d = poly("z1-z2", 2);
        let a = FactoredFrac::new(MultiPoly::one(2), vec![(d.clone(), 1)]).unwrap();
        let b = FactoredFrac::new(poly("z1", 2), vec![(poly("z1+1", 2), 1)]).unwrap();
        let s = FactoredFrac::sum(&[a.clone(), a.neg(), b]).reduced();
        assert!(s.to_rational_func().equals(&rf("z1/(z1+1)", 2)));
    }

    #[test]
    fn derivative_matches_quotient_rule() {
        let f = FactoredFrac::new(poly("z1^2 + z2", 2), vec![(poly("z1+1", 2), 2), (poly("2z1+3", 2), 1)]).unwrap();
        let expect = f.to_rational_func().diff(0).unwrap();
        assert!(f.derivative(0).to_rational_func_checked().equals(&expect));
    }

    #[test]
    fn diagonal_rename_splits_roots() {
        // Q(z1,z2) = z1^2+z1 z2+z2^2+z1^2 z2+z1 z2^2 -> z^2 (2z+3) on the diagonal
        let q = poly("z1^2+z1 z2+z2^2+z1^2 z2+z1 z2^2", 2);
        let f = FactoredFrac::new(MultiPoly::one(2), vec![(q, 2)]).unwrap();
        let g = f.rename(&[0, 0], 1).unwrap();
        let atoms: Vec<String> = g.den_factors().iter().map(|(p, e)| format!("{p}^{e}")).collect();
        assert_eq!(atoms, vec!["z^4", "2*z + 3^2"]);
        assert!(g.to_rational_func().equals(&rf("1/(z^4 (2z+3)^2)", 1)));
    }

    #[test]
    fn diagonal_of_difference_is_an_error() {
        let f = FactoredFrac::new(MultiPoly::one(2), vec![(poly("z1-z2", 2), 1)]).unwrap();
        assert!(f.rename(&[0, 0], 1).is_err());
    }

    #[test]
    fn from_rational_func_uses_atoms() {
        let f = rf("3/(2 z^2 (2z+3)^3)", 1);
        let atoms = [poly("z", 1), poly("2z+3", 1)];
        let g = FactoredFrac::from_rational_func(&f, &atoms).unwrap();
        assert_eq!(g.den_factors().len(), 2);
        assert_eq!(g.num().as_constant(), Some(BigRational::new(3.into(), 2.into())));
        assert!(FactoredFrac::from_rational_func(&rf("1/(z+1)", 1), &atoms).is_err());
        assert_eq!(g.evaluate(&[rat(1)]).unwrap(), BigRational::new(3.into(), 250.into()));
    }

    #[test]
    fn mul_factor_cancels_before_growing() {
        let mut f = FactoredFrac::new(poly("z1", 2), vec![(poly("2z1+3", 2), 2)]).unwrap();
        let before = f.to_rational_func();
        // 4z1+6 = 2 (2z1+3): the unit goes to the numerator, one power cancels
        f.mul_factor(&poly("4z1+6", 2), 1);
        assert_eq!(f.den_factors().len(), 1);
        assert_eq!(f.den_factors()[0].1, 1);
        let expect = before.try_mul(&rf("4z1+6", 2)).unwrap();
        assert!(f.to_rational_func().equals(&expect));
        f.mul_factor(&poly("z2", 2), 2);
        assert!(f.to_rational_func().equals(&expect.try_mul(&rf("z2^2", 2)).unwrap()));
    }

    #[test]
    fn cancel_factor_reports_leftover() {
        let mut f = FactoredFrac::new(poly("z1^2 + z1", 1), vec![(poly("z1", 1), 3)]).unwrap();
        let before = f.to_rational_func();
        assert_eq!(f.cancel_factor(&poly("z1", 1)), 2);
        assert!(f.to_rational_func().equals(&before));
        assert_eq!(f.num().total_degree(), 1);
    }

    #[test]
    fn partial_eval_splits_univariate_leftovers() {
        // (z1 + 2 z2 + 3)^2 at z2 = 0 leaves (z1 + 3)^2; 2 z1^2 + 3 z1 + z2 z1 at z2 = 0 splits as z1 (2 z1 + 3)
        let f = FactoredFrac::new(
            poly("z1 + z2", 2),
            vec![(poly("z1 + 2z2 + 3", 2), 2), (poly("2z1^2 + 3z1 + z2 z1", 2), 1)],
        )
        .unwrap();
        let g = f.partial_eval(1, &rat(0)).unwrap();
        let atoms: Vec<MultiPoly> = g.den_factors().iter().map(|(p, _)| p.clone()).collect();
        assert!(atoms.iter().all(|p| p.total_degree() == 1), "{atoms:?}");
        let expect = f.to_rational_func().substitute(&[rf("z1", 2), RationalFunc::zero(2)]).unwrap();
        assert!(g.to_rational_func().equals(&expect));
        let zero_den = FactoredFrac::new(MultiPoly::one(2), vec![(poly("z1 - z2", 2), 1)]).unwrap();
        assert!(zero_den.partial_eval(0, &rat(0)).is_ok());
        let vanishing = FactoredFrac::new(MultiPoly::one(2), vec![(poly("z2 - 1", 2), 1)]).unwrap();
        assert_eq!(vanishing.partial_eval(1, &rat(1)).unwrap_err(), AlgebraError::ZeroDenominator);
    }
}
