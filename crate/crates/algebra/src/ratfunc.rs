//! Reduced rational functions.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::gcd::gcd_primitive;
use crate::poly::MultiPoly;
use crate::AlgebraError;

/// `num / den` with `den != 0`.
///
/// Values built through [`RationalFunc::new`] are canonical: the gcd is
/// removed, numerator and denominator have jointly coprime integer
/// coefficients and the leading coefficient of `den` (graded lex) is positive.
/// Equality is decided by cross-multiplication and does not rely on this.
#[derive(Clone)]
pub struct RationalFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, AlgebraError> {
        if num.nvars() != den.nvars() {
            return Err(AlgebraError::VariableMismatch { left: num.nvars(), right: den.nvars() });
        }
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        let g = gcd_primitive(&num, &den);
        if g.is_constant() {
            return Ok(Self::normalized(num, den));
        }
        let n = num.div_exact(&g).expect("gcd divides numerator");
        let d = den.div_exact(&g).expect("gcd divides denominator");
        Ok(Self::normalized(n, d))
    }

    /// Builds from parts the caller knows to be coprime; only scalars are normalized.
    pub fn from_coprime(num: MultiPoly, den: MultiPoly) -> Result<Self, AlgebraError> {
        if num.nvars() != den.nvars() {
            return Err(AlgebraError::VariableMismatch { left: num.nvars(), right: den.nvars() });
        }
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> Self {
        let n = den.nvars();
        if num.is_zero() {
            return RationalFunc { num, den: MultiPoly::one(n) };
        }
        let (un, pn) = num.unit_and_primitive();
        let (ud, pd) = den.unit_and_primitive();
        let r = un / ud;
        let a = MultiPoly::constant(n, BigRational::from_integer(r.numer().clone()));
        let b = BigRational::from_integer(r.denom().clone());
        RationalFunc { num: &a * &pn, den: pd.scale(&b) }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let n = p.nvars();
        Self::normalized(p, MultiPoly::one(n))
    }

    pub fn zero(nvars: usize) -> Self {
        RationalFunc { num: MultiPoly::zero(nvars), den: MultiPoly::one(nvars) }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_poly(MultiPoly::constant(nvars, c))
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::from_poly(MultiPoly::from_int(nvars, c))
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        Self::from_poly(MultiPoly::var(nvars, var))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn into_parts(self) -> (MultiPoly, MultiPoly) {
        (self.num, self.den)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.num.uses_var(v) || self.den.uses_var(v)
    }

    /// Cross-multiplication equality.
    pub fn equals(&self, other: &Self) -> bool {
        self.nvars() == other.nvars() && (&self.num * &other.den) == (&other.num * &self.den)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.combine(other, false)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self, AlgebraError> {
        if self.nvars() != other.nvars() {
            return Err(AlgebraError::VariableMismatch { left: self.nvars(), right: other.nvars() });
        }
        let rhs_num = if negate { -&other.num } else { other.num.clone() };
        if self.den == other.den {
            return Self::new(&self.num + &rhs_num, self.den.clone());
        }
        let g = gcd_primitive(&self.den, &other.den);
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = other.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d2) + &(&rhs_num * &d1);
        Self::new(num, &(&d1 * &d2) * &g)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.nvars() != other.nvars() {
            return Err(AlgebraError::VariableMismatch { left: self.nvars(), right: other.nvars() });
        }
        let g1 = gcd_primitive(&self.num, &other.den);
        let g2 = gcd_primitive(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = other.den.div_exact(&g1).expect("gcd divides");
        let n2 = other.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        Self::from_coprime(&n1 * &n2, &d1 * &d2)
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        if self.num.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Self::from_coprime(self.den.clone(), self.num.clone())
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_mul(&other.recip()?)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: i32) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RationalFunc { num: base.num.pow(k), den: base.den.pow(k) }.renormalized())
    }

    fn renormalized(self) -> Self {
        Self::normalized(self.num, self.den)
    }

    /// Partial derivative by the quotient rule.
    pub fn diff(&self, var: usize) -> Result<Self, AlgebraError> {
        if var >= self.nvars() {
            return Err(AlgebraError::UnknownVariable(var));
        }
        let dn = self.num.derivative(var);
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return Self::new(dn, self.den.clone());
        }
        // d(n/d) = (n' d - n d') / d^2; cancel the common factor of d and d'
        let g = gcd_primitive(&self.den, &dd);
        let dg = self.den.div_exact(&g).expect("gcd divides");
        let ddg = dd.div_exact(&g).expect("gcd divides");
        let num = &(&dn * &dg) - &(&self.num * &ddg);
        Self::new(num, &self.den * &dg)
    }

    /// Composition: variable `i` is replaced by `images[i]`.
    pub fn substitute(&self, images: &[RationalFunc]) -> Result<Self, AlgebraError> {
        if images.len() != self.nvars() {
            return Err(AlgebraError::VariableMismatch { left: self.nvars(), right: images.len() });
        }
        let target = images.first().map_or(0, |r| r.nvars());
        if images.iter().any(|r| r.nvars() != target) {
            return Err(AlgebraError::VariableMismatch { left: target, right: usize::MAX });
        }
        // n(p/q) / d(p/q) = [sum c prod p^e q^(D-e)] / [same for d], D per variable
        let degs: Vec<u32> = (0..self.nvars())
            .map(|v| self.num.degree_in(v).max(self.den.degree_in(v)))
            .collect();
        let homogenize = |poly: &MultiPoly| -> MultiPoly {
            let mut out = MultiPoly::zero(target);
            for (m, c) in poly.terms() {
                let mut t = MultiPoly::constant(target, c.clone());
                for (v, img) in images.iter().enumerate() {
                    let e = m.exponent(v);
                    if degs[v] == 0 {
                        continue;
                    }
                    if e > 0 {
                        t = &t * &img.num.pow(e);
                    }
                    if degs[v] > e {
                        t = &t * &img.den.pow(degs[v] - e);
                    }
                }
                out = &out + &t;
            }
            out
        };
        let den = homogenize(&self.den);
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Self::new(homogenize(&self.num), den)
    }

    /// Variable relabelling, see [`MultiPoly::rename`].
    pub fn rename(&self, map: &[usize], nvars: usize) -> Result<Self, AlgebraError> {
        let den = self.den.rename(map, nvars);
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Self::new(self.num.rename(map, nvars), den)
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational, AlgebraError> {
        let d = self.den.evaluate(point);
        if d.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(self.num.evaluate(point) / d)
    }

    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        self.num.evaluate_f64(point) / self.den.evaluate_f64(point)
    }

    /// Parses an expression in `z` (alias of `z1`), `z1`..`z14` (or `z_1`),
    /// integers, `+ - * / ^` and parentheses. Juxtaposition multiplies.
    pub fn parse(src: &str, nvars: usize) -> Result<Self, AlgebraError> {
        let mut p = Parser { s: src.as_bytes(), pos: 0, nvars };
        let r = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(r)
    }

    pub fn render<F: Fn(usize) -> String + Copy>(&self, name: F) -> String {
        if self.den.is_one() {
            return self.num.render(name);
        }
        format!("({})/({})", self.num.render(name), self.den.render(name))
    }
}

impl PartialEq for RationalFunc {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.nvars();
        f.write_str(&self.render(|v| MultiPoly::default_var_name(n, v)))
    }
}

impl fmt::Debug for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunc[{}]({})", self.nvars(), self)
    }
}

macro_rules! rf_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl std::ops::$trait<&RationalFunc> for &RationalFunc {
            type Output = RationalFunc;
            fn $method(self, rhs: &RationalFunc) -> RationalFunc {
                self.$imp(rhs).expect("invalid rational function operation")
            }
        }
        impl std::ops::$trait<RationalFunc> for RationalFunc {
            type Output = RationalFunc;
            fn $method(self, rhs: RationalFunc) -> RationalFunc {
                (&self).$imp(&rhs).expect("invalid rational function operation")
            }
        }
    };
}
rf_binop!(Add, add, try_add);
rf_binop!(Sub, sub, try_sub);
rf_binop!(Mul, mul, try_mul);
rf_binop!(Div, div, try_div);

impl std::ops::Neg for &RationalFunc {
    type Output = RationalFunc;
    fn neg(self) -> RationalFunc {
        RationalFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl std::ops::Neg for RationalFunc {
    type Output = RationalFunc;
    fn neg(self) -> RationalFunc {
        -&self
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunc, AlgebraError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunc, AlgebraError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    acc = acc.try_div(&self.unary()?)?;
                }
                b'(' | b'z' | b'0'..=b'9' => acc = &acc * &self.power()?,
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunc, AlgebraError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunc, AlgebraError> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            self.skip_ws();
            let e = self.integer()?;
            let e: i32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return base.pow(if neg { -e } else { e });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().unwrap())
    }

    fn primary(&mut self) -> Result<RationalFunc, AlgebraError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'0'..=b'9') => {
                let n = self.integer()?;
                Ok(RationalFunc::constant(self.nvars, BigRational::from_integer(n)))
            }
            Some(b'z') => {
                self.pos += 1;
                if self.s.get(self.pos) == Some(&b'_') {
                    self.pos += 1;
                }
                let idx = if self.s.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    let k = self.integer()?;
                    let k: usize = k.try_into().map_err(|_| self.err("bad variable index"))?;
                    if k == 0 {
                        return Err(self.err("variables are numbered from 1"));
                    }
                    k - 1
                } else {
                    0
                };
                if idx >= self.nvars {
                    return Err(AlgebraError::UnknownVariable(idx));
                }
                Ok(RationalFunc::var(self.nvars, idx))
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn rf(s: &str, n: usize) -> RationalFunc {
        RationalFunc::parse(s, n).unwrap()
    }

    #[test]
    fn cancellation() {
        let f = rf("(z^2-1)/(z-1)", 1);
        assert_eq!(f.den().as_constant(), Some(rat(1)));
        assert_eq!(f.num(), &MultiPoly::univariate(&[1, 1]));
    }

    #[test]
    fn content_removal() {
        let f = rf("(2z+2)/4", 1);
        assert_eq!(f.num(), &MultiPoly::univariate(&[1, 1]));
        assert_eq!(f.den(), &MultiPoly::from_int(1, 2));
    }

    #[test]
    fn denominator_sign_is_positive() {
        let f = rf("1/(-z-1)", 1);
        assert!(f.den().leading_coeff() > rat(0));
        assert_eq!(f.num(), &MultiPoly::from_int(1, -1));
    }

    #[test]
    fn quotient_rule_examples() {
        let f = rf("1/(1+z)", 1);
        assert!(f.diff(0).unwrap().equals(&rf("-1/(1+z)^2", 1)));
        let x = rf("z^3/(1+z)", 1);
        assert!(x.diff(0).unwrap().equals(&rf("(2z^3+3z^2)/(1+z)^2", 1)));
        let y = rf("-(1+z)/z^2", 1);
        assert!(y.diff(0).unwrap().equals(&rf("(z+2)/z^3", 1)));
        assert!(f.diff(3).is_err());
    }

    #[test]
    fn substitution_examples() {
        let p = rf("z1^2 z2^3 - z1 z2 + 1", 2);
        let x = rf("z^3/(1+z)", 1);
        let y = rf("-(1+z)/z^2", 1);
        assert!(p.substitute(&[x, y]).unwrap().is_zero());
        let f = rf("1/(z1-z2)^2", 2);
        let g = f.substitute(&[rf("z", 1), rf("2z", 1)]).unwrap();
        assert!(g.equals(&rf("1/z^2", 1)));
        assert!(matches!(
            f.substitute(&[rf("z", 1), rf("z", 1)]),
            Err(AlgebraError::ZeroDenominator)
        ));
    }

    #[test]
    fn parse_juxtaposition_and_subscripts() {
        let f = rf("2 z_1^2 z_2 + 3 (z1 + 1)", 2);
        assert!(f.equals(&rf("2*z1^2*z2 + 3*z1 + 3", 2)));
        assert!(RationalFunc::parse("z3", 2).is_err());
        assert!(RationalFunc::parse("1/0", 1).is_err());
    }
}
