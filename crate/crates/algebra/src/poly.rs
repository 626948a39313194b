//! Sparse multivariate polynomials over the rationals.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::monomial::{Monomial, MAX_VARS};
use crate::AlgebraError;

/// Sparse polynomial in `z1..zn`. Terms are kept sorted in descending
/// graded-lexicographic order and never hold a zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(Monomial, BigRational)>,
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

// Rational arithmetic that skips normalization when both operands are
// integers: the gcd inside `Ratio` dominates otherwise.
#[inline]
pub(crate) fn qadd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.numer() + b.numer())
    } else {
        a + b
    }
}

#[inline]
pub(crate) fn qsub(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.numer() - b.numer())
    } else {
        a - b
    }
}

#[inline]
pub(crate) fn qmul(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_integer() && b.is_integer() {
        BigRational::from_integer(a.numer() * b.numer())
    } else {
        a * b
    }
}

/// `c / den` for a positive `den`.
#[inline]
pub(crate) fn qnew(c: BigInt, den: &BigInt) -> BigRational {
    if den.is_one() {
        BigRational::from_integer(c)
    } else {
        BigRational::new(c, den.clone())
    }
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables supported");
        MultiPoly { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((Monomial::ONE, c));
        }
        p
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, rat(c))
    }

    /// The polynomial `z_{var+1}`.
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable {var} out of range for {nvars} variables");
        MultiPoly { nvars, terms: vec![(Monomial::var(var), BigRational::one())] }
    }

    pub fn monomial(nvars: usize, m: Monomial, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    /// Collects arbitrary terms, merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(nvars: usize, terms: I) -> Self {
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(v) => *v = qadd(v, &c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        let terms = map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        MultiPoly { nvars, terms }
    }

    /// Univariate polynomial from coefficients in ascending powers.
    pub fn univariate(coeffs: &[i64]) -> Self {
        Self::from_terms(
            1,
            coeffs.iter().enumerate().map(|(k, &c)| (Monomial::var_pow(0, k as u32), rat(c))),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn is_one(&self) -> bool {
        matches!(self.terms.as_slice(), [(m, c)] if m.is_one() && c.is_one())
    }

    pub fn leading_term(&self) -> Option<&(Monomial, BigRational)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, m: Monomial) -> BigRational {
        self.terms
            .binary_search_by(|(k, _)| m.cmp(k))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| BigRational::zero())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(var) > 0)
    }

    /// Indices of the variables that actually occur.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.uses_var(v)).collect()
    }

    fn check_same(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.nvars != other.nvars {
            return Err(AlgebraError::VariableMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_same(other)?;
        Ok(self.mul_impl(other))
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { qsub(&a[i].1, &b[j].1) } else { qadd(&a[i].1, &b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -t.1.clone() } else { t.1.clone() };
            out.push((t.0, c));
        }
        MultiPoly { nvars: self.nvars, terms: out }
    }

    /// Integer coefficients with a common denominator: `self = ints / den`.
    pub fn to_integer_terms(&self) -> (Vec<(Monomial, BigInt)>, BigInt) {
        let den = self
            .terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| if c.denom().is_one() { acc } else { acc.lcm(c.denom()) });
        let ints = self
            .terms
            .iter()
            .map(|(m, c)| {
                if c.denom() == &den {
                    (*m, c.numer().clone())
                } else {
                    (*m, c.numer() * (&den / c.denom()))
                }
            })
            .collect();
        (ints, den)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.nvars);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let (ai, ad) = self.to_integer_terms();
        let (bi, bd) = other.to_integer_terms();
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(ai.len() * bi.len() / 2 + 1);
        for (ma, ca) in &ai {
            for (mb, cb) in &bi {
                let m = ma.mul(*mb);
                match acc.get_mut(&m) {
                    Some(v) => *v += ca * cb,
                    None => {
                        acc.insert(m, ca * cb);
                    }
                }
            }
        }
        let den = ad * bd;
        let mut terms: Vec<(Monomial, BigRational)> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, qnew(c, &den)))
            .collect();
        terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (*m, qmul(a, c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_impl(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_impl(&base);
            }
        }
        result
    }

    /// Partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e > 0 {
                terms.push((m.with_exponent(var, e - 1), qmul(c, &rat(e as i64))));
            }
        }
        // lowering one exponent can reorder terms
        terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong dimension");
        let mut powers: Vec<Vec<BigRational>> = (0..self.nvars)
            .map(|v| {
                let d = self.degree_in(v) as usize;
                let mut pw = Vec::with_capacity(d + 1);
                pw.push(BigRational::one());
                for k in 1..=d {
                    let next = &pw[k - 1] * &point[v];
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut sum = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, pw) in powers.iter_mut().enumerate() {
                let e = m.exponent(v) as usize;
                if e > 0 {
                    t *= &pw[e];
                }
            }
            sum += t;
        }
        sum
    }

    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.nvars, "evaluation point has wrong dimension");
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (v, &x) in point.iter().enumerate() {
                    let e = m.exponent(v);
                    if e > 0 {
                        t *= x.powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Substitutes a constant for one variable; the variable count is unchanged.
    pub fn partial_eval(&self, var: usize, value: &BigRational) -> Self {
        // value = p/q: c p^e / q^e = c p^e q^(d-e) / q^d, summed over integers
        let d = self.degree_in(var) as usize;
        let (ints, den) = self.to_integer_terms();
        let (p, q) = (value.numer().clone(), value.denom().clone());
        let mut pw = vec![BigInt::one()];
        let mut qw = vec![BigInt::one()];
        for k in 1..=d {
            let np = &pw[k - 1] * &p;
            let nq = &qw[k - 1] * &q;
            pw.push(np);
            qw.push(nq);
        }
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(ints.len());
        for (m, c) in ints {
            let e = m.exponent(var) as usize;
            let t = c * &pw[e] * &qw[d - e];
            let key = m.with_exponent(var, 0);
            match acc.get_mut(&key) {
                Some(v) => *v += t,
                None => {
                    acc.insert(key, t);
                }
            }
        }
        let total_den = den * &qw[d];
        let mut terms: Vec<(Monomial, BigRational)> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m, qnew(c, &total_den)))
            .collect();
        terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        MultiPoly { nvars: self.nvars, terms }
    }

    /// Moves variable `i` to position `map[i]` in a ring with `nvars` variables.
    /// Several variables may land on the same target, which multiplies their
    /// powers (a diagonal substitution).
    pub fn rename(&self, map: &[usize], nvars: usize) -> Self {
        assert_eq!(map.len(), self.nvars, "rename map has wrong length");
        assert!(map.iter().all(|&t| t < nvars));
        let injective = {
            let mut seen = vec![false; nvars];
            map.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
        };
        let conv = |m: &Monomial| {
            let mut out = Monomial::ONE;
            for (v, &t) in map.iter().enumerate() {
                let e = m.exponent(v);
                if e > 0 {
                    out = out.mul(Monomial::var_pow(t, e));
                }
            }
            out
        };
        if injective {
            let mut terms: Vec<_> = self.terms.iter().map(|(m, c)| (conv(m), c.clone())).collect();
            terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
            MultiPoly { nvars, terms }
        } else {
            Self::from_terms(nvars, self.terms.iter().map(|(m, c)| (conv(m), c.clone())))
        }
    }

    /// Coefficients with respect to `var`: `self = sum_k out[k] * var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monomial, BigRational)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            buckets[m.exponent(var) as usize].push((m.with_exponent(var, 0), c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|x, y| y.0.cmp(&x.0));
                MultiPoly { nvars: self.nvars, terms: t }
            })
            .collect()
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(nvars: usize, var: usize, coeffs: &[MultiPoly]) -> Self {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                debug_assert_eq!(m.exponent(var), 0);
                terms.push((m.mul(Monomial::var_pow(var, k as u32)), a.clone()));
            }
        }
        terms.sort_unstable_by(|x, y| y.0.cmp(&x.0));
        MultiPoly { nvars, terms }
    }

    /// Composition: variable `i` is replaced by `images[i]`.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<Self, AlgebraError> {
        if images.len() != self.nvars {
            return Err(AlgebraError::VariableMismatch { left: self.nvars, right: images.len() });
        }
        let target = images.first().map_or(0, |p| p.nvars);
        if images.iter().any(|p| p.nvars != target) {
            return Err(AlgebraError::VariableMismatch { left: target, right: usize::MAX });
        }
        let mut cache: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(p.nvars), p.clone()]).collect();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for v in 0..self.nvars {
                let e = m.exponent(v) as usize;
                if e == 0 {
                    continue;
                }
                while cache[v].len() <= e {
                    let next = cache[v].last().unwrap().mul_impl(&images[v]);
                    cache[v].push(next);
                }
                t = t.mul_impl(&cache[v][e]);
            }
            out = out.merge(&t, false);
        }
        Ok(out)
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert_eq!(self.nvars, divisor.nvars, "variable count mismatch in division");
        let (lm, lc) = divisor.terms.first().expect("division by the zero polynomial").clone();
        if self.is_zero() {
            return Some(self.clone());
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        // quick degree screens
        for v in 0..self.nvars {
            if divisor.degree_in(v) > self.degree_in(v) {
                return None;
            }
        }
        if divisor.terms.len() == 1 {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                terms.push((m.checked_div(lm)?, c / &lc));
            }
            return Some(MultiPoly { nvars: self.nvars, terms });
        }
        // Gauss: a primitive integer divisor of an integer polynomial leaves
        // an integer quotient, so the division runs over the integers.
        let _ = lc;
        let (a_int, a_den) = self.to_integer_terms();
        let (unit, prim) = divisor.unit_and_primitive();
        let (b_int, _) = prim.to_integer_terms();
        let b_lc = b_int[0].1.clone();
        let mut rem: BTreeMap<Monomial, BigInt> = a_int.into_iter().collect();
        let mut quot: Vec<(Monomial, BigInt)> = Vec::new();
        while let Some((&m, _)) = rem.iter().next_back() {
            let c = rem.remove(&m).unwrap();
            let qm = m.checked_div(lm)?;
            let (qc, r) = c.div_rem(&b_lc);
            if !r.is_zero() {
                return None;
            }
            for (dm, dc) in &b_int[1..] {
                let key = dm.mul(qm);
                let delta = &qc * dc;
                match rem.get_mut(&key) {
                    Some(v) => {
                        *v -= delta;
                        if v.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quot.push((qm, qc));
        }
        let scale = (BigRational::from_integer(a_den) * unit).recip();
        let terms = quot.into_iter().map(|(m, c)| (m, BigRational::from_integer(c) * &scale)).collect();
        Some(MultiPoly { nvars: self.nvars, terms })
    }

    /// Rational content: the positive rational `c` such that `self / c` has
    /// coprime integer coefficients.
    pub fn content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::one();
        }
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        BigRational::new(g, l)
    }

    /// `self` divided by its content, with a positive leading coefficient.
    pub fn primitive_part(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Splits into `(unit, primitive)` with `self = unit * primitive`.
    pub fn unit_and_primitive(&self) -> (BigRational, MultiPoly) {
        if self.is_zero() {
            return (BigRational::one(), self.clone());
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        (c.clone(), self.scale(&c.recip()))
    }

    /// Whether every coefficient is a positive integer.
    pub fn has_positive_integer_coeffs(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer() && c.is_positive())
    }

    /// Rendering with a custom variable namer.
    pub fn render<F: Fn(usize) -> String>(&self, name: F) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            for v in 0..self.nvars {
                match m.exponent(v) {
                    0 => {}
                    1 => factors.push(name(v)),
                    e => factors.push(format!("{}^{}", name(v), e)),
                }
            }
            if factors.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    pub fn default_var_name(nvars: usize, v: usize) -> String {
        if nvars == 1 {
            "z".to_string()
        } else {
            format!("z{}", v + 1)
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.nvars;
        f.write_str(&self.render(|v| Self::default_var_name(n, v)))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.nvars, self)
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl std::ops::$trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$imp(rhs).expect("polynomial operands use different variable sets")
            }
        }
        impl std::ops::$trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$imp(&rhs).expect("polynomial operands use different variable sets")
            }
        }
    };
}
poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl std::ops::Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&z(1, 0) + &MultiPoly::one(1)) * &(&z(1, 0) - &MultiPoly::one(1));
        assert_eq!(p, MultiPoly::univariate(&[-1, 0, 1]));
    }

    #[test]
    fn binomial_square() {
        let s = &z(2, 0) + &z(2, 1);
        assert_eq!(s.pow(2).to_string(), "z1^2 + 2*z1*z2 + z2^2");
    }

    #[test]
    fn zero_absorbs() {
        let p = MultiPoly::univariate(&[3, 2]);
        assert!((&p * &MultiPoly::zero(1)).is_zero());
    }

    #[test]
    fn mismatched_variables_error() {
        assert!(z(1, 0).try_add(&z(2, 0)).is_err());
    }

    #[test]
    fn exact_division() {
        let a = MultiPoly::univariate(&[-1, 0, 1]);
        let b = MultiPoly::univariate(&[-1, 1]);
        assert_eq!(a.div_exact(&b).unwrap(), MultiPoly::univariate(&[1, 1]));
        assert!(a.div_exact(&MultiPoly::univariate(&[2, 1])).is_none());
    }

    #[test]
    fn multivariate_division() {
        let d = &z(2, 0) - &z(2, 1);
        let q = &(&z(2, 0) * &z(2, 1)) + &MultiPoly::from_int(2, 3);
        let a = &d * &q;
        assert_eq!(a.div_exact(&d).unwrap(), q);
        assert!((&a + &MultiPoly::one(2)).div_exact(&d).is_none());
    }

    #[test]
    fn rename_merges_variables() {
        let p = &z(2, 0) * &z(2, 1).pow(2);
        let r = p.rename(&[0, 0], 1);
        assert_eq!(r, MultiPoly::univariate(&[0, 0, 0, 1]));
    }

    #[test]
    fn derivative_and_eval() {
        let p = MultiPoly::univariate(&[0, 0, 3, 2]);
        assert_eq!(p.derivative(0), MultiPoly::univariate(&[0, 6, 6]));
        assert_eq!(p.evaluate(&[rat(2)]), rat(28));
    }

    #[test]
    fn content_and_primitive() {
        let p = MultiPoly::univariate(&[-4, -6]);
        assert_eq!(p.content(), rat(2));
        assert_eq!(p.primitive_part(), MultiPoly::univariate(&[2, 3]));
    }
}
