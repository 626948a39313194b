//! Laurent expansions and residues.

use num_rational::BigRational;
use num_traits::Zero;

use crate::poly::{rat, MultiPoly};
use crate::ratfunc::RationalFunc;
use crate::AlgebraError;

/// Largest pole order accepted by [`laurent_at`] and [`residue_at`].
pub const POLE_ORDER_BOUND: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionPoint {
    Finite(BigRational),
    Infinity,
}

/// `sum_k coeffs[k] * t^(lowest_order + k) + O(t^truncation)` where
/// `t = z - p` at a finite point and `t = 1/z` at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries {
    pub point: ExpansionPoint,
    pub lowest_order: i64,
    pub coeffs: Vec<BigRational>,
    pub truncation: i64,
}

impl LaurentSeries {
    /// Coefficient of `t^order`; `None` beyond the truncation.
    pub fn coeff(&self, order: i64) -> Option<BigRational> {
        if order >= self.truncation {
            return None;
        }
        if order < self.lowest_order {
            return Some(BigRational::zero());
        }
        Some(self.coeffs.get((order - self.lowest_order) as usize).cloned().unwrap_or_else(BigRational::zero))
    }

    /// Term-by-term derivative with respect to `z` at a finite point.
    pub fn derivative(&self) -> LaurentSeries {
        assert!(matches!(self.point, ExpansionPoint::Finite(_)), "derivative is only defined at finite points");
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * rat(self.lowest_order + k as i64))
            .collect();
        LaurentSeries {
            point: self.point.clone(),
            lowest_order: self.lowest_order - 1,
            coeffs,
            truncation: self.truncation - 1,
        }
    }

    /// Residue (the `t^-1` coefficient); at infinity the sign follows
    /// `Res_{z=inf} f = -[1/z] f`.
    pub fn residue(&self) -> Option<BigRational> {
        match self.point {
            ExpansionPoint::Finite(_) => self.coeff(-1),
            ExpansionPoint::Infinity => self.coeff(1).map(|c| -c),
        }
    }
}

fn univariate_coeffs(p: &MultiPoly, var: usize) -> Vec<BigRational> {
    p.coefficients_in(var)
        .into_iter()
        .map(|c| c.as_constant().expect("coefficient is constant"))
        .collect()
}

/// Taylor shift: coefficients of `p(t + a)` from those of `p(z)`.
fn taylor_shift(c: &[BigRational], a: &BigRational) -> Vec<BigRational> {
    let mut c = c.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let add = &c[j + 1] * a;
            c[j] += add;
        }
    }
    c
}

fn strip_low(c: &mut Vec<BigRational>) -> usize {
    let k = c.iter().position(|x| !x.is_zero()).unwrap_or(c.len());
    c.drain(..k);
    k
}

/// Laurent expansion of a univariate function in `var` up to (excluding) `truncation`.
pub fn laurent_at(
    f: &RationalFunc,
    var: usize,
    point: ExpansionPoint,
    truncation: i64,
) -> Result<LaurentSeries, AlgebraError> {
    if var >= f.nvars() {
        return Err(AlgebraError::UnknownVariable(var));
    }
    if (0..f.nvars()).any(|v| v != var && f.uses_var(v)) {
        return Err(AlgebraError::NotUnivariate);
    }
    let mut n = univariate_coeffs(f.num(), var);
    let mut d = univariate_coeffs(f.den(), var);
    let mut shift: i64 = 0;
    match &point {
        ExpansionPoint::Finite(a) => {
            n = taylor_shift(&n, a);
            d = taylor_shift(&d, a);
        }
        ExpansionPoint::Infinity => {
            shift = d.len() as i64 - n.len() as i64;
            n.reverse();
            d.reverse();
        }
    }
    if f.is_zero() {
        return Ok(LaurentSeries { point, lowest_order: truncation, coeffs: Vec::new(), truncation });
    }
    let a = strip_low(&mut n) as i64;
    let b = strip_low(&mut d) as i64;
    let lowest = shift + a - b;
    if lowest < -(POLE_ORDER_BOUND as i64) {
        return Err(AlgebraError::PoleOrderExceeded { order: (-lowest) as u32, bound: POLE_ORDER_BOUND });
    }
    if truncation <= lowest {
        return Ok(LaurentSeries { point, lowest_order: truncation, coeffs: Vec::new(), truncation });
    }
    let count = (truncation - lowest) as usize;
    let d0_inv = d[0].recip();
    let mut s: Vec<BigRational> = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = n.get(k).cloned().unwrap_or_else(BigRational::zero);
        for j in 1..=k.min(d.len() - 1) {
            acc -= &d[j] * &s[k - j];
        }
        s.push(acc * &d0_inv);
    }
    Ok(LaurentSeries { point, lowest_order: lowest, coeffs: s, truncation })
}

/// Residue at `var = point` as a rational function of the remaining variables.
pub fn residue_at(f: &RationalFunc, var: usize, point: &BigRational) -> Result<RationalFunc, AlgebraError> {
    let nv = f.nvars();
    if var >= nv {
        return Err(AlgebraError::UnknownVariable(var));
    }
    let shift_poly = |p: &MultiPoly| -> Vec<MultiPoly> {
        let mut c = p.coefficients_in(var);
        let len = c.len();
        for i in 0..len {
            for j in (i..len.saturating_sub(1)).rev() {
                let add = c[j + 1].scale(point);
                c[j] = &c[j] + &add;
            }
        }
        c
    };
    let mut n = shift_poly(f.num());
    let mut d = shift_poly(f.den());
    let a = n.iter().position(|c| !c.is_zero()).unwrap_or(n.len());
    let b = d.iter().position(|c| !c.is_zero()).expect("denominator is nonzero");
    if a == n.len() {
        return Ok(RationalFunc::zero(nv));
    }
    let order = b as i64 - a as i64;
    if order <= 0 {
        return Ok(RationalFunc::zero(nv));
    }
    if order as u32 > POLE_ORDER_BOUND {
        return Err(AlgebraError::PoleOrderExceeded { order: order as u32, bound: POLE_ORDER_BOUND });
    }
    n.drain(..a);
    d.drain(..b);
    let m = order as usize;
    // s_k = u_k / e0^(k+1),  u_k = n_k e0^k - sum_{j>=1} e_j u_{k-j} e0^(j-1)
    let e0 = d[0].clone();
    let mut e0_pow = vec![MultiPoly::one(nv)];
    for k in 1..m {
        let next = &e0_pow[k - 1] * &e0;
        e0_pow.push(next);
    }
    let mut u: Vec<MultiPoly> = Vec::with_capacity(m);
    for k in 0..m {
        let mut acc = match n.get(k) {
            Some(c) => c * &e0_pow[k],
            None => MultiPoly::zero(nv),
        };
        for j in 1..=k.min(d.len() - 1) {
            if d[j].is_zero() || u[k - j].is_zero() {
                continue;
            }
            acc = &acc - &(&(&d[j] * &u[k - j]) * &e0_pow[j - 1]);
        }
        u.push(acc);
    }
    let den = &e0_pow[m - 1] * &e0;
    RationalFunc::new(u.pop().unwrap(), den)
}

/// Residue of a univariate function at a finite point, as a scalar.
pub fn residue_scalar(f: &RationalFunc, var: usize, point: &BigRational) -> Result<BigRational, AlgebraError> {
    let r = residue_at(f, var, point)?;
    r.as_constant().ok_or(AlgebraError::NotUnivariate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn rf(s: &str, n: usize) -> RationalFunc {
        RationalFunc::parse(s, n).unwrap()
    }

    #[test]
    fn simple_pole() {
        let s = laurent_at(&rf("1/(1+z)", 1), 0, ExpansionPoint::Finite(rat(-1)), 3).unwrap();
        assert_eq!(s.lowest_order, -1);
        assert_eq!(s.coeffs, vec![rat(1), rat(0), rat(0), rat(0)]);
        assert_eq!(s.residue(), Some(rat(1)));
    }

    #[test]
    fn x_of_z_at_minus_one() {
        let s = laurent_at(&rf("z^3/(1+z)", 1), 0, ExpansionPoint::Finite(rat(-1)), 4).unwrap();
        assert_eq!(s.lowest_order, -1);
        assert_eq!(s.coeffs, vec![rat(-1), rat(3), rat(-3), rat(1), rat(0)]);
    }

    #[test]
    fn w01_at_infinity() {
        let s = laurent_at(&rf("-(2z+3)/(1+z)", 1), 0, ExpansionPoint::Infinity, 2).unwrap();
        assert_eq!(s.lowest_order, 0);
        assert_eq!(s.coeffs, vec![rat(-2), rat(-1)]);
    }

    #[test]
    fn pole_bound_enforced() {
        let f = RationalFunc::new(MultiPoly::one(1), MultiPoly::univariate(&[0, 1]).pow(65)).unwrap();
        assert!(laurent_at(&f, 0, ExpansionPoint::Finite(rat(0)), 0).is_err());
        assert!(residue_at(&f, 0, &rat(0)).is_err());
    }

    #[test]
    fn multivariate_residue() {
        // Res_{z1=-1} z2/((z1+1)^2 (z1 - z2)) = -z2/(1+z2)^2
        let f = rf("z2/((z1+1)^2 (z1-z2))", 2);
        let r = residue_at(&f, 0, &rat(-1)).unwrap();
        assert!(r.equals(&rf("-z2/(1+z2)^2", 2)));
    }

    #[test]
    fn residue_of_simple_pole() {
        assert_eq!(residue_scalar(&rf("1/(z+1)", 1), 0, &rat(-1)).unwrap(), BigRational::one());
    }
}
