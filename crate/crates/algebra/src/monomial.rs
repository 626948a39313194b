//! Packed exponent vectors.
//!
//! A monomial is stored in a single `u128`: the top 16 bits hold the total
//! degree and the remaining 112 bits hold up to 14 eight-bit exponents, with
//! variable 0 in the most significant byte. Comparing the packed integers is
//! therefore the graded lexicographic order with `z1 > z2 > ...`.

use std::fmt;

/// Maximum number of variables a monomial can carry.
pub const MAX_VARS: usize = 14;
/// Maximum exponent of a single variable.
pub const MAX_EXPONENT: u32 = 255;
/// Maximum total degree.
pub const MAX_DEGREE: u32 = u16::MAX as u32;

const DEG_SHIFT: u32 = 112;
const VAR_MASK: u128 = (1u128 << DEG_SHIFT) - 1;
// bit 8k for k = 1..=14: where a carry out of byte k-1 lands
const CARRY_BITS: u128 = {
    let mut m = 0u128;
    let mut k = 1;
    while k <= 14 {
        m |= 1u128 << (8 * k);
        k += 1;
    }
    m
};

#[inline]
fn var_shift(var: usize) -> u32 {
    (104 - 8 * var) as u32
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u128);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    /// The monomial `z_var^exp`.
    pub fn var_pow(var: usize, exp: u32) -> Monomial {
        assert!(var < MAX_VARS, "variable index {var} exceeds {MAX_VARS}");
        assert!(exp <= MAX_EXPONENT, "exponent {exp} exceeds {MAX_EXPONENT}");
        Monomial(((exp as u128) << DEG_SHIFT) | ((exp as u128) << var_shift(var)))
    }

    pub fn var(var: usize) -> Monomial {
        Self::var_pow(var, 1)
    }

    /// Builds a monomial from an exponent slice; `None` when a limit is exceeded.
    pub fn from_exponents(exps: &[u32]) -> Option<Monomial> {
        if exps.len() > MAX_VARS {
            return None;
        }
        let mut bits = 0u128;
        let mut deg = 0u32;
        for (i, &e) in exps.iter().enumerate() {
            if e > MAX_EXPONENT {
                return None;
            }
            deg += e;
            bits |= (e as u128) << var_shift(i);
        }
        if deg > MAX_DEGREE {
            return None;
        }
        Some(Monomial(bits | ((deg as u128) << DEG_SHIFT)))
    }

    #[inline]
    pub fn exponent(self, var: usize) -> u32 {
        ((self.0 >> var_shift(var)) & 0xff) as u32
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (self.0 >> DEG_SHIFT) as u32
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    /// Product of two monomials, `None` on exponent overflow.
    #[inline]
    pub fn checked_mul(self, other: Monomial) -> Option<Monomial> {
        let a = self.0 & VAR_MASK;
        let b = other.0 & VAR_MASK;
        let sum = a + b;
        if (a ^ b ^ sum) & CARRY_BITS != 0 || sum > VAR_MASK {
            return None;
        }
        let deg = self.degree() + other.degree();
        if deg > MAX_DEGREE {
            return None;
        }
        Some(Monomial(sum | ((deg as u128) << DEG_SHIFT)))
    }

    /// Product of two monomials; panics on exponent overflow.
    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        self.checked_mul(other)
            .expect("monomial exponent overflow (per-variable limit is 255)")
    }

    pub fn divides(self, other: Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exponent(i) <= other.exponent(i))
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(self, other: Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial(self.0 - other.0))
    }

    /// Replaces the exponent of `var`.
    pub fn with_exponent(self, var: usize, exp: u32) -> Monomial {
        let old = self.exponent(var);
        let cleared = self.0 & !(0xffu128 << var_shift(var));
        let deg = self.degree() - old + exp;
        assert!(exp <= MAX_EXPONENT && deg <= MAX_DEGREE);
        let bits = (cleared & VAR_MASK) | ((exp as u128) << var_shift(var));
        Monomial(bits | ((deg as u128) << DEG_SHIFT))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = (0..MAX_VARS).rev().find(|&i| self.exponent(i) > 0).map_or(0, |i| i + 1);
        write!(f, "Monomial{:?}", self.exponents(n))
    }
}
