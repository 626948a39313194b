//! Cumulant coefficients `c^[g]_{k_1..k_n}` by iterated residues at `z_i = -1`,
//! recurrence checks and the two closed-form conjectures.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use prodloop_algebra::{residue_at, rat, BigRational, MultiPoly, RationalFunc};
use serde::Serialize;

use crate::curve::fuss_catalan;
use crate::solver::ResolventTable;
use crate::CoreError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ResolventResidue,
    MapOracle,
    ConjectureFormula,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CumulantRecord {
    pub genus: u32,
    pub orders: Vec<u32>,
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
    pub provenance: Provenance,
}

fn ser_rational<S: serde::Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Raw residue of `x(z) w_{0,1}(z)` at `z = -1`. The orientation sign is the
/// one that turns it into `c^[0]_1 = 1`.
pub fn orientation_sign() -> BigRational {
    let f = RationalFunc::parse("-z^3 (2z+3)/(1+z)^2", 1).expect("valid");
    let raw = residue_at(&f, 0, &rat(-1)).expect("finite pole").as_constant().expect("constant");
    raw.recip()
}

/// `(-1)^n Res_{z_1=-1} .. Res_{z_n=-1} prod x(z_i)^{k_i} w(z)` for a
/// residue form `w` in `n` variables.
pub fn iterated_residue(w: &RationalFunc, orders: &[u32]) -> Result<BigRational, CoreError> {
    let n = w.nvars();
    if orders.len() != n {
        return Err(CoreError::Domain(format!("{} orders for a {n}-point function", orders.len())));
    }
    let mut num = w.num().clone();
    let mut den = w.den().clone();
    for (i, &k) in orders.iter().enumerate() {
        if k > 0 {
            let z = MultiPoly::var(n, i);
            num = &num * &z.pow(3 * k);
            den = &den * &(&MultiPoly::one(n) + &z).pow(k);
        }
    }
    let mut f = RationalFunc::from_coprime(num, den)?;
    for i in 0..n {
        f = residue_at(&f, i, &rat(-1))?;
    }
    let v = f.as_constant().ok_or_else(|| CoreError::Domain("residue is not constant".into()))?;
    let s = orientation_sign();
    let mut sign = BigRational::one();
    for _ in 0..n {
        sign *= &s;
    }
    Ok(v * sign)
}

/// `c^[g]_{orders}` from the stored resolvent (tilde form for `(0,2)`).
pub fn cumulant_from_resolvent(table: &ResolventTable, g: u32, orders: &[u32]) -> Result<BigRational, CoreError> {
    let n = orders.len();
    if (g, n) == (0, 1) && orders[0] == 0 {
        return Ok(BigRational::one());
    }
    let w = table.residue_form(g, n)?;
    iterated_residue(&w, orders)
}

pub fn record(table: &ResolventTable, g: u32, orders: &[u32]) -> Result<CumulantRecord, CoreError> {
    Ok(CumulantRecord {
        genus: g,
        orders: orders.to_vec(),
        value: cumulant_from_resolvent(table, g, orders)?,
        provenance: Provenance::ResolventResidue,
    })
}

/// Memoized planar values for the recurrence check.
pub struct PlanarCache<'a> {
    table: &'a ResolventTable,
    one: HashMap<u32, BigRational>,
    two: HashMap<(u32, u32), BigRational>,
}

impl<'a> PlanarCache<'a> {
    pub fn new(table: &'a ResolventTable) -> Self {
        PlanarCache { table, one: HashMap::new(), two: HashMap::new() }
    }

    pub fn c1(&mut self, k: u32) -> Result<BigRational, CoreError> {
        if let Some(v) = self.one.get(&k) {
            return Ok(v.clone());
        }
        let v = cumulant_from_resolvent(self.table, 0, &[k])?;
        self.one.insert(k, v.clone());
        Ok(v)
    }

    /// `c^[0]_{i,j}`; zero when an index vanishes (a trace of the identity is not random).
    pub fn c2(&mut self, i: u32, j: u32) -> Result<BigRational, CoreError> {
        if i == 0 || j == 0 {
            return Ok(BigRational::zero());
        }
        let key = (i.min(j), i.max(j));
        if let Some(v) = self.two.get(&key) {
            return Ok(v.clone());
        }
        let v = cumulant_from_resolvent(self.table, 0, &[key.0, key.1])?;
        self.two.insert(key, v.clone());
        Ok(v)
    }
}

/// Residual of the planar two-point recurrence at `(k, q)`, `k >= 2`, `q >= 1`:
///
/// `3 sum_{p1+p2+p3=k-3} c_p1 c_p2 c_{p3+1,q} - c_{k-1,q}
///  + q sum_{m=0}^{k+q-2} c_{k+q-m-2} c_m + q sum_{m=0}^{k-2} c_{k-m-2} c_{m+q}`.
pub fn planar_recurrence_residual(cache: &mut PlanarCache, k: u32, q: u32) -> Result<BigRational, CoreError> {
    if k < 2 || q < 1 {
        return Err(CoreError::Domain(format!("recurrence needs k >= 2 and q >= 1, got ({k},{q})")));
    }
    let mut acc = BigRational::zero();
    if k >= 3 {
        let s = k - 3;
        for p1 in 0..=s {
            for p2 in 0..=(s - p1) {
                let p3 = s - p1 - p2;
                acc += rat(3) * cache.c1(p1)? * cache.c1(p2)? * cache.c2(p3 + 1, q)?;
            }
        }
    }
    acc -= cache.c2(k - 1, q)?;
    let qq = rat(q as i64);
    for m in 0..=(k + q - 2) {
        acc += &qq * cache.c1(k + q - m - 2)? * cache.c1(m)?;
    }
    for m in 0..=(k - 2) {
        acc += &qq * cache.c1(k - m - 2)? * cache.c1(m + q)?;
    }
    Ok(acc)
}

pub fn check_planar_recurrence(table: &ResolventTable, k: u32, q: u32) -> Result<bool, CoreError> {
    let mut cache = PlanarCache::new(table);
    Ok(planar_recurrence_residual(&mut cache, k, q)?.is_zero())
}

fn binom(n: u64, k: u64) -> BigInt {
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    b
}

/// `2 i j / (3 (i + j)) binom(3i, i) binom(3j, j)`.
pub fn conjecture_planar_two_point(i: u32, j: u32) -> BigRational {
    let (i, j) = (i as u64, j as u64);
    BigRational::new(BigInt::from(2 * i * j) * binom(3 * i, i) * binom(3 * j, j), BigInt::from(3 * (i + j)))
}

/// `(n-1)^2 n / (6 (3n - 1)) binom(3n, n)`.
pub fn conjecture_genus_one(n: u32) -> BigRational {
    let n = n as u64;
    BigRational::new(BigInt::from((n - 1) * (n - 1) * n) * binom(3 * n, n), BigInt::from(6 * (3 * n - 1)))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureCheck {
    pub conjecture: &'static str,
    pub orders: Vec<u32>,
    pub extracted: String,
    pub formula: String,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub max_order: u32,
    pub checks: Vec<ConjectureCheck>,
    pub planar_two_point_confirmed: bool,
    pub genus_one_confirmed: bool,
}

/// Compares both closed forms with residue-extracted values for orders up to `max_order`.
pub fn check_conjectures(table: &ResolventTable, max_order: u32) -> Result<ConjectureReport, CoreError> {
    let mut checks = Vec::new();
    let mut cache = PlanarCache::new(table);
    for i in 1..=max_order {
        for j in i..=max_order {
            let e = cache.c2(i, j)?;
            let f = conjecture_planar_two_point(i, j);
            checks.push(ConjectureCheck {
                conjecture: "planar-two-point",
                orders: vec![i, j],
                agree: e == f,
                extracted: e.to_string(),
                formula: f.to_string(),
            });
        }
    }
    for n in 1..=max_order {
        let e = cumulant_from_resolvent(table, 1, &[n])?;
        let f = conjecture_genus_one(n);
        checks.push(ConjectureCheck {
            conjecture: "genus-one-one-point",
            orders: vec![n],
            agree: e == f,
            extracted: e.to_string(),
            formula: f.to_string(),
        });
    }
    let all = |name: &str| checks.iter().filter(|c| c.conjecture == name).all(|c| c.agree);
    Ok(ConjectureReport {
        max_order,
        planar_two_point_confirmed: all("planar-two-point"),
        genus_one_confirmed: all("genus-one-one-point"),
        checks,
    })
}

/// `c^[0]_k == C_k[3]` for `k <= kmax`; returns the first mismatch.
pub fn check_fuss_catalan(table: &ResolventTable, kmax: u32) -> Result<Option<u32>, CoreError> {
    for k in 0..=kmax {
        let v = cumulant_from_resolvent(table, 0, &[k])?;
        if v != BigRational::from_integer(fuss_catalan(k as u64, 3)) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}
