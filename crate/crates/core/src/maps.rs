//! Brute-force enumeration of labeled bicolored maps.
//!
//! Half-edges are numbered vertex by vertex. `sigma_black` cycles through the
//! half-edges of each black vertex; `sigma_white` ranges over permutations
//! preserving the type classes (one class for a single edge type, odd and
//! even positions within each black vertex for two). Faces are the cycles of
//! `sigma_black . sigma_white` with `sigma_white` applied first, and each map
//! carries the weight `N^(V_white - p + F)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::CoreError;

/// Default bound on `candidates * half-edges`.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Edge-type count and black-vertex degree profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapSpec {
    pub edge_types: u8,
    pub profile: Vec<u32>,
}

impl MapSpec {
    pub fn new(edge_types: u8, profile: &[u32]) -> Result<Self, CoreError> {
        if !(1..=2).contains(&edge_types) {
            return Err(CoreError::Domain(format!("edge-type count must be 1 or 2, got {edge_types}")));
        }
        if profile.is_empty() || profile.contains(&0) {
            return Err(CoreError::Domain("profile entries must be positive".into()));
        }
        Ok(MapSpec { edge_types, profile: profile.to_vec() })
    }

    /// Total half-edge count `p`.
    pub fn half_edges(&self) -> usize {
        self.edge_types as usize * self.profile.iter().sum::<u32>() as usize
    }

    fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.profile.len() + 1);
        let mut acc = 0;
        out.push(0);
        for &k in &self.profile {
            acc += self.edge_types as usize * k as usize;
            out.push(acc);
        }
        out
    }

    /// Vertex owning each half-edge.
    fn vertex_of(&self) -> Vec<usize> {
        let off = self.offsets();
        let mut out = vec![0; self.half_edges()];
        for v in 0..self.profile.len() {
            for slot in out.iter_mut().take(off[v + 1]).skip(off[v]) {
                *slot = v;
            }
        }
        out
    }

    /// The fixed permutation with one cycle per black vertex.
    pub fn sigma_black(&self) -> Vec<usize> {
        let off = self.offsets();
        let mut s = vec![0; self.half_edges()];
        for v in 0..self.profile.len() {
            for e in off[v]..off[v + 1] {
                s[e] = if e + 1 == off[v + 1] { off[v] } else { e + 1 };
            }
        }
        s
    }

    /// Half-edges grouped by type class, each in increasing order.
    pub fn type_classes(&self) -> Vec<Vec<usize>> {
        let off = self.offsets();
        let m = self.edge_types as usize;
        let mut classes = vec![Vec::new(); m];
        for v in 0..self.profile.len() {
            for e in off[v]..off[v + 1] {
                classes[(e - off[v]) % m].push(e);
            }
        }
        classes
    }

    /// Number of admissible `sigma_white`.
    pub fn candidates(&self) -> u128 {
        self.type_classes().iter().map(|c| factorial(c.len())).product()
    }

    fn check_budget(&self, budget: u128) -> Result<(), CoreError> {
        let needed = self.candidates().saturating_mul(self.half_edges() as u128);
        if needed > budget {
            return Err(CoreError::BudgetExceeded { needed, budget });
        }
        Ok(())
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |a, b| a.saturating_mul(b))
}

/// Genus of one connected component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub black_vertices: Vec<usize>,
    pub genus: u32,
}

/// Laurent polynomial in `N` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly(pub BTreeMap<i64, BigInt>);

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly(BTreeMap::new())
    }

    pub fn monomial(exp: i64, c: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    pub fn add_term(&mut self, exp: i64, c: BigInt) {
        let slot = self.0.entry(exp).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.0.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.0 {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.0 {
            out.add_term(*e, -c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &other.0 {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.0.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (*e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "N")?,
                (1, false) => write!(f, "{a}*N")?,
                (_, true) => write!(f, "N^{e}")?,
                (_, false) => write!(f, "{a}*N^{e}")?,
            }
        }
        Ok(())
    }
}

/// Per-genus counts of connected maps plus the full (disconnected) moment tally.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapTally {
    pub spec: MapSpec,
    /// genus -> number of connected maps
    pub connected: BTreeMap<u32, u64>,
    /// exponent of `N` -> number of maps, connected or not
    pub moments: BTreeMap<i64, u64>,
}

impl MapTally {
    /// `sum_g count_g N^(2 - 2g - n)`.
    pub fn cumulant_polynomial(&self) -> LaurentPoly {
        let n = self.spec.profile.len() as i64;
        let mut p = LaurentPoly::zero();
        for (&g, &c) in &self.connected {
            p.add_term(2 - 2 * g as i64 - n, BigInt::from(c));
        }
        p
    }

    pub fn moment_polynomial(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&e, &c) in &self.moments {
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    pub fn genus_count(&self, g: u32) -> u64 {
        self.connected.get(&g).copied().unwrap_or(0)
    }

    fn merge(&mut self, other: &MapTally) {
        for (g, c) in &other.connected {
            *self.connected.entry(*g).or_insert(0) += c;
        }
        for (e, c) in &other.moments {
            *self.moments.entry(*e).or_insert(0) += c;
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Reusable buffers for analysing one candidate.
struct Analyzer {
    black: Vec<usize>,
    vertex: Vec<usize>,
    parent: Vec<usize>,
    seen: Vec<bool>,
    // per component root: [black vertices, white vertices, half-edges, faces]
    stats: Vec<[i64; 4]>,
    black_seen: Vec<bool>,
}

impl Analyzer {
    fn new(spec: &MapSpec) -> Self {
        let p = spec.half_edges();
        Analyzer {
            black: spec.sigma_black(),
            vertex: spec.vertex_of(),
            parent: vec![0; p],
            seen: vec![false; p],
            stats: vec![[0; 4]; p],
            black_seen: vec![false; spec.profile.len()],
        }
    }

    /// Components as `(root, [V_black, V_white, p, F])`, plus the total `N` exponent.
    fn analyze(&mut self, white: &[usize]) -> (Vec<(usize, [i64; 4])>, i64) {
        let p = white.len();
        for e in 0..p {
            self.parent[e] = e;
            self.stats[e] = [0; 4];
            self.seen[e] = false;
        }
        for e in 0..p {
            for t in [self.black[e], white[e]] {
                let (a, b) = (find(&mut self.parent, e), find(&mut self.parent, t));
                if a != b {
                    self.parent[a] = b;
                }
            }
        }
        for e in 0..p {
            let r = find(&mut self.parent, e);
            self.stats[r][2] += 1;
        }
        // white vertices
        for e in 0..p {
            if !self.seen[e] {
                let r = find(&mut self.parent, e);
                self.stats[r][1] += 1;
                let mut x = e;
                while !self.seen[x] {
                    self.seen[x] = true;
                    x = white[x];
                }
            }
        }
        // faces: cycles of black . white
        self.seen[..p].fill(false);
        for e in 0..p {
            if !self.seen[e] {
                let r = find(&mut self.parent, e);
                self.stats[r][3] += 1;
                let mut x = e;
                while !self.seen[x] {
                    self.seen[x] = true;
                    x = self.black[white[x]];
                }
            }
        }
        self.black_seen.fill(false);
        for e in 0..p {
            let v = self.vertex[e];
            if !self.black_seen[v] {
                self.black_seen[v] = true;
                let r = find(&mut self.parent, e);
                self.stats[r][0] += 1;
            }
        }
        let mut comps = Vec::new();
        let mut exponent = 0;
        for e in 0..p {
            if self.parent[e] == e {
                let s = self.stats[e];
                exponent += s[1] - s[2] + s[3];
                comps.push((e, s));
            }
        }
        (comps, exponent)
    }
}

fn component_genus(s: [i64; 4]) -> Result<u32, CoreError> {
    let chi = s[0] + s[1] - s[2] + s[3];
    let twice_g = 2 - chi;
    if twice_g < 0 || twice_g % 2 != 0 {
        return Err(CoreError::NonIntegerGenus(twice_g));
    }
    Ok((twice_g / 2) as u32)
}

/// Connected components of the map `(sigma_black, white)` with their genera.
pub fn genus_of(spec: &MapSpec, white: &[usize]) -> Result<Vec<Component>, CoreError> {
    let p = spec.half_edges();
    if white.len() != p {
        return Err(CoreError::Domain(format!("sigma_white has {} entries, expected {p}", white.len())));
    }
    let mut hit = vec![false; p];
    for &t in white {
        if t >= p || hit[t] {
            return Err(CoreError::Domain("sigma_white is not a permutation".into()));
        }
        hit[t] = true;
    }
    let m = spec.edge_types as usize;
    let off = spec.offsets();
    let vertex = spec.vertex_of();
    for (e, &t) in white.iter().enumerate() {
        if (e - off[vertex[e]]) % m != (t - off[vertex[t]]) % m {
            return Err(CoreError::Domain("sigma_white mixes type classes".into()));
        }
    }
    let mut an = Analyzer::new(spec);
    let (comps, _) = an.analyze(white);
    let mut out = Vec::new();
    for (root, s) in comps {
        let mut verts: Vec<usize> = (0..p).filter(|&e| find(&mut an.parent, e) == root).map(|e| vertex[e]).collect();
        verts.dedup();
        verts.sort_unstable();
        verts.dedup();
        out.push(Component { black_vertices: verts, genus: component_genus(s)? });
    }
    out.sort_by(|a, b| a.black_vertices.cmp(&b.black_vertices));
    Ok(out)
}

/// Lexicographic successor of a permutation of `0..n`; false at the last one.
fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn tally_slice(spec: &MapSpec, classes: &[Vec<usize>], first: &[usize]) -> Result<MapTally, CoreError> {
    let p = spec.half_edges();
    let n = spec.profile.len() as i64;
    let mut white = vec![0usize; p];
    for (i, &t) in first.iter().enumerate() {
        white[classes[0][i]] = classes[0][t];
    }
    let mut tally = MapTally { spec: spec.clone(), connected: BTreeMap::new(), moments: BTreeMap::new() };
    let mut an = Analyzer::new(spec);
    let mut visit = |white: &[usize]| -> Result<(), CoreError> {
        let (comps, exponent) = an.analyze(white);
        *tally.moments.entry(exponent).or_insert(0) += 1;
        if let [(_, s)] = comps.as_slice() {
            let g = component_genus(*s)?;
            debug_assert_eq!(exponent, 2 - 2 * g as i64 - n);
            *tally.connected.entry(g).or_insert(0) += 1;
        } else {
            for (_, s) in &comps {
                component_genus(*s)?;
            }
        }
        Ok(())
    };
    if classes.len() == 1 {
        visit(&white)?;
    } else {
        let mut second: Vec<usize> = (0..classes[1].len()).collect();
        loop {
            for (i, &t) in second.iter().enumerate() {
                white[classes[1][i]] = classes[1][t];
            }
            visit(&white)?;
            if !next_permutation(&mut second) {
                break;
            }
        }
    }
    Ok(tally)
}

/// Exact per-genus counts of connected maps and the full moment tally.
pub fn enumerate_cumulants(spec: &MapSpec, budget: u128) -> Result<MapTally, CoreError> {
    spec.check_budget(budget)?;
    let classes = spec.type_classes();
    let firsts = all_permutations(classes[0].len());
    let parts: Vec<MapTally> = firsts
        .par_iter()
        .map(|f| tally_slice(spec, &classes, f))
        .collect::<Result<_, _>>()?;
    let mut total = MapTally { spec: spec.clone(), connected: BTreeMap::new(), moments: BTreeMap::new() };
    for t in &parts {
        total.merge(t);
    }
    Ok(total)
}

/// `sum_M N^(V_white - p + F)` over all maps with the given profile.
pub fn moment_polynomial(spec: &MapSpec, budget: u128) -> Result<LaurentPoly, CoreError> {
    Ok(enumerate_cumulants(spec, budget)?.moment_polynomial())
}

fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for mut p in set_partitions(n - 1) {
        for b in 0..p.len() {
            let mut q = p.clone();
            q[b].push(n - 1);
            out.push(q);
        }
        p.push(vec![n - 1]);
        out.push(p);
    }
    out
}

/// Connected cumulant polynomial recovered from moment polynomials by
/// inverting `m_K = sum over set partitions of prod c_block`.
pub fn cumulant_by_inversion(spec: &MapSpec, budget: u128) -> Result<LaurentPoly, CoreError> {
    let mut memo: BTreeMap<Vec<u32>, LaurentPoly> = BTreeMap::new();
    inversion_rec(spec.edge_types, &spec.profile, budget, &mut memo)
}

fn inversion_rec(
    m: u8,
    profile: &[u32],
    budget: u128,
    memo: &mut BTreeMap<Vec<u32>, LaurentPoly>,
) -> Result<LaurentPoly, CoreError> {
    let mut key = profile.to_vec();
    key.sort_unstable();
    if let Some(c) = memo.get(&key) {
        return Ok(c.clone());
    }
    let spec = MapSpec::new(m, &key)?;
    let mut c = moment_polynomial(&spec, budget)?;
    for part in set_partitions(key.len()) {
        if part.len() < 2 {
            continue;
        }
        let mut prod = LaurentPoly::monomial(0, BigInt::one());
        for block in &part {
            let sub: Vec<u32> = block.iter().map(|&i| key[i]).collect();
            prod = prod.mul(&inversion_rec(m, &sub, budget, memo)?);
        }
        c = c.sub(&prod);
    }
    memo.insert(key, c.clone());
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_in_order() {
        let p = all_permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[1], vec![0, 2, 1]);
        assert_eq!(p[5], vec![2, 1, 0]);
    }

    #[test]
    fn classes_alternate_within_vertices() {
        let s = MapSpec::new(2, &[2, 1]).unwrap();
        assert_eq!(s.type_classes(), vec![vec![0, 2, 4], vec![1, 3, 5]]);
        assert_eq!(s.sigma_black(), vec![1, 2, 3, 0, 5, 4]);
    }

    #[test]
    fn second_moment_two_types() {
        let s = MapSpec::new(2, &[2]).unwrap();
        let t = enumerate_cumulants(&s, DEFAULT_BUDGET).unwrap();
        assert_eq!(t.genus_count(0), 3);
        assert_eq!(t.genus_count(1), 1);
        assert_eq!(t.moment_polynomial().to_string(), "3*N + N^-1");
    }

    #[test]
    fn genus_examples() {
        let s = MapSpec::new(2, &[2]).unwrap();
        assert_eq!(genus_of(&s, &[0, 1, 2, 3]).unwrap()[0].genus, 0);
        assert_eq!(genus_of(&s, &[2, 3, 0, 1]).unwrap()[0].genus, 1);
        assert!(genus_of(&s, &[1, 0, 2, 3]).is_err());
        let one = MapSpec::new(1, &[1]).unwrap();
        assert_eq!(genus_of(&one, &[0]).unwrap()[0].genus, 0);
    }

    #[test]
    fn budget_guard() {
        let s = MapSpec::new(2, &[9]).unwrap();
        assert!(matches!(enumerate_cumulants(&s, 1000), Err(CoreError::BudgetExceeded { .. })));
    }

    #[test]
    fn laurent_display() {
        let mut p = LaurentPoly::zero();
        p.add_term(1, BigInt::from(2));
        p.add_term(-1, BigInt::from(-1));
        p.add_term(0, BigInt::from(1));
        assert_eq!(p.to_string(), "2*N + 1 - N^-1");
    }
}
