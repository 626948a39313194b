//! Recursive solution of the connected loop equations in z-coordinates.
//!
//! Every resolvent is stored as `W^z_{g,n}(z_1..z_n) = W_{g,n}(x(z_1), .., x(z_n))`
//! with a denominator kept as a product of the atoms `z_i`, `1+z_i`,
//! `2 z_i + 3`, `Q(z_i, z_j)` and `z_i - z_j`, where
//! `x(a) - x(b) = (a - b) Q(a, b) / ((1+a)(1+b))` and
//! `Q(a, b) = a^2 + a b + b^2 + a^2 b + a b^2`.
//!
//! The equation solved for the unknown `W_{g,n}`, multiplied through by `x_1^2`:
//!
//! ```text
//! 0 = x1^2 T_{g,n} + x1^2 O_x W_{g-1,n} - x1 W_{g,n} + [g=0,n=1]
//!     + sum_i D_i E_i + sum_{i<j} (2/x1) D_i D_j DD_ij
//! ```
//!
//! with `T` the sum over set partitions of three copies of `x1`,
//! `E_i = x_i (2 x1 P_11 - x1 P_1i - x_i P_ii) / (x1 - x_i)`,
//! `DD_ij = x1 x_i x_j * W_{g,n-2}[x1, x_i, x_j]` (second divided difference),
//! `O_x = (1/x1) D_1 + D_1^2 / 2` and `D_i = (1/x'(z_i)) d/dz_i`.

use std::collections::{BTreeMap, HashMap};

use prodloop_algebra::factored::split_rational_roots;
use prodloop_algebra::{rat, BigRational, FactoredFrac, MultiPoly, RationalFunc};

use crate::CoreError;

/// One term of a rooted partition sum: the root positions are split into
/// `parts`, the remaining variables into `subsets`, with genus `genera[p]`
/// attached to part `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionTerm {
    pub parts: Vec<Vec<usize>>,
    pub subsets: Vec<Vec<usize>>,
    pub genera: Vec<u32>,
}

fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for p in set_partitions(rest) {
        let mut alone = vec![vec![first]];
        alone.extend(p.iter().cloned());
        out.push(alone);
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first);
            out.push(q);
        }
    }
    out
}

fn compositions(total: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for a in 0..=total {
        for mut r in compositions(total - a, k - 1) {
            r.insert(0, a);
            out.push(r);
        }
    }
    out
}

/// All terms of a sum over set partitions `mu` of `nroots` labelled roots,
/// distributions of `others` over the parts, and genus splits summing to
/// `genus_total(|mu|)` (skipped when negative).
pub fn partition_terms(nroots: usize, others: &[usize], genus_total: impl Fn(usize) -> i64) -> Vec<PartitionTerm> {
    let roots: Vec<usize> = (0..nroots).collect();
    let mut out = Vec::new();
    for mu in set_partitions(&roots) {
        let k = mu.len();
        let total = genus_total(k);
        if total < 0 {
            continue;
        }
        let count = k.pow(others.len() as u32);
        for code in 0..count {
            let mut subsets = vec![Vec::new(); k];
            let mut c = code;
            for &o in others {
                subsets[c % k].push(o);
                c /= k;
            }
            for genera in compositions(total as u32, k) {
                out.push(PartitionTerm { parts: mu.clone(), subsets: subsets.clone(), genera });
            }
        }
    }
    out
}

/// A solved resolvent.
#[derive(Clone, Debug)]
pub struct Entry {
    pub g: u32,
    pub n: usize,
    /// `W^z_{g,n}` with factored denominator.
    pub wz: FactoredFrac,
    /// `w_{g,n}`; for `(0,2)` the shifted form `1/(z1-z2)^2`.
    pub w: RationalFunc,
    /// Total degree of the numerator of `w`.
    pub num_degree: u32,
    /// Whether every numerator coefficient of `w` is positive once the
    /// denominator is primitive with positive leading coefficient.
    pub positive_numerator: bool,
}

/// Map `(g, n) -> W^z_{g,n}` plus derived `w_{g,n}`.
#[derive(Clone, Debug)]
pub struct ResolventTable {
    entries: BTreeMap<(u32, usize), Entry>,
}

fn var(n: usize, i: usize) -> MultiPoly {
    MultiPoly::var(n, i)
}

fn one_plus(n: usize, i: usize) -> MultiPoly {
    &MultiPoly::one(n) + &var(n, i)
}

fn two_z_plus_3(n: usize, i: usize) -> MultiPoly {
    &var(n, i).scale(&rat(2)) + &MultiPoly::from_int(n, 3)
}

/// `Q(z_a, z_b) = z_a^2 + z_a z_b + z_b^2 + z_a^2 z_b + z_a z_b^2`.
pub fn q_poly(n: usize, a: usize, b: usize) -> MultiPoly {
    let (za, zb) = (var(n, a), var(n, b));
    let ab = &za * &zb;
    &(&(&(&za * &za) + &ab) + &(&zb * &zb)) + &(&ab * &(&za + &zb))
}

/// `x(z_i) = z_i^3 / (1+z_i)`.
fn x_of(n: usize, i: usize) -> FactoredFrac {
    FactoredFrac::new(var(n, i).pow(3), vec![(one_plus(n, i), 1)]).expect("nonzero")
}

/// `y(z_i) = -(1+z_i)/z_i^2`.
fn y_of(n: usize, i: usize) -> FactoredFrac {
    FactoredFrac::new(-one_plus(n, i), vec![(var(n, i), 2)]).expect("nonzero")
}

/// Divides by `x(z_a) - x(z_b)`.
fn div_x_diff(f: &mut FactoredFrac, a: usize, b: usize) -> Result<(), CoreError> {
    let n = f.nvars();
    f.mul_factor(&one_plus(n, a), 1);
    f.mul_factor(&one_plus(n, b), 1);
    f.push_factor(&var(n, a) - &var(n, b), 1)?;
    f.push_factor(q_poly(n, a, b), 1)?;
    Ok(())
}

/// `D_i f = (1/x'(z_i)) df/dz_i`.
pub fn d_op(f: &FactoredFrac, i: usize) -> FactoredFrac {
    let n = f.nvars();
    let mut d = f.derivative(i);
    d.mul_factor(&one_plus(n, i), 2);
    d.push_factor(var(n, i), 2).expect("nonzero");
    d.push_factor(two_z_plus_3(n, i), 1).expect("nonzero");
    d.cancel_factor(&var(n, i));
    d.cancel_factor(&two_z_plus_3(n, i));
    d
}

/// `O_x f = (1/x(z_i)) D_i f + (1/2) D_i^2 f`.
pub fn op_ox(f: &FactoredFrac, i: usize) -> FactoredFrac {
    let n = f.nvars();
    let d1 = d_op(f, i);
    let d2 = d_op(&d1, i);
    let mut first = d1;
    first.mul_factor(&one_plus(n, i), 1);
    first.push_factor(var(n, i), 3).expect("nonzero");
    FactoredFrac::sum(&[first, d2.scale(&prodloop_algebra::frac(1, 2))]).reduced()
}

/// `1/f` for `f` whose numerator depends on `z_1` alone.
fn recip_univariate(f: &FactoredFrac, v: usize) -> Result<FactoredFrac, CoreError> {
    let n = f.nvars();
    if f.is_zero() {
        return Err(CoreError::DegenerateCoefficient);
    }
    let mut num = MultiPoly::one(n);
    for (p, e) in f.den_factors() {
        num = &num * &p.pow(*e);
    }
    let (unit, parts) = split_rational_roots(f.num(), v);
    let mut out = FactoredFrac::from_poly(num.scale(&unit.recip()));
    for (p, e) in parts {
        out.push_factor(p, e)?;
    }
    Ok(out)
}

fn is_pole_atom(p: &MultiPoly, n: usize, allow_one_plus: bool) -> bool {
    (0..n).any(|i| {
        *p == var(n, i) || *p == two_z_plus_3(n, i) || (allow_one_plus && *p == one_plus(n, i))
    })
}

/// Checks that a reduced `w`-form has denominator factors only at `z_i = 0`
/// and `z_i = -3/2`.
fn check_poles(g: u32, n: usize, f: &FactoredFrac) -> Result<(), CoreError> {
    for (p, _) in f.den_factors() {
        if !is_pole_atom(p, n, false) {
            return Err(CoreError::PoleLocation { g, n, factor: p.to_string() });
        }
    }
    Ok(())
}

/// `w = W^z * prod x'(z_i)`, reduced, poles checked.
fn w_form_of(g: u32, n: usize, wz: &FactoredFrac) -> Result<FactoredFrac, CoreError> {
    let mut w = wz.clone();
    for i in 0..n {
        w.mul_factor(&var(n, i), 2);
        w.mul_factor(&two_z_plus_3(n, i), 1);
        w.push_factor(one_plus(n, i), 2)?;
        w.cancel_factor(&one_plus(n, i));
    }
    w.reduce();
    check_poles(g, n, &w)?;
    Ok(w)
}

fn positive_numerator(w: &RationalFunc) -> bool {
    let lc = w.den().leading_coeff();
    w.num().terms().iter().all(|(_, c)| (c * &lc) > rat(0))
}

fn make_entry(g: u32, n: usize, wz: FactoredFrac, w: RationalFunc) -> Entry {
    let num_degree = w.num().total_degree();
    let positive_numerator = positive_numerator(&w);
    Entry { g, n, wz, w, num_degree, positive_numerator }
}

/// `tilde-w_{0,2} = P / Q^2`, the printed closed form.
pub fn tilde_w02_closed_form() -> RationalFunc {
    RationalFunc::parse(
        "(z2^2 z1^2 + 2(z2 z1^2 + z2^2 z1) + z1^2 + z2^2 + 4 z2 z1)/(z2 z1^2 + z2^2 z1 + z1^2 + z2^2 + z2 z1)^2",
        2,
    )
    .expect("valid expression")
}

/// `W^z_{0,2} = [1/(z1-z2)^2 - x'(z1) x'(z2)/(x(z1)-x(z2))^2] / (x'(z1) x'(z2))`.
pub fn base_w02() -> RationalFunc {
    let x1 = RationalFunc::parse("z1^3/(1+z1)", 2).expect("valid");
    let x2 = RationalFunc::parse("z2^3/(1+z2)", 2).expect("valid");
    let xp1 = x1.diff(0).expect("var");
    let xp2 = x2.diff(1).expect("var");
    let bergman = RationalFunc::parse("1/(z1-z2)^2", 2).expect("valid");
    let dx = &x1 - &x2;
    let prod = &xp1 * &xp2;
    let shifted = &bergman - &(&prod / &(&dx * &dx));
    &shifted / &prod
}

/// `tilde-w_{0,2} = W^z_{0,2} x'(z1) x'(z2)`.
pub fn tilde_from_wz02(wz: &RationalFunc) -> RationalFunc {
    let xp1 = RationalFunc::parse("(2 z1^3 + 3 z1^2)/(1+z1)^2", 2).expect("valid");
    let xp2 = RationalFunc::parse("(2 z2^3 + 3 z2^2)/(1+z2)^2", 2).expect("valid");
    &(wz * &xp1) * &xp2
}

fn w02_atoms() -> Vec<MultiPoly> {
    vec![var(2, 0), var(2, 1), two_z_plus_3(2, 0), two_z_plus_3(2, 1), one_plus(2, 0), one_plus(2, 1), q_poly(2, 0, 1)]
}

impl Default for ResolventTable {
    fn default() -> Self {
        Self::new()
    }
}

/// Values for specialized variables (`None` keeps a variable symbolic).
/// `z_1` is always symbolic.
#[derive(Clone, Debug)]
struct Spec {
    values: Vec<Option<BigRational>>,
}

impl Spec {
    fn symbolic(n: usize) -> Self {
        Spec { values: vec![None; n] }
    }

    /// Specializes every variable not in `keep`.
    fn apply(&self, f: &FactoredFrac, keep: &[usize]) -> Result<FactoredFrac, CoreError> {
        let mut out = f.clone();
        for (v, val) in self.values.iter().enumerate() {
            if let Some(c) = val {
                if !keep.contains(&v) && (out.num().uses_var(v) || out.den_factors().iter().any(|(p, _)| p.uses_var(v))) {
                    out = out.partial_eval(v, c)?;
                }
            }
        }
        Ok(out)
    }
}

type Memo = HashMap<(u32, Vec<usize>, Vec<usize>), FactoredFrac>;

/// How `solve_wgn` computes an entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Every variable symbolic throughout.
    Symbolic,
    /// `z_1` symbolic, the others set to grid values; the symmetric numerator
    /// is recovered by exact tensor interpolation and checked off-grid.
    Interpolate,
    /// `Symbolic` for `n <= 3`, `Interpolate` otherwise.
    Auto,
}

impl ResolventTable {
    /// Table holding the base cases `(0,1)` and `(0,2)`.
    pub fn new() -> Self {
        let mut entries = BTreeMap::new();
        let w01 = RationalFunc::parse("-(2z+3)/(1+z)", 1).expect("valid");
        entries.insert((0, 1), make_entry(0, 1, y_of(1, 0), w01));
        let wz02 = FactoredFrac::from_rational_func(&base_w02(), &w02_atoms()).expect("W02 splits over atoms");
        let w02 = RationalFunc::parse("1/(z1-z2)^2", 2).expect("valid");
        entries.insert((0, 2), make_entry(0, 2, wz02, w02));
        ResolventTable { entries }
    }

    /// Solves every `(g, n)` with `0 < 2g-2+n <= chi_max`, by increasing
    /// `2g-2+n` and then by `n`.
    pub fn build(chi_max: u32) -> Result<Self, CoreError> {
        let mut t = Self::new();
        for (g, n) in Self::schedule(chi_max) {
            t.solve_wgn(g, n)?;
        }
        Ok(t)
    }

    /// Solve order for a given `chi_max`.
    pub fn schedule(chi_max: u32) -> Vec<(u32, usize)> {
        let mut out = Vec::new();
        for chi in 1..=chi_max as i64 {
            for n in 1..=(chi + 2) as usize {
                let twice_g = chi + 2 - n as i64;
                if twice_g >= 0 && twice_g % 2 == 0 {
                    out.push(((twice_g / 2) as u32, n));
                }
            }
        }
        out
    }

    pub fn get(&self, g: u32, n: usize) -> Option<&Entry> {
        self.entries.get(&(g, n))
    }

    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.entries.values()
    }

    pub fn contains(&self, g: u32, n: usize) -> bool {
        self.entries.contains_key(&(g, n))
    }

    /// `w_{g,n}` (shifted form for `(0,2)`).
    pub fn w(&self, g: u32, n: usize) -> Result<&RationalFunc, CoreError> {
        self.get(g, n).map(|e| &e.w).ok_or(CoreError::MissingEntry { g, n })
    }

    /// Form used for residue extraction: `w_{g,n}`, except `tilde-w_{0,2}` for `(0,2)`.
    pub fn residue_form(&self, g: u32, n: usize) -> Result<RationalFunc, CoreError> {
        if (g, n) == (0, 2) {
            let e = self.get(0, 2).ok_or(CoreError::MissingEntry { g, n })?;
            return Ok(tilde_from_wz02(&e.wz.to_rational_func()));
        }
        self.w(g, n).cloned()
    }

    /// `W^z_{g,n}` evaluated on the global variables `args`, specialized
    /// outside `keep`.
    fn embed(&self, memo: &mut Memo, spec: &Spec, keep: &[usize], g: u32, args: &[usize]) -> Result<FactoredFrac, CoreError> {
        let kept: Vec<usize> = keep.iter().copied().filter(|k| args.contains(k)).collect();
        let key = (g, args.to_vec(), kept);
        if let Some(f) = memo.get(&key) {
            return Ok(f.clone());
        }
        let nvars = spec.values.len();
        let e = self.get(g, args.len()).ok_or(CoreError::MissingEntry { g, n: args.len() })?;
        // specialize in the stored variables before renaming: cheaper, and
        // no diagonal merge of a slot that is about to become a number
        let mut f = e.wz.clone();
        for (slot, &a) in args.iter().enumerate() {
            if let (false, Some(c)) = (keep.contains(&a), &spec.values[a]) {
                f = f.partial_eval(slot, c)?;
            }
        }
        let f = spec.apply(&f.rename(args, nvars)?, keep)?;
        memo.insert(key, f.clone());
        Ok(f)
    }

    fn product(
        &self,
        memo: &mut Memo,
        spec: &Spec,
        keep: &[usize],
        term: &PartitionTerm,
        roots: &[usize],
        skip: Option<usize>,
    ) -> Result<FactoredFrac, CoreError> {
        let mut acc = FactoredFrac::one(spec.values.len());
        for (p, part) in term.parts.iter().enumerate() {
            if Some(p) == skip {
                continue;
            }
            let mut args: Vec<usize> = part.iter().map(|&r| roots[r]).collect();
            args.extend(term.subsets[p].iter().copied());
            acc = acc.mul(&self.embed(memo, spec, keep, term.genera[p], &args)?);
        }
        Ok(acc)
    }

    /// Partition sum over three copies of `z_1` with the unknown `W_{g,n}`
    /// removed. Returns `(known part, coefficient of the unknown)`.
    pub fn tilde_w_term(&self, g: u32, n: usize) -> Result<(FactoredFrac, FactoredFrac), CoreError> {
        self.tilde_w_term_spec(&mut HashMap::new(), &Spec::symbolic(n), g, n)
    }

    fn tilde_w_term_spec(&self, memo: &mut Memo, spec: &Spec, g: u32, n: usize) -> Result<(FactoredFrac, FactoredFrac), CoreError> {
        let others: Vec<usize> = (1..n).collect();
        let roots = [0usize, 0, 0];
        let mut known = Vec::new();
        let mut coef = Vec::new();
        for term in partition_terms(3, &others, |k| g as i64 + k as i64 - 3) {
            let unknown = (0..term.parts.len()).find(|&p| {
                term.parts[p].len() == 1 && term.subsets[p].len() == n - 1 && term.genera[p] == g
            });
            match unknown {
                Some(p) => coef.push(self.product(memo, spec, &[0], &term, &roots, Some(p))?),
                None => known.push(self.product(memo, spec, &[0], &term, &roots, None)?),
            }
        }
        let known = if known.is_empty() { FactoredFrac::zero(n) } else { FactoredFrac::sum(&known) };
        let coef = if coef.is_empty() { FactoredFrac::zero(n) } else { FactoredFrac::sum(&coef).reduced() };
        Ok((known, coef))
    }

    /// Pair sum `P_ab` over partitions of the roots `[a, b]`, distributing `others`.
    #[allow(clippy::too_many_arguments)]
    fn pair_sum(
        &self,
        memo: &mut Memo,
        spec: &Spec,
        keep: &[usize],
        g: u32,
        a: usize,
        b: usize,
        others: &[usize],
    ) -> Result<FactoredFrac, CoreError> {
        let terms: Vec<FactoredFrac> = partition_terms(2, others, |k| g as i64 + k as i64 - 2)
            .iter()
            .map(|t| self.product(memo, spec, keep, t, &[a, b], None))
            .collect::<Result<_, _>>()?;
        Ok(if terms.is_empty() { FactoredFrac::zero(spec.values.len()) } else { FactoredFrac::sum(&terms) })
    }

    /// `x(z_a)`-derivatives `D^0 f .. D^order f` at `z_a = c_a` of
    /// `f(z) = W^z_{g}(z, rest)`, everything but `z_a` specialized.
    fn slot_jet(&self, memo: &mut Memo, spec: &Spec, g: u32, a: usize, rest: &[usize], order: usize) -> Result<Vec<BigRational>, CoreError> {
        let mut args = vec![a];
        args.extend_from_slice(rest);
        let f = self.embed(memo, spec, &[a], g, &args)?;
        jet(&f, spec, a, order)
    }

    /// `D_i [x_i (2 x_1 P_11 - x_1 P_1i - x_i P_ii) / (x_1 - x_i)]` at the
    /// specialized `z_i`, as a function of `z_1`.
    fn pair_edge_term(&self, memo: &mut Memo, spec: &Spec, g: u32, i: usize, rest: &[usize]) -> Result<FactoredFrac, CoreError> {
        let n = spec.values.len();
        let x1 = x_of(n, 0);
        let p11 = self.pair_sum(memo, spec, &[0], g, 0, 0, rest)?;
        let terms = partition_terms(2, rest, |k| g as i64 + k as i64 - 2);
        // P_1i and D_i P_1i at z_i = c_i: split parts factor into a z_1 function times a jet
        let (mut p1i_val, mut p1i_der) = (Vec::new(), Vec::new());
        // P_ii and D_i P_ii: plain numbers
        let (mut pii, mut dpii) = (rat(0), rat(0));
        for t in &terms {
            let args_of = |p: usize, roots: [usize; 2]| -> Vec<usize> {
                let mut a: Vec<usize> = t.parts[p].iter().map(|&r| roots[r]).collect();
                a.extend(t.subsets[p].iter().copied());
                a
            };
            if t.parts.len() == 2 {
                let p0 = if t.parts[0].contains(&0) { 0 } else { 1 };
                let a = self.embed(memo, spec, &[0], t.genera[p0], &args_of(p0, [0, i]))?;
                let b = jet(&self.embed(memo, spec, &[i], t.genera[1 - p0], &args_of(1 - p0, [0, i]))?, spec, i, 1)?;
                p1i_val.push(a.scale(&b[0]));
                p1i_der.push(a.scale(&b[1]));
                let f = jet(&self.embed(memo, spec, &[i], t.genera[0], &args_of(0, [i, i]))?, spec, i, 1)?;
                let h = jet(&self.embed(memo, spec, &[i], t.genera[1], &args_of(1, [i, i]))?, spec, i, 1)?;
                pii += &f[0] * &h[0];
                dpii += &f[1] * &h[0] + &f[0] * &h[1];
            } else {
                let both = self.embed(memo, spec, &[0, i], t.genera[0], &args_of(0, [0, i]))?;
                p1i_val.push(spec.apply(&both, &[0])?);
                p1i_der.push(spec.apply(&d_op(&both, i), &[0])?);
                let f = jet(&self.embed(memo, spec, &[i], t.genera[0], &args_of(0, [i, i]))?, spec, i, 1)?;
                pii += &f[0];
                dpii += &f[1];
            }
        }
        let sum_or_zero = |v: &[FactoredFrac]| if v.is_empty() { FactoredFrac::zero(n) } else { FactoredFrac::sum(v) };
        let p1i_val = sum_or_zero(&p1i_val);
        let p1i_der = sum_or_zero(&p1i_der);
        let u = x_numeric(spec.values[i].as_ref().expect("specialized"));
        let r = recip_u_minus_x1(n, &u)?;
        // A(u) = 2 x1 P11 - x1 P1i(u) - u Pii(u), B = u A, e = -B / (u - x1)
        let a = FactoredFrac::sum(&[
            x1.mul(&p11).scale(&rat(2)),
            x1.mul(&p1i_val).neg(),
            FactoredFrac::constant(n, -(&u * &pii)),
        ]);
        let da = FactoredFrac::sum(&[x1.mul(&p1i_der).neg(), FactoredFrac::constant(n, -(&pii + &u * &dpii))]);
        let b = a.scale(&u);
        let db = FactoredFrac::sum(&[a, da.scale(&u)]);
        Ok(FactoredFrac::sum(&[db.mul(&r).neg(), b.mul(&r).mul(&r)]))
    }

    /// `2 D_i D_j [x_i x_j W_{g}[x_1, x_i, x_j; rest]]` with `z_i`, `z_j` and the
    /// rest specialized, as a function of `z_1`. The bracket is the second
    /// divided difference in the first slot.
    fn pair_divided_difference(&self, memo: &mut Memo, spec: &Spec, g: u32, i: usize, j: usize) -> Result<FactoredFrac, CoreError> {
        let n = spec.values.len();
        let rest: Vec<usize> = (1..n).filter(|&k| k != i && k != j).collect();
        let mut args = vec![0];
        args.extend_from_slice(&rest);
        let f1 = self.embed(memo, spec, &[0], g, &args)?;
        let x1 = x_of(n, 0);
        let c = |v: usize| spec.values[v].clone().expect("specialized");
        let (ui, uj) = (x_numeric(&c(i)), x_numeric(&c(j)));
        let k = |q: BigRational| FactoredFrac::constant(n, q);
        let total = if ui != uj {
            let (ri, rj) = (recip_u_minus_x1(n, &ui)?, recip_u_minus_x1(n, &uj)?);
            let mut parts = vec![f1.mul(&x1).mul(&x1).mul(&ri).mul(&ri).mul(&rj).mul(&rj)];
            for (a, u, w, r) in [(i, &ui, &uj, &ri), (j, &uj, &ui, &rj)] {
                // h(u) = u^2 f(u) / ((u - x1)(u - w)^2), differentiated in u
                let jet = self.slot_jet(memo, spec, g, a, &rest, 1)?;
                let (f, df) = (&jet[0], &jet[1]);
                let dw = u - w;
                let dw2 = &dw * &dw;
                let u2 = u * u;
                parts.push(r.scale(&((rat(2) * u * f + &u2 * df) / &dw2)));
                parts.push(r.mul(r).scale(&(-(&u2 * f) / &dw2)));
                parts.push(r.scale(&(-(rat(2) * &u2 * f) / (&dw2 * &dw))));
            }
            FactoredFrac::sum(&parts)
        } else {
            // coincident points: with phi(x) = (f(x) - f(x1)) / (x - x1) the
            // value is phi_1 + u phi_2 + u^2 phi_3 / 6 (phi_k the k-th derivative)
            let u = &ui;
            let r = recip_u_minus_x1(n, u)?;
            let jet = self.slot_jet(memo, spec, g, i, &rest, 3)?;
            let phi0 = k(jet[0].clone()).sub(&f1).mul(&r).reduced();
            let phi1 = k(jet[1].clone()).sub(&phi0).mul(&r).reduced();
            let phi2 = k(jet[2].clone()).sub(&phi1.scale(&rat(2))).mul(&r).reduced();
            let phi3 = k(jet[3].clone()).sub(&phi2.scale(&rat(3))).mul(&r).reduced();
            FactoredFrac::sum(&[phi1, phi2.scale(u), phi3.scale(&(u * u / rat(6)))])
        };
        Ok(total.scale(&rat(2)))
    }

    /// Assembles the equation for `(g, n)` and returns `W^z_{g,n}` without storing it.
    pub fn assemble(&self, g: u32, n: usize) -> Result<FactoredFrac, CoreError> {
        self.assemble_spec(g, n, &Spec::symbolic(n))
    }

    fn assemble_spec(&self, g: u32, n: usize, spec: &Spec) -> Result<FactoredFrac, CoreError> {
        let mut memo = Memo::new();
        let x1 = x_of(n, 0);
        let x1sq = x1.mul(&x1);
        let mut rhs: Vec<FactoredFrac> = Vec::new();

        let (known, coef_t) = self.tilde_w_term_spec(&mut memo, spec, g, n)?;
        rhs.push(x1sq.mul(&known).reduced());

        if g >= 1 {
            let prev = self.embed(&mut memo, spec, &[0], g - 1, &(0..n).collect::<Vec<_>>())?;
            rhs.push(x1sq.mul(&op_ox(&prev, 0)).reduced());
        }
        if (g, n) == (0, 1) {
            rhs.push(FactoredFrac::one(n));
        }

        let numeric = spec.values[1..].iter().all(Option::is_some);
        for i in 1..n {
            let rest: Vec<usize> = (1..n).filter(|&k| k != i).collect();
            if numeric {
                rhs.push(self.pair_edge_term(&mut memo, spec, g, i, &rest)?.reduced());
                continue;
            }
            let keep = [0, i];
            let p11 = self.pair_sum(&mut memo, spec, &keep, g, 0, 0, &rest)?;
            let p1i = self.pair_sum(&mut memo, spec, &keep, g, 0, i, &rest)?;
            let pii = self.pair_sum(&mut memo, spec, &keep, g, i, i, &rest)?;
            let xi = x_of(n, i);
            let bracket = FactoredFrac::sum(&[
                x1.mul(&p11).scale(&rat(2)),
                x1.mul(&p1i).neg(),
                xi.mul(&pii).neg(),
            ]);
            let mut e = xi.mul(&bracket);
            div_x_diff(&mut e, 0, i)?;
            if e.cancel_factor(&(&var(n, 0) - &var(n, i))) > 0 {
                return Err(CoreError::Algebra(prodloop_algebra::AlgebraError::InexactDivision));
            }
            e.reduce();
            rhs.push(spec.apply(&d_op(&e, i), &[0])?.reduced());
        }

        for i in 1..n {
            for j in (i + 1)..n {
                if numeric {
                    rhs.push(self.pair_divided_difference(&mut memo, spec, g, i, j)?.reduced());
                    continue;
                }
                let keep = [0, i, j];
                let rest: Vec<usize> = (1..n).filter(|&k| k != i && k != j).collect();
                let pts = [0usize, i, j];
                let mut parts = Vec::new();
                for a in 0..3 {
                    let mut args = vec![pts[a]];
                    args.extend(rest.iter().copied());
                    let mut t = self.embed(&mut memo, spec, &keep, g, &args)?;
                    for b in 0..3 {
                        if b != a {
                            div_x_diff(&mut t, pts[b], pts[a])?;
                        }
                    }
                    parts.push(t);
                }
                let mut dd = FactoredFrac::sum(&parts);
                for (a, b) in [(0, i), (0, j), (i, j)] {
                    if dd.cancel_factor(&(&var(n, a) - &var(n, b))) > 0 {
                        return Err(CoreError::Algebra(prodloop_algebra::AlgebraError::InexactDivision));
                    }
                }
                dd = dd.mul(&x_of(n, i)).mul(&x_of(n, j)).scale(&rat(2)).reduced();
                rhs.push(spec.apply(&d_op(&d_op(&dd, i), j), &[0])?.reduced());
            }
        }

        // total coefficient of the unknown: x1^2 * coef_t - x1
        let coef = FactoredFrac::sum(&[x1sq.mul(&coef_t), x1.neg()]).reduced();
        if coef.is_zero() {
            return Err(CoreError::DegenerateCoefficient);
        }
        let total = FactoredFrac::sum(&rhs);
        let mut w = total.mul(&recip_univariate(&coef, 0)?).neg();
        w.reduce();
        let unstable = (g, n) == (0, 2);
        for (p, _) in w.den_factors() {
            let q_atom = unstable && *p == q_poly(n, 0, 1);
            if !q_atom && !is_pole_atom(p, n, true) {
                return Err(CoreError::PoleLocation { g, n, factor: p.to_string() });
            }
        }
        Ok(w)
    }

    /// `w_{g,n}(z_1; c)` times `z_1^a (2 z_1 + 3)^b prod_i c_i^a (2 c_i + 3)^b`
    /// as a polynomial in `z_1`, plus the exponents `(a, b)` read off the
    /// reduced denominator.
    fn specialized_numerator(&self, g: u32, n: usize, c: &[BigRational], ab: Option<(u32, u32)>) -> Result<(Vec<BigRational>, u32, u32), CoreError> {
        let mut values = vec![None];
        values.extend(c.iter().cloned().map(Some));
        let wz = self.assemble_spec(g, n, &Spec { values })?;
        // w(z1; c) = W * x'(z1) * prod x'(c_i)
        let mut w = wz;
        w.mul_factor(&var(n, 0), 2);
        w.mul_factor(&two_z_plus_3(n, 0), 1);
        w.push_factor(one_plus(n, 0), 2)?;
        w.reduce();
        let mut scalar = rat(1);
        for ci in c {
            let one_ci = ci + rat(1);
            scalar = scalar * ci * ci * (ci * rat(2) + rat(3)) / (&one_ci * &one_ci);
        }
        let (mut a, mut b) = (0u32, 0u32);
        for (p, e) in w.den_factors() {
            if *p == var(n, 0) {
                a = *e;
            } else if *p == two_z_plus_3(n, 0) {
                b = *e;
            } else {
                return Err(CoreError::PoleLocation { g, n, factor: p.to_string() });
            }
        }
        let (a_here, b_here) = (a, b);
        if let Some((a0, b0)) = ab {
            if a > a0 || b > b0 {
                return Err(CoreError::NonConvergence(format!("pole order bound exceeded at ({g},{n})")));
            }
            a = a0;
            b = b0;
        }
        for ci in c {
            let t = ci * rat(2) + rat(3);
            for _ in 0..a {
                scalar *= ci;
            }
            for _ in 0..b {
                scalar *= &t;
            }
        }
        let mut num = w.num().scale(&scalar);
        num = &num * &var(n, 0).pow(a - a_here);
        num = &num * &two_z_plus_3(n, 0).pow(b - b_here);
        let coeffs: Vec<BigRational> = num.coefficients_in(0).into_iter().map(|p| p.as_constant().expect("univariate")).collect();
        Ok((coeffs, a, b))
    }

    /// `W^z_{g,n}` through specialization of `z_2..z_n` and exact tensor interpolation.
    fn interpolate(&self, g: u32, n: usize) -> Result<FactoredFrac, CoreError> {
        let m = n - 1;
        let probe = |k: usize| -> Vec<BigRational> {
            (0..m).map(|i| prodloop_algebra::frac(7 + 4 * i as i64 + 13 * k as i64, 3 + 2 * i as i64 + k as i64)).collect()
        };
        let (mut a, mut b, mut d) = (0u32, 0u32, 0usize);
        for k in 0..2 {
            let (coeffs, pa, pb) = self.specialized_numerator(g, n, &probe(k), None)?;
            a = a.max(pa);
            b = b.max(pb);
            d = d.max(coeffs.len().saturating_sub(1));
        }
        let nodes: Vec<BigRational> = (0..=d).map(|k| rat(k as i64 + 1)).collect();
        let grid = sorted_tuples(d + 1, m);
        let evals: Vec<Vec<BigRational>> = grid
            .iter()
            .map(|idx| {
                let c: Vec<BigRational> = idx.iter().map(|&k| nodes[k].clone()).collect();
                let (coeffs, _, _) = self.specialized_numerator(g, n, &c, Some((a, b)))?;
                if coeffs.len() > d + 1 {
                    return Err(CoreError::NonConvergence(format!("degree bound {d} exceeded at ({g},{n})")));
                }
                Ok(coeffs)
            })
            .collect::<Result<_, CoreError>>()?;
        let lookup: HashMap<Vec<usize>, usize> = grid.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let inv = inverse_vandermonde(&nodes);
        let size = (d + 1).pow(m as u32);
        let mut terms = Vec::new();
        for k in 0..=d {
            // values on the full grid, index = sum idx_i (d+1)^i
            let mut vals: Vec<BigRational> = (0..size)
                .map(|flat| {
                    let mut idx = unflatten(flat, d + 1, m);
                    idx.sort_unstable();
                    evals[lookup[&idx]].get(k).cloned().unwrap_or_else(|| rat(0))
                })
                .collect();
            for axis in 0..m {
                apply_along_axis(&mut vals, &inv, d + 1, m, axis);
            }
            for (flat, v) in vals.into_iter().enumerate() {
                if v != rat(0) {
                    let mut exps = vec![k as u32];
                    exps.extend(unflatten(flat, d + 1, m).into_iter().map(|e| e as u32));
                    let mono = prodloop_algebra::Monomial::from_exponents(&exps).ok_or(prodloop_algebra::AlgebraError::ExponentOverflow)?;
                    terms.push((mono, v));
                }
            }
        }
        let big_n = MultiPoly::from_terms(n, terms);
        let mut swapped: Vec<usize> = (0..n).collect();
        swapped.swap(0, 1);
        if big_n.rename(&swapped, n) != big_n {
            return Err(CoreError::NonConvergence(format!("interpolated numerator of ({g},{n}) is not symmetric")));
        }
        // off-grid check
        let check = probe(2);
        let (coeffs, _, _) = self.specialized_numerator(g, n, &check, Some((a, b)))?;
        let mut restricted = big_n.clone();
        for (i, c) in check.iter().enumerate() {
            restricted = restricted.partial_eval(i + 1, c);
        }
        let expect: Vec<BigRational> = restricted.coefficients_in(0).into_iter().map(|p| p.as_constant().expect("univariate")).collect();
        if expect != coeffs {
            return Err(CoreError::NonConvergence(format!("interpolant of ({g},{n}) fails the off-grid check")));
        }
        // W^z = N prod (1+z)^2 / prod z^(a+2) (2z+3)^(b+1)
        let mut num = big_n;
        let mut factors = Vec::new();
        for i in 0..n {
            num = &num * &one_plus(n, i).pow(2);
            factors.push((var(n, i), a + 2));
            factors.push((two_z_plus_3(n, i), b + 1));
        }
        Ok(FactoredFrac::new(num, factors)?.reduced())
    }

    /// Solves for `W_{g,n}` and stores it. Lower entries must be present.
    pub fn solve_wgn(&mut self, g: u32, n: usize) -> Result<&Entry, CoreError> {
        self.solve_wgn_with(g, n, Strategy::Auto)
    }

    pub fn solve_wgn_with(&mut self, g: u32, n: usize, strategy: Strategy) -> Result<&Entry, CoreError> {
        if n == 0 || 2 * g as i64 - 2 + n as i64 <= 0 {
            return Err(CoreError::Domain(format!("({g},{n}) is not in the stable range")));
        }
        let interpolate = match strategy {
            Strategy::Symbolic => false,
            Strategy::Interpolate => n >= 2,
            Strategy::Auto => n >= 4,
        };
        let wz = if interpolate { self.interpolate(g, n)? } else { self.assemble(g, n)? };
        let w = w_form_of(g, n, &wz)?.to_rational_func();
        self.entries.insert((g, n), make_entry(g, n, wz, w));
        Ok(&self.entries[&(g, n)])
    }

    /// `tilde-w_{0,2}` obtained from the `(0,2)` instance of the loop equation.
    pub fn solve_w02_from_loop(&self) -> Result<RationalFunc, CoreError> {
        let wz = self.assemble(0, 2)?;
        Ok(tilde_from_wz02(&wz.to_rational_func_checked()))
    }

    /// `w_{g,n}` is invariant under every transposition of its variables.
    pub fn is_symmetric(&self, g: u32, n: usize) -> Result<bool, CoreError> {
        let w = self.w(g, n)?;
        for k in 1..n {
            let mut map: Vec<usize> = (0..n).collect();
            map.swap(0, k);
            if !w.rename(&map, n)?.equals(w) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `D^0 f .. D^order f` at the specialized value of `z_a`, for `f` depending on `z_a` only.
fn jet(f: &FactoredFrac, spec: &Spec, a: usize, order: usize) -> Result<Vec<BigRational>, CoreError> {
    let n = spec.values.len();
    let point: Vec<BigRational> = (0..n).map(|v| spec.values[v].clone().unwrap_or_else(|| rat(0))).collect();
    let mut cur = f.clone();
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        out.push(cur.evaluate(&point)?);
        if k < order {
            cur = d_op(&cur, a).reduced();
        }
    }
    Ok(out)
}

/// `x(c) = c^3 / (1 + c)`.
fn x_numeric(c: &BigRational) -> BigRational {
    c * c * c / (c + rat(1))
}

/// `1 / (u - x(z_1))` with the cubic `u (1 + z_1) - z_1^3` split over its rational roots.
fn recip_u_minus_x1(n: usize, u: &BigRational) -> Result<FactoredFrac, CoreError> {
    let cubic = &one_plus(n, 0).scale(u) - &var(n, 0).pow(3);
    let (unit, parts) = prodloop_algebra::factored::split_rational_roots(&cubic, 0);
    Ok(FactoredFrac::new(one_plus(n, 0).scale(&unit.recip()), parts)?)
}

/// Non-decreasing index tuples of length `m` over `0..k`.
fn sorted_tuples(k: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in start..k {
            cur.push(v);
            rec(k, m, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, m, 0, &mut Vec::new(), &mut out);
    out
}

fn unflatten(mut flat: usize, base: usize, m: usize) -> Vec<usize> {
    let mut idx = Vec::with_capacity(m);
    for _ in 0..m {
        idx.push(flat % base);
        flat /= base;
    }
    idx
}

/// Inverse of the Vandermonde matrix `V[i][j] = nodes[i]^j`: maps values at
/// the nodes to monomial coefficients.
fn inverse_vandermonde(nodes: &[BigRational]) -> Vec<Vec<BigRational>> {
    let k = nodes.len();
    let mut a: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..k)
                .map(|j| {
                    let mut p = rat(1);
                    for _ in 0..j {
                        p *= &nodes[i];
                    }
                    p
                })
                .collect();
            row.extend((0..k).map(|j| if i == j { rat(1) } else { rat(0) }));
            row
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&r| a[r][col] != rat(0)).expect("distinct nodes");
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..k {
            if r != col && a[r][col] != rat(0) {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.into_iter().map(|row| row[k..].to_vec()).collect()
}

/// Replaces the values along one axis of a flattened `base^m` tensor by `inv * values`.
fn apply_along_axis(vals: &mut [BigRational], inv: &[Vec<BigRational>], base: usize, m: usize, axis: usize) {
    let stride = base.pow(axis as u32);
    let total = base.pow(m as u32);
    for start in 0..total {
        if (start / stride) % base != 0 {
            continue;
        }
        let line: Vec<BigRational> = (0..base).map(|t| vals[start + t * stride].clone()).collect();
        for (r, row) in inv.iter().enumerate() {
            let mut acc = rat(0);
            for (c, v) in row.iter().zip(line.iter()) {
                if *v != rat(0) {
                    acc += c * v;
                }
            }
            vals[start + r * stride] = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_multiplicity() {
        // [x1,x1,x1]: five set partitions; {{a,b},{c}} appears three times
        let terms = partition_terms(3, &[], |_| 0);
        assert_eq!(terms.len(), 5);
        assert_eq!(terms.iter().filter(|t| t.parts.len() == 2).count(), 3);
    }

    #[test]
    fn distributions_and_genera() {
        let terms = partition_terms(2, &[5, 6], |k| 3 - k as i64);
        // one part: 1 distribution x genus 2 split (1); two parts: 4 distributions x 2 splits
        assert_eq!(terms.len(), 1 + 4 * 2);
    }

    #[test]
    fn schedule_order() {
        assert_eq!(ResolventTable::schedule(3), vec![(1, 1), (0, 3), (1, 2), (0, 4), (2, 1), (1, 3), (0, 5)]);
    }

    #[test]
    fn d_of_x_is_one() {
        let d = d_op(&x_of(1, 0), 0).reduced();
        assert_eq!(d.to_rational_func(), RationalFunc::one(1));
    }

    #[test]
    fn ox_of_constant() {
        assert!(op_ox(&FactoredFrac::one(1), 0).is_zero());
    }

    #[test]
    fn unknown_coefficient_is_three_y_squared() {
        let t = ResolventTable::new();
        let (_, c) = t.tilde_w_term(1, 1).unwrap();
        let expect = RationalFunc::parse("3(1+z)^2/z^4", 1).unwrap();
        assert!(c.to_rational_func().equals(&expect));
    }
}
