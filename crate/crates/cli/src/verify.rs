//! `verify`: exact checks, oracle agreements and optionally the Monte Carlo ladder.
//!
//! Report schema (`report.json`):
//! `{ "mode": "fast"|"full", "passed": bool, "checks": [ { "name", "anchor", "passed", "detail", "seconds" } ] }`.

use std::time::Instant;

use anyhow::Result;
use clap::Args;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use prodloop_core::algebra::{rat, BigInt, BigRational, MultiPoly, RationalFunc};
use prodloop_core::curve::{deck_eval, density_moment, fuss_catalan, w01_explicit_check, x_numeric};
use prodloop_core::golden::{golden_tilde_w02, golden_w, TWO_POINT_TABLE};
use prodloop_core::maps::{cumulant_by_inversion, enumerate_cumulants, LaurentPoly, MapSpec, DEFAULT_BUDGET};
use prodloop_core::moments::{
    check_conjectures, check_fuss_catalan, cumulant_from_resolvent, planar_recurrence_residual, PlanarCache,
};
use prodloop_core::montecarlo::{cumulant_estimate, fit_genus_expansion, jarque_bera, sample_traces};
use prodloop_core::solver::{base_w02, tilde_from_wz02, ResolventTable};
use serde::Serialize;

use crate::artifacts::RunDir;

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// Exact checks only (the default)
    #[arg(long, conflicts_with = "full")]
    pub fast: bool,
    /// Add the Monte Carlo ladder at N = 40, 80, 160
    #[arg(long)]
    pub full: bool,
    /// Samples per N in the ladder
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Seed for the ladder
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub anchor: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub mode: &'static str,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

struct Runner {
    checks: Vec<CheckResult>,
}

impl Runner {
    fn run(&mut self, name: &str, anchor: &str, f: impl FnOnce() -> Result<(bool, String)>) {
        let start = Instant::now();
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e:#}")));
        let seconds = start.elapsed().as_secs_f64();
        println!("{} {name}: {detail}", if passed { "ok  " } else { "FAIL" });
        self.checks.push(CheckResult { name: name.into(), anchor: anchor.into(), passed, detail, seconds });
    }
}

fn exact(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn laurent_at(p: &LaurentPoly, n: f64) -> f64 {
    p.0.iter().map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * n.powi(*e as i32)).sum()
}

fn exact_cumulant(profile: &[u32], n: f64) -> Result<f64> {
    let t = enumerate_cumulants(&MapSpec::new(2, profile)?, DEFAULT_BUDGET)?;
    Ok(laurent_at(&t.cumulant_polynomial(), n))
}

fn den_on_ramification(den: &MultiPoly) -> bool {
    let n = den.nvars();
    let mut d = den.clone();
    for i in 0..n {
        let z = MultiPoly::var(n, i);
        let t = &z.scale(&rat(2)) + &MultiPoly::from_int(n, 3);
        for f in [z, t] {
            while let Some(q) = d.div_exact(&f) {
                d = q;
            }
        }
    }
    d.is_constant()
}

pub fn verify(args: &VerifyArgs, run: &mut RunDir) -> Result<bool> {
    let mut r = Runner { checks: Vec::new() };
    let mut table = ResolventTable::new();

    r.run("golden w01", "w01 closed form", || {
        Ok((table.w(0, 1)?.equals(&golden_w(0, 1).expect("known")), "cross-multiplied equality".into()))
    });
    r.run("golden tilde w02", "shifted two-point closed form", || {
        Ok((tilde_from_wz02(&base_w02()).equals(&golden_tilde_w02()), "cross-multiplied equality".into()))
    });
    r.run("universality w02", "w02 = 1/(z1-z2)^2", || {
        let b = RationalFunc::parse("1/(z1-z2)^2", 2)?;
        let loop_ok = table.solve_w02_from_loop()?.equals(&tilde_from_wz02(&base_w02()));
        Ok((table.w(0, 2)?.equals(&b) && loop_ok, format!("loop instance agrees: {loop_ok}")))
    });
    for (g, n) in [(1, 1), (0, 3), (1, 2), (2, 1)] {
        r.run(&format!("golden w{g}{n}"), &format!("w{g}{n} closed form"), || {
            let start = Instant::now();
            let e = table.solve_wgn(g, n)?;
            let ok = e.w.equals(&golden_w(g, n).expect("known"));
            Ok((ok, format!("solved in {:.2?}", start.elapsed())))
        });
    }
    r.run("fuss-catalan", "planar one-point moments C_k[3]", || {
        let first = check_fuss_catalan(&table, 12)?;
        Ok((first.is_none(), format!("k <= 12, first mismatch {first:?}")))
    });
    r.run("two-point table", "planar two-point moment table", || {
        let mut cache = PlanarCache::new(&table);
        let mut bad = Vec::new();
        for (row_i, row) in TWO_POINT_TABLE.iter().enumerate() {
            let i = row_i as u32 + 1;
            for (c, &want) in row.iter().enumerate() {
                let j = i + c as u32;
                if cache.c2(i, j)? != exact(want) {
                    bad.push((i, j));
                }
            }
        }
        Ok((bad.is_empty(), format!("28 entries, mismatches {bad:?}")))
    });
    r.run("planar recurrence", "planar two-point recurrence", || {
        let mut cache = PlanarCache::new(&table);
        let mut bad = Vec::new();
        for k in 2..=9u32 {
            for q in 1..=(10 - k) {
                if !planar_recurrence_residual(&mut cache, k, q)?.is_zero() {
                    bad.push((k, q));
                }
            }
        }
        Ok((bad.is_empty(), format!("k + q <= 10, failures {bad:?}")))
    });
    r.run("conjectures", "closed forms for c0_ij and c1_n", || {
        let rep = check_conjectures(&table, 8)?;
        Ok((
            rep.planar_two_point_confirmed && rep.genus_one_confirmed,
            format!(
                "orders <= 8: planar two-point {}, genus one {}",
                rep.planar_two_point_confirmed, rep.genus_one_confirmed
            ),
        ))
    });
    r.run("map oracle M=2", "maps agree with residues", || {
        let mut bad = Vec::new();
        for k in 1..=6u32 {
            let t = enumerate_cumulants(&MapSpec::new(2, &[k])?, DEFAULT_BUDGET)?;
            if exact(t.genus_count(0)) != cumulant_from_resolvent(&table, 0, &[k])? {
                bad.push(format!("c0_{k}"));
            }
            if k <= 5 && exact(t.genus_count(1)) != cumulant_from_resolvent(&table, 1, &[k])? {
                bad.push(format!("c1_{k}"));
            }
        }
        for i in 1..=3u32 {
            for j in i..=(6 - i) {
                let t = enumerate_cumulants(&MapSpec::new(2, &[i, j])?, DEFAULT_BUDGET)?;
                if exact(t.genus_count(0)) != cumulant_from_resolvent(&table, 0, &[i, j])? {
                    bad.push(format!("c0_{i},{j}"));
                }
            }
        }
        Ok((bad.is_empty(), format!("mismatches {bad:?}")))
    });
    r.run("map oracle M=1", "Catalan numbers", || {
        let mut bad = Vec::new();
        for k in 1..=8u32 {
            let t = enumerate_cumulants(&MapSpec::new(1, &[k])?, DEFAULT_BUDGET)?;
            if BigInt::from(t.genus_count(0)) != fuss_catalan(k as u64, 2) {
                bad.push(k);
            }
        }
        Ok((bad.is_empty(), format!("k <= 8, mismatches {bad:?}")))
    });
    r.run("map inversion", "cumulants from moments", || {
        let mut bad = Vec::new();
        for profile in [&[1u32, 1][..], &[1, 2], &[2, 2], &[1, 1, 1]] {
            let spec = MapSpec::new(2, profile)?;
            if cumulant_by_inversion(&spec, DEFAULT_BUDGET)? != enumerate_cumulants(&spec, DEFAULT_BUDGET)?.cumulant_polynomial() {
                bad.push(format!("{profile:?}"));
            }
        }
        Ok((bad.is_empty(), format!("mismatches {bad:?}")))
    });
    let chi_max = if args.full { 4 } else { 3 };
    r.run("pole locations", "poles only at z = 0 and z = -3/2", || {
        let t = ResolventTable::build(chi_max)?;
        let mut bad = Vec::new();
        let mut mixed = Vec::new();
        for e in t.entries().filter(|e| 2 * e.g as i64 - 2 + e.n as i64 > 0) {
            if !den_on_ramification(e.w.den()) {
                bad.push(format!("w{}{}", e.g, e.n));
            }
            if !e.positive_numerator {
                mixed.push(format!("w{}{}", e.g, e.n));
            }
        }
        Ok((bad.is_empty(), format!("2g-2+n <= {chi_max}, off-support {bad:?}, numerators with mixed signs {mixed:?}")))
    });
    r.run("density", "limiting eigenvalue density", || {
        let mass = density_moment(0) - 1.0;
        let first = density_moment(1) - 1.0;
        let mut worst: f64 = 0.0;
        for i in 0..20 {
            let u = Complex64::new(-2.0 + 0.1 * i as f64, 0.3 * (i % 3) as f64);
            let g = w01_explicit_check(u)?;
            worst = worst.max((u * g * g * g - g + 1.0).norm());
        }
        for i in 0..200 {
            let z = Complex64::from_polar(0.2 + 0.02 * i as f64, 0.7 * i as f64);
            let x = x_numeric(z);
            for b in [1, 2] {
                worst = worst.max((x_numeric(deck_eval(b, z)?) - x).norm() / (1.0 + x.norm()));
            }
        }
        let ok = mass.abs() <= 1e-8 && first.abs() <= 1e-6 && worst <= 1e-10;
        Ok((ok, format!("mass-1 {mass:.1e}, first moment-1 {first:.1e}, residuals {worst:.1e}")))
    });

    if args.full {
        monte_carlo_ladder(&mut r, args.samples, args.seed);
    }

    let passed = r.checks.iter().all(|c| c.passed);
    let report = Report { mode: if args.full { "full" } else { "fast" }, passed, checks: r.checks };
    run.write_json("report.json", &report)?;
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {failed} failed", report.checks.len());
    Ok(passed)
}

fn monte_carlo_ladder(r: &mut Runner, samples: usize, seed: u64) {
    let ns = [40usize, 80, 160];
    let mut var_pts = Vec::new();
    let mut c12_pts = Vec::new();
    for &n in &ns {
        let nf = n as f64;
        let traces = match sample_traces(n, 2, samples, seed) {
            Ok(t) => t,
            Err(e) => {
                r.run(&format!("monte carlo N={n}"), "trace moments", || Err(e.into()));
                continue;
            }
        };
        r.run(&format!("monte carlo N={n}"), "trace moments and cumulants", || {
            let mut pulls = Vec::new();
            let m1 = cumulant_estimate(&traces, &[0], n)?.scaled(1.0 / nf);
            pulls.push(("m1/N", m1.pull(1.0)));
            let m2 = cumulant_estimate(&traces, &[1], n)?.scaled(1.0 / nf);
            pulls.push(("m2/N", m2.pull(3.0 + 1.0 / (nf * nf))));
            let var = cumulant_estimate(&traces, &[0, 0], n)?;
            pulls.push(("var", var.pull(exact_cumulant(&[1, 1], nf)?)));
            let c12 = cumulant_estimate(&traces, &[0, 1], n)?;
            pulls.push(("c12", c12.pull(exact_cumulant(&[1, 2], nf)?)));
            var_pts.push((n, var.mean, var.stderr));
            c12_pts.push((n, c12.mean, c12.stderr));
            let ok = pulls.iter().all(|(_, p)| *p <= 5.0);
            let text: Vec<String> = pulls.iter().map(|(s, p)| format!("{s} {p:.1} sd")).collect();
            Ok((ok, text.join(", ")))
        });
        if n == 160 {
            r.run("normality N=160", "trace vector is asymptotically normal", || {
                let t: Vec<f64> = traces.iter().map(|v| v[0]).collect();
                let (jb, p) = jarque_bera(&t);
                Ok((p > 0.01, format!("Jarque-Bera {jb:.2}, p = {p:.3}")))
            });
        }
    }
    r.run("genus fit", "Var Tr S -> 3 and c12 -> 20 as N grows", || {
        let v = fit_genus_expansion(&var_pts)?;
        let c = fit_genus_expansion(&c12_pts)?;
        let pv = (v.a - 3.0).abs() / v.a_err;
        let pc = (c.a - 20.0).abs() / c.a_err;
        Ok((
            pv <= 5.0 && pc <= 5.0,
            format!("var {:.3}+-{:.3} ({pv:.1} sd), c12 {:.2}+-{:.2} ({pc:.1} sd)", v.a, v.a_err, c.a, c.a_err),
        ))
    });
}
