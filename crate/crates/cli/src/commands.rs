//! The data-producing subcommands.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use prodloop_core::algebra::RationalFuncJson;
use prodloop_core::curve::density_rho01;
use prodloop_core::maps::{cumulant_by_inversion, enumerate_cumulants, MapSpec, DEFAULT_BUDGET};
use prodloop_core::moments::{check_conjectures, record};
use prodloop_core::montecarlo::{
    eigen_density, estimate_cumulants, fit_genus_expansion, jarque_bera, sample_traces, GenusFit, McEstimate,
    SPECTRUM_EDGE,
};
use prodloop_core::solver::ResolventTable;
use serde::{Deserialize, Serialize};

use crate::artifacts::RunDir;
use crate::render;

#[derive(Args, Debug, Serialize)]
pub struct SolveArgs {
    /// Largest 2g-2+n to solve; 4 takes about six minutes on one core
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=4))]
    pub chi_max: u32,
}

#[derive(Serialize)]
struct EntryJson {
    g: u32,
    n: usize,
    chi: i64,
    numerator_degree: u32,
    positive_numerator: bool,
    text: String,
    w: RationalFuncJson,
}

pub fn solve(args: &SolveArgs, run: &mut RunDir) -> Result<bool> {
    let table = ResolventTable::build(args.chi_max)?;
    let mut json = Vec::new();
    let mut text = String::new();
    for e in table.entries() {
        let line = render::entry(e);
        text.push_str(&line);
        text.push('\n');
        json.push(EntryJson {
            g: e.g,
            n: e.n,
            chi: 2 * e.g as i64 - 2 + e.n as i64,
            numerator_degree: e.num_degree,
            positive_numerator: e.positive_numerator,
            text: line,
            w: e.w.to_json(),
        });
    }
    run.write_json("table.json", &json)?;
    run.write("table.txt", &text)?;
    println!("solved {} resolvents up to 2g-2+n = {}", json.len(), args.chi_max);
    Ok(true)
}

#[derive(Args, Debug, Serialize)]
pub struct MomentsArgs {
    /// Largest 2g-2+n in the resolvent table
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=4))]
    pub chi_max: u32,
    /// Largest trace power k_i
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..=12))]
    pub max_order: u32,
    /// Largest number of traces n
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=4))]
    pub max_points: u32,
}

fn nondecreasing(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for t in &out {
            let lo = t.last().copied().unwrap_or(1);
            for k in lo..=max {
                let mut u = t.clone();
                u.push(k);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

pub fn moments(args: &MomentsArgs, run: &mut RunDir) -> Result<bool> {
    let table = ResolventTable::build(args.chi_max)?;
    let width = args.max_points as usize;
    let mut header: Vec<String> = vec!["g".into()];
    header.extend((1..=width).map(|i| format!("k{i}")));
    header.extend(["value".into(), "provenance".into()]);
    let mut rows = Vec::new();
    for e in table.entries() {
        if e.n > width {
            continue;
        }
        for orders in nondecreasing(e.n, args.max_order) {
            let r = record(&table, e.g, &orders)?;
            let mut row = vec![e.g.to_string()];
            row.extend((0..width).map(|i| orders.get(i).map_or(String::new(), u32::to_string)));
            row.push(r.value.to_string());
            row.push(serde_json::to_value(r.provenance)?.as_str().unwrap_or_default().to_string());
            rows.push(row);
        }
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    run.write_csv("moments.csv", &header, &rows)?;
    let report = check_conjectures(&table, args.max_order)?;
    run.write_json("conjectures.json", &report)?;
    println!(
        "{} cumulants; planar two-point conjecture confirmed: {}; genus-one conjecture confirmed: {}",
        rows.len(),
        report.planar_two_point_confirmed,
        report.genus_one_confirmed
    );
    Ok(true)
}

#[derive(Args, Debug, Serialize)]
pub struct MapsArgs {
    /// Number of edge types (1 or 2)
    #[arg(short = 'm', long = "edge-types", default_value_t = 2)]
    pub edge_types: u8,
    /// Black-vertex degrees, e.g. 2,1
    #[arg(long, value_delimiter = ',', required = true)]
    pub profile: Vec<u32>,
    /// Bound on candidates times half-edges
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    /// Also recover the cumulant from moments by set-partition inversion
    #[arg(long)]
    pub inversion: bool,
}

pub fn maps(args: &MapsArgs, run: &mut RunDir) -> Result<bool> {
    let spec = MapSpec::new(args.edge_types, &args.profile)?;
    let tally = enumerate_cumulants(&spec, args.budget)?;
    let rows: Vec<Vec<String>> = tally.connected.iter().map(|(g, c)| vec![g.to_string(), c.to_string()]).collect();
    run.write_csv("maps.csv", &["genus", "count"], &rows)?;
    let cumulant = tally.cumulant_polynomial();
    let mut text = format!("cumulant: {cumulant}\nmoment: {}\n", tally.moment_polynomial());
    let mut ok = true;
    if args.inversion {
        let inv = cumulant_by_inversion(&spec, args.budget)?;
        ok = inv == cumulant;
        text.push_str(&format!("cumulant by inversion: {inv}\n"));
    }
    run.write("polynomial.txt", &text)?;
    print!("{text}");
    if !ok {
        eprintln!("connected tally and inversion disagree");
    }
    Ok(ok)
}

/// Keys accepted in a `montecarlo` config file; command-line flags win.
#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub n: Option<Vec<usize>>,
    pub samples: Option<usize>,
    pub kmax: Option<usize>,
    pub seed: Option<u64>,
    pub bins: Option<usize>,
    pub density_samples: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct MonteCarloArgs {
    /// TOML file presetting any of: n, samples, kmax, seed, bins, density_samples
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Matrix size; repeat for a ladder [default: 40 80 160]
    #[arg(short = 'n', long = "n")]
    pub n: Vec<usize>,
    /// Samples per matrix size [default: 2000]
    #[arg(long)]
    pub samples: Option<usize>,
    /// Highest trace power [default: 3]
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Master seed [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Histogram bins at the largest N <= 400; 0 skips the histogram [default: 0]
    #[arg(long)]
    pub bins: Option<usize>,
    /// Matrices diagonalized for the histogram [default: 100]
    #[arg(long)]
    pub density_samples: Option<usize>,
}

/// Effective Monte Carlo settings after merging file and flags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McSettings {
    pub n: Vec<usize>,
    pub samples: usize,
    pub kmax: usize,
    pub seed: u64,
    pub bins: usize,
    pub density_samples: usize,
}

impl MonteCarloArgs {
    pub fn settings(&self) -> Result<McSettings> {
        let file: McConfig = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
                toml::from_str(&text).with_context(|| format!("bad config {}", p.display()))?
            }
            None => McConfig::default(),
        };
        let n = if self.n.is_empty() { file.n.unwrap_or_else(|| vec![40, 80, 160]) } else { self.n.clone() };
        let s = McSettings {
            n,
            samples: self.samples.or(file.samples).unwrap_or(2000),
            kmax: self.kmax.or(file.kmax).unwrap_or(3),
            seed: self.seed.or(file.seed).unwrap_or(1),
            bins: self.bins.or(file.bins).unwrap_or(0),
            density_samples: self.density_samples.or(file.density_samples).unwrap_or(100),
        };
        if s.n.is_empty() || s.n.iter().any(|&n| n < 2) {
            bail!("every N must be at least 2");
        }
        if s.samples < 100 || s.kmax == 0 || s.kmax > 8 || s.density_samples == 0 {
            bail!("need samples >= 100, 1 <= kmax <= 8, density_samples >= 1");
        }
        Ok(s)
    }
}

#[derive(Serialize)]
struct McRun {
    n: usize,
    samples: usize,
    estimates: Vec<McEstimate>,
    /// Jarque-Bera statistic and p-value of the standardized `Tr S_2`
    normality: (f64, f64),
}

#[derive(Serialize)]
struct McFit {
    statistic: String,
    /// power of N dividing the raw statistic before the fit
    scaled_by_n_power: i32,
    fit: GenusFit,
}

#[derive(Serialize)]
struct McReport {
    settings: McSettings,
    runs: Vec<McRun>,
    fits: Vec<McFit>,
}

/// Power of `N` that makes a statistic `O(1)`: means scale like `N`, order-3 cumulants like `1/N`.
pub fn n_power(statistic: &str) -> i32 {
    if statistic.starts_with('m') {
        1
    } else {
        2 - statistic.split(',').count() as i32
    }
}

pub fn montecarlo(args: &MonteCarloArgs, run: &mut RunDir) -> Result<bool> {
    let s = args.settings()?;
    let mut runs = Vec::new();
    for &n in &s.n {
        let traces = sample_traces(n, s.kmax, s.samples, s.seed)?;
        let estimates = estimate_cumulants(&traces, n)?;
        let first: Vec<f64> = traces.iter().map(|t| t[0]).collect();
        println!("N = {n}: {} statistics from {} samples", estimates.len(), s.samples);
        runs.push(McRun { n, samples: s.samples, estimates, normality: jarque_bera(&first) });
    }
    let mut by_stat: BTreeMap<String, Vec<(usize, f64, f64)>> = BTreeMap::new();
    for r in &runs {
        for e in &r.estimates {
            let e = e.scaled((r.n as f64).powi(-n_power(&e.statistic)));
            by_stat.entry(e.statistic.clone()).or_default().push((r.n, e.mean, e.stderr));
        }
    }
    let mut fits = Vec::new();
    for (stat, pts) in by_stat {
        if let Ok(fit) = fit_genus_expansion(&pts) {
            fits.push(McFit { scaled_by_n_power: n_power(&stat), statistic: stat, fit });
        }
    }
    if s.bins > 0 {
        let n = s.n.iter().copied().filter(|&n| n <= 400).max().context("histogram needs some N <= 400")?;
        let d = eigen_density(n, s.density_samples, s.bins, s.seed)?;
        let rows: Vec<Vec<String>> = d
            .bins
            .iter()
            .map(|b| vec![b.lo.to_string(), b.hi.to_string(), b.observed.to_string(), b.expected.to_string()])
            .collect();
        run.write_csv("histogram.csv", &["lo", "hi", "observed_mass", "expected_mass"], &rows)?;
        println!(
            "histogram at N = {n}: sup relative deviation {:.4}, overflow {:.2e}",
            d.sup_relative_deviation, d.overflow_fraction
        );
    }
    run.write_json("montecarlo.json", &McReport { settings: s, runs, fits })?;
    Ok(true)
}

#[derive(Args, Debug, Serialize)]
pub struct DensityArgs {
    /// Number of grid points (cell midpoints)
    #[arg(long, default_value_t = 400)]
    pub points: usize,
    /// Left end of the grid
    #[arg(long, default_value_t = 0.0)]
    pub from: f64,
    /// Right end of the grid
    #[arg(long, default_value_t = SPECTRUM_EDGE)]
    pub to: f64,
}

pub fn density(args: &DensityArgs, run: &mut RunDir) -> Result<bool> {
    if args.points == 0 || !(args.to > args.from) {
        bail!("need points >= 1 and from < to");
    }
    let h = (args.to - args.from) / args.points as f64;
    let rows: Vec<Vec<String>> = (0..args.points)
        .map(|i| {
            let x = args.from + (i as f64 + 0.5) * h;
            vec![x.to_string(), density_rho01(x).to_string()]
        })
        .collect();
    run.write_csv("density.csv", &["x", "rho"], &rows)?;
    println!("{} density values on ({}, {})", rows.len(), args.from, args.to);
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_are_sorted_and_complete() {
        let t = nondecreasing(2, 3);
        assert_eq!(t.len(), 6);
        assert_eq!(t[0], vec![1, 1]);
        assert_eq!(t[5], vec![3, 3]);
    }

    #[test]
    fn scaling_powers() {
        assert_eq!(n_power("m2"), 1);
        assert_eq!(n_power("c1,2"), 0);
        assert_eq!(n_power("c1,1,1"), -1);
    }
}
