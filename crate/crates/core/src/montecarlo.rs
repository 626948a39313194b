//! Ginibre sampling, trace statistics with jackknife errors, genus fits and
//! the empirical eigenvalue density.

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::curve::density_mass;
use crate::eigen::{hermitian_eigen, CMatrix};
use crate::CoreError;

/// Right edge of the limiting spectrum.
pub const SPECTRUM_EDGE: f64 = 27.0 / 4.0;

/// Uniform on `(0, 1]` from the top 53 bits.
fn uniform(rng: &mut ChaCha12Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 1.0) / (1u64 << 53) as f64
}

/// A pair of standard normals by Box-Muller.
fn normal_pair(rng: &mut ChaCha12Rng) -> (f64, f64) {
    let r = (-2.0 * uniform(rng).ln()).sqrt();
    let t = std::f64::consts::TAU * uniform(rng);
    (r * t.cos(), r * t.sin())
}

/// The generator for one sample: stream `stream` of `seed`.
pub fn sample_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Two independent `N x N` complex Ginibre matrices with `E|X_ij|^2 = 1/N`.
#[derive(Clone, Debug)]
pub struct GinibreSample {
    pub n: usize,
    pub x1: CMatrix,
    pub x2: CMatrix,
    pub seed: u64,
    pub stream: u64,
}

impl GinibreSample {
    pub fn draw(n: usize, seed: u64, stream: u64) -> Self {
        let mut rng = sample_rng(seed, stream);
        let sd = (0.5 / n as f64).sqrt();
        let mut fill = || {
            let mut m = CMatrix::zeros(n);
            for z in m.data.iter_mut() {
                let (a, b) = normal_pair(&mut rng);
                *z = Complex64::new(sd * a, sd * b);
            }
            m
        };
        let x1 = fill();
        let x2 = fill();
        GinibreSample { n, x1, x2, seed, stream }
    }

    /// `X_1 X_1^H X_2^H X_2`.
    pub fn s2(&self) -> CMatrix {
        self.x1.mul(&self.x1.adjoint()).mul(&self.x2.adjoint().mul(&self.x2))
    }

    /// `(X_2 X_1)^H (X_2 X_1)`, similar to `S_2` up to its kernel.
    pub fn hermitian_form(&self) -> CMatrix {
        let y = self.x2.mul(&self.x1);
        y.adjoint().mul(&y)
    }

    /// Mean of `|X_ij|^2` over both matrices and its standard error.
    pub fn entry_power(&self) -> (f64, f64) {
        let v: Vec<f64> = self.x1.data.iter().chain(&self.x2.data).map(|z| z.norm_sqr()).collect();
        let m = v.len() as f64;
        let mean = v.iter().sum::<f64>() / m;
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
        (mean, (var / m).sqrt())
    }
}

/// `Tr(A B)` without forming the product.
fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.n;
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += a.at(i, j) * b.at(j, i);
        }
    }
    s
}

/// `Tr(S_2^k)` for `k = 1..=kmax`, by repeated multiplication with `S_2`.
pub fn traces_of(sample: &GinibreSample, kmax: usize) -> Result<Vec<f64>, CoreError> {
    let s = sample.s2();
    let half = kmax.div_ceil(2);
    let mut powers = vec![s.clone()];
    for _ in 1..half {
        let next = powers.last().expect("nonempty").mul(&s);
        powers.push(next);
    }
    let mut out = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let t = if k == 1 {
            s.trace()
        } else {
            let a = k / 2;
            trace_product(&powers[a - 1], &powers[k - a - 1])
        };
        if t.im.abs() > 1e-8 * t.re.abs() {
            return Err(CoreError::Domain(format!("Tr(S^{k}) has imaginary part {} against {}", t.im, t.re)));
        }
        out.push(t.re);
    }
    Ok(out)
}

/// Per-sample `[Tr S_2, .., Tr S_2^kmax]`, sample `i` drawn from stream `i`.
pub fn sample_traces(n: usize, kmax: usize, samples: usize, seed: u64) -> Result<Vec<Vec<f64>>, CoreError> {
    if n < 2 || kmax == 0 || kmax > 8 || samples < 100 {
        return Err(CoreError::Domain(format!(
            "need N >= 2, 1 <= kmax <= 8, samples >= 100; got N={n}, kmax={kmax}, samples={samples}"
        )));
    }
    (0..samples)
        .into_par_iter()
        .map(|i| traces_of(&GinibreSample::draw(n, seed, i as u64), kmax))
        .collect()
}

/// A Monte Carlo estimate with its jackknife standard error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub statistic: String,
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    pub n: usize,
}

impl McEstimate {
    /// `|mean - expected|` in units of the standard error.
    pub fn pull(&self, expected: f64) -> f64 {
        (self.mean - expected).abs() / self.stderr
    }

    pub fn scaled(&self, factor: f64) -> McEstimate {
        McEstimate { mean: self.mean * factor, stderr: self.stderr * factor.abs(), ..self.clone() }
    }
}

/// Power sums of centred columns needed for k-statistics of order <= 3.
struct Sums {
    n: f64,
    s: Vec<f64>,
}

/// Unbiased joint cumulant of up to three centred columns, from power sums
/// `[sum x_a, sum x_b, sum x_c, sum x_a x_b, sum x_a x_c, sum x_b x_c, sum x_a x_b x_c]`.
fn kstat(order: usize, sums: &Sums) -> f64 {
    let n = sums.n;
    let s = &sums.s;
    match order {
        1 => s[0] / n,
        2 => (s[3] - s[0] * s[1] / n) / (n - 1.0),
        _ => {
            let c = s[6] - (s[0] * s[5] + s[1] * s[4] + s[2] * s[3]) / n + 2.0 * s[0] * s[1] * s[2] / (n * n);
            n * c / ((n - 1.0) * (n - 2.0))
        }
    }
}

/// Joint cumulant of the given trace indices with a delete-one jackknife error.
pub fn cumulant_estimate(traces: &[Vec<f64>], idx: &[usize], n_matrix: usize) -> Result<McEstimate, CoreError> {
    let m = traces.len();
    if m < 3 || idx.is_empty() || idx.len() > 3 {
        return Err(CoreError::Domain("need at least 3 samples and 1 to 3 indices".into()));
    }
    let order = idx.len();
    // centring by the full-sample mean leaves orders >= 2 unchanged
    let shift: Vec<f64> = idx
        .iter()
        .map(|&k| if order == 1 { 0.0 } else { traces.iter().map(|t| t[k]).sum::<f64>() / m as f64 })
        .collect();
    let col = |r: usize, a: usize| -> f64 {
        let a = a.min(order - 1);
        traces[r][idx[a]] - shift[a]
    };
    let contrib = |r: usize| -> [f64; 7] {
        let (a, b, c) = (col(r, 0), col(r, 1), col(r, 2));
        [a, b, c, a * b, a * c, b * c, a * b * c]
    };
    let mut total = [0.0; 7];
    for r in 0..m {
        for (t, v) in total.iter_mut().zip(contrib(r)) {
            *t += v;
        }
    }
    let full = kstat(order, &Sums { n: m as f64, s: total.to_vec() });
    let loo: Vec<f64> = (0..m)
        .map(|r| {
            let c = contrib(r);
            let s: Vec<f64> = total.iter().zip(c).map(|(t, v)| t - v).collect();
            kstat(order, &Sums { n: (m - 1) as f64, s })
        })
        .collect();
    let mean_loo = loo.iter().sum::<f64>() / m as f64;
    let var = loo.iter().map(|x| (x - mean_loo).powi(2)).sum::<f64>() * (m as f64 - 1.0) / m as f64;
    let name = idx.iter().map(|k| (k + 1).to_string()).collect::<Vec<_>>().join(",");
    let statistic = if order == 1 { format!("m{name}") } else { format!("c{name}") };
    Ok(McEstimate { statistic, mean: full, stderr: var.sqrt(), samples: m, n: n_matrix })
}

/// Means `m_k` of every trace plus all cumulants of order 2 and `c_{1,1,1}`.
pub fn estimate_cumulants(traces: &[Vec<f64>], n_matrix: usize) -> Result<Vec<McEstimate>, CoreError> {
    let kmax = traces.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for k in 0..kmax {
        out.push(cumulant_estimate(traces, &[k], n_matrix)?);
    }
    for i in 0..kmax {
        for j in i..kmax {
            out.push(cumulant_estimate(traces, &[i, j], n_matrix)?);
        }
    }
    out.push(cumulant_estimate(traces, &[0, 0, 0], n_matrix)?);
    Ok(out)
}

/// Weighted least-squares fit of `a + b / N^2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenusFit {
    pub a: f64,
    pub a_err: f64,
    pub b: f64,
    pub b_err: f64,
    pub chi2: f64,
}

pub fn fit_genus_expansion(points: &[(usize, f64, f64)]) -> Result<GenusFit, CoreError> {
    if points.len() < 3 {
        return Err(CoreError::IllConditioned(format!("{} points, need at least 3", points.len())));
    }
    let (mut sw, mut sx, mut sxx, mut sy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(n, y, e) in points {
        if e <= 0.0 || !e.is_finite() {
            return Err(CoreError::IllConditioned(format!("non-positive error at N={n}")));
        }
        let w = 1.0 / (e * e);
        let x = 1.0 / (n as f64 * n as f64);
        sw += w;
        sx += w * x;
        sxx += w * x * x;
        sy += w * y;
        sxy += w * x * y;
    }
    let det = sw * sxx - sx * sx;
    if det.abs() <= 1e-12 * sw * sxx {
        return Err(CoreError::IllConditioned("degenerate design (repeated N?)".into()));
    }
    let a = (sxx * sy - sx * sxy) / det;
    let b = (sw * sxy - sx * sy) / det;
    let chi2 = points
        .iter()
        .map(|&(n, y, e)| ((y - a - b / (n as f64 * n as f64)) / e).powi(2))
        .sum();
    Ok(GenusFit { a, a_err: (sxx / det).sqrt(), b, b_err: (sw / det).sqrt(), chi2 })
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityBin {
    pub lo: f64,
    pub hi: f64,
    pub observed: f64,
    pub expected: f64,
    /// standard error of `observed` from the spread of per-matrix counts
    pub stderr: f64,
}

/// Histogram of `S_2` eigenvalues over `(0, 27/4]` against the limiting density.
#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub n: usize,
    pub samples: usize,
    pub bins: Vec<DensityBin>,
    pub overflow_fraction: f64,
    /// fraction above `27/4 + 0.3`
    pub far_tail_fraction: f64,
    pub min_eigenvalue: f64,
    /// sup of `|observed - expected| / expected` over bins with expected mass >= `mass_floor`
    pub sup_relative_deviation: f64,
    /// largest `|observed - expected| / stderr` over the same bins
    pub max_pull: f64,
    pub mass_floor: f64,
    pub chi2: f64,
    pub dof: usize,
}

pub fn eigen_density(n: usize, samples: usize, bins: usize, seed: u64) -> Result<DensityReport, CoreError> {
    if n == 0 || n > 400 || samples == 0 || bins == 0 {
        return Err(CoreError::Domain(format!("need 1 <= N <= 400, samples >= 1, bins >= 1; got {n}, {samples}, {bins}")));
    }
    let spectra: Vec<Vec<f64>> = (0..samples)
        .into_par_iter()
        .map(|i| hermitian_eigen(&GinibreSample::draw(n, seed, i as u64).hermitian_form()))
        .collect::<Result<_, _>>()?;
    let total = (n * samples) as f64;
    let width = SPECTRUM_EDGE / bins as f64;
    let mut counts = vec![0usize; bins];
    let mut sq = vec![0.0f64; bins];
    let (mut overflow, mut far, mut min_ev) = (0usize, 0usize, f64::INFINITY);
    let mut mine = vec![0usize; bins];
    for spectrum in &spectra {
        mine.iter_mut().for_each(|c| *c = 0);
        for &l in spectrum {
            min_ev = min_ev.min(l);
            if l > SPECTRUM_EDGE {
                overflow += 1;
                if l > SPECTRUM_EDGE + 0.3 {
                    far += 1;
                }
                continue;
            }
            mine[((l.max(0.0) / width) as usize).min(bins - 1)] += 1;
        }
        for b in 0..bins {
            counts[b] += mine[b];
            sq[b] += (mine[b] * mine[b]) as f64;
        }
    }
    let mass_floor = 0.005;
    let mut sup = 0.0f64;
    let mut max_pull = 0.0f64;
    let mut chi2 = 0.0;
    let mut out = Vec::with_capacity(bins);
    let sf = samples as f64;
    for (b, &c) in counts.iter().enumerate() {
        let (lo, hi) = (b as f64 * width, (b + 1) as f64 * width);
        let expected = density_mass(lo, hi);
        let observed = c as f64 / total;
        let mean = c as f64 / sf;
        let var = if samples > 1 { (sq[b] - sf * mean * mean).max(0.0) / (sf - 1.0) } else { 0.0 };
        let stderr = (var / sf).sqrt() / n as f64;
        if expected >= mass_floor {
            sup = sup.max((observed - expected).abs() / expected);
            if stderr > 0.0 {
                max_pull = max_pull.max((observed - expected).abs() / stderr);
            }
        }
        if expected > 0.0 {
            chi2 += (c as f64 - expected * total).powi(2) / (expected * total);
        }
        out.push(DensityBin { lo, hi, observed, expected, stderr });
    }
    Ok(DensityReport {
        n,
        samples,
        bins: out,
        overflow_fraction: overflow as f64 / total,
        far_tail_fraction: far as f64 / total,
        min_eigenvalue: min_ev,
        sup_relative_deviation: sup,
        max_pull,
        mass_floor,
        chi2,
        dof: bins - 1,
    })
}

/// Jarque-Bera test of the standardized values; returns `(statistic, p-value)`.
pub fn jarque_bera(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = values.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    let m4 = values.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
    let skew = m3 / m2.powf(1.5);
    let kurt = m4 / (m2 * m2);
    let jb = n / 6.0 * (skew * skew + (kurt - 3.0).powi(2) / 4.0);
    let p = 1.0 - ChiSquared::new(2.0).expect("valid").cdf(jb);
    (jb, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = GinibreSample::draw(4, 7, 3);
        let b = GinibreSample::draw(4, 7, 3);
        let c = GinibreSample::draw(4, 7, 4);
        assert_eq!(a.x1, b.x1);
        assert_ne!(a.x1, c.x1);
    }

    #[test]
    fn kstat_matches_direct_formulas() {
        let t: Vec<Vec<f64>> = (0..50).map(|i| vec![(i as f64).sin(), (i as f64 * 0.7).cos() + 0.1 * i as f64]).collect();
        let est = cumulant_estimate(&t, &[0, 1], 2).unwrap();
        let n = t.len() as f64;
        let mx = t.iter().map(|r| r[0]).sum::<f64>() / n;
        let my = t.iter().map(|r| r[1]).sum::<f64>() / n;
        let cov = t.iter().map(|r| (r[0] - mx) * (r[1] - my)).sum::<f64>() / (n - 1.0);
        assert!((est.mean - cov).abs() < 1e-12);
        assert!(est.stderr > 0.0);
        let k3 = cumulant_estimate(&t, &[0, 0, 0], 2).unwrap();
        let m3 = t.iter().map(|r| (r[0] - mx).powi(3)).sum::<f64>();
        assert!((k3.mean - n * m3 / ((n - 1.0) * (n - 2.0))).abs() < 1e-12);
    }

    #[test]
    fn exact_line_fit() {
        let pts: Vec<(usize, f64, f64)> = [10, 20, 40].iter().map(|&n| (n, 3.0 + 2.0 / (n * n) as f64, 0.1)).collect();
        let f = fit_genus_expansion(&pts).unwrap();
        assert!((f.a - 3.0).abs() < 1e-10 && (f.b - 2.0).abs() < 1e-8);
        assert!(fit_genus_expansion(&pts[..2]).is_err());
    }

    #[test]
    fn small_trace_reality() {
        let s = GinibreSample::draw(6, 1, 0);
        let t = traces_of(&s, 4).unwrap();
        assert!(t.iter().all(|x| *x > 0.0));
    }
}
