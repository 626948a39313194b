use num_traits::ToPrimitive;
use prodloop_core::curve::fuss_catalan;
use prodloop_core::montecarlo::{cumulant_estimate, eigen_density, jarque_bera, sample_traces, GinibreSample};

#[test]
fn entries_have_variance_one_over_n() {
    let s = GinibreSample::draw(60, 3, 0);
    let (mean, se) = s.entry_power();
    assert!((mean * 60.0 - 1.0).abs() <= 5.0 * se * 60.0, "N E|X|^2 = {}", mean * 60.0);
}

#[test]
fn runs_are_reproducible() {
    let a = sample_traces(8, 3, 200, 11).unwrap();
    let b = sample_traces(8, 3, 200, 11).unwrap();
    assert_eq!(a, b);
    let c = sample_traces(8, 3, 200, 12).unwrap();
    assert_ne!(a, c);
}

#[test]
fn small_n_moments_within_five_sigma() {
    let n = 30;
    let nf = n as f64;
    let t = sample_traces(n, 3, 4000, 5).unwrap();
    let m1 = cumulant_estimate(&t, &[0], n).unwrap().scaled(1.0 / nf);
    assert!(m1.pull(1.0) <= 5.0, "{m1:?}");
    let m2 = cumulant_estimate(&t, &[1], n).unwrap().scaled(1.0 / nf);
    assert!(m2.pull(3.0 + 1.0 / (nf * nf)) <= 5.0, "{m2:?}");
    // m3/N tends to C_3[3] = 12 with O(1/N^2) corrections
    let m3 = cumulant_estimate(&t, &[2], n).unwrap().scaled(1.0 / nf);
    let c3 = fuss_catalan(3, 3).to_f64().unwrap();
    assert!((m3.mean - c3).abs() < 0.5, "{m3:?}");
}

#[test]
fn trace_is_asymptotically_normal() {
    let t = sample_traces(160, 1, 500, 9).unwrap();
    let x: Vec<f64> = t.iter().map(|v| v[0]).collect();
    let (jb, p) = jarque_bera(&x);
    assert!(p > 0.01, "Jarque-Bera {jb}, p = {p}");
}

#[test]
fn spectrum_is_positive_and_bounded() {
    let d = eigen_density(60, 20, 30, 4).unwrap();
    assert!(d.min_eigenvalue >= -1e-10);
    assert!(d.far_tail_fraction <= 0.01);
    let mass: f64 = d.bins.iter().map(|b| b.observed).sum::<f64>() + d.overflow_fraction;
    assert!((mass - 1.0).abs() < 1e-12);
}
