use std::time::Instant;

use prodloop_core::golden::{golden_tilde_w02, golden_w};
use prodloop_core::solver::{base_w02, tilde_from_wz02, ResolventTable, Strategy};

#[test]
fn printed_closed_forms() {
    let mut t = ResolventTable::new();
    for (g, n) in [(1, 1), (0, 3), (1, 2), (2, 1)] {
        let start = Instant::now();
        let e = t.solve_wgn(g, n).unwrap();
        eprintln!("({g},{n}) solved in {:?}, numerator degree {}", start.elapsed(), e.num_degree);
        assert!(e.w.equals(&golden_w(g, n).unwrap()), "w_({g},{n}) = {}", e.w);
    }
    assert!(t.w(0, 1).unwrap().equals(&golden_w(0, 1).unwrap()));
    assert!(t.w(0, 2).unwrap().equals(&golden_w(0, 2).unwrap()));
}

#[test]
fn universality_and_loop_instance() {
    let t = ResolventTable::new();
    let tilde = tilde_from_wz02(&base_w02());
    assert!(tilde.equals(&golden_tilde_w02()));
    assert!(t.solve_w02_from_loop().unwrap().equals(&tilde));
}

#[test]
fn interpolation_matches_symbolic_route() {
    let mut sym = ResolventTable::new();
    let mut itp = ResolventTable::new();
    for (g, n) in [(1, 1), (0, 3), (1, 2), (2, 1), (0, 4), (1, 3)] {
        let start = Instant::now();
        sym.solve_wgn_with(g, n, Strategy::Symbolic).unwrap();
        let mid = Instant::now();
        itp.solve_wgn_with(g, n, Strategy::Interpolate).unwrap();
        eprintln!("({g},{n}) symbolic {:?} interpolated {:?}", mid - start, mid.elapsed());
        assert!(sym.w(g, n).unwrap().equals(itp.w(g, n).unwrap()), "({g},{n})");
    }
}
