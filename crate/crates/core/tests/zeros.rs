use std::path::Path;

use rankin::correlations::{ingest_zeros, run_correlation};
use rankin::zeta::{theta, z_em, zeta_zeros};

fn fixture() -> rankin::correlations::ZeroList {
    ingest_zeros(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/zeta_zeros_100.txt")).unwrap()
}

/// Each fixture ordinate brackets a sign change of `Z`, evaluated by
/// Euler–Maclaurin, and the count below the last one matches `θ/π + 1`.
#[test]
fn fixture_verified_on_critical_line() {
    let z = fixture();
    assert_eq!(z.len(), 100);
    for &g in &z.ordinates {
        let (a, b) = (z_em(g - 1e-8), z_em(g + 1e-8));
        assert!(a * b < 0.0, "no sign change at {g}: {a} {b}");
    }
    for w in z.ordinates.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        assert!(z_em(mid).abs() > 1e-6);
    }
    let top = z.ordinates[99] + 0.1;
    assert!((theta(top) / std::f64::consts::PI + 1.0 - 100.0).abs() < 1.0);
}

#[test]
fn generator_matches_fixture() {
    let fix = fixture();
    let gen = zeta_zeros(100).unwrap();
    for (a, b) in fix.ordinates.iter().zip(&gen.ordinates) {
        assert!((a - b).abs() < 1e-9, "{a} {b}");
    }
}

#[test]
fn ten_thousand_zeros_pair_correlation() {
    let t0 = std::time::Instant::now();
    let z = zeta_zeros(10_000).unwrap();
    eprintln!("zeros {:?}", t0.elapsed());
    assert!((z.ordinates[9999] - 9877.7826540055).abs() < 1e-6, "{}", z.ordinates[9999]);
    let r = run_correlation(&z, 2, 0.5, None).unwrap();
    eprintln!("{:?} total {:?}", r, t0.elapsed());
    assert!((r.ratio - 1.0).abs() <= 0.10);
}
